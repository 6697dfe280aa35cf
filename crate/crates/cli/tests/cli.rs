use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn entcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcert"))
        .args(args)
        .env_remove("ENTROPY_CERT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv(o: &Output) -> BTreeMap<String, String> {
    stdout(o)
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn cert_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_three_halves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let o = entcert(&[
        "verify",
        "--k",
        "3",
        "--r",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let m = kv(&o);
    assert_eq!(m["VERDICT"], "CERTIFIED");
    assert_eq!(m["DESCARTES_COUNT"], "2");
    assert!(m["ROOT_1"].contains("0.2048"));
    assert!(m["ROOT_2"].contains("0.7418"));
    let v = cert_json(&path);
    assert_eq!(v["schema"], "entropy-cert/1");
    assert_eq!(v["verdict"], "CERTIFIED");
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_trivial_and_reduced() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    let o = entcert(&[
        "verify",
        "--k",
        "2",
        "--r",
        "2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(kv(&o)["VERDICT"], "CERTIFIED");
    let p = dir.path().join("r.json");
    let o = entcert(&[
        "verify",
        "--k",
        "4",
        "--r",
        "2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!((kv(&o)["K"].as_str(), kv(&o)["R"].as_str()), ("2", "1"));
}

#[test]
fn verify_inconclusive_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("i.json");
    let o = entcert(&[
        "verify",
        "--k",
        "3",
        "--r",
        "2",
        "--precision-bits",
        "2",
        "--max-refinements",
        "0",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(cert_json(&p)["verdict"], "INCONCLUSIVE");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        entcert(&["verify", "--k", "x", "--r", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(entcert(&["verify", "--k", "3"]).status.code(), Some(1));
    assert_eq!(entcert(&["nonsense"]).status.code(), Some(1));
    let o = entcert(&["verify", "--k", "1", "--r", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(entcert(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        let p = dir.path().join("p.json");
        let mut args = vec![
            "verify",
            "--k",
            "2",
            "--r",
            "1",
            "--out",
            p.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_entcert"))
            .args(&args)
            .env("ENTROPY_CERT_PRECISION", "80")
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let hi = cert_json(&p)["alpha"]["hi"].as_str().unwrap().to_string();
        hi.split_once('/').unwrap().1.len()
    };
    // denominators are powers of two, so their digit count tracks the precision
    let from_env = run(&[]);
    let from_flag = run(&["--precision-bits", "200"]);
    assert!(from_env < 30, "{from_env}");
    assert!(from_flag > 55, "{from_flag}");
}

#[test]
fn batch_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("pairs.txt");
    std::fs::write(&list, "# exponents\n2 1\n3/1\n5,5\n").unwrap();
    let out = dir.path().join("certs");
    let o = entcert(&[
        "verify",
        "--pairs",
        list.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.matches("VERDICT=CERTIFIED").count(), 3);
    assert!(s.contains("PAIRS=3"));
    for name in ["cert-2-1.json", "cert-3-1.json", "cert-5-5.json"] {
        assert!(out.join(name).exists(), "{name}");
    }
    std::fs::write(&list, "2 1\nbad line\n").unwrap();
    let o = entcert(&[
        "verify",
        "--pairs",
        list.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hpoly_formats() {
    let o = entcert(&["hpoly", "--k", "4", "--r", "4"]);
    assert_eq!(kv(&o)["COEFFICIENTS"], "1, 31, 31, 1");
    let o = entcert(&["hpoly", "--k", "4", "--r", "2"]);
    assert_eq!(kv(&o)["COEFFICIENTS"], "1, 7/2, -2/3, 1/6");
    let o = entcert(&["hpoly", "--k", "1", "--r", "1"]);
    assert_eq!(kv(&o)["COEFFICIENTS"], "1");

    let o = entcert(&["hpoly", "--k", "4", "--r", "3", "--format", "csv"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "k,r,j,value");
    assert_eq!(lines[2], "4,3,1,27/2");
    assert_eq!(lines.len(), 5);

    let o = entcert(&[
        "hpoly", "--k", "2", "--r", "1", "--format", "json", "--len", "4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["coefficients"],
        serde_json::json!(["1/1", "-1/2", "0/1", "0/1"])
    );
}

#[test]
fn alpha_widths() {
    let o = entcert(&["alpha", "--k", "3", "--r", "2", "--width", "1e-6"]);
    let m = kv(&o);
    assert!(m["ALPHA_LO_DECIMAL"].starts_with("0.75487"));
    assert!(m["ALPHA_HI_DECIMAL"].starts_with("0.75487"));
    let (n, d) = m["WIDTH"].split_once('/').unwrap();
    let (n, d): (f64, f64) = (n.parse().unwrap(), d.parse().unwrap());
    assert!(n / d <= 1e-6);

    let m = kv(&entcert(&["alpha", "--k", "2", "--r", "1"]));
    assert!(m["ALPHA_LO_DECIMAL"].starts_with("0.618033988"));
    assert!(m["ALPHA_LO"].contains('/'));
}

#[test]
fn identities_suites() {
    let o = entcert(&["identities", "--suite", "cor7", "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("PASS cor7")));
    assert_eq!(kv(&o)["FAILED"], "0");
    let o = entcert(&["identities", "--suite", "finite-diff", "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        entcert(&["identities", "--suite", "nope"]).status.code(),
        Some(1)
    );
}

#[test]
fn asymptotics_and_lagrange() {
    let o = entcert(&["asymptotics", "--k", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(kv(&o)["WITHIN_BOUND"], "true");
    assert_eq!(entcert(&["asymptotics", "--k", "2"]).status.code(), Some(1));

    let m = kv(&entcert(&[
        "lagrange", "--k", "3", "--N", "1", "--z", "1/4", "--terms", "60",
    ]));
    assert_eq!(m["DIVERGING"], "false");
    let diff: f64 = m["ABS_DIFF"].parse().unwrap();
    assert!(diff < 1e-12);
    let m = kv(&entcert(&[
        "lagrange", "--k", "2", "--N", "1", "--z", "1/1", "--terms", "40",
    ]));
    assert_eq!(m["DIVERGING"], "true");
}

#[test]
fn scan_is_deterministic() {
    let args = [
        "scan",
        "--k",
        "2",
        "--r",
        "1",
        "--grid",
        "40",
        "--precision-bits",
        "96",
    ];
    let a = entcert(&args);
    let b = entcert(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["grid"], 40);
    let cells = v["zero_cells"].as_array().unwrap();
    assert!(cells.contains(&serde_json::json!(0)));

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("scan.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", p.to_str().unwrap()]);
    let o = entcert(&with_out);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&p).unwrap(), a.stdout);
}
