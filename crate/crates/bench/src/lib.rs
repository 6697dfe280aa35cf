//! Fixed workloads for timing the entcert core algorithms.

use entcert_core::alpha::AlphaAlgebraic;
use entcert_core::certify::{verify_exponent, Verdict, VerifyConfig};
use entcert_core::combinatorics::h_poly;
use entcert_core::exact::{log_point, rat, RationalInterval};
use entcert_core::forms::{inequality_scan, ScanReport};

/// All entropy polynomials with `r <= k <= kmax`; returns the coefficient count.
pub fn h_tables(kmax: u64) -> usize {
    (1..=kmax)
        .flat_map(|k| (1..=k).map(move |r| (k, r)))
        .map(|(k, r)| h_poly(k, r).expect("valid k, r").len())
        .sum()
}

pub fn alpha_to_bits(k: u64, r: u64, bits: u32) -> RationalInterval {
    AlphaAlgebraic::new(k, r)
        .and_then(|a| a.refine_bits(bits))
        .expect("k > r >= 1")
        .enclosure()
        .clone()
}

pub fn log_of(num: i64, den: i64, bits: u32) -> RationalInterval {
    log_point(&rat(num, den), bits).expect("positive argument")
}

pub fn verify(k: u64, r: u64) -> Verdict {
    verify_exponent(k, r, &VerifyConfig::default())
        .expect("valid exponent")
        .verdict
}

pub fn scan(k: u64, r: u64, grid: u64, bits: u32) -> ScanReport {
    let a = AlphaAlgebraic::new(k, r).expect("k > r >= 1");
    inequality_scan(&a, grid, bits).expect("scan runs")
}
