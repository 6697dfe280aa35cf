use crate::alpha::{x_equality_point, AlphaAlgebraic};
use crate::error::{Error, Result};
use crate::exact::{
    big, binomial, int, interval_entropy, interval_log, pow2_neg, Rational, RationalInterval,
};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `f(x) = alpha H(x^k) - x^{k-r} H(x^r)` with `alpha` held as an enclosure.
#[derive(Clone, Debug)]
pub struct GapFunction {
    k: u64,
    r: u64,
    alpha: RationalInterval,
    bits: u32,
}

impl GapFunction {
    /// Refines alpha to width `2^-bits` and evaluates logarithms at `bits`.
    pub fn new(a: &AlphaAlgebraic, bits: u32) -> Result<Self> {
        let alpha = a.refine_bits(bits)?.enclosure().clone();
        Ok(GapFunction {
            k: a.k(),
            r: a.r(),
            alpha,
            bits,
        })
    }

    pub fn alpha(&self) -> &RationalInterval {
        &self.alpha
    }

    fn check_unit(x: &RationalInterval) -> Result<()> {
        if x.lo().is_negative() || *x.hi() > Rational::one() {
            return Err(Error::Domain(format!(
                "gap function argument outside [0, 1]: {x}"
            )));
        }
        Ok(())
    }

    /// Direct interval evaluation; valid on any subinterval of `[0, 1]`.
    fn value_direct(&self, x: &RationalInterval) -> Result<RationalInterval> {
        let hk = interval_entropy(&x.pow(self.k as u32), self.bits)?;
        let hr = interval_entropy(&x.pow(self.r as u32), self.bits)?;
        Ok(&hk * &self.alpha - x.pow((self.k - self.r) as u32) * hr)
    }

    /// Encloses `f` over `x`, using the mean-value form for interior intervals.
    pub fn value_on(&self, x: &RationalInterval) -> Result<RationalInterval> {
        Self::check_unit(x)?;
        if x.is_point() || x.lo().is_zero() || x.hi().is_one() {
            return self.value_direct(x);
        }
        let m = x.midpoint();
        let fm = self.value_direct(&RationalInterval::point(m.clone()))?;
        let slope = self.derivative_on(x)?;
        let mv = fm + slope * x.add_scalar(&-m);
        Ok(mv.round_outward(self.bits + 16))
    }

    pub fn value_at(&self, x: &Rational) -> Result<RationalInterval> {
        self.value_on(&RationalInterval::point(x.clone()))
    }

    /// Encloses `f'` over `x ⊂ (0, 1)` through
    /// `x^{k-r-1} [alpha k x^r log((1-x^k)/x^k) - k x^r log((1-x^r)/x^r) + (k-r) log(1-x^r)]`.
    pub fn derivative_on(&self, x: &RationalInterval) -> Result<RationalInterval> {
        if !x.lo().is_positive() || *x.hi() >= Rational::one() {
            return Err(Error::Domain(format!(
                "derivative needs an interval inside (0, 1), got {x}"
            )));
        }
        let (k, r, bits) = (self.k, self.r, self.bits);
        let one = Rational::one();
        let xr = x.pow(r as u32);
        let xk = x.pow(k as u32);
        let log_x = interval_log(x, bits)?;
        let log_1mxr = interval_log(&(-&xr).add_scalar(&one), bits)?;
        let log_1mxk = interval_log(&(-&xk).add_scalar(&one), bits)?;
        let kq = int(k as i64);
        let l1 = log_1mxk - log_x.scale(&kq);
        let l2 = &log_1mxr - &log_x.scale(&int(r as i64));
        let inner = (&self.alpha * &xr) * l1.scale(&kq) - (xr.scale(&kq) * l2)
            + log_1mxr.scale(&int((k - r) as i64));
        Ok(x.pow((k - r - 1) as u32) * inner)
    }

    pub fn derivative_at(&self, x: &Rational) -> Result<RationalInterval> {
        self.derivative_on(&RationalInterval::point(x.clone()))
    }
}

/// Encloses `f(x)` for `x` in `[0, 1]`.
pub fn f_eval(a: &AlphaAlgebraic, x: &Rational, bits: u32) -> Result<RationalInterval> {
    GapFunction::new(a, bits)?.value_at(x)
}

/// Encloses `f'(x)` for `x` in `(0, 1)`.
pub fn f_deriv_eval(a: &AlphaAlgebraic, x: &Rational, bits: u32) -> Result<RationalInterval> {
    GapFunction::new(a, bits)?.derivative_at(x)
}

/// Result of [`inequality_scan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub k: u64,
    pub r: u64,
    pub grid: u64,
    pub precision_bits: u32,
    #[serde(with = "crate::exact::serde_frac")]
    pub min_lower_bound: Rational,
    /// Indices `i` of cells `[i/grid, (i+1)/grid]` whose enclosure contains 0.
    pub zero_cells: Vec<u64>,
}

/// Subdivision stops once a lower bound is positive or above `-2^-SCAN_SLACK_BITS`.
const SCAN_SLACK_BITS: u32 = 48;
const SCAN_MAX_DEPTH: u32 = 60;

fn cell_enclosure(
    g: &GapFunction,
    x: &RationalInterval,
    depth: u32,
    slack: &Rational,
) -> Result<RationalInterval> {
    let e = g.value_on(x)?;
    if e.lo().is_positive() || e.lo() >= slack || depth >= SCAN_MAX_DEPTH {
        return Ok(e);
    }
    let m = x.midpoint();
    let left = cell_enclosure(
        g,
        &RationalInterval::new(x.lo().clone(), m.clone())?,
        depth + 1,
        slack,
    )?;
    let right = cell_enclosure(
        g,
        &RationalInterval::new(m, x.hi().clone())?,
        depth + 1,
        slack,
    )?;
    Ok(left.hull(&right))
}

/// Encloses `f` on each of `grid` equal cells of `[0, 1]`, subdividing a
/// cell adaptively until its lower bound is positive or within `2^-48` of it.
pub fn inequality_scan(a: &AlphaAlgebraic, grid: u64, bits: u32) -> Result<ScanReport> {
    if grid < 8 {
        return Err(crate::error::invalid(format!(
            "scan grid must be at least 8, got {grid}"
        )));
    }
    let g = GapFunction::new(a, bits)?;
    let slack = -pow2_neg(SCAN_SLACK_BITS);
    let cells: Vec<RationalInterval> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = RationalInterval::new(
                Rational::new(i.into(), grid.into()),
                Rational::new((i + 1).into(), grid.into()),
            )?;
            cell_enclosure(&g, &x, 0, &slack)
        })
        .collect::<Result<_>>()?;
    let min_lower_bound = cells
        .iter()
        .map(|e| e.lo().clone())
        .min()
        .expect("grid is nonempty");
    let zero_cells = cells
        .iter()
        .enumerate()
        .filter(|(_, e)| e.contains_zero())
        .map(|(i, _)| i as u64)
        .collect();
    Ok(ScanReport {
        k: a.k(),
        r: a.r(),
        grid,
        precision_bits: bits,
        min_lower_bound,
        zero_cells,
    })
}

/// With `x = (1 + alpha)^{-1/r}`: `1 - x^r` meets `alpha / (1 + alpha)`,
/// `(1 - x^r) / x^r` meets `alpha` and `(1 - x^k) / x^k` meets `1 / alpha`.
pub fn equality_point_system_check(a: &AlphaAlgebraic, bits: u32) -> Result<bool> {
    let one = Rational::one();
    let x = x_equality_point(a, bits)?;
    let alpha = a.refine_bits(bits)?.enclosure().clone();
    let xr = x.pow(a.r() as u32);
    let xk = x.pow(a.k() as u32);
    let one_minus_xr = (-&xr).add_scalar(&one);
    let one_minus_xk = (-&xk).add_scalar(&one);
    let ratio = alpha.div(&alpha.add_scalar(&one))?;
    Ok(one_minus_xr.overlaps(&ratio)
        && one_minus_xr.div(&xr)?.overlaps(&alpha)
        && one_minus_xk.div(&xk)?.overlaps(&alpha.recip()?))
}

/// Forward-difference quotients `Delta_h^t f(0) / h^t` for `t < k` at
/// `h = 2^-h_bits`, each bounded by `c h` when `f` vanishes to order `k` at 0.
pub fn multiplicity_at_zero_check(
    a: &AlphaAlgebraic,
    h_bits: u32,
    c: &Rational,
    bits: u32,
) -> Result<bool> {
    let g = GapFunction::new(a, bits)?;
    let h = pow2_neg(h_bits);
    let values = (0..a.k())
        .map(|i| g.value_at(&(&h * int(i as i64))))
        .collect::<Result<Vec<_>>>()?;
    let bound = c * &h;
    for t in 0..a.k() {
        let mut acc = RationalInterval::zero();
        for (i, v) in values.iter().enumerate().take(t as usize + 1) {
            let w = big(binomial(t as i64, i as u64));
            let w = if (t as usize - i) % 2 == 1 { -w } else { w };
            acc = acc + v.scale(&w);
        }
        let q = acc.scale(&num_traits::pow(h.recip(), t as usize)).abs();
        if q.hi() > &bound {
            return Ok(false);
        }
    }
    Ok(true)
}
