//! Scalar root bracketing, bisection and golden-section search.

use serde::Serialize;

use crate::error::{Error, Result};

/// Log-spaced grid `min .. max` with `points` nodes (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl ScanGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < min < max, got [{min}, {max}]"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {points}"
            )));
        }
        Ok(Self { min, max, points })
    }

    /// Default grid of the full numeric solver: 400 points over `[1e-6, 1e3]`.
    pub fn solver_default() -> Self {
        Self {
            min: 1e-6,
            max: 1e3,
            points: 400,
        }
    }

    /// Default grid of the existence scan and the oracle: 2000 points over `[1e-6, 1e3]`.
    pub fn scan_default() -> Self {
        Self {
            min: 1e-6,
            max: 1e3,
            points: 2000,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        log_space(self.min, self.max, self.points)
    }
}

pub fn log_space(min: f64, max: f64, points: usize) -> impl Iterator<Item = f64> {
    let (lo, hi) = (min.ln(), max.ln());
    let last = points.saturating_sub(1).max(1);
    (0..points).map(move |i| {
        if i == 0 {
            min
        } else if i == last {
            max
        } else {
            (lo + (hi - lo) * i as f64 / last as f64).exp()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub root: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Bisection on `[lo, hi]` where `f_lo` and `f_hi` have opposite signs.
///
/// Stops once `|f| <= tol` or the bracket can no longer be split in `f64`.
/// `f` may return `None` for points it cannot evaluate; such a midpoint
/// ends the refinement with the best endpoint so far.
pub fn bisect<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    tol: f64,
) -> Bisection
where
    F: FnMut(f64) -> Option<f64>,
{
    debug_assert!(f_lo * f_hi <= 0.0);
    let best = |lo: f64, f_lo: f64, hi: f64, f_hi: f64| {
        if f_lo.abs() <= f_hi.abs() {
            (lo, f_lo)
        } else {
            (hi, f_hi)
        }
    };
    let mut iterations = 0;
    loop {
        let (x, fx) = best(lo, f_lo, hi, f_hi);
        if fx.abs() <= tol {
            return Bisection {
                root: x,
                value: fx,
                iterations,
                converged: true,
            };
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi || iterations >= 2000 {
            return Bisection {
                root: x,
                value: fx,
                iterations,
                converged: false,
            };
        }
        iterations += 1;
        let Some(fm) = f(mid) else {
            return Bisection {
                root: x,
                value: fx,
                iterations,
                converged: false,
            };
        };
        if fm == 0.0 {
            return Bisection {
                root: mid,
                value: fm,
                iterations,
                converged: true,
            };
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]` to bracket width `xtol`.
///
/// The endpoints take part in the final comparison, so a minimum sitting on
/// an end of the interval is returned as that end.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (fa_end, fb_end) = (f(a), f(b));
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > xtol && iterations < 500 {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for cand in [(a, fa_end), (b, fb_end)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Minimum {
        x: best.0,
        value: best.1,
        iterations,
    }
}
