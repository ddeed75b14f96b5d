//! Where in the `(alpha, beta)` plane the minimal-coordinate equation has a
//! root, the critical `beta` of power-law wells, and the infinite square
//! well that power laws approach as `n -> inf`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::PhysicalContext;
use crate::numeric::ScanGrid;
use crate::potential::{PotentialEvaluator, PotentialSpec};
use crate::solver::stationary;

/// Does `f(xi)` change sign (or vanish) between two consecutive
/// representable nodes of `grid`?
///
/// Pairs with `alpha beta >= 1/4` have no allowed region and give `false`.
pub fn has_solution(pot: &PotentialEvaluator, alpha: f64, beta: f64, grid: &ScanGrid) -> bool {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha * beta < 0.25) {
        return false;
    }
    let mut prev: Option<f64> = None;
    for xi in grid.nodes() {
        let Some(s) = stationary(pot, xi, alpha, beta) else {
            prev = None;
            continue;
        };
        if s.f == 0.0 {
            return true;
        }
        if let Some(p) = prev {
            if (p < 0.0) != (s.f < 0.0) {
                return true;
            }
        }
        prev = Some(s.f);
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaLimit {
    Finite(f64),
    /// Solutions exist up to the search ceiling.
    Unbounded,
}

impl BetaLimit {
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite(b) => *b,
            Self::Unbounded => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for BetaLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(b) => write!(f, "{b}"),
            Self::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for BetaLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(b) => s.serialize_f64(*b),
            Self::Unbounded => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLimitOptions {
    /// Width of the final bisection bracket.
    pub tol: f64,
    pub grid: ScanGrid,
    /// Largest `beta` tried before reporting `Unbounded`.
    pub ceiling: f64,
}

impl Default for BetaLimitOptions {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            grid: ScanGrid::scan_default(),
            ceiling: 1e3,
        }
    }
}

fn power_law(n: u32, v0: f64) -> Result<PotentialEvaluator> {
    if n == 0 {
        return Err(Error::Config("power-law order n must be at least 1".into()));
    }
    PotentialSpec::power_law(n, v0).evaluator()
}

/// Largest `beta` for which `v0 xi^(2n)` still has a solution at fixed `alpha`.
///
/// The harmonic case `n = 1` has a root for every admissible pair. Otherwise
/// `beta` is doubled from 1 until `has_solution` fails, then bisected; the
/// midpoint of the final bracket is returned.
pub fn beta_limit(n: u32, v0: f64, alpha: f64, opts: &BetaLimitOptions) -> Result<BetaLimit> {
    let pot = power_law(n, v0)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidDeformation(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    if !(opts.tol > 0.0 && opts.ceiling > 0.0) {
        return Err(Error::Config(
            "beta-limit tolerance and ceiling must be positive".into(),
        ));
    }
    if n == 1 {
        return Ok(BetaLimit::Unbounded);
    }
    let mut cap = opts.ceiling;
    if alpha > 0.0 {
        cap = cap.min(0.25 / alpha * (1.0 - 1e-12));
    }
    let exists = |beta: f64| has_solution(&pot, alpha, beta, &opts.grid);
    if !exists(0.0) {
        return Ok(BetaLimit::Finite(0.0));
    }
    let (mut lo, mut hi) = (0.0, cap.min(1.0));
    while exists(hi) {
        if hi >= cap {
            return Ok(BetaLimit::Unbounded);
        }
        lo = hi;
        hi = (2.0 * hi).min(cap);
    }
    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if exists(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BetaLimit::Finite(0.5 * (lo + hi)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaLimitCurve {
    pub v0: f64,
    pub alpha: f64,
    pub n_values: Vec<u32>,
    pub beta_limit: Vec<BetaLimit>,
}

impl BetaLimitCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,beta_limit\n");
        for (n, b) in self.n_values.iter().zip(&self.beta_limit) {
            writeln!(out, "{n},{b}").unwrap();
        }
        out
    }
}

pub fn beta_limit_curve(
    n_values: &[u32],
    v0: f64,
    alpha: f64,
    opts: &BetaLimitOptions,
) -> Result<BetaLimitCurve> {
    let beta_limit = n_values
        .par_iter()
        .map(|&n| beta_limit(n, v0, alpha, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaLimitCurve {
        v0,
        alpha,
        n_values: n_values.to_vec(),
        beta_limit,
    })
}

/// Existence map on a rectangular grid; `exists[j][i]` belongs to
/// `(alpha_grid[i], beta_grid[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionScan {
    pub n: u32,
    pub v0: f64,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub exists: Vec<Vec<bool>>,
    /// Points `(alpha, 1/(4 alpha))` of the admissibility hyperbola.
    pub reference_curve: Vec<(f64, f64)>,
}

impl RegionScan {
    pub fn count(&self) -> usize {
        self.exists.iter().flatten().filter(|e| **e).count()
    }

    /// One `alpha,beta,exists` row per cell (`exists` is 0 or 1), ordered by
    /// `beta` then `alpha`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,exists\n");
        for (b, row) in self.beta_grid.iter().zip(&self.exists) {
            for (a, e) in self.alpha_grid.iter().zip(row) {
                writeln!(out, "{a},{b},{}", u8::from(*e)).unwrap();
            }
        }
        out
    }
}

/// `points` equally spaced values in `(0, max]`.
pub fn uniform_grid(max: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|j| max * j as f64 / points as f64)
        .collect()
}

pub fn region_scan(
    n: u32,
    v0: f64,
    alpha_grid: &[f64],
    beta_grid: &[f64],
    grid: &ScanGrid,
) -> Result<RegionScan> {
    let pot = power_law(n, v0)?;
    if alpha_grid
        .iter()
        .chain(beta_grid)
        .any(|x| !(*x >= 0.0 && x.is_finite()))
    {
        return Err(Error::InvalidGrid(
            "alpha and beta grids must be finite and non-negative".into(),
        ));
    }
    let exists = beta_grid
        .par_iter()
        .map(|&b| {
            alpha_grid
                .iter()
                .map(|&a| a * b < 0.25 && has_solution(&pot, a, b, grid))
                .collect()
        })
        .collect();
    let reference_curve = alpha_grid
        .iter()
        .filter(|a| **a > 0.0)
        .map(|&a| (a, 0.25 / a))
        .collect();
    Ok(RegionScan {
        n,
        v0,
        alpha_grid: alpha_grid.to_vec(),
        beta_grid: beta_grid.to_vec(),
        exists,
        reference_curve,
    })
}

/// Level `k` of the infinite well of width `2a` in the `alpha' = 0` model:
/// `E = tan^2(pi hbar k sqrt(beta') / (2a)) / (2 m beta')`.
///
/// The level is gone once the tangent's argument reaches `pi/2`.
pub fn box_energy(ctx: &PhysicalContext, beta_prime: f64, k: u32) -> Result<f64> {
    let a = ctx
        .a()
        .ok_or_else(|| Error::Config("the box needs its half-width a".into()))?;
    if k == 0 {
        return Err(Error::Config("level k starts at 1".into()));
    }
    if !(beta_prime >= 0.0 && beta_prime.is_finite()) {
        return Err(Error::InvalidDeformation(format!(
            "beta' must be finite and non-negative, got {beta_prime}"
        )));
    }
    let (h, m, k) = (ctx.hbar, ctx.mass, k as f64);
    if beta_prime == 0.0 {
        return Ok(PI * PI * h * h * k * k / (8.0 * m * a * a));
    }
    let arg = PI * h * k * beta_prime.sqrt() / (2.0 * a);
    if arg >= FRAC_PI_2 {
        return Err(Error::NoBoundState(format!(
            "level {k} needs pi hbar k sqrt(beta')/(2a) < pi/2, got {arg}"
        )));
    }
    Ok(arg.tan().powi(2) / (2.0 * m * beta_prime))
}
