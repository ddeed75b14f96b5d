//! Closed-form ground-state bound of the harmonic oscillator in oscillator
//! units, where the energy is `xi^2 + q^2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    DeformationParams, Diagnostics, Method, PhysicalContext, SolveResult, UncertaintyPoint,
};

/// `K = 2 beta - 2/lambda` for the two Lagrange multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KPair {
    pub k1: f64,
    pub k2: f64,
}

/// `k1,2 = (beta - alpha) -/+ sqrt((beta - alpha)^2 + 1)`.
///
/// Whichever root does not cancel is computed directly and the other one
/// follows from `k1 k2 = -1`.
pub fn k_pair(alpha: f64, beta: f64) -> Result<KPair> {
    let params = DeformationParams::new(alpha, beta)?;
    let d = params.beta - params.alpha;
    let s = d.hypot(1.0);
    Ok(if d >= 0.0 {
        let k2 = d + s;
        KPair { k1: -1.0 / k2, k2 }
    } else {
        let k1 = d - s;
        KPair { k1, k2: -1.0 / k1 }
    })
}

/// Minimal uncertainties and energy (units of `hbar w / 2`).
///
/// Uses `K2 - alpha K2^2 - beta = s (1 - 2 alpha K2)` with
/// `s = sqrt((beta-alpha)^2 + 1)` and
/// `1 - 2 alpha K2 = (1 - 4 alpha beta) / (1 - 2 alpha K1)`,
/// which keeps every factor free of cancellation.
pub fn harmonic_minimum(alpha: f64, beta: f64) -> Result<SolveResult> {
    let KPair { k1, k2 } = k_pair(alpha, beta)?;
    let s = (beta - alpha).hypot(1.0);
    let shrink = (1.0 - 4.0 * alpha * beta) / (1.0 - 2.0 * alpha * k1);
    let denom = s * shrink;
    assert!(
        denom > 0.0,
        "K2 - alpha K2^2 - beta must be positive for alpha*beta < 1/4"
    );
    let q = (0.5 / denom).sqrt();
    let xi = k2 * q;
    let energy = k2 / shrink;
    let point = UncertaintyPoint { xi, q };
    let mut diagnostics = Diagnostics::new(point, alpha, beta);
    diagnostics.k2 = k2;
    Ok(SolveResult::new(
        point,
        energy,
        Method::ClosedForm,
        diagnostics,
    ))
}

fn oscillator(ctx: &PhysicalContext) -> Result<(f64, f64, f64)> {
    let omega = ctx
        .omega()
        .ok_or_else(|| Error::Config("the oscillator needs omega".into()))?;
    Ok((ctx.hbar, ctx.mass, omega))
}

fn check_physical(hbar: f64, alpha_prime: f64, beta_prime: f64) -> Result<()> {
    if !(alpha_prime >= 0.0
        && beta_prime >= 0.0
        && alpha_prime.is_finite()
        && beta_prime.is_finite())
    {
        return Err(Error::InvalidDeformation(
            "alpha' and beta' must be finite and non-negative".into(),
        ));
    }
    if alpha_prime * beta_prime >= 1.0 / (hbar * hbar) {
        return Err(Error::InvalidDeformation(
            "alpha'*beta' must stay below hbar^-2".into(),
        ));
    }
    Ok(())
}

/// Ground-state energy written directly in `hbar, m, w, alpha', beta'`:
/// `E = (hbar w / 2) k2 / (1 - (alpha' hbar / (m w)) k2)` with
/// `k2 = D + sqrt(1 + D^2)`, `D = (beta' hbar m w - alpha' hbar / (m w)) / 2`.
pub fn harmonic_energy_physical(
    ctx: &PhysicalContext,
    alpha_prime: f64,
    beta_prime: f64,
) -> Result<f64> {
    let (h, m, w) = oscillator(ctx)?;
    check_physical(h, alpha_prime, beta_prime)?;
    let a = alpha_prime * h / (m * w);
    let b = beta_prime * h * m * w;
    let d = 0.5 * (b - a);
    let s = d.hypot(1.0);
    let (k1, k2) = if d >= 0.0 {
        (-1.0 / (d + s), d + s)
    } else {
        (d - s, 1.0 / (s - d))
    };
    // 1 - a k2 rewritten as (1 - a b) / (1 - a k1)
    Ok(0.5 * h * w * k2 * (1.0 - a * k1) / (1.0 - a * b))
}

/// First order in the deformation: `hbar w/2 + hbar^2 w^2 m beta'/4 + hbar^2 alpha'/(4m)`.
pub fn harmonic_linear(ctx: &PhysicalContext, alpha_prime: f64, beta_prime: f64) -> Result<f64> {
    let (h, m, w) = oscillator(ctx)?;
    check_physical(h, alpha_prime, beta_prime)?;
    Ok(0.5 * h * w + 0.25 * h * h * w * w * m * beta_prime + 0.25 * h * h * alpha_prime / m)
}

/// Convenience: closed form in physical units with the result carrying `e0`.
pub fn harmonic_solve_physical(
    ctx: &PhysicalContext,
    alpha_prime: f64,
    beta_prime: f64,
) -> Result<SolveResult> {
    let units = ctx.nondimensionalize_harmonic()?;
    let params = DeformationParams::from_physical(alpha_prime, beta_prime, &units)?;
    Ok(harmonic_minimum(params.alpha, params.beta)?.with_units(&units))
}
