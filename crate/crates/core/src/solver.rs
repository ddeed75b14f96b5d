//! Ground-state bound for an arbitrary admissible potential.
//!
//! The stationary point of `q^2 + V(xi)` on the boundary of the allowed
//! region satisfies `q = -xi K1 V~` together with the scalar
//! minimal-coordinate equation
//!
//! ```text
//! f(xi) = xi^2 (-K1 V~ - beta K1^2 V~^2 - alpha) - 1/2 = 0,
//! K1 = (beta V~ - alpha - sqrt((beta V~ - alpha)^2 + V~)) / V~,
//! ```
//!
//! with `V~ = V'(xi) / (2 xi)`. Everything below is written in terms of
//! `t = -K1 V~ = 1/K2 > 0`, which is also `q / xi`.
//!
//! A grid node only counts when `V` and `V~` are finite `f64` values there;
//! beyond that range the bound's energy is not representable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonic::KPair;
use crate::model::{
    constraint_residual, DeformationParams, Diagnostics, Method, RootInfo, SolveResult,
    UncertaintyPoint,
};
use crate::numeric::{bisect, log_space, ScanGrid};
use crate::potential::PotentialEvaluator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub grid: ScanGrid,
    /// Target for `|f|` at a refined root.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid: ScanGrid::solver_default(),
            tol: 1e-12,
        }
    }
}

/// `t = -K1 V~` without cancellation.
///
/// For `beta V~ > alpha` the textbook difference `sqrt(b^2 + V~) - b` loses
/// all digits once `beta^2 V~` exceeds `1/eps`; the conjugate form
/// `1 / (sqrt(c^2 + 1/V~) + c)` with `c = beta - alpha/V~` does not.
pub(crate) fn momentum_ratio(vtilde: f64, alpha: f64, beta: f64) -> f64 {
    let b = beta * vtilde - alpha;
    if b <= 0.0 {
        b.hypot(vtilde.sqrt()) - b
    } else {
        let c = beta - alpha / vtilde;
        1.0 / ((c * c + 1.0 / vtilde).sqrt() + c)
    }
}

/// Both multiplier variables for a given `V~`; `k1 k2 = -1/V~`.
pub fn k_pair_general(vtilde: f64, alpha: f64, beta: f64) -> KPair {
    let t = momentum_ratio(vtilde, alpha, beta);
    KPair {
        k1: -t / vtilde,
        k2: 1.0 / t,
    }
}

/// Minimal-coordinate equation evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Stationary {
    pub xi: f64,
    pub v: f64,
    pub t: f64,
    pub f: f64,
}

impl Stationary {
    pub fn q(&self) -> f64 {
        self.xi * self.t
    }

    pub fn energy(&self) -> f64 {
        let q = self.q();
        q * q + self.v
    }
}

/// `None` where `V` or `V~` overflow.
pub(crate) fn stationary(
    pot: &PotentialEvaluator,
    xi: f64,
    alpha: f64,
    beta: f64,
) -> Option<Stationary> {
    let (v, vtilde) = pot.v_and_vtilde(xi);
    if !(v.is_finite() && vtilde.is_finite()) {
        return None;
    }
    let t = momentum_ratio(vtilde, alpha, beta);
    let f = xi * xi * (t * (1.0 - beta * t) - alpha) - 0.5;
    f.is_finite().then_some(Stationary { xi, v, t, f })
}

/// Left-hand side of the minimal-coordinate equation.
///
/// Returns `NaN` where the potential is not representable in `f64`.
pub fn coordinate_equation_residual(
    xi: f64,
    alpha: f64,
    beta: f64,
    pot: &PotentialEvaluator,
) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Domain(xi));
    }
    Ok(stationary(pot, xi, alpha, beta).map_or(f64::NAN, |s| s.f))
}

/// Root of `xi^2 sqrt(V~(xi)) = 1/2`, the minimum without deformation.
///
/// The left side is strictly increasing for admissible potentials; the root
/// is bracketed on decades of `[1e-9, 1e9]` and refined by bisection.
pub fn xi0(pot: &PotentialEvaluator, tol: f64) -> Result<f64> {
    let g = |xi: f64| {
        let (_, vt) = pot.v_and_vtilde(xi);
        let value = xi * xi * vt.sqrt() - 0.5;
        value.is_finite().then_some(value)
    };
    let nodes: Vec<f64> = log_space(1e-9, 1e9, 19).collect();
    let mut prev: Option<(f64, f64)> = None;
    for &x in &nodes {
        let Some(fx) = g(x) else {
            prev = None;
            continue;
        };
        if fx == 0.0 {
            return Ok(x);
        }
        if let Some((px, pf)) = prev {
            if pf < 0.0 && fx > 0.0 {
                return Ok(bisect(g, px, x, pf, fx, tol).root);
            }
        }
        prev = Some((x, fx));
    }
    Err(Error::NoBoundState(
        "xi^2 sqrt(V~) = 1/2 has no root in [1e-9, 1e9]".into(),
    ))
}

/// First-order expansion of the minimum: `xi_min = xi0 + xi1 beta + xi2 alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearCoefficients {
    pub xi0: f64,
    pub xi1: f64,
    /// Identically zero: the minimum does not move at first order in alpha.
    pub xi2: f64,
    pub vtilde0: f64,
    pub dvtilde0: f64,
    pub v0: f64,
    pub dv0: f64,
}

impl LinearCoefficients {
    fn damping(&self) -> f64 {
        1.0 + self.xi0 * self.dvtilde0 / (4.0 * self.vtilde0)
    }

    /// `(E at alpha = beta = 0, dE/dbeta, dE/dalpha)` in dimensionless units.
    pub fn energy_coefficients(&self) -> (f64, f64, f64) {
        let Self {
            xi0,
            vtilde0,
            dvtilde0,
            v0,
            dv0,
            ..
        } = *self;
        let root = vtilde0.sqrt();
        let constant = xi0 * xi0 * vtilde0 + v0;
        let beta_coeff = (0.5 * xi0.powi(3) * dvtilde0 * root + xi0 * dv0 * root) / self.damping();
        let alpha_coeff = 2.0 * xi0 * xi0 * root;
        (constant, beta_coeff, alpha_coeff)
    }

    pub fn energy(&self, alpha: f64, beta: f64) -> f64 {
        let (c, cb, ca) = self.energy_coefficients();
        c + cb * beta + ca * alpha
    }

    pub fn xi_min(&self, alpha: f64, beta: f64) -> f64 {
        self.xi0 + self.xi1 * beta + self.xi2 * alpha
    }
}

pub fn linear_coefficients(pot: &PotentialEvaluator) -> Result<LinearCoefficients> {
    let x0 = xi0(pot, 1e-15)?;
    let s = pot.sample(x0)?;
    let mut c = LinearCoefficients {
        xi0: x0,
        xi1: 0.0,
        xi2: 0.0,
        vtilde0: s.vtilde,
        dvtilde0: s.dvtilde,
        v0: s.v,
        dv0: s.dv,
    };
    let damping = c.damping();
    if !(damping > 0.0) {
        return Err(Error::DegeneratePotential(format!(
            "1 + xi0 V~'/(4 V~) = {damping} is not positive"
        )));
    }
    c.xi1 = x0 * s.vtilde.sqrt() / damping;
    Ok(c)
}

/// Ground-state energy to first order in `alpha` and `beta` (dimensionless).
pub fn linear_energy(pot: &PotentialEvaluator, alpha: f64, beta: f64) -> Result<f64> {
    DeformationParams::new(alpha, beta)?;
    Ok(linear_coefficients(pot)?.energy(alpha, beta))
}

/// Linear approximation packaged as a result: `xi` from the expansion, `q`
/// from the minimal-momentum relation, energy from the linearized formula.
pub fn linear_solve(pot: &PotentialEvaluator, alpha: f64, beta: f64) -> Result<SolveResult> {
    DeformationParams::new(alpha, beta)?;
    let c = linear_coefficients(pot)?;
    let xi = c.xi_min(alpha, beta);
    let (_, vtilde) = pot.v_and_vtilde(xi);
    let t = momentum_ratio(vtilde, alpha, beta);
    let point = UncertaintyPoint { xi, q: xi * t };
    let diagnostics = Diagnostics::new(point, alpha, beta);
    Ok(SolveResult::new(
        point,
        c.energy(alpha, beta),
        Method::LinearApprox,
        diagnostics,
    ))
}

/// Full numeric solution of the minimal-coordinate equation.
///
/// Every sign change on the log grid is refined; the root with the lowest
/// energy is returned and all of them are listed in the diagnostics.
pub fn solve_full(
    pot: &PotentialEvaluator,
    alpha: f64,
    beta: f64,
    opts: &SolverOptions,
) -> Result<SolveResult> {
    DeformationParams::new(alpha, beta)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let grid = ScanGrid::new(opts.grid.min, opts.grid.max, opts.grid.points)?;
    let samples: Vec<Option<Stationary>> = grid
        .nodes()
        .map(|x| stationary(pot, x, alpha, beta))
        .collect();
    let eval = |x: f64| stationary(pot, x, alpha, beta).map(|s| s.f);

    let mut found = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let Some(s) = s else { continue };
        if s.f == 0.0 {
            found.push((*s, 0, true));
            continue;
        }
        let Some(Some(next)) = samples.get(i + 1) else {
            continue;
        };
        if next.f != 0.0 && (s.f < 0.0) != (next.f < 0.0) {
            let b = bisect(eval, s.xi, next.xi, s.f, next.f, opts.tol);
            let root = stationary(pot, b.root, alpha, beta)
                .expect("bisection stays in the representable range");
            found.push((root, b.iterations, b.converged));
        }
    }

    let roots: Vec<RootInfo> = found
        .iter()
        .map(|(s, _, _)| {
            let point = UncertaintyPoint { xi: s.xi, q: s.q() };
            RootInfo {
                xi: s.xi,
                q: s.q(),
                energy_nd: s.energy(),
                residual: constraint_residual(point, alpha, beta),
            }
        })
        .collect();
    let best = (0..found.len())
        .min_by(|&a, &b| roots[a].energy_nd.total_cmp(&roots[b].energy_nd))
        .ok_or_else(|| {
            Error::NoBoundState(format!(
                "minimal-coordinate equation has no sign change on [{}, {}] for alpha = {alpha}, beta = {beta}",
                grid.min, grid.max
            ))
        })?;

    let (root, iterations, converged) = found[best];
    let point = UncertaintyPoint {
        xi: root.xi,
        q: root.q(),
    };
    let mut diagnostics = Diagnostics::new(point, alpha, beta);
    diagnostics.k2 = 1.0 / root.t;
    diagnostics.iterations = iterations;
    diagnostics.converged = converged;
    diagnostics.roots = roots;
    Ok(SolveResult::new(
        point,
        root.energy(),
        Method::FullNumeric,
        diagnostics,
    ))
}
