//! Independent check of the bound: minimize `q^2 + V(xi)` directly along the
//! boundary curve, and a brute-force 2D grid over the allowed region.
//!
//! Solving `xi q = 1/2 + beta q^2 + alpha xi^2` for `q` gives two branches,
//!
//! ```text
//! q_lower = (1 + 2 alpha xi^2) / (xi + sqrt(D))
//! q_upper = (xi + sqrt(D)) / (2 beta)
//! D = xi^2 (1 - 4 alpha beta) - 2 beta
//! ```
//!
//! The lower form is the rationalized `(xi - sqrt(D)) / (2 beta)` and stays
//! valid at `beta = 0`, where the upper branch does not exist.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    constraint_residual, DeformationParams, Diagnostics, Method, SolveResult, UncertaintyPoint,
};
use crate::numeric::{golden_section, log_space};
use crate::potential::PotentialEvaluator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Lower,
    Upper,
}

/// Smallest `xi` on the boundary: `sqrt(2 beta / (1 - 4 alpha beta))`.
pub fn domain_min(alpha: f64, beta: f64) -> f64 {
    (2.0 * beta / (1.0 - 4.0 * alpha * beta)).sqrt()
}

/// `q` on the requested boundary branch at `xi`.
pub fn boundary_momentum(xi: f64, alpha: f64, beta: f64, branch: Branch) -> Result<f64> {
    DeformationParams::new(alpha, beta)?;
    if !(xi.is_finite() && xi > 0.0 && xi >= domain_min(alpha, beta)) {
        return Err(Error::Domain(xi));
    }
    let root = (xi * xi * (1.0 - 4.0 * alpha * beta) - 2.0 * beta)
        .max(0.0)
        .sqrt();
    match branch {
        Branch::Lower => Ok((1.0 + 2.0 * alpha * xi * xi) / (xi + root)),
        Branch::Upper if beta > 0.0 => Ok((xi + root) / (2.0 * beta)),
        Branch::Upper => Err(Error::InvalidDeformation(
            "the upper boundary branch needs beta > 0".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleOptions {
    /// Log-spaced scan nodes per branch.
    pub points: usize,
    /// Lower cut-off of the scan, applied on top of the branch's domain.
    pub floor: f64,
    pub max: f64,
    /// Bracket width at which golden-section refinement stops.
    pub xtol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            points: 2000,
            floor: 1e-6,
            max: 1e3,
            xtol: 1e-10,
        }
    }
}

struct BranchMin {
    xi: f64,
    q: f64,
    energy: f64,
    iterations: usize,
    interior: bool,
}

fn minimize_branch(
    pot: &PotentialEvaluator,
    alpha: f64,
    beta: f64,
    branch: Branch,
    opts: &OracleOptions,
) -> Result<BranchMin> {
    let lo = domain_min(alpha, beta).max(opts.floor);
    let hi = opts.max;
    if !(lo < hi) || opts.points < 3 {
        return Err(Error::InvalidGrid(format!(
            "oracle scan [{lo}, {hi}] with {} points is empty",
            opts.points
        )));
    }
    let energy = |xi: f64| {
        let q = boundary_momentum(xi, alpha, beta, branch).unwrap_or(f64::INFINITY);
        let (v, _) = pot.v_and_vtilde(xi);
        let e = q * q + v;
        if e.is_finite() {
            e
        } else {
            f64::INFINITY
        }
    };
    let nodes: Vec<f64> = log_space(lo, hi, opts.points).collect();
    let values: Vec<f64> = nodes.iter().map(|&x| energy(x)).collect();
    let best = (0..nodes.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("at least 3 nodes");
    let a = nodes[best.saturating_sub(1)];
    let b = nodes[(best + 1).min(nodes.len() - 1)];
    let m = golden_section(energy, a, b, opts.xtol);
    let (xi, e) = if m.value <= values[best] {
        (m.x, m.value)
    } else {
        (nodes[best], values[best])
    };
    let q = boundary_momentum(xi, alpha, beta, branch)?;
    let interior = xi > lo * (1.0 + 1e-9) && xi < hi * (1.0 - 1e-9);
    Ok(BranchMin {
        xi,
        q,
        energy: e,
        iterations: m.iterations,
        interior,
    })
}

/// Lowest energy over both boundary branches.
///
/// Returns `NoBoundState` when the energy is not representable anywhere on
/// the scanned part of the boundary.
pub fn oracle_min(
    pot: &PotentialEvaluator,
    alpha: f64,
    beta: f64,
    opts: &OracleOptions,
) -> Result<SolveResult> {
    DeformationParams::new(alpha, beta)?;
    let mut best = minimize_branch(pot, alpha, beta, Branch::Lower, opts)?;
    if beta > 0.0 {
        let upper = minimize_branch(pot, alpha, beta, Branch::Upper, opts)?;
        if upper.energy < best.energy {
            best = upper;
        }
    }
    if !best.energy.is_finite() {
        return Err(Error::NoBoundState(format!(
            "q^2 + V is not finite anywhere on the boundary for alpha = {alpha}, beta = {beta}"
        )));
    }
    let point = UncertaintyPoint {
        xi: best.xi,
        q: best.q,
    };
    let mut diagnostics = Diagnostics::new(point, alpha, beta);
    diagnostics.iterations = best.iterations;
    diagnostics.converged = true;
    diagnostics.interior = Some(best.interior);
    Ok(SolveResult::new(
        point,
        best.energy,
        Method::Oracle,
        diagnostics,
    ))
}

/// Rectangle `[xi_min, xi_max] x [q_min, q_max]` cut into `intervals`
/// equal steps per axis (`intervals + 1` nodes each).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteGrid {
    pub xi_min: f64,
    pub xi_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub intervals: usize,
}

impl BruteGrid {
    pub fn square(max: f64, intervals: usize) -> Self {
        Self {
            xi_min: 0.0,
            xi_max: max,
            q_min: 0.0,
            q_max: max,
            intervals,
        }
    }
}

/// Minimum of `q^2 + V(xi)` over grid nodes satisfying the constraint.
pub fn brute_2d(pot: &PotentialEvaluator, alpha: f64, beta: f64, grid: &BruteGrid) -> Result<f64> {
    DeformationParams::new(alpha, beta)?;
    let BruteGrid {
        xi_min,
        xi_max,
        q_min,
        q_max,
        intervals,
    } = *grid;
    let ordered = xi_min < xi_max && q_min < q_max && xi_min >= 0.0 && q_min >= 0.0;
    if !(ordered && xi_max.is_finite() && q_max.is_finite() && intervals >= 1) {
        return Err(Error::InvalidGrid(format!("bad brute-force grid {grid:?}")));
    }
    let n = intervals as f64;
    let node = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 / n);
    let mut best = f64::INFINITY;
    for i in 0..=intervals {
        let xi = node(xi_min, xi_max, i);
        let mut v = None;
        for j in 0..=intervals {
            let q = node(q_min, q_max, j);
            if constraint_residual(UncertaintyPoint { xi, q }, alpha, beta) < 0.0 {
                continue;
            }
            let v = *v.get_or_insert_with(|| pot.v_and_vtilde(xi).0);
            let e = q * q + v;
            if e < best {
                best = e;
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::EmptyFeasibleGrid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::harmonic_minimum;
    use crate::potential::PotentialSpec;
    use crate::solver::{solve_full, SolverOptions};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pot(text: &str) -> PotentialEvaluator {
        PotentialSpec::parse(text).unwrap().evaluator().unwrap()
    }

    #[test]
    fn branches_lie_on_boundary() {
        for &(a, b) in &[(0.0, 0.0), (0.1, 0.1), (0.0, 0.3), (0.7, 0.2)] {
            for xi in [0.8, 1.3, 4.0] {
                if xi < domain_min(a, b) {
                    continue;
                }
                let q = boundary_momentum(xi, a, b, Branch::Lower).unwrap();
                assert!(constraint_residual(UncertaintyPoint { xi, q }, a, b).abs() < 1e-13);
                if b > 0.0 {
                    let qu = boundary_momentum(xi, a, b, Branch::Upper).unwrap();
                    assert!(qu >= q);
                    assert!(
                        constraint_residual(UncertaintyPoint { xi, q: qu }, a, b).abs()
                            < 1e-12 * qu * qu
                    );
                }
            }
        }
    }

    #[test]
    fn branch_errors() {
        assert!(matches!(
            boundary_momentum(0.5, 0.0, 0.0, Branch::Upper),
            Err(Error::InvalidDeformation(_))
        ));
        let dmin = domain_min(0.1, 0.5);
        assert!(matches!(
            boundary_momentum(0.9 * dmin, 0.1, 0.5, Branch::Lower),
            Err(Error::Domain(_))
        ));
        let at = boundary_momentum(dmin, 0.1, 0.5, Branch::Lower).unwrap();
        assert_relative_eq!(
            at,
            boundary_momentum(dmin, 0.1, 0.5, Branch::Upper).unwrap(),
            max_relative = 1e-7
        );
    }

    #[test]
    fn harmonic_reference() {
        let r = oracle_min(&pot("x^2"), 0.1, 0.1, &OracleOptions::default()).unwrap();
        assert_relative_eq!(r.energy_nd, 1.25, max_relative = 1e-12);
        assert_relative_eq!(r.point.xi, 0.790_569_415_042_094_8, max_relative = 1e-6);
        assert_eq!(r.diagnostics.interior, Some(true));
        assert_eq!(r.method, Method::Oracle);
    }

    #[test]
    fn agrees_with_solver_on_examples() {
        for (text, a, b) in [
            ("power(3, 2)", 0.05, 0.05),
            ("x^4", 0.05, 0.05),
            ("x^2 + 0.1*x^8", 0.4, 0.0),
        ] {
            let p = pot(text);
            let o = oracle_min(&p, a, b, &OracleOptions::default()).unwrap();
            let s = solve_full(&p, a, b, &SolverOptions::default()).unwrap();
            assert!(
                (o.energy_nd - s.energy_nd).abs() <= 1e-6 * s.energy_nd.abs(),
                "{text}"
            );
        }
    }

    #[test]
    fn non_representable_is_no_bound_state() {
        let p = PotentialSpec::power_law(10_000, 1.0).evaluator().unwrap();
        assert!(matches!(
            oracle_min(&p, 0.0, 0.6, &OracleOptions::default()),
            Err(Error::NoBoundState(_))
        ));
    }

    #[test]
    fn brute_force_harmonic() {
        let p = pot("x^2");
        let gaps: Vec<f64> = [250, 500, 1000, 2000]
            .iter()
            .map(|&n| brute_2d(&p, 0.1, 0.1, &BruteGrid::square(2.5, n)).unwrap() - 1.25)
            .collect();
        assert!(gaps.iter().all(|g| *g >= 0.0));
        // nested grids: every refinement keeps the old nodes
        assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
        assert!(gaps[3] < 1e-3, "{gaps:?}");
    }

    #[test]
    fn brute_force_errors() {
        let p = pot("x^2");
        let empty = BruteGrid {
            xi_min: 0.0,
            xi_max: 0.1,
            q_min: 0.0,
            q_max: 0.1,
            intervals: 10,
        };
        assert!(matches!(
            brute_2d(&p, 0.0, 0.0, &empty),
            Err(Error::EmptyFeasibleGrid)
        ));
        assert!(brute_2d(&p, 0.0, 0.0, &BruteGrid::square(1.0, 0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn oracle_matches_closed_form(alpha in 0.0f64..1.5, u in 0.0f64..1.0) {
            let beta = u * (0.24 / alpha.max(0.16)).min(1.5);
            let o = oracle_min(&pot("x^2"), alpha, beta, &OracleOptions::default()).unwrap();
            let c = harmonic_minimum(alpha, beta).unwrap();
            prop_assert!((o.energy_nd / c.energy_nd - 1.0).abs() < 1e-9);
        }
    }
}
