//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p gupbound --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gupbound::cli;
use gupbound::existence::{
    beta_limit, box_energy, region_scan, uniform_grid, BetaLimit, BetaLimitOptions,
};
use gupbound::harmonic::{harmonic_minimum, harmonic_solve_physical, k_pair};
use gupbound::model::{DeformationParams, PhysicalContext};
use gupbound::numeric::ScanGrid;
use gupbound::oracle::{oracle_min, OracleOptions};
use gupbound::potential::{PotentialSpec, Term};
use gupbound::solver::{solve_full, xi0, SolverOptions};
use gupbound::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn c1_harmonic_ground_state() -> Verdict {
    let out = cli::run(["gupbound", "solve-harmonic", "--alpha", "0", "--beta", "0"]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).expect("JSON output");
    let cli_energy = doc["result"]["energy_physical"].as_f64().unwrap();
    let cli_ok = out.code == 0 && rel(cli_energy, 0.5) <= 1e-12;

    let (h, m, w) = (1.3, 0.7, 2.1);
    let ctx = PhysicalContext::harmonic(h, m, w).unwrap();
    let t = Instant::now();
    let r = harmonic_solve_physical(&ctx, 0.0, 0.0).unwrap();
    let elapsed = t.elapsed();
    let lib_ok = rel(r.energy_physical, 0.5 * h * w) <= 1e-12;
    verdict(
        cli_ok && lib_ok && elapsed < Duration::from_millis(1),
        format!(
            "cli E = {cli_energy}, E(h=1.3,w=2.1) = {}, call {elapsed:?}",
            r.energy_physical
        ),
    )
}

fn c2_closed_form_vs_numeric() -> Verdict {
    let pot = PotentialSpec::parse("x^2").unwrap().evaluator().unwrap();
    let axis: Vec<f64> = (0..20).map(|i| 1.5 * i as f64 / 19.0).collect();
    let (mut worst_e, mut worst_x, mut count) = (0.0f64, 0.0f64, 0);
    for &a in &axis {
        for &b in &axis {
            if a * b >= 0.24 {
                continue;
            }
            count += 1;
            let full = solve_full(&pot, a, b, &SolverOptions::default()).unwrap();
            let closed = harmonic_minimum(a, b).unwrap();
            worst_e = worst_e.max(rel(full.energy_nd, closed.energy_nd));
            worst_x = worst_x
                .max(rel(full.point.xi, closed.point.xi))
                .max(rel(full.point.q, closed.point.q));
        }
    }
    verdict(
        worst_e <= 1e-8 && worst_x <= 1e-6,
        format!("{count} points, max rel energy {worst_e:.1e}, max rel xi/q {worst_x:.1e}"),
    )
}

fn c3_k_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let alpha: f64 = rng.gen_range(0.0..5.0);
        let beta: f64 = rng.gen_range(0.0..1.0) * (0.25 / alpha.max(0.05)).min(5.0);
        let k = k_pair(alpha, beta).unwrap();
        let d = beta - alpha;
        let scale = d.abs().max(1.0);
        worst = worst
            .max((k.k1 * k.k2 + 1.0).abs())
            .max((k.k1 + k.k2 - 2.0 * d).abs() / scale)
            .max((k.k2 - k.k1 - 2.0 * d.hypot(1.0)).abs() / scale);
    }
    verdict(
        worst <= 1e-12,
        format!("10000 pairs, max deviation {worst:.1e}"),
    )
}

/// Forward difference with one Richardson step, so the slope error is `O(h^2)`.
fn slope(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    let (f0, f1, f2) = (f(0.0), f(h / 2.0), f(h));
    (4.0 * f1 - f2 - 3.0 * f0) / h
}

fn c4_linear_coefficients() -> Verdict {
    let opts = SolverOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let (h, m, w) = (1.3, 0.7, 2.1);
    let ctx = PhysicalContext::harmonic(h, m, w).unwrap();
    let units = ctx.nondimensionalize_harmonic().unwrap();
    let osc = PotentialSpec::parse("x^2").unwrap().evaluator().unwrap();
    let energy = |ap: f64, bp: f64| {
        let d = DeformationParams::from_physical(ap, bp, &units).unwrap();
        solve_full(&osc, d.alpha, d.beta, &opts).unwrap().energy_nd * units.e0
    };
    let sb = slope(|x| energy(0.0, x), 1e-3);
    let sa = slope(|x| energy(x, 0.0), 1e-3);
    let (eb, ea) = (h * h * w * w * m / 4.0, h * h / (4.0 * m));
    ok &= rel(sb, eb) <= 0.01 && rel(sa, ea) <= 0.01;
    notes.push(format!(
        "osc beta' {:.1e} alpha' {:.1e}",
        rel(sb, eb),
        rel(sa, ea)
    ));

    for n in [1u32, 2, 3, 5] {
        let v0 = 1.0;
        let pot = PotentialSpec::power_law(n, v0).evaluator().unwrap();
        let nf = n as f64;
        let x0 = (1.0 / (4.0 * nf * v0)).powf(1.0 / (2.0 * nf + 2.0));
        let vt0 = nf * v0 * x0.powi(2 * n as i32 - 2);
        let vv0 = v0 * x0.powi(2 * n as i32);
        let e = |a: f64, b: f64| solve_full(&pot, a, b, &opts).unwrap().energy_nd;
        let c0 = e(0.0, 0.0) / vv0;
        let cb = slope(|x| e(0.0, x), 1e-3) / vv0;
        let ca = slope(|x| e(x, 0.0), 1e-3) / vv0;
        let errs = [
            rel(c0, nf + 1.0),
            rel(cb, 2.0 * nf * vt0.sqrt()),
            rel(ca, 2.0 * nf / vt0.sqrt()),
        ];
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        ok &= worst <= 0.01;
        notes.push(format!("n={n} {worst:.1e}"));
    }
    verdict(ok, format!("max rel error: {}", notes.join(", ")))
}

fn c5_xi2_vanishes() -> Verdict {
    let pot = PotentialSpec::power_law(2, 1.0).evaluator().unwrap();
    let x0 = xi0(&pot, 1e-15).unwrap();
    let eps = [1e-2, 1e-3, 1e-4];
    let d: Vec<f64> = eps
        .iter()
        .map(|&e| {
            (solve_full(&pot, e, 0.0, &SolverOptions::default())
                .unwrap()
                .point
                .xi
                - x0)
                .abs()
        })
        .collect();
    // least-squares slope of log d against log eps
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let exponent = num / den;
    verdict(
        exponent >= 1.8,
        format!(
            "measured exponent {exponent:.3}, shifts {:?}",
            d.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn random_potential(rng: &mut ChaCha8Rng) -> PotentialSpec {
    let count = rng.gen_range(1..=3);
    let terms = (0..count)
        .map(|_| Term {
            coefficient: rng.gen_range(0.1..3.0),
            exponent: 2 * rng.gen_range(1..=4),
        })
        .collect();
    PotentialSpec::from_terms(terms)
}

fn c6_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut disagreements, mut both, mut neither) = (0.0f64, 0, 0, 0);
    for _ in 0..50 {
        let spec = random_potential(&mut rng);
        assert!(spec.validate().is_empty());
        let pot = spec.evaluator().unwrap();
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let beta: f64 = rng.gen_range(0.0..1.0) * (0.24 / alpha.max(0.24)).min(1.0);
        let full = solve_full(&pot, alpha, beta, &SolverOptions::default());
        let oracle = oracle_min(&pot, alpha, beta, &OracleOptions::default());
        match (full, oracle) {
            (Ok(f), Ok(o)) => {
                both += 1;
                worst = worst.max((f.energy_nd - o.energy_nd).abs());
            }
            (Err(Error::NoBoundState(_)), Err(Error::NoBoundState(_))) => neither += 1,
            (f, o) => {
                disagreements += 1;
                println!(
                    "  disagreement: {spec} alpha={alpha} beta={beta}: solve {:?} / oracle {:?}",
                    f.is_ok(),
                    o.is_ok()
                );
            }
        }
    }
    verdict(
        worst <= 1e-6 && disagreements == 0,
        format!("{both} both exist, {neither} neither, {disagreements} disagreements, max |dE| {worst:.1e}"),
    )
}

fn c7_beta_limit_asymptote() -> Verdict {
    let opts = BetaLimitOptions::default();
    let ns = [2u32, 10, 100, 10_000];
    let limits: Vec<BetaLimit> = ns
        .iter()
        .map(|&n| beta_limit(n, 1.0, 0.0, &opts).unwrap())
        .collect();
    let values: Vec<f64> = limits.iter().map(BetaLimit::value).collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let last = values[3];
    let close = rel(last, 0.5) <= 0.05;
    let shown: Vec<String> = ns
        .iter()
        .zip(&limits)
        .map(|(n, b)| format!("n={n}: {b}"))
        .collect();
    verdict(
        monotone && close,
        format!(
            "{} (n=1e4 off by {:.1}%)",
            shown.join(", "),
            100.0 * rel(last, 0.5)
        ),
    )
}

fn region(n: u32, v0: f64) -> Vec<Vec<bool>> {
    let axis = uniform_grid(1.2, 200);
    region_scan(n, v0, &axis, &axis, &ScanGrid::scan_default())
        .unwrap()
        .exists
}

fn c8_harmonic_region() -> Verdict {
    let axis = uniform_grid(1.2, 200);
    let exists = region(1, 1.0);
    let mut worst = 0usize;
    let mut crossings = 0;
    for (j, row) in exists.iter().enumerate() {
        let truth: Vec<bool> = axis.iter().map(|a| a * axis[j] < 0.25).collect();
        let mismatched: Vec<usize> = (0..row.len()).filter(|&i| row[i] != truth[i]).collect();
        crossings += truth.windows(2).filter(|w| w[0] != w[1]).count();
        // each mismatch must sit next to the true boundary
        let edge = truth.iter().position(|t| !t).unwrap_or(truth.len());
        if mismatched.iter().any(|&i| i + 1 < edge || i > edge) {
            worst = usize::MAX;
        }
        worst = worst.max(mismatched.len());
    }
    verdict(
        worst <= 1,
        format!(
            "{crossings} boundary crossings, max mismatched cells per row {}",
            if worst == usize::MAX {
                "off-boundary".into()
            } else {
                worst.to_string()
            }
        ),
    )
}

fn subset(inner: &[Vec<bool>], outer: &[Vec<bool>]) -> usize {
    inner
        .iter()
        .flatten()
        .zip(outer.iter().flatten())
        .filter(|(i, o)| **i && !**o)
        .count()
}

fn c9_region_monotonicity() -> Verdict {
    let n2 = region(2, 1.0);
    let n10 = region(10, 1.0);
    let n10_strong = region(10, 100.0);
    let count = |r: &[Vec<bool>]| r.iter().flatten().filter(|e| **e).count();
    let (v1, v2) = (subset(&n10, &n2), subset(&n10_strong, &n10));
    verdict(
        v1 == 0 && v2 == 0,
        format!(
            "cells: n=2 {}, n=10 {}, n=10/v0=100 {}; violations {v1}, {v2}",
            count(&n2),
            count(&n10),
            count(&n10_strong)
        ),
    )
}

fn c10_box_reference() -> Verdict {
    let (h, m, a) = (1.1, 0.8, 1.7);
    let ctx = PhysicalContext::well(h, m, a, None).unwrap();
    let t = Instant::now();
    let mut worst = 0.0f64;
    for k in 1..=3u32 {
        let exact = PI * PI * h * h * (k * k) as f64 / (8.0 * m * a * a);
        worst = worst.max(rel(box_energy(&ctx, 1e-8, k).unwrap(), exact));
    }
    let elapsed = t.elapsed();
    let mut wrong = 0;
    for k in 1..=3u32 {
        // threshold beta' = (a / (hbar k))^2
        let edge = (a / (h * k as f64)).powi(2);
        for bp in [0.5 * edge, 0.999 * edge, edge, 1.001 * edge, 2.0 * edge] {
            let arg = PI * h * k as f64 * f64::sqrt(bp) / (2.0 * a);
            let none = matches!(box_energy(&ctx, bp, k), Err(Error::NoBoundState(_)));
            if none != (arg >= PI / 2.0) {
                wrong += 1;
            }
        }
    }
    verdict(
        worst <= 1e-6 && wrong == 0 && elapsed < Duration::from_millis(1),
        format!("max rel error {worst:.1e}, threshold misclassified {wrong}, levels {elapsed:?}"),
    )
}

type Criterion = (&'static str, fn() -> Verdict, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 undeformed harmonic ground state",
            c1_harmonic_ground_state,
            Duration::from_millis(1000),
        ),
        (
            "2 closed form vs full numeric",
            c2_closed_form_vs_numeric,
            Duration::from_secs(5),
        ),
        ("3 K identities", c3_k_identities, Duration::from_secs(1)),
        (
            "4 linear coefficients",
            c4_linear_coefficients,
            Duration::from_secs(10),
        ),
        ("5 xi2 = 0", c5_xi2_vanishes, Duration::from_secs(5)),
        (
            "6 oracle equivalence",
            c6_oracle_equivalence,
            Duration::from_secs(60),
        ),
        (
            "7 beta-limit asymptote",
            c7_beta_limit_asymptote,
            Duration::from_secs(120),
        ),
        (
            "8 harmonic existence region",
            c8_harmonic_region,
            Duration::from_secs(60),
        ),
        (
            "9 region monotonicity",
            c9_region_monotonicity,
            Duration::from_secs(120),
        ),
        (
            "10 box reference",
            c10_box_reference,
            Duration::from_millis(1000),
        ),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let t = Instant::now();
        let v = check();
        let elapsed = t.elapsed();
        let pass = v.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({}; {:.3}s of {:.0?})",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
