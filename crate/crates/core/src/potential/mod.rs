//! Admissible potentials `V(xi) = sum_k c_k xi^(2k)` in dimensionless energy
//! units.
//!
//! The energy bound needs `<V(x)> >= V(dx)`. That holds when the potential is
//! a function `U` of `x^2`, `U` is convex on `y >= 0`, and `U` strictly grows
//! with `|x|`. For an even polynomial with non-negative coefficients the first
//! two are automatic and the third needs one positive coefficient, so those
//! are exactly the properties [`PotentialSpec::validate`] checks.

mod parse;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `coefficient * xi^exponent`, exponent even and at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coefficient: f64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Polynomial(Vec<Term>),
    /// `V = omega^2 xi^2`.
    Harmonic {
        omega: f64,
    },
    /// `V = v0 xi^(2n)`.
    PowerLaw {
        n: u32,
        v0: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub shape: Shape,
    pub source_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `U(y)` convex for `y >= 0` (Jensen).
    Convexity,
    /// The potential depends on `x` only through `(x/a)^2`.
    EvenForm,
    /// `dU/d|x| > 0`; excludes singular and flat potentials.
    Monotonicity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Convexity => "convexity of U(y) on y >= 0",
            Condition::EvenForm => "dependence on (x/a)^2 only",
            Condition::Monotonicity => "strict growth with |x|",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.condition, self.detail)
    }
}

impl PotentialSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let shape = parse::parse_shape(text)?;
        Ok(Self {
            shape,
            source_text: text.to_string(),
        })
    }

    /// Unvalidated polynomial; run [`validate`](Self::validate) before use.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let shape = Shape::Polynomial(terms);
        let source_text = shape_text(&shape);
        Self { shape, source_text }
    }

    pub fn harmonic(omega: f64) -> Self {
        let shape = Shape::Harmonic { omega };
        Self {
            source_text: shape_text(&shape),
            shape,
        }
    }

    pub fn power_law(n: u32, v0: f64) -> Self {
        let shape = Shape::PowerLaw { n, v0 };
        Self {
            source_text: shape_text(&shape),
            shape,
        }
    }

    /// Normalized term list, sorted by exponent.
    pub fn terms(&self) -> Vec<Term> {
        match &self.shape {
            Shape::Polynomial(terms) => {
                let mut t = terms.clone();
                t.sort_by_key(|t| t.exponent);
                t
            }
            Shape::Harmonic { omega } => vec![Term {
                coefficient: omega * omega,
                exponent: 2,
            }],
            Shape::PowerLaw { n, v0 } => vec![Term {
                coefficient: *v0,
                exponent: 2 * n,
            }],
        }
    }

    /// Lists every admissibility condition the potential fails; empty means admissible.
    pub fn validate(&self) -> Vec<Violation> {
        let terms = self.terms();
        let mut out = Vec::new();
        for t in &terms {
            if !t.coefficient.is_finite() || t.coefficient < 0.0 {
                out.push(Violation {
                    condition: Condition::Convexity,
                    detail: format!(
                        "coefficient {} of x^{} is not a finite non-negative number",
                        t.coefficient, t.exponent
                    ),
                });
            }
            if t.exponent == 0 || t.exponent % 2 != 0 {
                out.push(Violation {
                    condition: Condition::EvenForm,
                    detail: format!("exponent {} is not even and positive", t.exponent),
                });
            }
        }
        if !terms.iter().any(|t| t.coefficient > 0.0 && t.exponent > 0) {
            out.push(Violation {
                condition: Condition::Monotonicity,
                detail: "no term with a positive coefficient".into(),
            });
        }
        out
    }

    pub fn evaluator(&self) -> Result<PotentialEvaluator> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Inadmissible(violations));
        }
        let terms = self
            .terms()
            .into_iter()
            .filter(|t| t.coefficient > 0.0)
            .map(|t| (t.coefficient, (t.exponent / 2) as i32))
            .collect();
        Ok(PotentialEvaluator { terms })
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    if t.coefficient == 1.0 {
        write!(f, "x^{}", t.exponent)
    } else {
        write!(f, "{}*x^{}", t.coefficient, t.exponent)
    }
}

impl fmt::Display for Shape {
    /// Canonical text that parses back to the same shape.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Polynomial(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    fmt_term(f, t)?;
                }
                Ok(())
            }
            Shape::Harmonic { omega } => write!(f, "harmonic({omega})"),
            Shape::PowerLaw { n, v0 } => write!(f, "power({n}, {v0})"),
        }
    }
}

fn shape_text(shape: &Shape) -> String {
    shape.to_string()
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.shape.fmt(f)
    }
}

/// Values of the potential and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub v: f64,
    pub dv: f64,
    /// `V'(xi) / (2 xi)`.
    pub vtilde: f64,
    pub dvtilde: f64,
}

/// Exact evaluation of an admissible potential and its derivatives for `xi > 0`.
///
/// Stored as `(c_k, k)` pairs for `V = sum c_k xi^(2k)`, so
/// `vtilde = sum k c_k xi^(2k-2)`, which stays strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialEvaluator {
    terms: Vec<(f64, i32)>,
}

impl PotentialEvaluator {
    fn check(xi: f64) -> Result<()> {
        if xi > 0.0 && xi.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(xi))
        }
    }

    pub fn v(&self, xi: f64) -> Result<f64> {
        Self::check(xi)?;
        Ok(self.terms.iter().map(|&(c, k)| c * xi.powi(2 * k)).sum())
    }

    pub fn dv(&self, xi: f64) -> Result<f64> {
        Self::check(xi)?;
        Ok(self
            .terms
            .iter()
            .map(|&(c, k)| 2.0 * k as f64 * c * xi.powi(2 * k - 1))
            .sum())
    }

    pub fn vtilde(&self, xi: f64) -> Result<f64> {
        Self::check(xi)?;
        Ok(self
            .terms
            .iter()
            .map(|&(c, k)| k as f64 * c * xi.powi(2 * k - 2))
            .sum())
    }

    pub fn dvtilde(&self, xi: f64) -> Result<f64> {
        Self::check(xi)?;
        Ok(self
            .terms
            .iter()
            .filter(|&&(_, k)| k > 1)
            .map(|&(c, k)| k as f64 * (2 * k - 2) as f64 * c * xi.powi(2 * k - 3))
            .sum())
    }

    pub fn sample(&self, xi: f64) -> Result<Sample> {
        Ok(Sample {
            v: self.v(xi)?,
            dv: self.dv(xi)?,
            vtilde: self.vtilde(xi)?,
            dvtilde: self.dvtilde(xi)?,
        })
    }

    /// `(V, V~)` without the domain check; callers guarantee `xi > 0`.
    pub(crate) fn v_and_vtilde(&self, xi: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut vt = 0.0;
        for &(c, k) in &self.terms {
            let p = xi.powi(2 * k - 2);
            vt += k as f64 * c * p;
            v += c * p * xi * xi;
        }
        (v, vt)
    }
}
