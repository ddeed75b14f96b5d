//! Physical constants, deformation parameters, unit conversion and the shared
//! result types.
//!
//! Everything downstream works in dimensionless variables: coordinate
//! uncertainty `xi = dx / dx0`, momentum uncertainty `q = dp / dp0` and energy
//! `E / e0`, with the unit triple chosen so that `dx0 * dp0 = hbar`. In those
//! variables the deformed uncertainty relation reads
//!
//! ```text
//! xi * q >= 1/2 + beta * q^2 + alpha * xi^2
//! ```

use serde::Serialize;

use crate::error::{Error, Result};

/// Length (or frequency) scale the problem is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Oscillator frequency; units of the oscillator ground state.
    Harmonic { omega: f64 },
    /// Well size `a` and optional potential strength `u0` (energy units).
    Well { a: f64, u0: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalContext {
    pub hbar: f64,
    pub mass: f64,
    pub scale: Scale,
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

impl PhysicalContext {
    pub fn harmonic(hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("mass", mass)?;
        positive("omega", omega)?;
        Ok(Self {
            hbar,
            mass,
            scale: Scale::Harmonic { omega },
        })
    }

    pub fn well(hbar: f64, mass: f64, a: f64, u0: Option<f64>) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("mass", mass)?;
        positive("a", a)?;
        if let Some(u0) = u0 {
            positive("u0", u0)?;
        }
        Ok(Self {
            hbar,
            mass,
            scale: Scale::Well { a, u0 },
        })
    }

    pub fn omega(&self) -> Option<f64> {
        match self.scale {
            Scale::Harmonic { omega } => Some(omega),
            Scale::Well { .. } => None,
        }
    }

    pub fn a(&self) -> Option<f64> {
        match self.scale {
            Scale::Well { a, .. } => Some(a),
            Scale::Harmonic { .. } => None,
        }
    }

    /// Oscillator units: `dx0 = sqrt(hbar/(m w))`, `dp0 = sqrt(hbar m w)`, `e0 = hbar w / 2`.
    pub fn nondimensionalize_harmonic(&self) -> Result<Nondimensionalization> {
        let omega = self
            .omega()
            .ok_or_else(|| Error::Config("oscillator units need omega".into()))?;
        let (h, m) = (self.hbar, self.mass);
        Ok(Nondimensionalization {
            dx0: (h / (m * omega)).sqrt(),
            dp0: (h * m * omega).sqrt(),
            e0: h * omega / 2.0,
            hbar: h,
        })
    }

    /// Well units: `dx0 = a`, `dp0 = hbar/a`, `e0 = hbar^2 / (2 m a^2)`.
    pub fn nondimensionalize_general(&self) -> Result<Nondimensionalization> {
        let a = self
            .a()
            .ok_or_else(|| Error::Config("well units need the length a".into()))?;
        let (h, m) = (self.hbar, self.mass);
        Ok(Nondimensionalization {
            dx0: a,
            dp0: h / a,
            e0: h * h / (2.0 * m * a * a),
            hbar: h,
        })
    }

    /// Units matching the context's scale.
    pub fn units(&self) -> Nondimensionalization {
        match self.scale {
            Scale::Harmonic { .. } => self.nondimensionalize_harmonic(),
            Scale::Well { .. } => self.nondimensionalize_general(),
        }
        .expect("scale variant always carries its parameter")
    }

    /// Dimensionless potential strength `u0 / e0`, when a strength was given.
    pub fn v0(&self) -> Option<f64> {
        match self.scale {
            Scale::Well { u0: Some(u0), .. } => Some(u0 / self.units().e0),
            _ => None,
        }
    }
}

/// Unit triple with `dx0 * dp0 = hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondimensionalization {
    pub dx0: f64,
    pub dp0: f64,
    pub e0: f64,
    pub hbar: f64,
}

impl Nondimensionalization {
    /// Unit triple in which dimensionless and physical values coincide (`hbar = 1`, `e0 = 1`).
    pub fn identity() -> Self {
        Self {
            dx0: 1.0,
            dp0: 1.0,
            e0: 1.0,
            hbar: 1.0,
        }
    }
}

/// Deformation parameters in dimensionless form, optionally tagged with the
/// physical `(alpha', beta')` they were derived from.
///
/// Both product bounds are enforced here so that nothing downstream has to
/// guard `1 - 4 alpha beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationParams {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_prime: Option<f64>,
    pub beta_prime: Option<f64>,
}

fn non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDeformation(format!(
            "{name} must be finite and non-negative, got {value}"
        )))
    }
}

impl DeformationParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        non_negative("alpha", alpha)?;
        non_negative("beta", beta)?;
        if alpha * beta >= 0.25 {
            return Err(Error::InvalidDeformation(format!(
                "alpha*beta = {} violates alpha*beta < 1/4",
                alpha * beta
            )));
        }
        Ok(Self {
            alpha,
            beta,
            alpha_prime: None,
            beta_prime: None,
        })
    }

    /// `alpha = dx0^2 alpha' / 2`, `beta = dp0^2 beta' / 2`.
    pub fn from_physical(
        alpha_prime: f64,
        beta_prime: f64,
        units: &Nondimensionalization,
    ) -> Result<Self> {
        non_negative("alpha'", alpha_prime)?;
        non_negative("beta'", beta_prime)?;
        let bound = 1.0 / (units.hbar * units.hbar);
        if alpha_prime * beta_prime >= bound {
            return Err(Error::InvalidDeformation(format!(
                "alpha'*beta' = {} violates alpha'*beta' < hbar^-2 = {bound}",
                alpha_prime * beta_prime
            )));
        }
        let alpha = 0.5 * units.dx0 * units.dx0 * alpha_prime;
        let beta = 0.5 * units.dp0 * units.dp0 * beta_prime;
        let mut params = Self::new(alpha, beta)?;
        params.alpha_prime = Some(alpha_prime);
        params.beta_prime = Some(beta_prime);
        Ok(params)
    }

    /// Inverse mapping back to `(alpha', beta')`.
    pub fn to_physical(&self, units: &Nondimensionalization) -> (f64, f64) {
        (
            2.0 * self.alpha / (units.dx0 * units.dx0),
            2.0 * self.beta / (units.dp0 * units.dp0),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyPoint {
    pub xi: f64,
    pub q: f64,
}

/// `xi q - 1/2 - beta q^2 - alpha xi^2`: zero on the boundary of the allowed
/// region, positive inside it.
pub fn constraint_residual(point: UncertaintyPoint, alpha: f64, beta: f64) -> f64 {
    let UncertaintyPoint { xi, q } = point;
    xi * q - 0.5 - beta * q * q - alpha * xi * xi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    LinearApprox,
    FullNumeric,
    Oracle,
}

/// One stationary point found by the full numeric solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootInfo {
    pub xi: f64,
    pub q: f64,
    pub energy_nd: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `K2 = 2 beta - 2/lambda_2` at the minimum, equal to `xi_min / q_min`.
    pub k2: f64,
    /// Constraint residual at the returned point.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// All roots of the minimal-coordinate equation (full numeric path only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<RootInfo>,
    /// False when the oracle's minimum sits on an end of its scanned range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<bool>,
}

impl Diagnostics {
    pub fn new(point: UncertaintyPoint, alpha: f64, beta: f64) -> Self {
        Self {
            k2: point.xi / point.q,
            residual: constraint_residual(point, alpha, beta),
            iterations: 0,
            converged: true,
            roots: Vec::new(),
            interior: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub point: UncertaintyPoint,
    pub energy_nd: f64,
    pub e0: f64,
    pub energy_physical: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl SolveResult {
    /// Result in dimensionless units (`e0 = 1`).
    pub fn new(
        point: UncertaintyPoint,
        energy_nd: f64,
        method: Method,
        diagnostics: Diagnostics,
    ) -> Self {
        Self {
            point,
            energy_nd,
            e0: 1.0,
            energy_physical: energy_nd,
            method,
            diagnostics,
        }
    }

    pub fn with_units(mut self, units: &Nondimensionalization) -> Self {
        self.e0 = units.e0;
        self.energy_physical = units.e0 * self.energy_nd;
        self
    }
}
