//! Closed-form cloaking conditions and series solutions for concentric disks
//! and confocal ellipses.
//!
//! The series are written per real phase. For disks the exterior fields are
//!
//! ```text
//! φ = (rⁿ + A r⁻ⁿ) trig(nθ)          r > r_i
//! p = (12 rⁿ + C r⁻ⁿ) trig(nθ)       r > r_e
//! ```
//!
//! with `A = (2λ r_o²ⁿ + r_i²ⁿ) r_i²ⁿ / (2λ r_i²ⁿ + r_o²ⁿ)` and
//! `C = −6((r_e²ⁿ − r_i²ⁿ)ζ₀ − 2 r_i²ⁿ) − 6ζ₀ A (1 − (r_i/r_e)²ⁿ)`.
//! The last term is the slip driven by the residual electric scattering and
//! vanishes under the electric cloaking condition. Confocal ellipses follow
//! the same pattern with `e^{−nξ}` in place of `r⁻ⁿ`.

use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::field::{contrast, FieldFamily, HarmonicField, Phase};
use crate::geometry::{EllipticCoords, Point};

/// Design values: shell permittivity relative to `ε_m`, and the dimensionless
/// zeta potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloakDesign {
    pub eps_ratio: f64,
    pub zeta0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `H = cosh nξ cos nη`.
    X,
    /// `H = sinh nξ sin nη`.
    Y,
}

impl std::str::FromStr for Orientation {
    type Err = CloakError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Orientation::X),
            "y" => Ok(Orientation::Y),
            other => Err(CloakError::InvalidParameter(format!("orientation must be x or y, got `{other}`"))),
        }
    }
}

fn check_order(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(CloakError::InvalidParameter("harmonic order must be at least 1".into()));
    }
    Ok(n as f64)
}

fn check_radii(inner: f64, mid: f64, outer: f64, what: &str) -> Result<()> {
    if !(inner > 0.0 && inner < mid && mid < outer) || !outer.is_finite() {
        return Err(CloakError::InvalidParameter(format!(
            "{what} must satisfy 0 < inner < middle < outer, got ({inner}, {mid}, {outer})"
        )));
    }
    Ok(())
}

pub fn annulus_condition(r_o: f64, r_i: f64, r_e: f64, n: u32) -> Result<CloakDesign> {
    let nf = check_order(n)?;
    check_radii(r_o, r_i, r_e, "radii")?;
    let (o, i, e) = (r_o.powf(2.0 * nf), r_i.powf(2.0 * nf), r_e.powf(2.0 * nf));
    Ok(CloakDesign { eps_ratio: (i + o) / (i - o), zeta0: 2.0 * i / (e - i) })
}

pub fn confocal_condition(xi_o: f64, xi_i: f64, xi_e: f64, n: u32, orientation: Orientation) -> Result<CloakDesign> {
    let nf = check_order(n)?;
    check_radii(xi_o, xi_i, xi_e, "elliptic radii")?;
    let shell = 1.0 / (nf * (xi_i - xi_o)).tanh();
    let band = (nf * (xi_e - xi_i)).cosh();
    Ok(match orientation {
        Orientation::X => CloakDesign {
            eps_ratio: (nf * xi_i).tanh() * shell,
            zeta0: (nf * xi_i).sinh() / ((nf * xi_e).sinh() * band - (nf * xi_i).sinh()),
        },
        Orientation::Y => CloakDesign {
            eps_ratio: shell / (nf * xi_i).tanh(),
            zeta0: (nf * xi_i).cosh() / ((nf * xi_e).cosh() * band - (nf * xi_i).cosh()),
        },
    })
}

/// Exterior series for concentric disks centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSeries {
    pub r_o: f64,
    pub r_i: f64,
    pub r_e: f64,
    pub n: u32,
    pub phase: Phase,
    pub lambda: f64,
    pub zeta0: f64,
}

pub fn annulus_series(
    r_o: f64,
    r_i: f64,
    r_e: f64,
    n: u32,
    phase: Phase,
    eps_ratio: f64,
    zeta0: f64,
) -> Result<AnnulusSeries> {
    check_order(n)?;
    check_radii(r_o, r_i, r_e, "radii")?;
    let lambda = contrast(1.0, eps_ratio)?;
    Ok(AnnulusSeries { r_o, r_i, r_e, n, phase, lambda, zeta0 })
}

impl AnnulusSeries {
    /// Same series with `λ` given directly; `λ = ∞` is the bare core limit.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    fn pow2n(&self, r: f64) -> f64 {
        r.powi(2 * self.n as i32)
    }

    /// Coefficient `A` of `r⁻ⁿ` in `φ`.
    pub fn phi_coefficient(&self) -> f64 {
        let (o, i) = (self.pow2n(self.r_o), self.pow2n(self.r_i));
        if self.lambda.is_infinite() {
            return o;
        }
        (2.0 * self.lambda * o + i) * i / (2.0 * self.lambda * i + o)
    }

    /// Coefficient `C` of `r⁻ⁿ` in `p`.
    pub fn pressure_coefficient(&self) -> f64 {
        let (i, e) = (self.pow2n(self.r_i), self.pow2n(self.r_e));
        let z = self.zeta0;
        -6.0 * ((e - i) * z - 2.0 * i) - 6.0 * z * self.phi_coefficient() * (1.0 - i / e)
    }

    pub fn background(&self) -> HarmonicField {
        HarmonicField { family: FieldFamily::DiskMultipole { n: self.n, phase: self.phase }, amplitude: 1.0 }
    }

    fn polar(&self, p: &Point) -> (f64, f64) {
        let r = p.norm();
        let nt = self.n as f64 * p.y.atan2(p.x);
        let trig = match self.phase {
            Phase::Cos => nt.cos(),
            Phase::Sin => nt.sin(),
        };
        (r, trig)
    }

    pub fn phi(&self, p: &Point) -> Result<f64> {
        let (r, trig) = self.polar(p);
        if r <= self.r_i {
            return Err(CloakError::OutsideDomain(format!("r = {r} is not outside the object radius {}", self.r_i)));
        }
        let n = self.n as i32;
        Ok((r.powi(n) + self.phi_coefficient() * r.powi(-n)) * trig)
    }

    pub fn pressure(&self, p: &Point) -> Result<f64> {
        let (r, trig) = self.polar(p);
        if r <= self.r_e {
            return Err(CloakError::OutsideDomain(format!("r = {r} is not outside the cloak radius {}", self.r_e)));
        }
        let n = self.n as i32;
        Ok((12.0 * r.powi(n) + self.pressure_coefficient() * r.powi(-n)) * trig)
    }

    /// `(φ, p)` at a point outside the cloak region.
    pub fn eval(&self, p: &Point) -> Result<(f64, f64)> {
        Ok((self.phi(p)?, self.pressure(p)?))
    }
}

/// Exterior series for confocal ellipses with focal half-distance `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfocalSeries {
    pub l: f64,
    pub xi_o: f64,
    pub xi_i: f64,
    pub xi_e: f64,
    pub n: u32,
    pub orientation: Orientation,
    pub lambda: f64,
    pub zeta0: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn confocal_series(
    l: f64,
    xi_o: f64,
    xi_i: f64,
    xi_e: f64,
    n: u32,
    orientation: Orientation,
    eps_ratio: f64,
    zeta0: f64,
) -> Result<ConfocalSeries> {
    check_order(n)?;
    EllipticCoords::new(l)?;
    check_radii(xi_o, xi_i, xi_e, "elliptic radii")?;
    let lambda = contrast(1.0, eps_ratio)?;
    Ok(ConfocalSeries { l, xi_o, xi_i, xi_e, n, orientation, lambda, zeta0 })
}

impl ConfocalSeries {
    /// Coefficient `B` of `e^{−nξ}` in `φ`.
    pub fn phi_coefficient(&self) -> f64 {
        let nf = self.n as f64;
        let (eo, ei) = ((2.0 * nf * self.xi_o).exp(), (2.0 * nf * self.xi_i).exp());
        let (core, shell) = match self.orientation {
            Orientation::X => ((nf * self.xi_o).sinh(), (nf * self.xi_i).cosh()),
            Orientation::Y => ((nf * self.xi_o).cosh(), (nf * self.xi_i).sinh()),
        };
        let lam = self.lambda;
        let num = (1.0 + 2.0 * lam) * core * (nf * (self.xi_o + self.xi_i)).exp() - shell * (eo - ei);
        num / (2.0 * lam * ei + eo) * (nf * self.xi_i).exp()
    }

    /// Coefficient of `e^{−nξ}` in `p`.
    pub fn pressure_coefficient(&self) -> f64 {
        let nf = self.n as f64;
        let (xi_i, xi_e, z) = (self.xi_i, self.xi_e, self.zeta0);
        let band = (nf * (xi_e - xi_i)).cosh();
        let (outer, inner) = match self.orientation {
            Orientation::X => ((nf * xi_e).sinh(), (nf * xi_i).sinh()),
            Orientation::Y => ((nf * xi_e).cosh(), (nf * xi_i).cosh()),
        };
        let direct = -12.0 * ((outer * band - inner) * z - inner) * (nf * xi_i).exp();
        let scattered = -6.0 * z * self.phi_coefficient() * (1.0 - (-2.0 * nf * (xi_e - xi_i)).exp());
        direct + scattered
    }

    pub fn background(&self) -> HarmonicField {
        let family = match self.orientation {
            Orientation::X => FieldFamily::EllipticCos { n: self.n, l: self.l },
            Orientation::Y => FieldFamily::EllipticSin { n: self.n, l: self.l },
        };
        HarmonicField { family, amplitude: 1.0 }
    }

    fn coords(&self, p: &Point) -> (f64, f64, f64) {
        let (xi, eta) = EllipticCoords::new(self.l).expect("l checked at construction").inverse(p);
        let nf = self.n as f64;
        let (radial, trig) = match self.orientation {
            Orientation::X => ((nf * xi).cosh(), (nf * eta).cos()),
            Orientation::Y => ((nf * xi).sinh(), (nf * eta).sin()),
        };
        (xi, radial, trig)
    }

    pub fn phi(&self, p: &Point) -> Result<f64> {
        let (xi, radial, trig) = self.coords(p);
        if xi <= self.xi_i {
            return Err(CloakError::OutsideDomain(format!("xi = {xi} is not outside the object at {}", self.xi_i)));
        }
        Ok((radial + self.phi_coefficient() * (-(self.n as f64) * xi).exp()) * trig)
    }

    pub fn pressure(&self, p: &Point) -> Result<f64> {
        let (xi, radial, trig) = self.coords(p);
        if xi <= self.xi_e {
            return Err(CloakError::OutsideDomain(format!("xi = {xi} is not outside the cloak at {}", self.xi_e)));
        }
        Ok((12.0 * radial + self.pressure_coefficient() * (-(self.n as f64) * xi).exp()) * trig)
    }

    pub fn eval(&self, p: &Point) -> Result<(f64, f64)> {
        Ok((self.phi(p)?, self.pressure(p)?))
    }
}
