//! Background harmonic fields and the cloak configuration.
//!
//! Every background is the real or imaginary part of an entire function of
//! `z = x₁ + i x₂`: `zⁿ` for the disk multipoles (`rⁿ cos nθ`, `rⁿ sin nθ`)
//! and the Chebyshev polynomial `T_n(z/l)` for the elliptic harmonics, since
//! `cosh(n(ξ + iη)) = T_n(cosh(ξ + iη))` gives `Re = cosh nξ cos nη` and
//! `Im = sinh nξ sin nη`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::geometry::{Curve, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Real part.
    Cos,
    /// Imaginary part.
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FieldFamily {
    /// `x₁`, the same as a first-order cos multipole.
    UniformX,
    /// `x₂`.
    UniformY,
    DiskMultipole {
        n: u32,
        phase: Phase,
    },
    /// `cosh nξ cos nη`.
    EllipticCos {
        n: u32,
        l: f64,
    },
    /// `sinh nξ sin nη`.
    EllipticSin {
        n: u32,
        l: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicField {
    #[serde(flatten)]
    pub family: FieldFamily,
    pub amplitude: f64,
}

/// Chebyshev `T_n(w)` and `T_n'(w) = n U_{n−1}(w)`.
fn chebyshev(n: u32, w: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return (one, Complex64::new(0.0, 0.0));
    }
    let (mut t0, mut t1) = (one, w);
    let (mut u0, mut u1) = (one, 2.0 * w);
    for _ in 1..n {
        let t2 = 2.0 * w * t1 - t0;
        t0 = t1;
        t1 = t2;
        let u2 = 2.0 * w * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    // after the loop t1 = T_n, u0 = U_{n−1}
    (t1, n as f64 * u0)
}

impl HarmonicField {
    pub fn new(family: FieldFamily, amplitude: f64) -> Result<Self> {
        match family {
            FieldFamily::DiskMultipole { n: 0, .. }
            | FieldFamily::EllipticCos { n: 0, .. }
            | FieldFamily::EllipticSin { n: 0, .. } => {
                return Err(CloakError::InvalidParameter("harmonic order must be at least 1".into()))
            }
            FieldFamily::EllipticCos { l, .. } | FieldFamily::EllipticSin { l, .. } if !(l > 0.0) => {
                return Err(CloakError::InvalidParameter(format!("focal half-distance must be positive, got {l}")))
            }
            _ => {}
        }
        if !amplitude.is_finite() {
            return Err(CloakError::InvalidParameter("amplitude must be finite".into()));
        }
        Ok(Self { family, amplitude })
    }

    pub fn uniform_x() -> Self {
        Self { family: FieldFamily::UniformX, amplitude: 1.0 }
    }

    pub fn uniform_y() -> Self {
        Self { family: FieldFamily::UniformY, amplitude: 1.0 }
    }

    /// Harmonic order of the field.
    pub fn order(&self) -> u32 {
        match self.family {
            FieldFamily::UniformX | FieldFamily::UniformY => 1,
            FieldFamily::DiskMultipole { n, .. }
            | FieldFamily::EllipticCos { n, .. }
            | FieldFamily::EllipticSin { n, .. } => n,
        }
    }

    /// Underlying entire function and its derivative at `z`, plus the part taken.
    fn analytic(&self, z: Complex64) -> (Complex64, Complex64, Phase) {
        match self.family {
            FieldFamily::UniformX => (z, Complex64::new(1.0, 0.0), Phase::Cos),
            FieldFamily::UniformY => (z, Complex64::new(1.0, 0.0), Phase::Sin),
            FieldFamily::DiskMultipole { n, phase } => {
                let d = n as f64 * z.powu(n - 1);
                (z.powu(n), d, phase)
            }
            FieldFamily::EllipticCos { n, l } => {
                let (t, dt) = chebyshev(n, z / l);
                (t, dt / l, Phase::Cos)
            }
            FieldFamily::EllipticSin { n, l } => {
                let (t, dt) = chebyshev(n, z / l);
                (t, dt / l, Phase::Sin)
            }
        }
    }

    /// Exact value and gradient at `p`.
    pub fn value_grad(&self, p: &Point) -> (f64, Point) {
        let (f, df, phase) = self.analytic(Complex64::new(p.x, p.y));
        let a = self.amplitude;
        // for f = u + iv: ∇u = (Re f', −Im f'), ∇v = (Im f', Re f')
        match phase {
            Phase::Cos => (a * f.re, Point::new(df.re, -df.im) * a),
            Phase::Sin => (a * f.im, Point::new(df.im, df.re) * a),
        }
    }

    pub fn value(&self, p: &Point) -> f64 {
        self.value_grad(p).0
    }

    pub fn grad(&self, p: &Point) -> Point {
        self.value_grad(p).1
    }

    pub fn values_on(&self, curve: &Curve) -> Vec<f64> {
        curve.nodes().iter().map(|p| self.value(p)).collect()
    }

    /// `∂/∂ν` at the nodes of `curve` with its outward normal.
    pub fn normal_derivative_on(&self, curve: &Curve) -> Vec<f64> {
        curve.nodes().iter().zip(curve.normals()).map(|(p, nu)| self.grad(p).dot(nu)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { family: self.family, amplitude: self.amplitude * factor }
    }
}

/// The pressure background matched to an electric background: `P = 12 H`.
pub fn pressure_partner(h: &HarmonicField) -> HarmonicField {
    h.scaled(12.0)
}

/// Contrast parameter `λ = (ε_m + ε_s) / (2(ε_m − ε_s))`.
pub fn contrast(eps_m: f64, eps_s: f64) -> Result<f64> {
    if eps_s == eps_m {
        return Err(CloakError::DegenerateContrast);
    }
    Ok((eps_m + eps_s) / (2.0 * (eps_m - eps_s)))
}

/// Core `B`, object `D` and hydrodynamic cloak region `Ω` with the material
/// scalars and backgrounds.
#[derive(Debug, Clone)]
pub struct CloakConfig {
    pub core: Curve,
    pub object: Curve,
    pub region: Curve,
    pub eps_m: f64,
    pub eps_s: f64,
    pub zeta0: f64,
    pub h: HarmonicField,
    pub p: HarmonicField,
}

/// A configuration that passed [`validate_config`].
#[derive(Debug, Clone)]
pub struct ValidConfig {
    cfg: CloakConfig,
    lambda: f64,
}

fn check_inside(inner: &Curve, outer: &Curve, what: &str) -> Result<()> {
    for p in inner.nodes() {
        if !outer.contains(p) || outer.min_node_distance(p) < 1e-12 {
            return Err(CloakError::Nesting(format!("{what}: node ({:.4}, {:.4}) is not strictly inside", p.x, p.y)));
        }
    }
    Ok(())
}

pub fn validate_config(cfg: CloakConfig) -> Result<ValidConfig> {
    if !(cfg.eps_m > 0.0) || !(cfg.eps_s > 0.0) {
        return Err(CloakError::InvalidParameter(format!(
            "permittivities must be positive, got eps_m = {}, eps_s = {}",
            cfg.eps_m, cfg.eps_s
        )));
    }
    if !cfg.zeta0.is_finite() {
        return Err(CloakError::InvalidParameter("zeta0 must be finite".into()));
    }
    let lambda = contrast(cfg.eps_m, cfg.eps_s)?;
    check_inside(&cfg.core, &cfg.object, "core B inside object D")?;
    check_inside(&cfg.object, &cfg.region, "object D inside region Omega")?;
    Ok(ValidConfig { cfg, lambda })
}

impl CloakConfig {
    pub fn validate(self) -> Result<ValidConfig> {
        validate_config(self)
    }
}

impl ValidConfig {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn config(&self) -> &CloakConfig {
        &self.cfg
    }

    pub fn into_inner(self) -> CloakConfig {
        self.cfg
    }

    /// Same geometry and backgrounds with different material scalars.
    pub fn with_materials(&self, eps_s: f64, zeta0: f64) -> Result<ValidConfig> {
        let mut cfg = self.cfg.clone();
        cfg.eps_s = eps_s;
        cfg.zeta0 = zeta0;
        let lambda = contrast(cfg.eps_m, eps_s)?;
        if !(eps_s > 0.0) || !zeta0.is_finite() {
            return Err(CloakError::InvalidParameter(format!("bad materials eps_s = {eps_s}, zeta0 = {zeta0}")));
        }
        Ok(ValidConfig { cfg, lambda })
    }
}

impl std::ops::Deref for ValidConfig {
    type Target = CloakConfig;

    fn deref(&self) -> &CloakConfig {
        &self.cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_circle;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn families() -> Vec<HarmonicField> {
        let mut v = vec![HarmonicField::uniform_x(), HarmonicField::uniform_y()];
        for n in 1..5 {
            v.push(HarmonicField::new(FieldFamily::DiskMultipole { n, phase: Phase::Cos }, 1.3).unwrap());
            v.push(HarmonicField::new(FieldFamily::DiskMultipole { n, phase: Phase::Sin }, 0.7).unwrap());
            v.push(HarmonicField::new(FieldFamily::EllipticCos { n, l: 0.8 }, 1.0).unwrap());
            v.push(HarmonicField::new(FieldFamily::EllipticSin { n, l: 1.4 }, -2.0).unwrap());
        }
        v
    }

    #[test]
    fn spot_values() {
        let (v, g) = HarmonicField::uniform_x().value_grad(&Point::new(2.0, 3.0));
        assert_eq!(v, 2.0);
        assert_eq!(g, Point::new(1.0, 0.0));
        let q = HarmonicField::new(FieldFamily::DiskMultipole { n: 2, phase: Phase::Cos }, 1.0).unwrap();
        let p = Point::new((PI / 4.0).cos(), (PI / 4.0).sin());
        assert!(q.value(&p).abs() < 1e-15);
        // cosh ξ cos η = x₁/l
        let e = HarmonicField::new(FieldFamily::EllipticCos { n: 1, l: 0.6 }, 1.0).unwrap();
        assert!((e.value(&Point::new(0.9, -0.4)) - 0.9 / 0.6).abs() < 1e-15);
    }

    #[test]
    fn elliptic_matches_coordinates() {
        let coords = crate::geometry::EllipticCoords::new(0.8).unwrap();
        let (xi, eta) = (0.7, 2.1);
        let p = coords.forward(xi, eta);
        for n in 1..5u32 {
            let nf = n as f64;
            let c = HarmonicField::new(FieldFamily::EllipticCos { n, l: 0.8 }, 1.0).unwrap();
            let s = HarmonicField::new(FieldFamily::EllipticSin { n, l: 0.8 }, 1.0).unwrap();
            assert!((c.value(&p) - (nf * xi).cosh() * (nf * eta).cos()).abs() < 1e-12);
            assert!((s.value(&p) - (nf * xi).sinh() * (nf * eta).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn multipole_matches_polar_form() {
        let (r, th): (f64, f64) = (1.7, 0.9);
        let p = Point::new(r * th.cos(), r * th.sin());
        for n in 1..6u32 {
            let c = HarmonicField::new(FieldFamily::DiskMultipole { n, phase: Phase::Cos }, 1.0).unwrap();
            let s = HarmonicField::new(FieldFamily::DiskMultipole { n, phase: Phase::Sin }, 1.0).unwrap();
            assert!((c.value(&p) - r.powi(n as i32) * (n as f64 * th).cos()).abs() < 1e-12);
            assert!((s.value(&p) - r.powi(n as i32) * (n as f64 * th).sin()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn harmonic_and_gradient_consistent(x in -2.0f64..2.0, y in -2.0f64..2.0) {
            let p = Point::new(x, y);
            for f in families() {
                let step = 1e-5;
                let val = |q: Point| f.value(&q);
                let ex = Point::new(step, 0.0);
                let ey = Point::new(0.0, step);
                let fd = Point::new(val(p + ex) - val(p - ex), val(p + ey) - val(p - ey)) / (2.0 * step);
                let g = f.grad(&p);
                prop_assert!((fd - g).norm() <= 1e-6 * g.norm().max(1.0));
                let hs = 1e-3;
                let ex = Point::new(hs, 0.0);
                let ey = Point::new(0.0, hs);
                let lap = (val(p + ex) + val(p - ex) + val(p + ey) + val(p - ey) - 4.0 * val(p)) / (hs * hs);
                let scale = (val(p + ex) - 2.0 * val(p) + val(p - ex)).abs() / (hs * hs);
                prop_assert!(lap.abs() <= 1e-6 * scale.max(1.0) + 1e-4, "lap {}", lap);
            }
        }
    }

    #[test]
    fn pressure_partner_scales_by_twelve() {
        let p = pressure_partner(&HarmonicField::uniform_x());
        assert_eq!(p.grad(&Point::new(0.3, 0.1)), Point::new(12.0, 0.0));
        let e = HarmonicField::new(FieldFamily::EllipticCos { n: 2, l: 1.0 }, 1.0).unwrap();
        assert_eq!(pressure_partner(&e).amplitude, 12.0);
        let z = HarmonicField::new(FieldFamily::UniformX, 0.0).unwrap();
        assert_eq!(pressure_partner(&z).value(&Point::new(5.0, 1.0)), 0.0);
    }

    fn disks(rb: f64, rd: f64, rw: f64, eps_s: f64) -> CloakConfig {
        let h = HarmonicField::uniform_x();
        CloakConfig {
            core: make_circle(Point::zeros(), rb, 64).unwrap(),
            object: make_circle(Point::zeros(), rd, 64).unwrap(),
            region: make_circle(Point::zeros(), rw, 64).unwrap(),
            eps_m: 1.0,
            eps_s,
            zeta0: 0.0,
            h,
            p: pressure_partner(&h),
        }
    }

    #[test]
    fn validation() {
        let v = validate_config(disks(0.5, 1.0, 2.0, 5.0 / 3.0)).unwrap();
        assert!((v.lambda() + 2.0).abs() < 1e-14);
        assert!(matches!(validate_config(disks(0.5, 1.0, 2.0, 1.0)), Err(CloakError::DegenerateContrast)));
        assert!(matches!(validate_config(disks(1.2, 1.0, 2.0, 2.0)), Err(CloakError::Nesting(_))));
        assert!(matches!(validate_config(disks(0.5, 2.5, 2.0, 2.0)), Err(CloakError::Nesting(_))));
        assert!(validate_config(disks(0.5, 1.0, 2.0, -1.0)).is_err());
    }

    proptest! {
        #[test]
        fn contrast_outside_essential_spectrum(em in 0.01f64..100.0, es in 0.01f64..100.0) {
            prop_assume!((em - es).abs() > 1e-9);
            prop_assert!(contrast(em, es).unwrap().abs() > 0.5);
        }
    }
}
