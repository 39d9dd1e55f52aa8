use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Curve, CurveKind, Jet, Point};
use crate::error::{CloakError, Result};

/// Elliptic coordinates `(x₁, x₂) = (l cosh ξ cos η, l sinh ξ sin η)` with
/// foci at `(±l, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCoords {
    l: f64,
}

impl EllipticCoords {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(CloakError::InvalidParameter(format!("focal half-distance must be positive, got {l}")));
        }
        Ok(Self { l })
    }

    pub fn focal_half_distance(&self) -> f64 {
        self.l
    }

    pub fn forward(&self, xi: f64, eta: f64) -> Point {
        Point::new(self.l * xi.cosh() * eta.cos(), self.l * xi.sinh() * eta.sin())
    }

    /// `(ξ, η)` with `ξ ≥ 0` and `η ∈ [0, 2π)`, from `x₁ + i x₂ = l cosh(ξ + iη)`.
    pub fn inverse(&self, p: &Point) -> (f64, f64) {
        let w = (Complex64::new(p.x, p.y) / self.l).acosh();
        let (xi, eta) = if w.re < 0.0 { (-w.re, -w.im) } else { (w.re, w.im) };
        (xi, eta.rem_euclid(std::f64::consts::TAU))
    }

    /// Scale factor `γ = l·sqrt(sinh²ξ + sin²η)`.
    pub fn metric(&self, xi: f64, eta: f64) -> f64 {
        self.l * (xi.sinh().powi(2) + eta.sin().powi(2)).sqrt()
    }
}

/// The ellipse `ξ = xi` of the family with focal half-distance `l`, sampled
/// at equispaced `η`.
pub fn make_confocal_ellipse(l: f64, xi: f64, n: usize) -> Result<Curve> {
    if !(l > 0.0) || !(xi > 0.0) {
        return Err(CloakError::InvalidParameter(format!(
            "confocal ellipse needs l > 0 and xi > 0, got l = {l}, xi = {xi}"
        )));
    }
    let (a, b) = (l * xi.cosh(), l * xi.sinh());
    Curve::from_parametrization(CurveKind::ConfocalEllipse { l, xi }, n, |t| {
        let (s, c) = t.sin_cos();
        Jet { x: Point::new(a * c, b * s), dx: Point::new(-a * s, b * c), ddx: Point::new(-a * c, -b * s) }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Cos,
    Sin,
}

/// Node samples of `γ(ξ_a, η)⁻¹ cos(nη)` or `γ(ξ_a, η)⁻¹ sin(nη)` on a
/// confocal ellipse.
pub fn elliptic_basis_density(n: u32, parity: Parity, curve: &Curve) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(CloakError::InvalidParameter("harmonic order must be at least 1".into()));
    }
    let (l, xi) = curve.elliptic_params().ok_or(CloakError::NotConfocal)?;
    let coords = EllipticCoords::new(l)?;
    Ok((0..curve.len())
        .map(|j| {
            let eta = curve.param(j);
            let trig = match parity {
                Parity::Cos => (n as f64 * eta).cos(),
                Parity::Sin => (n as f64 * eta).sin(),
            };
            trig / coords.metric(xi, eta)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_circle;
    use std::f64::consts::PI;

    #[test]
    fn ellipse_nodes_follow_forward_map() {
        let c = make_confocal_ellipse(0.8, 0.5, 128).unwrap();
        let e = EllipticCoords::new(0.8).unwrap();
        for (j, p) in c.nodes().iter().enumerate() {
            assert!((p - e.forward(0.5, c.param(j))).norm() < 1e-15);
            // speed equals the metric factor
            assert!((c.speeds()[j] - e.metric(0.5, c.param(j))).abs() < 1e-14);
        }
        assert!(make_confocal_ellipse(0.0, 0.5, 64).is_err());
        assert!(make_confocal_ellipse(1.0, -0.5, 64).is_err());
    }

    #[test]
    fn round_trip_on_grid() {
        let e = EllipticCoords::new(1.3).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..30 {
            let xi = 0.1 + 2.9 * i as f64 / 29.0;
            for j in 0..64 {
                let eta = 2.0 * PI * j as f64 / 64.0;
                let (x2, e2) = e.inverse(&e.forward(xi, eta));
                let d = (x2 - xi).abs().max(((e2 - eta + PI).rem_euclid(2.0 * PI) - PI).abs());
                worst = worst.max(d);
                assert!(e.metric(xi, eta) > 0.0);
            }
        }
        assert!(worst < 1e-10, "round trip error {worst}");
    }

    #[test]
    fn large_xi_is_nearly_circular() {
        // l e^ξ / 2 = 1
        let xi: f64 = 6.0;
        let l = 2.0 / xi.exp();
        let c = make_confocal_ellipse(l, xi, 128).unwrap();
        let radii: Vec<f64> = c.nodes().iter().map(|p| p.norm()).collect();
        let mean = radii.iter().sum::<f64>() / radii.len() as f64;
        let dev = radii.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-3);
    }

    #[test]
    fn basis_density_values() {
        let (l, xi) = (0.7, 0.5);
        let c = make_confocal_ellipse(l, xi, 64).unwrap();
        let b = elliptic_basis_density(1, Parity::Cos, &c).unwrap();
        assert!((b[0] - 1.0 / (l * xi.sinh())).abs() < 1e-14);
        // η = π/4 is node 8 of 64
        let b2 = elliptic_basis_density(2, Parity::Sin, &c).unwrap();
        let e = EllipticCoords::new(l).unwrap();
        assert!((b2[8] - 1.0 / e.metric(xi, PI / 4.0)).abs() < 1e-14);
        for n in 1..6 {
            let b = elliptic_basis_density(n, Parity::Cos, &c).unwrap();
            assert!(c.integrate(&b).abs() < 1e-13);
        }
        assert!(matches!(elliptic_basis_density(0, Parity::Cos, &c), Err(CloakError::InvalidParameter(_))));
        let circle = make_circle(Point::zeros(), 1.0, 64).unwrap();
        assert!(matches!(elliptic_basis_density(1, Parity::Cos, &circle), Err(CloakError::NotConfocal)));
    }
}
