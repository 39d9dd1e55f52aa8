use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::polygon::rounded_polygon;
use super::{Curve, CurveKind, Jet, Point};
use crate::error::{CloakError, Result};

/// Circle of the given radius, nodes equispaced in angle starting on the
/// positive x-axis.
pub fn make_circle(center: Point, radius: f64, n: usize) -> Result<Curve> {
    if !(radius > 0.0) {
        return Err(CloakError::InvalidParameter(format!("circle radius must be positive, got {radius}")));
    }
    Curve::from_parametrization(CurveKind::Circle { center: [center.x, center.y], radius }, n, |t| {
        let (s, c) = t.sin_cos();
        Jet { x: center + Point::new(c, s) * radius, dx: Point::new(-s, c) * radius, ddx: Point::new(-c, -s) * radius }
    })
}

/// The smooth and cornered test objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedShape {
    /// Polar radius `1 − 0.1 cos 5t`.
    Flower,
    /// `(0.6 cos t + 0.39 cos 2t + 0.01, 0.9 sin t)`.
    Kite,
    /// Polar radius `sqrt(cos²t + 0.25 sin²t)`.
    Peanut,
    /// Regular polygon inscribed in the unit circle, corners rounded.
    Polygon(u32),
}

impl fmt::Display for NamedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedShape::Flower => write!(f, "flower"),
            NamedShape::Kite => write!(f, "kite"),
            NamedShape::Peanut => write!(f, "peanut"),
            NamedShape::Polygon(k) => write!(f, "polygon({k})"),
        }
    }
}

impl FromStr for NamedShape {
    type Err = CloakError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let shape = match s.as_str() {
            "flower" => NamedShape::Flower,
            "kite" => NamedShape::Kite,
            "peanut" => NamedShape::Peanut,
            "triangle" => NamedShape::Polygon(3),
            "square" => NamedShape::Polygon(4),
            "pentagon" => NamedShape::Polygon(5),
            other => {
                let k = other
                    .strip_prefix("polygon(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.trim().parse::<u32>().ok())
                    .ok_or_else(|| CloakError::UnknownShape(other.to_string()))?;
                NamedShape::Polygon(k)
            }
        };
        if let NamedShape::Polygon(k) = shape {
            if !(3..=5).contains(&k) {
                return Err(CloakError::UnknownShape(format!("polygon({k})")));
            }
        }
        Ok(shape)
    }
}

/// Polar curve `r(t)(cos t, sin t)` from `(r, r', r'')`.
fn polar_jet(t: f64, r: f64, dr: f64, ddr: f64) -> Jet {
    let (s, c) = t.sin_cos();
    let e = Point::new(c, s);
    let e_perp = Point::new(-s, c);
    Jet { x: e * r, dx: e * dr + e_perp * r, ddx: e * (ddr - r) + e_perp * (2.0 * dr) }
}

fn scale_jet(j: Jet, scale: f64) -> Jet {
    Jet { x: j.x * scale, dx: j.dx * scale, ddx: j.ddx * scale }
}

pub fn make_named_shape(shape: NamedShape, scale: f64, n: usize) -> Result<Curve> {
    if !(scale > 0.0) {
        return Err(CloakError::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let kind = CurveKind::Named { shape, scale };
    match shape {
        NamedShape::Flower => Curve::from_parametrization(kind, n, |t| {
            let (s5, c5) = (5.0 * t).sin_cos();
            scale_jet(polar_jet(t, 1.0 - 0.1 * c5, 0.5 * s5, 2.5 * c5), scale)
        }),
        NamedShape::Kite => Curve::from_parametrization(kind, n, |t| {
            let (s, c) = t.sin_cos();
            let (s2, c2) = (2.0 * t).sin_cos();
            scale_jet(
                Jet {
                    x: Point::new(0.6 * c + 0.39 * c2 + 0.01, 0.9 * s),
                    dx: Point::new(-0.6 * s - 0.78 * s2, 0.9 * c),
                    ddx: Point::new(-0.6 * c - 1.56 * c2, -0.9 * s),
                },
                scale,
            )
        }),
        NamedShape::Peanut => Curve::from_parametrization(kind, n, |t| {
            // r² = q = 0.625 + 0.375 cos 2t
            let (s2, c2) = (2.0 * t).sin_cos();
            let q = 0.625 + 0.375 * c2;
            let dq = -0.75 * s2;
            let ddq = -1.5 * c2;
            let r = q.sqrt();
            let dr = dq / (2.0 * r);
            let ddr = ddq / (2.0 * r) - dq * dq / (4.0 * r * r * r);
            scale_jet(polar_jet(t, r, dr, ddr), scale)
        }),
        NamedShape::Polygon(k) => {
            if !(3..=5).contains(&k) {
                return Err(CloakError::UnknownShape(shape.to_string()));
            }
            rounded_polygon(k, scale, n)
        }
    }
}

/// Scales `curve` about its area centroid by `factor ∈ (0, 1)`.
pub fn shrink_conformal(curve: &Curve, factor: f64) -> Result<Curve> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(CloakError::InvalidParameter(format!("shrink factor must lie in (0,1), got {factor}")));
    }
    Ok(curve.scaled_about(curve.centroid(), factor))
}
