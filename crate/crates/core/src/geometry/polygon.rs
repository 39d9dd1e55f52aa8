//! Regular polygons with smoothly rounded corners.
//!
//! The curve is built from its curvature profile in arc length. Each corner
//! unit is a straight half edge, a quintic ramp up to curvature `1/ρ`, a
//! circular arc, a ramp back down and the next half edge. The ramps use the
//! smoothstep `6u⁵ − 15u⁴ + 10u³`, so curvature is C² and the curve is C⁴.
//! The edge lines coincide with those of the sharp polygon inscribed in the
//! circle of radius `scale`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::Rotation2;

use super::{Curve, CurveKind, Jet, NamedShape, Point};
use crate::error::Result;

/// Corner arc radius relative to the circumradius.
pub const CORNER_RADIUS: f64 = 0.08;

const GAUSS_ORDER: usize = 24;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

fn gauss_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_ORDER))
}

fn smoothstep(u: f64) -> f64 {
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Antiderivative of the smoothstep, zero at 0 and ½ at 1.
fn smoothstep_integral(u: f64) -> f64 {
    u * u * u * u * (2.5 + u * (-3.0 + u))
}

/// One corner unit, measured from the midpoint of an edge.
struct CornerUnit {
    kappa: f64,
    half_edge: f64,
    ramp: f64,
    arc: f64,
    /// Heading at the start of the unit.
    theta0: f64,
}

impl CornerUnit {
    fn length(&self) -> f64 {
        2.0 * self.half_edge + 2.0 * self.ramp + self.arc
    }

    /// Curvature and heading at arc length `s` into the unit.
    fn curvature_heading(&self, s: f64) -> (f64, f64) {
        let (a, b, c, k) = (self.half_edge, self.ramp, self.arc, self.kappa);
        let t0 = self.theta0;
        if s <= a {
            (0.0, t0)
        } else if s <= a + b {
            let u = (s - a) / b;
            (k * smoothstep(u), t0 + k * b * smoothstep_integral(u))
        } else if s <= a + b + c {
            (k, t0 + k * b * 0.5 + k * (s - a - b))
        } else if s <= a + 2.0 * b + c {
            let u = (s - a - b - c) / b;
            (k * smoothstep(1.0 - u), t0 + k * b * 0.5 + k * c + k * b * (0.5 - smoothstep_integral(1.0 - u)))
        } else {
            (0.0, t0 + k * (b + c))
        }
    }

    fn breakpoints(&self) -> [f64; 5] {
        let (a, b, c) = (self.half_edge, self.ramp, self.arc);
        [0.0, a, a + b, a + b + c, a + 2.0 * b + c]
    }

    /// Displacement from the unit start to arc length `s`.
    fn displacement(&self, s: f64) -> Point {
        let (xg, wg) = gauss_rule();
        let mut acc = Point::zeros();
        let bp = self.breakpoints();
        let mut lo = 0.0;
        for &hi in bp.iter().skip(1).chain(std::iter::once(&self.length())) {
            let top = hi.min(s);
            if top > lo {
                let (mid, half) = (0.5 * (lo + top), 0.5 * (top - lo));
                for (x, w) in xg.iter().zip(wg) {
                    let th = self.curvature_heading(mid + half * x).1;
                    acc += Point::new(th.cos(), th.sin()) * (w * half);
                }
            }
            if s <= hi {
                break;
            }
            lo = hi;
        }
        acc
    }
}

pub(super) fn rounded_polygon(k: u32, scale: f64, n: usize) -> Result<Curve> {
    let turn = 2.0 * PI / k as f64;
    let rho = CORNER_RADIUS;
    let ramp = 0.5 * rho * turn;
    let arc = rho * turn - ramp;
    let mut unit = CornerUnit { kappa: 1.0 / rho, half_edge: 0.0, ramp, arc, theta0: 0.5 * PI };
    // chord between consecutive edge midpoints of the unit-circumradius polygon
    let half = 0.5 * turn;
    let chord = 2.0 * half.cos() * half.sin();
    let corner_chord = unit.displacement(unit.length()).norm();
    unit.half_edge = 0.5 * (chord - corner_chord) / half.cos();
    let apothem = half.cos();

    let unit_len = unit.length();
    let total = k as f64 * unit_len;
    let ds = total / (2.0 * PI);
    let kind = CurveKind::Named { shape: NamedShape::Polygon(k), scale };
    Curve::from_parametrization(kind, n, |t| {
        let s = t * ds;
        let idx = ((s / unit_len).floor() as u32).min(k - 1);
        let local = s - idx as f64 * unit_len;
        let rot = Rotation2::new(idx as f64 * turn);
        let (kap, th) = unit.curvature_heading(local);
        let x = Point::new(apothem, 0.0) + unit.displacement(local);
        let tangent = Point::new(th.cos(), th.sin());
        let normal_left = Point::new(-th.sin(), th.cos());
        Jet { x: rot * x * scale, dx: rot * tangent * (ds * scale), ddx: rot * normal_left * (kap * ds * ds * scale) }
    })
}
