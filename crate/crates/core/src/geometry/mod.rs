//! Closed parametrized curves sampled on uniform periodic grids.
//!
//! Every curve is stored as node data at `t_j = 2πj/N`: position, first and
//! second parameter derivatives, and the derived speed, outward normal and
//! signed curvature. The layer-potential quadrature relies on the grid being
//! uniform and periodic, so all constructors go through
//! [`Curve::from_parametrization`].

mod elliptic;
mod polygon;
mod shapes;

pub use elliptic::{elliptic_basis_density, make_confocal_ellipse, EllipticCoords, Parity};
pub use shapes::{make_circle, make_named_shape, shrink_conformal, NamedShape};

use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};

pub type Point = Vector2<f64>;

/// Smallest node count accepted by the constructors.
pub const MIN_NODES: usize = 16;

/// Width of the near-boundary exclusion band, in node spacings.
pub const EXCLUSION_SPACINGS: f64 = 5.0;

/// Describes how a curve was built. Used for reporting and for the few
/// operations that need the analytic family (elliptic basis densities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    Circle { center: [f64; 2], radius: f64 },
    ConfocalEllipse { l: f64, xi: f64 },
    Named { shape: NamedShape, scale: f64 },
    Scaled { base: Box<CurveKind>, factor: f64, center: [f64; 2] },
}

/// Position, first and second derivative of a parametrization at one `t`.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub x: Point,
    pub dx: Point,
    pub ddx: Point,
}

#[derive(Debug, Clone)]
pub struct Curve {
    kind: CurveKind,
    pos: Vec<Point>,
    d1: Vec<Point>,
    d2: Vec<Point>,
    speed: Vec<f64>,
    normal: Vec<Point>,
    curvature: Vec<f64>,
}

pub(crate) fn check_node_count(n: usize) -> Result<()> {
    if n < MIN_NODES || !n.is_multiple_of(2) {
        return Err(CloakError::NodeCount(n));
    }
    Ok(())
}

impl Curve {
    /// Samples `jet` at the `n` uniform nodes and checks the result is a
    /// simple, counterclockwise closed curve.
    pub fn from_parametrization(kind: CurveKind, n: usize, jet: impl Fn(f64) -> Jet) -> Result<Self> {
        check_node_count(n)?;
        let h = 2.0 * PI / n as f64;
        let jets: Vec<Jet> = (0..n).map(|j| jet(j as f64 * h)).collect();
        Self::from_jets(kind, jets)
    }

    pub(crate) fn from_jets(kind: CurveKind, jets: Vec<Jet>) -> Result<Self> {
        check_node_count(jets.len())?;
        let mut pos = Vec::with_capacity(jets.len());
        let mut d1 = Vec::with_capacity(jets.len());
        let mut d2 = Vec::with_capacity(jets.len());
        let mut speed = Vec::with_capacity(jets.len());
        let mut normal = Vec::with_capacity(jets.len());
        let mut curvature = Vec::with_capacity(jets.len());
        for j in &jets {
            let s = j.dx.norm();
            if !(s > 0.0) || !s.is_finite() {
                return Err(CloakError::BadCurve("vanishing or non-finite speed".into()));
            }
            pos.push(j.x);
            d1.push(j.dx);
            d2.push(j.ddx);
            speed.push(s);
            normal.push(Point::new(j.dx.y, -j.dx.x) / s);
            curvature.push((j.dx.x * j.ddx.y - j.dx.y * j.ddx.x) / (s * s * s));
        }
        let curve = Curve { kind, pos, d1, d2, speed, normal, curvature };
        if curve.area() <= 0.0 {
            return Err(CloakError::BadCurve("clockwise orientation".into()));
        }
        if curve.self_intersects() {
            return Err(CloakError::BadCurve("self-intersecting".into()));
        }
        Ok(curve)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    /// Uniform parameter step `2π/N`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn param(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.pos
    }

    pub fn derivatives(&self) -> &[Point] {
        &self.d1
    }

    pub fn second_derivatives(&self) -> &[Point] {
        &self.d2
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speed
    }

    /// Outward unit normals.
    pub fn normals(&self) -> &[Point] {
        &self.normal
    }

    /// Signed curvature; positive where the curve bends towards its interior.
    pub fn curvatures(&self) -> &[f64] {
        &self.curvature
    }

    /// Periodic trapezoid weights `h·|x'(t_j)|` for arc-length integrals.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        self.speed.iter().map(|s| s * h).collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        let h = self.step();
        values.iter().zip(&self.speed).map(|(v, s)| v * s).sum::<f64>() * h
    }

    /// Arc-length inner product.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let h = self.step();
        a.iter().zip(b).zip(&self.speed).map(|((x, y), s)| x * y * s).sum::<f64>() * h
    }

    pub fn l2_norm(&self, values: &[f64]) -> f64 {
        self.inner(values, values).sqrt()
    }

    pub fn perimeter(&self) -> f64 {
        self.speed.iter().sum::<f64>() * self.step()
    }

    pub fn mean(&self, values: &[f64]) -> f64 {
        self.integrate(values) / self.perimeter()
    }

    /// Removes the arc-length mean. Returns the removed mean.
    pub fn project_mean_zero(&self, values: &mut [f64]) -> f64 {
        let m = self.mean(values);
        values.iter_mut().for_each(|v| *v -= m);
        m
    }

    /// Enclosed area, `½∮(x dy − y dx)`.
    pub fn area(&self) -> f64 {
        let h = self.step();
        0.5 * h * self.pos.iter().zip(&self.d1).map(|(p, d)| p.x * d.y - p.y * d.x).sum::<f64>()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let h = self.step();
        let a = self.area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, d) in self.pos.iter().zip(&self.d1) {
            cx += 0.5 * p.x * p.x * d.y;
            cy -= 0.5 * p.y * p.y * d.x;
        }
        Point::new(cx * h / a, cy * h / a)
    }

    /// Largest node distance from `center`.
    pub fn max_radius(&self, center: &Point) -> f64 {
        self.pos.iter().map(|p| (p - center).norm()).fold(0.0, f64::max)
    }

    pub fn min_node_distance(&self, p: &Point) -> f64 {
        self.pos.iter().map(|q| (q - p).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Even-odd ray test against the node polygon.
    pub fn contains(&self, p: &Point) -> bool {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.pos[i];
            let b = self.pos[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// True when `p` is within five node spacings (measured in arc length at
    /// the nearest node) of the curve.
    pub fn in_exclusion_band(&self, p: &Point) -> bool {
        let h = self.step();
        self.pos.iter().zip(&self.speed).any(|(q, s)| (q - p).norm() < EXCLUSION_SPACINGS * h * s)
    }

    /// Largest band half-width over the curve.
    pub fn exclusion_width(&self) -> f64 {
        EXCLUSION_SPACINGS * self.step() * self.speed.iter().cloned().fold(0.0, f64::max)
    }

    /// Whether two curves share the same node data.
    pub fn same_nodes(&self, other: &Curve) -> bool {
        self.pos == other.pos && self.d1 == other.d1
    }

    /// `(l, ξ)` when this curve is a confocal ellipse sampled at equispaced η.
    pub fn elliptic_params(&self) -> Option<(f64, f64)> {
        match self.kind {
            CurveKind::ConfocalEllipse { l, xi } => Some((l, xi)),
            _ => None,
        }
    }

    /// Returns a copy transformed by `x ↦ center + factor·(x − center)`.
    pub(crate) fn scaled_about(&self, center: Point, factor: f64) -> Curve {
        Curve {
            kind: CurveKind::Scaled { base: Box::new(self.kind.clone()), factor, center: [center.x, center.y] },
            pos: self.pos.iter().map(|p| center + (p - center) * factor).collect(),
            d1: self.d1.iter().map(|d| d * factor).collect(),
            d2: self.d2.iter().map(|d| d * factor).collect(),
            speed: self.speed.iter().map(|s| s * factor).collect(),
            normal: self.normal.clone(),
            curvature: self.curvature.iter().map(|k| k / factor).collect(),
        }
    }

    fn self_intersects(&self) -> bool {
        let n = self.len();
        let seg = |i: usize| (self.pos[i], self.pos[(i + 1) % n]);
        for i in 0..n {
            let (a, b) = seg(i);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = seg(j);
                if segments_cross(&a, &b, &c, &d) {
                    return true;
                }
            }
        }
        false
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_node_counts() {
        assert!(matches!(make_circle(Point::zeros(), 1.0, 15), Err(CloakError::NodeCount(15))));
        assert!(matches!(make_circle(Point::zeros(), 1.0, 33), Err(CloakError::NodeCount(33))));
        assert!(make_circle(Point::zeros(), 1.0, 16).is_ok());
    }

    #[test]
    fn rejects_clockwise_curve() {
        let r = Curve::from_parametrization(CurveKind::Circle { center: [0.0, 0.0], radius: 1.0 }, 32, |t| Jet {
            x: Point::new(t.cos(), -t.sin()),
            dx: Point::new(-t.sin(), -t.cos()),
            ddx: Point::new(-t.cos(), t.sin()),
        });
        assert!(matches!(r, Err(CloakError::BadCurve(_))));
    }

    #[test]
    fn rejects_figure_eight() {
        let r = Curve::from_parametrization(CurveKind::Circle { center: [0.0, 0.0], radius: 1.0 }, 64, |t| Jet {
            x: Point::new(t.sin(), (2.0 * t).sin() * 0.5 + 0.2 * t.sin()),
            dx: Point::new(t.cos(), (2.0 * t).cos() + 0.2 * t.cos()),
            ddx: Point::new(-t.sin(), -2.0 * (2.0 * t).sin() - 0.2 * t.sin()),
        });
        assert!(r.is_err());
    }

    #[test]
    fn unit_normals_orthogonal_to_tangent() {
        for shape in [NamedShape::Flower, NamedShape::Kite, NamedShape::Peanut, NamedShape::Polygon(4)] {
            let c = make_named_shape(shape, 1.0, 128).unwrap();
            for (nu, d) in c.normals().iter().zip(c.derivatives()) {
                assert!((nu.norm() - 1.0).abs() < 1e-12);
                assert!(nu.dot(d).abs() < 1e-12 * d.norm());
            }
        }
    }

    #[test]
    fn contains_and_band() {
        let c = make_circle(Point::new(1.0, -1.0), 0.5, 64).unwrap();
        assert!(c.contains(&Point::new(1.0, -1.0)));
        assert!(!c.contains(&Point::new(1.6, -1.0)));
        assert!(c.in_exclusion_band(&Point::new(1.52, -1.0)));
        assert!(!c.in_exclusion_band(&Point::new(2.0, -1.0)));
    }

    #[test]
    fn mean_projection() {
        let c = make_named_shape(NamedShape::Kite, 1.0, 64).unwrap();
        let mut v: Vec<f64> = c.nodes().iter().map(|p| 2.0 + p.x).collect();
        c.project_mean_zero(&mut v);
        assert!(c.integrate(&v).abs() < 1e-13);
    }
}
