//! Nyström discretization of the single-layer potential and the
//! Neumann–Poincaré operator on smooth closed curves.
//!
//! With `G(x, y) = (1/2π) ln|x − y|`:
//!
//! * `S[ϑ](x) = ∫ G(x, y) ϑ(y) ds(y)`; on the curve itself the log singularity
//!   is split off as `½ ln(4 sin²((t − s)/2))` and integrated with the
//!   trigonometric-interpolation weights of Kress, the smooth remainder with
//!   the periodic trapezoid rule.
//! * `K*[ϑ](x) = ∫ ∂G(x, y)/∂ν(x) ϑ(y) ds(y)`; the kernel is smooth with
//!   diagonal limit `κ(x)/(4π)`.
//! * Jump relation: `∂S[ϑ]/∂ν|± = (±½ I + K*)[ϑ]`.
//!
//! Densities are node samples; all matrices act on them directly (the
//! arc-length weights are folded into the matrices).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{CloakError, Result};
use crate::geometry::{check_node_count, Curve, Point};

/// Which one-sided limit of the normal derivative to take on the source curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Limit from the region the curve encloses: `−½ I + K*`.
    Inner,
    /// Limit from outside: `+½ I + K*`.
    Outer,
    /// Principal value, the average of both limits: `K*`.
    Transmission,
}

impl Side {
    fn jump(self) -> f64 {
        match self {
            Side::Inner => -0.5,
            Side::Outer => 0.5,
            Side::Transmission => 0.0,
        }
    }
}

/// Fills a dense matrix row by row in parallel. Entries are computed
/// independently, so the result does not depend on the schedule.
pub(crate) fn dense_from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let mut buf = vec![0.0; rows * cols];
    buf.par_chunks_mut(cols.max(1)).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(i, j);
        }
    });
    DMatrix::from_row_slice(rows, cols, &buf)
}

/// Kress weights `R(kh)` for the log kernel `ln(4 sin²((t − s)/2))` on `N = 2m`
/// equispaced nodes, indexed by node offset `k`.
pub fn log_weights(n: usize) -> Vec<f64> {
    let m = n / 2;
    let mf = m as f64;
    let h = PI / mf;
    (0..n)
        .map(|k| {
            let arg = k as f64 * h;
            let sum: f64 = (1..m).map(|p| (p as f64 * arg).cos() / p as f64).sum();
            let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / mf * sum - PI / (mf * mf) * alt
        })
        .collect()
}

/// Boundary trace of `S_Γ` as an `N × N` matrix on node samples.
pub fn assemble_slp(curve: &Curve) -> Result<DMatrix<f64>> {
    check_node_count(curve.len())?;
    let n = curve.len();
    let h = curve.step();
    let r = log_weights(n);
    let x = curve.nodes();
    let speed = curve.speeds();
    Ok(dense_from_fn(n, n, |i, j| {
        let k = if i >= j { i - j } else { i + n - j };
        let smooth = if i == j {
            speed[i].ln()
        } else {
            let half = 0.5 * (curve.param(i) - curve.param(j));
            (x[i] - x[j]).norm().ln() - 0.5 * (4.0 * half.sin().powi(2)).ln()
        };
        speed[j] * (r[k] / (4.0 * PI) + h / (2.0 * PI) * smooth)
    }))
}

/// `K*_Γ` as an `N × N` matrix on node samples.
pub fn assemble_np_adjoint(curve: &Curve) -> DMatrix<f64> {
    let n = curve.len();
    let h = curve.step();
    let x = curve.nodes();
    let nu = curve.normals();
    let speed = curve.speeds();
    let kappa = curve.curvatures();
    dense_from_fn(n, n, |i, j| {
        if i == j {
            h * kappa[i] * speed[i] / (4.0 * PI)
        } else {
            let d = x[i] - x[j];
            h / (2.0 * PI) * d.dot(&nu[i]) / d.norm_squared() * speed[j]
        }
    })
}

/// Both boundary operators of one curve.
#[derive(Debug, Clone)]
pub struct KernelMatrixSet {
    pub slp: DMatrix<f64>,
    pub np_adjoint: DMatrix<f64>,
}

impl KernelMatrixSet {
    pub fn assemble(curve: &Curve) -> Result<Self> {
        Ok(Self { slp: assemble_slp(curve)?, np_adjoint: assemble_np_adjoint(curve) })
    }

    /// `(jump·I + K*)` for the requested side.
    pub fn normal_trace(&self, side: Side) -> DMatrix<f64> {
        let n = self.np_adjoint.nrows();
        &self.np_adjoint + DMatrix::identity(n, n) * side.jump()
    }
}

fn check_off_curve(source: &Curve, target: &[Point]) -> Result<()> {
    let tol = 1e-12 * source.max_radius(&Point::zeros()).max(1.0);
    if target.iter().any(|p| source.min_node_distance(p) <= tol) {
        return Err(CloakError::TargetOnSource);
    }
    Ok(())
}

/// Matrix of `∂S_source[ϑ]/∂ν` evaluated at the nodes of `target` with the
/// target's outward normal. When source and target coincide, `side` picks the
/// one-sided limit; otherwise the kernel is smooth and `side` is ignored.
pub fn normal_derivative_trace(source: &Curve, target: &Curve, side: Side) -> Result<DMatrix<f64>> {
    if source.same_nodes(target) {
        let n = source.len();
        return Ok(assemble_np_adjoint(source) + DMatrix::identity(n, n) * side.jump());
    }
    check_off_curve(source, target.nodes())?;
    let h = source.step();
    let (y, sy) = (source.nodes(), source.speeds());
    let (x, nu) = (target.nodes(), target.normals());
    Ok(dense_from_fn(target.len(), source.len(), |i, j| {
        let d = x[i] - y[j];
        h / (2.0 * PI) * d.dot(&nu[i]) / d.norm_squared() * sy[j]
    }))
}

/// Matrix of `S_source[ϑ]` evaluated at the nodes of a distinct `target`.
pub fn single_layer_cross(source: &Curve, target: &Curve) -> Result<DMatrix<f64>> {
    if source.same_nodes(target) {
        return assemble_slp(source);
    }
    check_off_curve(source, target.nodes())?;
    let h = source.step();
    let (y, sy) = (source.nodes(), source.speeds());
    let x = target.nodes();
    Ok(dense_from_fn(target.len(), source.len(), |i, j| h / (2.0 * PI) * (x[i] - y[j]).norm().ln() * sy[j]))
}

/// Potential and gradient of a single layer at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub value: f64,
    pub grad: Point,
    /// Set when the point is inside the source's near-boundary exclusion band;
    /// the value is still computed but may be inaccurate.
    pub in_band: bool,
}

/// Dense operator from density samples on `source` to potential values and
/// gradient components at fixed off-boundary points.
#[derive(Debug, Clone)]
pub struct EvalOperator {
    pub value: DMatrix<f64>,
    pub grad_x: DMatrix<f64>,
    pub grad_y: DMatrix<f64>,
    pub in_band: Vec<bool>,
}

impl EvalOperator {
    pub fn new(source: &Curve, points: &[Point]) -> Self {
        let h = source.step();
        let (y, sy) = (source.nodes(), source.speeds());
        let m = points.len();
        let n = source.len();
        let value = dense_from_fn(m, n, |i, j| h / (2.0 * PI) * (points[i] - y[j]).norm().ln() * sy[j]);
        let grad = |c: usize| {
            dense_from_fn(m, n, |i, j| {
                let d = points[i] - y[j];
                h / (2.0 * PI) * d[c] / d.norm_squared() * sy[j]
            })
        };
        EvalOperator {
            value,
            grad_x: grad(0),
            grad_y: grad(1),
            in_band: points.iter().map(|p| source.in_exclusion_band(p)).collect(),
        }
    }

    pub fn apply(&self, density: &DVector<f64>) -> Vec<PotentialSample> {
        let v = &self.value * density;
        let gx = &self.grad_x * density;
        let gy = &self.grad_y * density;
        (0..v.len())
            .map(|i| PotentialSample { value: v[i], grad: Point::new(gx[i], gy[i]), in_band: self.in_band[i] })
            .collect()
    }
}

/// Potential and analytic gradient of `S_source[density]` at `points`.
pub fn eval_potential(source: &Curve, density: &[f64], points: &[Point]) -> Vec<PotentialSample> {
    let h = source.step();
    let (y, sy) = (source.nodes(), source.speeds());
    points
        .par_iter()
        .map(|p| {
            let mut value = 0.0;
            let mut grad = Point::zeros();
            for ((q, s), rho) in y.iter().zip(sy).zip(density) {
                let d = p - q;
                let w = h / (2.0 * PI) * s * rho;
                value += w * d.norm().ln();
                grad += d * (w / d.norm_squared());
            }
            PotentialSample { value, grad, in_band: source.in_exclusion_band(p) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_circle, make_confocal_ellipse, make_named_shape, NamedShape};

    fn cos_density(c: &Curve, n: f64) -> DVector<f64> {
        DVector::from_iterator(c.len(), (0..c.len()).map(|j| (n * c.param(j)).cos()))
    }

    #[test]
    fn log_weights_integrate_log_kernel() {
        // ∫ ln(4 sin²(s/2)) ds = 0 and ∫ ln(4 sin²(s/2)) cos(ms) ds = −2π/m
        let r = log_weights(32);
        assert!(r.iter().sum::<f64>().abs() < 1e-13);
        let h = 2.0 * PI / 32.0;
        for m in 1..16 {
            let s: f64 = r.iter().enumerate().map(|(k, w)| w * (m as f64 * k as f64 * h).cos()).sum();
            assert!((s + 2.0 * PI / m as f64).abs() < 1e-12, "mode {m}");
        }
    }

    #[test]
    fn slp_zero_density() {
        let c = make_named_shape(NamedShape::Kite, 1.0, 64).unwrap();
        let s = assemble_slp(&c).unwrap();
        assert!((&s * DVector::zeros(64)).amax() == 0.0);
    }

    #[test]
    fn np_constant_density() {
        // circle: K*[1] = ½ pointwise
        let c = make_circle(Point::zeros(), 0.7, 64).unwrap();
        let out = assemble_np_adjoint(&c) * DVector::from_element(64, 1.0);
        assert!(out.iter().all(|v| (v - 0.5).abs() < 1e-13));
        // any curve: ∫_Γ ∂G(x,y)/∂ν(x) ds(x) = ½ for y on Γ, i.e. ∫ K*[ϑ] = ½ ∫ ϑ
        for c in [
            make_confocal_ellipse(1.0, 0.5, 128).unwrap(),
            make_named_shape(NamedShape::Flower, 1.0, 128).unwrap(),
            make_named_shape(NamedShape::Kite, 1.0, 128).unwrap(),
            make_named_shape(NamedShape::Peanut, 1.0, 128).unwrap(),
        ] {
            let w = DVector::from_vec(c.weights());
            let cols = assemble_np_adjoint(&c).transpose() * &w;
            for j in 0..c.len() {
                assert!((cols[j] / w[j] - 0.5).abs() < 1e-9, "node {j}: {}", cols[j] / w[j]);
            }
        }
        // ellipse: the equilibrium density 1/γ is the ½-eigenfunction
        let e = make_confocal_ellipse(0.9, 0.4, 128).unwrap();
        let speeds = DVector::from_iterator(128, e.speeds().iter().map(|s| 1.0 / s));
        let out = assemble_np_adjoint(&e) * &speeds;
        assert!((out - speeds * 0.5).amax() < 1e-11);
    }

    #[test]
    fn normal_trace_same_curve_uses_jump() {
        let c = make_circle(Point::zeros(), 1.0, 64).unwrap();
        let d = cos_density(&c, 1.0);
        let outer = normal_derivative_trace(&c, &c, Side::Outer).unwrap() * &d;
        let inner = normal_derivative_trace(&c, &c, Side::Inner).unwrap() * &d;
        for j in 0..64 {
            assert!((outer[j] - 0.5 * d[j]).abs() < 1e-13);
            assert!((inner[j] + 0.5 * d[j]).abs() < 1e-13);
        }
    }

    #[test]
    fn cross_trace_concentric_circles() {
        let src = make_circle(Point::zeros(), 0.5, 64).unwrap();
        let tgt = make_circle(Point::zeros(), 1.0, 64).unwrap();
        let d = cos_density(&src, 1.0);
        let out = normal_derivative_trace(&src, &tgt, Side::Outer).unwrap() * &d;
        for j in 0..64 {
            assert!((out[j] - 0.125 * tgt.param(j).cos()).abs() < 1e-13);
        }
        assert!((normal_derivative_trace(&src, &tgt, Side::Inner).unwrap() * DVector::zeros(64)).amax() == 0.0);
    }

    #[test]
    fn target_on_source_rejected() {
        let a = make_circle(Point::zeros(), 1.0, 64).unwrap();
        let b = make_circle(Point::zeros(), 1.0, 32).unwrap();
        assert!(matches!(normal_derivative_trace(&a, &b, Side::Outer), Err(CloakError::TargetOnSource)));
    }

    #[test]
    fn eval_exterior_circle() {
        let c = make_circle(Point::zeros(), 1.0, 64).unwrap();
        let d: Vec<f64> = (0..64).map(|j| c.param(j).cos()).collect();
        let pts: Vec<Point> = (0..7)
            .map(|k| {
                let th = 0.3 + k as f64;
                Point::new(2.0 * th.cos(), 2.0 * th.sin())
            })
            .collect();
        let out = eval_potential(&c, &d, &pts);
        let op = EvalOperator::new(&c, &pts).apply(&DVector::from_vec(d.clone()));
        for (k, p) in pts.iter().enumerate() {
            let th = p.y.atan2(p.x);
            assert!((out[k].value + 0.25 * th.cos()).abs() < 1e-13);
            assert!(!out[k].in_band);
            assert!((op[k].value - out[k].value).abs() < 1e-14);
            // gradient of −cos θ/(2r): (∂r, ∂θ/r) = (cos θ/(2r²), sin θ/(2r²))
            let gr = out[k].grad.dot(&Point::new(th.cos(), th.sin()));
            assert!((gr - th.cos() / 8.0).abs() < 1e-13);
        }
        let zero = eval_potential(&c, &vec![0.0; 64], &pts);
        assert!(zero.iter().all(|s| s.value == 0.0 && s.grad.norm() == 0.0));
        let near = eval_potential(&c, &d, &[Point::new(1.01, 0.0)]);
        assert!(near[0].in_band);
    }
}
