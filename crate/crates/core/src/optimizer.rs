//! Design of `(ε_s, ζ₀)` for general geometry by quadratic least squares.
//!
//! Electric stage: solve the mixed problem in the shell `D \ B̄`
//!
//! ```text
//! Δφ = 0,   ∂φ/∂ν = 0 on ∂B,   φ = H on ∂D
//! ```
//!
//! then minimize `𝒢(ε_s) = ‖ε_s ∂φ/∂ν − ε_m ∂H/∂ν‖²` on `∂D`. The shell flux
//! does not depend on `ε_s`, so `𝒢` is an exact quadratic.
//!
//! Hydrodynamic stage: in `Ω \ D̄` solve two Neumann problems, `p₁` driven by
//! `∂P/∂ν` on `∂Ω` and `p₂` by the slip `−12 ∂φ/∂ν` on both boundaries, and
//! minimize `ℱ(ζ₀) = min_c ‖p₁ + ζ₀ p₂ + c − P‖²` on `∂Ω`.
//!
//! Representations: `φ = S_B[a] + S_D[b] + c` with `∫ b = 0`, and
//! `p = S_D[ψ_D] + S_Ω[ψ_Ω]` with a bordered row removing the constant mode.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::exterior::{solve_all, solve_electric};
use crate::field::{CloakConfig, HarmonicField};
use crate::geometry::Curve;
use crate::layerpot::{assemble_slp, normal_derivative_trace, single_layer_cross, KernelMatrixSet, Side};
use crate::linalg::{block_matrix, condition_number, solve_dense, stack};
use crate::metrics::{cloak_errors, AnnulusSpec, CloakErrorSummary, SamplingSet};

/// Systems with a larger 2-norm condition number are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Largest admissible projected Neumann mass relative to the data norm.
pub const COMPATIBILITY_TOL: f64 = 1e-8;

/// Closed admissible interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CloakError::InvalidParameter(format!("interval needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// `[1.01 ε_m, 10³ ε_m]`.
    pub fn default_permittivity(eps_m: f64) -> Self {
        Self { lo: 1.01 * eps_m, hi: 1e3 * eps_m }
    }

    pub fn default_zeta() -> Self {
        Self { lo: 0.0, hi: 100.0 }
    }

    fn clip(&self, x: f64) -> (f64, Bound) {
        if x < self.lo {
            (self.lo, Bound::Lower)
        } else if x > self.hi {
            (self.hi, Bound::Upper)
        } else {
            (x, Bound::Interior)
        }
    }
}

/// Where an optimum landed relative to its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Interior,
    Lower,
    Upper,
}

/// `a x² + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    pub fn eval(&self, x: f64) -> f64 {
        // clamp roundoff below zero; the cost is a squared norm
        ((self.a * x + self.b) * x + self.c).max(0.0)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        2.0 * self.a * x + self.b
    }

    pub fn argmin(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }
}

#[derive(Debug, Clone)]
pub struct InteriorMixedSolution {
    pub density_core: Vec<f64>,
    pub density_object: Vec<f64>,
    pub constant: f64,
    /// `∂φ/∂ν` on `∂D` from the shell side, with the outward normal of D.
    pub flux_object: Vec<f64>,
    /// Max of `|φ − H|` at the nodes of `∂D`.
    pub dirichlet_residual: f64,
    /// `∫_{∂D} ∂φ/∂ν ds`.
    pub flux_integral: f64,
    pub condition: f64,
}

pub fn solve_interior_mixed(core: &Curve, object: &Curve, h: &HarmonicField) -> Result<InteriorMixedSolution> {
    if core.nodes().iter().any(|p| !object.contains(p)) {
        return Err(CloakError::Nesting("core B is not inside object D".into()));
    }
    let (n_o, n_i) = (core.len(), object.len());
    let neumann_o = KernelMatrixSet::assemble(core)?.normal_trace(Side::Outer);
    let neumann_oi = normal_derivative_trace(object, core, Side::Outer)?;
    let dirichlet_io = single_layer_cross(core, object)?;
    let dirichlet_i = assemble_slp(object)?;
    let ones = DMatrix::from_element(n_i, 1, 1.0);
    // ∫ b ds = 0, scaled to unit-size entries
    let scale = n_i as f64 / object.perimeter();
    let mean_row = DMatrix::from_row_slice(1, n_i, &object.weights().iter().map(|w| w * scale).collect::<Vec<_>>());
    let m = block_matrix(
        &[n_o, n_i, 1],
        &[n_o, n_i, 1],
        &[
            &[Some(&neumann_o), Some(&neumann_oi), None],
            &[Some(&dirichlet_io), Some(&dirichlet_i), Some(&ones)],
            &[None, Some(&mean_row), None],
        ],
    );
    let condition = condition_number(&m);
    if !(condition <= CONDITION_LIMIT) {
        return Err(CloakError::IllConditioned(condition));
    }
    let hv = h.values_on(object);
    let rhs = stack(&[&vec![0.0; n_o], &hv, &[0.0]]);
    let (x, _) = solve_dense(&m, &rhs)?;
    let a = DVector::from_iterator(n_o, x.rows(0, n_o).iter().copied());
    let b = DVector::from_iterator(n_i, x.rows(n_o, n_i).iter().copied());
    let constant = x[n_o + n_i];

    let trace = &dirichlet_io * &a + &dirichlet_i * &b;
    let dirichlet_residual = trace.iter().zip(&hv).map(|(t, h)| (t + constant - h).abs()).fold(0.0, f64::max);
    let inner = KernelMatrixSet::assemble(object)?.normal_trace(Side::Inner);
    let flux = normal_derivative_trace(core, object, Side::Outer)? * &a + inner * &b;
    let flux_object = flux.as_slice().to_vec();
    Ok(InteriorMixedSolution {
        flux_integral: object.integrate(&flux_object),
        density_core: a.as_slice().to_vec(),
        density_object: b.as_slice().to_vec(),
        constant,
        flux_object,
        dirichlet_residual,
        condition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarOptimum {
    pub value: f64,
    pub cost: f64,
    pub unclipped: f64,
    pub bound: Bound,
    pub interval: Interval,
    pub quadratic: Quadratic,
}

/// Minimizes `‖ε φ_ν − ε_m H_ν‖²` over `interval` given both traces on `∂D`.
pub fn optimal_permittivity(
    object: &Curve,
    phi_flux: &[f64],
    h_flux: &[f64],
    eps_m: f64,
    interval: Interval,
) -> Result<ScalarOptimum> {
    if !(eps_m > 0.0) || !(interval.lo > 0.0) {
        return Err(CloakError::InvalidParameter("permittivities must be positive".into()));
    }
    let a = object.inner(phi_flux, phi_flux);
    let hh = object.inner(h_flux, h_flux);
    if !(a > 1e-28 * hh.max(f64::MIN_POSITIVE)) {
        return Err(CloakError::Degenerate("shell flux vanishes; the background is constant on the object".into()));
    }
    let q = Quadratic { a, b: -2.0 * eps_m * object.inner(phi_flux, h_flux), c: eps_m * eps_m * hh };
    let unclipped = q.argmin();
    let (value, bound) = interval.clip(unclipped);
    let cost = permittivity_cost(object, phi_flux, h_flux, eps_m, value);
    Ok(ScalarOptimum { value, cost, unclipped, bound, interval, quadratic: q })
}

/// `𝒢(ε)` evaluated from the residual itself rather than the expanded quadratic.
pub fn permittivity_cost(object: &Curve, phi_flux: &[f64], h_flux: &[f64], eps_m: f64, eps: f64) -> f64 {
    let r: Vec<f64> = phi_flux.iter().zip(h_flux).map(|(f, h)| eps * f - eps_m * h).collect();
    object.inner(&r, &r)
}

pub fn optimize_permittivity(
    core: &Curve,
    object: &Curve,
    h: &HarmonicField,
    eps_m: f64,
    interval: Interval,
) -> Result<(ScalarOptimum, InteriorMixedSolution)> {
    let sol = solve_interior_mixed(core, object, h)?;
    let opt = optimal_permittivity(object, &sol.flux_object, &h.normal_derivative_on(object), eps_m, interval)?;
    Ok((opt, sol))
}

/// Solution of the Neumann problem in `Ω \ D̄` with its trace on `∂Ω`
/// shifted to zero mean.
#[derive(Debug, Clone)]
pub struct NeumannSolution {
    pub density_object: Vec<f64>,
    pub density_region: Vec<f64>,
    pub trace_region: Vec<f64>,
    /// `|∫ g_D| + |∫ g_Ω|` removed by the projection, relative to the data norm.
    pub projected_mass: f64,
}

/// Operators of the annulus Neumann problem, reusable across right-hand sides.
struct NeumannSystem {
    matrix: DMatrix<f64>,
    slp_object_to_region: DMatrix<f64>,
    slp_region: DMatrix<f64>,
    n_i: usize,
    n_e: usize,
}

impl NeumannSystem {
    fn assemble(object: &Curve, region: &Curve) -> Result<Self> {
        if object.nodes().iter().any(|p| !region.contains(p)) {
            return Err(CloakError::Nesting("object D is not inside region Omega".into()));
        }
        let (n_i, n_e) = (object.len(), region.len());
        let a11 = KernelMatrixSet::assemble(object)?.normal_trace(Side::Outer);
        let a12 = normal_derivative_trace(region, object, Side::Outer)?;
        let a21 = normal_derivative_trace(object, region, Side::Outer)?;
        let a22 = KernelMatrixSet::assemble(region)?.normal_trace(Side::Inner);
        let border = DMatrix::from_element(n_e, 1, 1.0);
        let scale = n_e as f64 / region.perimeter();
        let mean_row = DMatrix::from_row_slice(1, n_e, &region.weights().iter().map(|w| w * scale).collect::<Vec<_>>());
        let matrix = block_matrix(
            &[n_i, n_e, 1],
            &[n_i, n_e, 1],
            &[
                &[Some(&a11), Some(&a12), None],
                &[Some(&a21), Some(&a22), Some(&border)],
                &[None, Some(&mean_row), None],
            ],
        );
        Ok(Self {
            matrix,
            slp_object_to_region: single_layer_cross(object, region)?,
            slp_region: assemble_slp(region)?,
            n_i,
            n_e,
        })
    }

    fn solve(&self, object: &Curve, region: &Curve, g_object: &[f64], g_region: &[f64]) -> Result<NeumannSolution> {
        let norm = (object.inner(g_object, g_object) + region.inner(g_region, g_region)).sqrt();
        let (mut gd, mut ge) = (g_object.to_vec(), g_region.to_vec());
        let mass = object.project_mean_zero(&mut gd).abs() * object.perimeter()
            + region.project_mean_zero(&mut ge).abs() * region.perimeter();
        let projected_mass = if norm > 0.0 { mass / norm } else { 0.0 };
        if projected_mass > COMPATIBILITY_TOL {
            return Err(CloakError::Compatibility(projected_mass));
        }
        let (n_i, n_e) = (self.n_i, self.n_e);
        if norm == 0.0 {
            return Ok(NeumannSolution {
                density_object: vec![0.0; n_i],
                density_region: vec![0.0; n_e],
                trace_region: vec![0.0; n_e],
                projected_mass,
            });
        }
        let (x, _) = solve_dense(&self.matrix, &stack(&[&gd, &ge, &[0.0]]))?;
        let psi_i = DVector::from_iterator(n_i, x.rows(0, n_i).iter().copied());
        let psi_e = DVector::from_iterator(n_e, x.rows(n_i, n_e).iter().copied());
        let mut trace = (&self.slp_object_to_region * &psi_i + &self.slp_region * &psi_e).as_slice().to_vec();
        region.project_mean_zero(&mut trace);
        Ok(NeumannSolution {
            density_object: psi_i.as_slice().to_vec(),
            density_region: psi_e.as_slice().to_vec(),
            trace_region: trace,
            projected_mass,
        })
    }
}

/// Solves `Δp = 0` in `Ω \ D̄` with `∂p/∂ν_D = g_object` on `∂D` (normal out
/// of D) and `∂p/∂ν_Ω = g_region` on `∂Ω`. Each datum is projected to zero
/// mean first.
pub fn solve_interior_neumann(
    object: &Curve,
    region: &Curve,
    g_object: &[f64],
    g_region: &[f64],
) -> Result<NeumannSolution> {
    NeumannSystem::assemble(object, region)?.solve(object, region, g_object, g_region)
}

/// `∂φ/∂ν` data feeding the slip, on `∂D` (outer side) and on `∂Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlipData {
    pub object: Vec<f64>,
    pub region: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlipSource {
    /// Trace of the exterior transmission solution at `ε_s,opt`.
    #[default]
    Exterior,
    /// `∂H/∂ν`, exact only under perfect electric cloaking.
    Background,
}

impl std::str::FromStr for SlipSource {
    type Err = CloakError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exterior" => Ok(SlipSource::Exterior),
            "background" => Ok(SlipSource::Background),
            other => {
                Err(CloakError::InvalidParameter(format!("slip source must be exterior or background, got `{other}`")))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct PressureDecomposition {
    /// Pressure-driven part, zero slip.
    pub p1: NeumannSolution,
    /// Slip-driven part per unit `ζ₀`.
    pub p2: NeumannSolution,
}

impl PressureDecomposition {
    /// Trace of `p₁ + ζ₀ p₂` on `∂Ω`, zero mean.
    pub fn trace(&self, zeta0: f64) -> Vec<f64> {
        self.p1.trace_region.iter().zip(&self.p2.trace_region).map(|(a, b)| a + zeta0 * b).collect()
    }
}

pub fn solve_pressure_decomposition(
    object: &Curve,
    region: &Curve,
    slip: &SlipData,
    p: &HarmonicField,
) -> Result<PressureDecomposition> {
    if slip.object.len() != object.len() || slip.region.len() != region.len() {
        return Err(CloakError::CurveMismatch);
    }
    let system = NeumannSystem::assemble(object, region)?;
    let g1_d = vec![0.0; object.len()];
    let g1_e = p.normal_derivative_on(region);
    let g2_d: Vec<f64> = slip.object.iter().map(|v| -12.0 * v).collect();
    let g2_e: Vec<f64> = slip.region.iter().map(|v| -12.0 * v).collect();
    let (p1, p2) =
        rayon::join(|| system.solve(object, region, &g1_d, &g1_e), || system.solve(object, region, &g2_d, &g2_e));
    Ok(PressureDecomposition { p1: p1?, p2: p2? })
}

/// Joint least squares over `(ζ₀, c)`; `c` is eliminated exactly because both
/// component traces have zero mean, leaving `c = mean(P − p₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaOptimum {
    pub optimum: ScalarOptimum,
    pub gauge_constant: f64,
}

pub fn optimize_zeta(
    decomp: &PressureDecomposition,
    region: &Curve,
    p: &HarmonicField,
    interval: Interval,
) -> Result<ZetaOptimum> {
    let (r, gauge_constant) = zeta_residual(decomp, region, p);
    let t2 = &decomp.p2.trace_region;
    let a = region.inner(t2, t2);
    let rr = region.inner(&r, &r);
    if !(a > 1e-28 * rr.max(1.0)) {
        return Err(CloakError::Degenerate("slip component has no effect on the pressure trace".into()));
    }
    let q = Quadratic { a, b: -2.0 * region.inner(&r, t2), c: rr };
    let unclipped = q.argmin();
    let (value, bound) = interval.clip(unclipped);
    Ok(ZetaOptimum {
        optimum: ScalarOptimum {
            value,
            cost: zeta_cost(decomp, region, p, value),
            unclipped,
            bound,
            interval,
            quadratic: q,
        },
        gauge_constant,
    })
}

/// `P − p₁` on `∂Ω` with its mean removed, and that mean.
fn zeta_residual(decomp: &PressureDecomposition, region: &Curve, p: &HarmonicField) -> (Vec<f64>, f64) {
    let target = p.values_on(region);
    let mut r: Vec<f64> = target.iter().zip(&decomp.p1.trace_region).map(|(t, a)| t - a).collect();
    let mean = region.project_mean_zero(&mut r);
    (r, mean)
}

/// `ℱ(ζ₀)` with the gauge constant already optimized.
pub fn zeta_cost(decomp: &PressureDecomposition, region: &Curve, p: &HarmonicField, zeta0: f64) -> f64 {
    let (r, _) = zeta_residual(decomp, region, p);
    let d: Vec<f64> = r.iter().zip(&decomp.p2.trace_region).map(|(a, b)| a - zeta0 * b).collect();
    region.inner(&d, &d)
}

/// Golden-section minimizer on `interval` down to bracket width `tol`.
pub fn golden_section_check(cost: impl Fn(f64) -> f64, interval: Interval, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(CloakError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (interval.lo, interval.hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (cost(c), cost(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = cost(d);
        }
    }
    Ok(0.5 * (a + b))
}

/// Empirical ratios between exterior sup-errors and the boundary residuals.
/// A ratio is absent when its residual is below `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub sqrt_g: f64,
    pub sqrt_f: f64,
    pub max_phi_error: f64,
    pub max_p_error: f64,
    pub c_electric: Option<f64>,
    pub c_hydro: Option<f64>,
}

pub fn certify(cost_g: f64, cost_f: f64, exterior: &CloakErrorSummary) -> Certificate {
    let (sg, sf) = (cost_g.max(0.0).sqrt(), cost_f.max(0.0).sqrt());
    let ratio = |err: f64, res: f64| (res >= 1e-12).then(|| err / res);
    Certificate {
        sqrt_g: sg,
        sqrt_f: sf,
        max_phi_error: exterior.e_max_phi,
        max_p_error: exterior.e_max_p,
        c_electric: ratio(exterior.e_max_phi, sg),
        c_hydro: ratio(exterior.e_max_p, sf),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Defaults to `[1.01 ε_m, 10³ ε_m]`.
    pub eps_interval: Option<Interval>,
    /// Defaults to `[0, 100]`.
    pub zeta_interval: Option<Interval>,
    pub slip_source: SlipSource,
    pub sampling: AnnulusSpec,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            eps_interval: None,
            zeta_interval: None,
            slip_source: SlipSource::Exterior,
            sampling: AnnulusSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub interior_dirichlet: f64,
    pub interior_flux_integral: f64,
    pub interior_condition: f64,
    pub projected_mass_p1: f64,
    pub projected_mass_p2: f64,
    pub electric_system: f64,
    pub pressure_system: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub eps_m: f64,
    pub eps_s_opt: f64,
    pub eps_ratio: f64,
    pub cost_g: f64,
    pub permittivity: ScalarOptimum,
    pub zeta0_opt: f64,
    pub cost_f: f64,
    pub zeta: ZetaOptimum,
    pub slip_source: SlipSource,
    pub residuals: Residuals,
    pub exterior: CloakErrorSummary,
    pub certificate: Certificate,
}

/// Full design pipeline for the geometry and backgrounds of `cfg`; its
/// `eps_s` and `zeta0` are ignored.
pub fn run_optimization(cfg: &CloakConfig, opts: &OptimizeOptions) -> Result<OptimizationReport> {
    let eps_m = cfg.eps_m;
    let eps_interval = opts.eps_interval.unwrap_or_else(|| Interval::default_permittivity(eps_m));
    let zeta_interval = opts.zeta_interval.unwrap_or_else(Interval::default_zeta);
    let (perm, interior) = optimize_permittivity(&cfg.core, &cfg.object, &cfg.h, eps_m, eps_interval)?;

    let mut design = cfg.clone();
    design.eps_s = perm.value;
    design.zeta0 = 0.0;
    let design = design.validate()?;
    let slip = match opts.slip_source {
        SlipSource::Exterior => {
            let e = solve_electric(&design)?;
            SlipData { object: e.flux_object_outer, region: e.flux_region }
        }
        SlipSource::Background => SlipData {
            object: cfg.h.normal_derivative_on(&cfg.object),
            region: cfg.h.normal_derivative_on(&cfg.region),
        },
    };
    let decomp = solve_pressure_decomposition(&cfg.object, &cfg.region, &slip, &cfg.p)?;
    let zeta = optimize_zeta(&decomp, &cfg.region, &cfg.p, zeta_interval)?;

    let final_cfg = design.with_materials(perm.value, zeta.optimum.value)?;
    let (e, p) = solve_all(&final_cfg)?;
    let sampling = SamplingSet::annulus(&final_cfg, &opts.sampling)?;
    let exterior = cloak_errors(&final_cfg, &e, &p, &sampling)?;
    let certificate = certify(perm.cost, zeta.optimum.cost, &exterior);
    Ok(OptimizationReport {
        eps_m,
        eps_s_opt: perm.value,
        eps_ratio: perm.value / eps_m,
        cost_g: perm.cost,
        permittivity: perm,
        zeta0_opt: zeta.optimum.value,
        cost_f: zeta.optimum.cost,
        zeta,
        slip_source: opts.slip_source,
        residuals: Residuals {
            interior_dirichlet: interior.dirichlet_residual,
            interior_flux_integral: interior.flux_integral,
            interior_condition: interior.condition,
            projected_mass_p1: decomp.p1.projected_mass,
            projected_mass_p2: decomp.p2.projected_mass,
            electric_system: e.residual,
            pressure_system: p.residual,
        },
        exterior,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let x = golden_section_check(|x| (x - 3.0).powi(2), Interval::new(0.0, 10.0).unwrap(), 1e-9).unwrap();
        assert!((x - 3.0).abs() < 1e-8);
        assert!(golden_section_check(|x| x, Interval::new(0.0, 1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn interval_clipping() {
        let i = Interval::new(0.0, 0.1).unwrap();
        assert_eq!(i.clip(0.5), (0.1, Bound::Upper));
        assert_eq!(i.clip(-1.0), (0.0, Bound::Lower));
        assert_eq!(i.clip(0.05), (0.05, Bound::Interior));
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn quadratic_helpers() {
        let q = Quadratic { a: 2.0, b: -8.0, c: 8.0 };
        assert_eq!(q.argmin(), 2.0);
        assert_eq!(q.eval(2.0), 0.0);
        assert_eq!(q.derivative(2.0), 0.0);
    }

    #[test]
    fn certificate_not_applicable_when_perfect() {
        let s = CloakErrorSummary {
            sampling: String::new(),
            electric_points: 1,
            hydro_points: 1,
            e_max_phi: 1e-14,
            l2_phi: 0.0,
            e_max_p: 1e-13,
            l2_p: 0.0,
            e_max_u: 0.0,
        };
        let c = certify(1e-30, 4e-2, &s);
        assert!(c.c_electric.is_none());
        assert!((c.c_hydro.unwrap() - 1e-13 / 0.2).abs() < 1e-25);
    }
}
