//! Coupled exterior problem: the electric transmission problem around the
//! insulated core and shell, then the pressure problem driven by the
//! electro-osmotic slip on the cloak region.
//!
//! Curves: `Γ_o = ∂B` (core), `Γ_i = ∂D` (object), `Γ_e = ∂Ω` (cloak region).
//!
//! ```text
//! φ = H + S_o[φ_o] + S_i[φ_i]           outside B
//! p = P + S_i[ψ_i] + S_e[ψ_e]           outside D
//! ```
//!
//! The electric densities solve
//!
//! ```text
//! (½ + K*_o) φ_o + ∂S_i[φ_i]/∂ν_o = −∂H/∂ν_o
//! ∂S_o[φ_o]/∂ν_i + (λ + K*_i) φ_i = −∂H/∂ν_i
//! ```
//!
//! and the pressure densities are `ψ_e = 12ζ₀ ∂φ/∂ν_e` together with
//!
//! ```text
//! (½ + K*_i) ψ_i + ∂S_e[ψ_e]/∂ν_i = −∂P/∂ν_i − 12ζ₀ ∂φ/∂ν_i|₊
//! ```

use std::io::Write;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::field::ValidConfig;
use crate::geometry::{Point, EXCLUSION_SPACINGS};
use crate::layerpot::{eval_potential, normal_derivative_trace, KernelMatrixSet, Side};
use crate::linalg::{block_matrix, solve_dense, stack};

/// Electric densities and the traces of `∂φ/∂ν` that the pressure stage needs.
#[derive(Debug, Clone)]
pub struct ElectricSolution {
    config: ValidConfig,
    pub phi_core: Vec<f64>,
    pub phi_object: Vec<f64>,
    /// `∂φ/∂ν` on `Γ_i` from outside D.
    pub flux_object_outer: Vec<f64>,
    /// `∂φ/∂ν` on `Γ_i` from inside D.
    pub flux_object_inner: Vec<f64>,
    /// `∂φ/∂ν` on `Γ_e`.
    pub flux_region: Vec<f64>,
    /// Relative max-norm residual of the discrete system.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct PressureSolution {
    pub psi_object: Vec<f64>,
    pub psi_region: Vec<f64>,
    pub zeta0: f64,
    pub residual: f64,
}

fn mat_vec(m: &nalgebra::DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(v)).as_slice().to_vec()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn solve_electric(cfg: &ValidConfig) -> Result<ElectricSolution> {
    let (core, object, region) = (&cfg.core, &cfg.object, &cfg.region);
    let ko = KernelMatrixSet::assemble(core)?;
    let ki = KernelMatrixSet::assemble(object)?;
    let a11 = ko.normal_trace(Side::Outer);
    let a12 = normal_derivative_trace(object, core, Side::Outer)?;
    let a21 = normal_derivative_trace(core, object, Side::Outer)?;
    let n_i = object.len();
    let a22 = &ki.np_adjoint + nalgebra::DMatrix::identity(n_i, n_i) * cfg.lambda();

    let mut rhs_o: Vec<f64> = cfg.h.normal_derivative_on(core).iter().map(|v| -v).collect();
    let mut rhs_i: Vec<f64> = cfg.h.normal_derivative_on(object).iter().map(|v| -v).collect();
    core.project_mean_zero(&mut rhs_o);
    object.project_mean_zero(&mut rhs_i);

    let n_o = core.len();
    let a = block_matrix(&[n_o, n_i], &[n_o, n_i], &[&[Some(&a11), Some(&a12)], &[Some(&a21), Some(&a22)]]);
    let b = stack(&[&rhs_o, &rhs_i]);
    let (x, residual) = if b.amax() == 0.0 { (DVector::zeros(n_o + n_i), 0.0) } else { solve_dense(&a, &b)? };
    let mut phi_core = x.rows(0, n_o).iter().copied().collect::<Vec<_>>();
    let mut phi_object = x.rows(n_o, n_i).iter().copied().collect::<Vec<_>>();
    core.project_mean_zero(&mut phi_core);
    object.project_mean_zero(&mut phi_object);

    let h_i = cfg.h.normal_derivative_on(object);
    let cross = mat_vec(&a21, &phi_core);
    let k_phi = mat_vec(&ki.np_adjoint, &phi_object);
    let base = add(&add(&h_i, &cross), &k_phi);
    let flux_object_outer = base.iter().zip(&phi_object).map(|(v, f)| v + 0.5 * f).collect();
    let flux_object_inner = base.iter().zip(&phi_object).map(|(v, f)| v - 0.5 * f).collect();

    let to_e_o = normal_derivative_trace(core, region, Side::Outer)?;
    let to_e_i = normal_derivative_trace(object, region, Side::Outer)?;
    let flux_region =
        add(&add(&cfg.h.normal_derivative_on(region), &mat_vec(&to_e_o, &phi_core)), &mat_vec(&to_e_i, &phi_object));

    Ok(ElectricSolution {
        config: cfg.clone(),
        phi_core,
        phi_object,
        flux_object_outer,
        flux_object_inner,
        flux_region,
        residual,
    })
}

impl ElectricSolution {
    pub fn config(&self) -> &ValidConfig {
        &self.config
    }

    /// `ε_m ∂φ/∂ν|₊ − ε_s ∂φ/∂ν|₋` on `Γ_i`, max over nodes.
    pub fn transmission_residual(&self) -> f64 {
        let (em, es) = (self.config.eps_m, self.config.eps_s);
        self.flux_object_outer
            .iter()
            .zip(&self.flux_object_inner)
            .map(|(o, i)| (em * o - es * i).abs())
            .fold(0.0, f64::max)
    }

    /// `φ` and `∇φ` at points outside the core, with the band flag.
    pub fn potential_at(&self, points: &[Point]) -> Vec<(f64, Point, bool)> {
        let cfg = &self.config;
        let so = eval_potential(&cfg.core, &self.phi_core, points);
        let si = eval_potential(&cfg.object, &self.phi_object, points);
        points
            .iter()
            .zip(so.iter().zip(&si))
            .map(|(p, (a, b))| {
                let (hv, hg) = cfg.h.value_grad(p);
                (hv + a.value + b.value, hg + a.grad + b.grad, a.in_band || b.in_band)
            })
            .collect()
    }
}

fn same_geometry(a: &ValidConfig, b: &ValidConfig) -> bool {
    a.core.same_nodes(&b.core) && a.object.same_nodes(&b.object) && a.region.same_nodes(&b.region)
}

pub fn solve_pressure(cfg: &ValidConfig, esol: &ElectricSolution) -> Result<PressureSolution> {
    if !same_geometry(cfg, &esol.config) {
        return Err(CloakError::CurveMismatch);
    }
    let (object, region) = (&cfg.object, &cfg.region);
    let z12 = 12.0 * cfg.zeta0;
    let mut psi_region: Vec<f64> = esol.flux_region.iter().map(|v| z12 * v).collect();
    region.project_mean_zero(&mut psi_region);

    let ki = KernelMatrixSet::assemble(object)?;
    let a = ki.normal_trace(Side::Outer);
    let from_e = normal_derivative_trace(region, object, Side::Outer)?;
    let slip_e = mat_vec(&from_e, &psi_region);
    let mut rhs: Vec<f64> = cfg
        .p
        .normal_derivative_on(object)
        .iter()
        .zip(&esol.flux_object_outer)
        .zip(&slip_e)
        .map(|((dp, dphi), s)| -dp - z12 * dphi - s)
        .collect();
    object.project_mean_zero(&mut rhs);
    let b = DVector::from_vec(rhs);
    let (x, residual) = if b.amax() == 0.0 { (DVector::zeros(object.len()), 0.0) } else { solve_dense(&a, &b)? };
    let mut psi_object = x.as_slice().to_vec();
    object.project_mean_zero(&mut psi_object);
    Ok(PressureSolution { psi_object, psi_region, zeta0: cfg.zeta0, residual })
}

impl PressureSolution {
    /// `p` and `∇p` at points outside D, with the band flag.
    pub fn pressure_at(&self, cfg: &ValidConfig, points: &[Point]) -> Vec<(f64, Point, bool)> {
        let si = eval_potential(&cfg.object, &self.psi_object, points);
        let se = eval_potential(&cfg.region, &self.psi_region, points);
        points
            .iter()
            .zip(si.iter().zip(&se))
            .map(|(p, (a, b))| {
                let (pv, pg) = cfg.p.value_grad(p);
                (pv + a.value + b.value, pg + a.grad + b.grad, a.in_band || b.in_band)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Core,
    Shell,
    CloakAnnulus,
    Exterior,
}

impl Region {
    pub fn classify(cfg: &ValidConfig, p: &Point) -> Region {
        if cfg.core.contains(p) {
            Region::Core
        } else if cfg.object.contains(p) {
            Region::Shell
        } else if cfg.region.contains(p) {
            Region::CloakAnnulus
        } else {
            Region::Exterior
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Core => "core",
            Region::Shell => "shell",
            Region::CloakAnnulus => "cloak-annulus",
            Region::Exterior => "exterior",
        }
    }
}

/// Fields at one evaluation point. Quantities the model leaves undefined in
/// the point's region are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: Point,
    pub region: Region,
    pub phi: Option<f64>,
    pub grad_phi: Option<Point>,
    pub p: Option<f64>,
    pub grad_p: Option<Point>,
    /// Depth-averaged velocity `−∇p/12 − ζ_mean ∇φ`.
    pub u: Option<Point>,
    /// Inside the near-boundary band of some curve.
    pub in_band: bool,
}

pub fn eval_fields(
    cfg: &ValidConfig,
    esol: &ElectricSolution,
    psol: &PressureSolution,
    points: &[Point],
) -> Result<Vec<FieldSample>> {
    if !same_geometry(cfg, &esol.config) {
        return Err(CloakError::CurveMismatch);
    }
    let phi = esol.potential_at(points);
    let pres = psol.pressure_at(cfg, points);
    Ok(points
        .iter()
        .zip(phi.iter().zip(&pres))
        .map(|(pt, (&(fv, fg, fb), &(pv, pg, pb)))| {
            let region = Region::classify(cfg, pt);
            let in_band = fb || pb || cfg.core.in_exclusion_band(pt);
            let electric = region != Region::Core;
            let hydro = matches!(region, Region::CloakAnnulus | Region::Exterior);
            let zeta_mean = if region == Region::CloakAnnulus { psol.zeta0 } else { 0.0 };
            FieldSample {
                point: *pt,
                region,
                phi: electric.then_some(fv),
                grad_phi: electric.then_some(fg),
                p: hydro.then_some(pv),
                grad_p: hydro.then_some(pg),
                u: hydro.then(|| -pg / 12.0 - fg * zeta_mean),
                in_band,
            }
        })
        .collect())
}

/// Axis-aligned sampling window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// One CSV row. Field names double as the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub region: Region,
    pub phi: Option<f64>,
    pub phi_err: Option<f64>,
    pub p: Option<f64>,
    pub p_err: Option<f64>,
    pub ux: Option<f64>,
    pub uy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandWidths {
    pub core: f64,
    pub object: f64,
    pub region: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMetadata {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Band half-width in node spacings; rows inside a band have empty field cells.
    pub exclusion_spacings: f64,
    pub exclusion_width: BandWidths,
    pub excluded_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrid {
    pub metadata: GridMetadata,
    pub rows: Vec<GridRow>,
}

pub const CSV_HEADER: &str = "x,y,region,phi,phi_err,p,p_err,ux,uy";

/// Samples the fields on an `nx × ny` lattice covering `window`, rows ordered
/// with `x` varying fastest.
pub fn export_grid(
    cfg: &ValidConfig,
    esol: &ElectricSolution,
    psol: &PressureSolution,
    window: Window,
    nx: usize,
    ny: usize,
) -> Result<FieldGrid> {
    if !(window.x1 > window.x0) || !(window.y1 > window.y0) {
        return Err(CloakError::Empty);
    }
    if nx < 2 || ny < 2 {
        return Err(CloakError::InvalidParameter(format!(
            "grid resolution must be at least 2 per axis, got {nx}x{ny}"
        )));
    }
    let lerp = |a: f64, b: f64, k: usize, n: usize| a + (b - a) * k as f64 / (n - 1) as f64;
    let points: Vec<Point> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| Point::new(lerp(window.x0, window.x1, i, nx), lerp(window.y0, window.y1, j, ny)))
        .collect();
    let samples = eval_fields(cfg, esol, psol, &points)?;
    let mut excluded = 0;
    let rows = samples
        .iter()
        .map(|s| {
            let keep = !s.in_band;
            if !keep {
                excluded += 1;
            }
            let phi = s.phi.filter(|_| keep);
            let p = s.p.filter(|_| keep);
            let u = s.u.filter(|_| keep);
            GridRow {
                x: s.point.x,
                y: s.point.y,
                region: s.region,
                phi,
                phi_err: phi.map(|v| v - cfg.h.value(&s.point)),
                p,
                p_err: p.map(|v| v - cfg.p.value(&s.point)),
                ux: u.map(|u| u.x),
                uy: u.map(|u| u.y),
            }
        })
        .collect();
    Ok(FieldGrid {
        metadata: GridMetadata {
            window,
            nx,
            ny,
            exclusion_spacings: EXCLUSION_SPACINGS,
            exclusion_width: BandWidths {
                core: cfg.core.exclusion_width(),
                object: cfg.object.exclusion_width(),
                region: cfg.region.exclusion_width(),
            },
            excluded_rows: excluded,
        },
        rows,
    })
}

impl FieldGrid {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| CloakError::Io(std::io::Error::other(e)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// Largest `|p − P|` over non-excluded exterior rows.
    pub fn max_exterior_pressure_error(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.region == Region::Exterior)
            .filter_map(|r| r.p_err)
            .fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Convenience for the full forward solve.
pub fn solve_all(cfg: &ValidConfig) -> Result<(ElectricSolution, PressureSolution)> {
    let e = solve_electric(cfg)?;
    let p = solve_pressure(cfg, &e)?;
    Ok((e, p))
}
