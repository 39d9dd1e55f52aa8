//! Cloaking-quality metrics on exterior sampling sets, detuning sweeps, and
//! conversion to laboratory units.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::exterior::{eval_fields, solve_all, ElectricSolution, PressureSolution};
use crate::field::ValidConfig;
use crate::geometry::{Curve, Point};

/// Radial sampling annulus around a curve: radii from `inner` to `outer`
/// times the curve's circumradius about its centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub inner: f64,
    pub outer: f64,
    pub radial: usize,
    pub angular: usize,
}

impl Default for AnnulusSpec {
    fn default() -> Self {
        Self { inner: 1.05, outer: 3.0, radial: 8, angular: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    pub descriptor: String,
    /// Points outside D where `|φ − H|` is measured.
    pub electric: Vec<Point>,
    /// Points outside Ω where `|p − P|` and the velocity error are measured.
    pub hydro: Vec<Point>,
}

fn annulus_points(curve: &Curve, spec: &AnnulusSpec, keep: impl Fn(&Point) -> bool) -> Vec<Point> {
    let c = curve.centroid();
    let rmax = curve.max_radius(&c);
    let mut pts = Vec::with_capacity(spec.radial * spec.angular);
    for i in 0..spec.radial {
        let f = if spec.radial == 1 { 0.0 } else { i as f64 / (spec.radial - 1) as f64 };
        let r = rmax * (spec.inner + (spec.outer - spec.inner) * f);
        for j in 0..spec.angular {
            let t = 2.0 * std::f64::consts::PI * j as f64 / spec.angular as f64;
            let p = c + Point::new(t.cos(), t.sin()) * r;
            if keep(&p) {
                pts.push(p);
            }
        }
    }
    pts
}

impl SamplingSet {
    /// Default sets: annuli about D and Ω, dropping points inside any curve's
    /// exclusion band or inside the measured region.
    pub fn annulus(cfg: &ValidConfig, spec: &AnnulusSpec) -> Result<Self> {
        if !(spec.inner > 1.0 && spec.outer > spec.inner) || spec.radial == 0 || spec.angular == 0 {
            return Err(CloakError::InvalidParameter(format!("bad sampling annulus {spec:?}")));
        }
        let clear = |p: &Point| {
            !cfg.core.in_exclusion_band(p) && !cfg.object.in_exclusion_band(p) && !cfg.region.in_exclusion_band(p)
        };
        let electric = annulus_points(&cfg.object, spec, |p| clear(p) && !cfg.object.contains(p));
        let hydro = annulus_points(&cfg.region, spec, |p| clear(p) && !cfg.region.contains(p));
        Ok(Self {
            descriptor: format!(
                "annulus {}..{} x circumradius, {}x{} polar grid, band points dropped",
                spec.inner, spec.outer, spec.radial, spec.angular
            ),
            electric,
            hydro,
        })
    }

    pub fn from_points(descriptor: impl Into<String>, electric: Vec<Point>, hydro: Vec<Point>) -> Self {
        Self { descriptor: descriptor.into(), electric, hydro }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloakErrorSummary {
    pub sampling: String,
    pub electric_points: usize,
    pub hydro_points: usize,
    pub e_max_phi: f64,
    /// Root mean square over the sampled points.
    pub l2_phi: f64,
    pub e_max_p: f64,
    pub l2_p: f64,
    /// Max of `|u_aver + ∇P/12|`.
    pub e_max_u: f64,
}

fn max_rms(errs: &[f64]) -> (f64, f64) {
    let max = errs.iter().fold(0.0, |m: f64, e| m.max(e.abs()));
    let rms = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
    (max, rms)
}

pub fn cloak_errors(
    cfg: &ValidConfig,
    esol: &ElectricSolution,
    psol: &PressureSolution,
    sampling: &SamplingSet,
) -> Result<CloakErrorSummary> {
    if sampling.electric.is_empty() || sampling.hydro.is_empty() {
        return Err(CloakError::Empty);
    }
    let phi_err: Vec<f64> = esol
        .potential_at(&sampling.electric)
        .iter()
        .zip(&sampling.electric)
        .map(|((v, _, _), q)| v - cfg.h.value(q))
        .collect();
    let hydro = eval_fields(cfg, esol, psol, &sampling.hydro)?;
    let mut p_err = Vec::with_capacity(hydro.len());
    let mut u_err: f64 = 0.0;
    for s in &hydro {
        let (pv, pg) = cfg.p.value_grad(&s.point);
        let p = s.p.ok_or_else(|| CloakError::InvalidParameter("hydrodynamic sample inside D".into()))?;
        p_err.push(p - pv);
        if let Some(u) = s.u {
            u_err = u_err.max((u + pg / 12.0).norm());
        }
    }
    let (e_max_phi, l2_phi) = max_rms(&phi_err);
    let (e_max_p, l2_p) = max_rms(&p_err);
    Ok(CloakErrorSummary {
        sampling: sampling.descriptor.clone(),
        electric_points: sampling.electric.len(),
        hydro_points: sampling.hydro.len(),
        e_max_phi,
        l2_phi,
        e_max_p,
        l2_p,
        e_max_u: u_err,
    })
}

/// Laboratory scales. The zeta scale is derived, not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UnitSystem {
    /// Plate gap h̃ (m).
    pub gap: f64,
    /// Characteristic length L_c (m).
    pub length_scale: f64,
    /// Viscosity µ̃ (Pa·s).
    pub viscosity: f64,
    /// Fluid permittivity ε̃_m (F/m).
    pub permittivity: f64,
    /// Far-field electric field Ẽ (V/m).
    pub field: f64,
    /// External velocity ũ_ext (m/s).
    pub velocity: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { gap: 15e-6, length_scale: 1e-4, viscosity: 1e-3, permittivity: 7.08e-10, field: 300.0, velocity: 51e-6 }
    }
}

impl UnitSystem {
    pub fn validate(self) -> Result<Self> {
        let all = [self.gap, self.length_scale, self.viscosity, self.permittivity, self.field, self.velocity];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(self)
        } else {
            Err(CloakError::InvalidParameter(format!("unit scales must be positive: {self:?}")))
        }
    }

    /// `ζ_char = µ̃ ũ_ext / (ε̃_m Ẽ)` in volts.
    pub fn zeta_char(&self) -> f64 {
        self.viscosity * self.velocity / (self.permittivity * self.field)
    }

    /// Dimensional value of one model unit of `kind`. Zeta carries a sign flip.
    pub fn scale(&self, kind: Quantity) -> f64 {
        match kind {
            Quantity::Length => self.length_scale,
            Quantity::Velocity => self.velocity,
            Quantity::Pressure => 12.0 * self.viscosity * self.velocity * self.length_scale / (self.gap * self.gap),
            Quantity::Zeta => -self.zeta_char(),
            Quantity::Potential => self.field * self.length_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Length,
    Velocity,
    Pressure,
    Zeta,
    Potential,
}

impl FromStr for Quantity {
    type Err = CloakError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "length" => Quantity::Length,
            "velocity" => Quantity::Velocity,
            "pressure" => Quantity::Pressure,
            "zeta" => Quantity::Zeta,
            "potential" => Quantity::Potential,
            other => return Err(CloakError::InvalidParameter(format!("unknown quantity kind `{other}`"))),
        })
    }
}

pub fn to_dimensional(value: f64, kind: Quantity, units: &UnitSystem) -> f64 {
    value * units.scale(kind)
}

pub fn to_dimensionless(value: f64, kind: Quantity, units: &UnitSystem) -> f64 {
    value / units.scale(kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    EpsilonS,
    Zeta0,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub e_max_phi: f64,
    pub l2_phi: f64,
    pub e_max_p: f64,
    pub l2_p: f64,
    pub e_max_u: f64,
}

/// One full forward solve per grid value, all other settings from `cfg`.
/// Rows come back in grid order.
pub fn detuning_sweep(
    cfg: &ValidConfig,
    parameter: SweepParameter,
    grid: &[f64],
    sampling: &SamplingSet,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(CloakError::Empty);
    }
    if parameter == SweepParameter::EpsilonS {
        let above = grid.iter().any(|v| *v > cfg.eps_m);
        let below = grid.iter().any(|v| *v < cfg.eps_m);
        if (above && below) || grid.iter().any(|v| *v == cfg.eps_m) {
            return Err(CloakError::DegenerateContrast);
        }
    }
    grid.par_iter()
        .map(|&v| {
            let c = match parameter {
                SweepParameter::EpsilonS => cfg.with_materials(v, cfg.zeta0)?,
                SweepParameter::Zeta0 => cfg.with_materials(cfg.eps_s, v)?,
            };
            let (e, p) = solve_all(&c)?;
            let s = cloak_errors(&c, &e, &p, sampling)?;
            Ok(SweepRow {
                parameter: v,
                e_max_phi: s.e_max_phi,
                l2_phi: s.l2_phi,
                e_max_p: s.e_max_p,
                l2_p: s.l2_p,
                e_max_u: s.e_max_u,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| CloakError::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
