//! JSON run configuration: geometry documents, backgrounds, materials and
//! optimizer settings, with every default made explicit on resolution.
//!
//! ```json
//! {
//!   "epsilon_m": 1.0, "epsilon_s": 1.6667, "zeta0": 0.6667,
//!   "H": {"family": "disk-multipole", "n": 1, "phase": "cos"},
//!   "P": "auto",
//!   "B": {"kind": "circle", "radius": 0.5},
//!   "D": {"kind": "circle", "radius": 1.0},
//!   "Omega": {"kind": "circle", "radius": 2.0},
//!   "N": 256
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};
use crate::field::{pressure_partner, CloakConfig, FieldFamily, HarmonicField, Phase, ValidConfig};
use crate::geometry::{
    make_circle, make_confocal_ellipse, make_named_shape, shrink_conformal, Curve, NamedShape, Point,
};
use crate::metrics::AnnulusSpec;
use crate::optimizer::{Interval, OptimizeOptions, SlipSource};

pub const DEFAULT_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    /// Confocal ellipse `ξ = xi` with focal half-distance `l`.
    Ellipse {
        #[serde(default = "one")]
        l: f64,
        xi: f64,
    },
    Flower {
        #[serde(default = "one")]
        scale: f64,
    },
    Kite {
        #[serde(default = "one")]
        scale: f64,
    },
    Peanut {
        #[serde(default = "one")]
        scale: f64,
    },
    Polygon {
        k: u32,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// A curve document. `shrink` scales the built curve about its centroid,
/// which gives the conformal cores of the named objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySpec {
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrink: Option<f64>,
}

impl GeometrySpec {
    pub fn build(&self, default_nodes: usize) -> Result<Curve> {
        let n = self.nodes.unwrap_or(default_nodes);
        let curve = match self.shape {
            ShapeSpec::Circle { center, radius } => make_circle(Point::new(center[0], center[1]), radius, n)?,
            ShapeSpec::Ellipse { l, xi } => make_confocal_ellipse(l, xi, n)?,
            ShapeSpec::Flower { scale } => make_named_shape(NamedShape::Flower, scale, n)?,
            ShapeSpec::Kite { scale } => make_named_shape(NamedShape::Kite, scale, n)?,
            ShapeSpec::Peanut { scale } => make_named_shape(NamedShape::Peanut, scale, n)?,
            ShapeSpec::Polygon { k, scale } => make_named_shape(NamedShape::Polygon(k), scale, n)?,
        };
        match self.shrink {
            Some(f) => shrink_conformal(&curve, f),
            None => Ok(curve),
        }
    }

    fn focal_half_distance(&self) -> Option<f64> {
        match self.shape {
            ShapeSpec::Ellipse { l, .. } => Some(l),
            _ => None,
        }
    }
}

/// Background field document. `family` is one of `uniform-x`, `uniform-y`,
/// `disk-multipole`, `elliptic-cos`, `elliptic-sin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl FieldSpec {
    /// `fallback_l` is used by the elliptic families when `l` is absent.
    pub fn build(&self, fallback_l: Option<f64>) -> Result<HarmonicField> {
        let n = self.n.unwrap_or(1);
        let need_l = || {
            self.l
                .or(fallback_l)
                .ok_or_else(|| CloakError::InvalidParameter(format!("field family `{}` needs `l`", self.family)))
        };
        let family = match self.family.as_str() {
            "uniform-x" => FieldFamily::UniformX,
            "uniform-y" => FieldFamily::UniformY,
            "disk-multipole" => FieldFamily::DiskMultipole { n, phase: self.phase.unwrap_or(Phase::Cos) },
            "elliptic-cos" => FieldFamily::EllipticCos { n, l: need_l()? },
            "elliptic-sin" => FieldFamily::EllipticSin { n, l: need_l()? },
            other => return Err(CloakError::InvalidParameter(format!("unknown field family `{other}`"))),
        };
        HarmonicField::new(family, self.amplitude)
    }
}

/// `"auto"` (twelve times H) or an explicit field document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PressureSpec {
    Keyword(String),
    Field(FieldSpec),
}

impl Default for PressureSpec {
    fn default() -> Self {
        PressureSpec::Keyword("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "one")]
    pub epsilon_m: f64,
    /// Required by `solve`; ignored by `optimize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta0: Option<f64>,
    #[serde(rename = "H")]
    pub h: FieldSpec,
    #[serde(rename = "P", default)]
    pub p: PressureSpec,
    #[serde(rename = "B")]
    pub core: GeometrySpec,
    #[serde(rename = "D")]
    pub object: GeometrySpec,
    #[serde(rename = "Omega")]
    pub region: GeometrySpec,
    /// Node count for curves without their own `N`.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// Absolute bounds on `ε_s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slip_source: Option<SlipSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<AnnulusSpec>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Forces every curve to `nodes`.
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = Some(nodes);
        for g in [&mut self.core, &mut self.object, &mut self.region] {
            g.nodes = None;
        }
        self
    }

    pub fn with_slip_source(mut self, slip: SlipSource) -> Self {
        self.slip_source = Some(slip);
        self
    }

    fn fields(&self) -> Result<(HarmonicField, HarmonicField)> {
        let l = self.object.focal_half_distance();
        let h = self.h.build(l)?;
        let p = match &self.p {
            PressureSpec::Keyword(k) if k == "auto" => pressure_partner(&h),
            PressureSpec::Keyword(k) => {
                return Err(CloakError::InvalidParameter(format!("`P` must be \"auto\" or a field, got `{k}`")))
            }
            PressureSpec::Field(f) => f.build(l)?,
        };
        Ok((h, p))
    }

    fn assemble(&self, eps_s: f64, zeta0: f64) -> Result<ValidConfig> {
        let n = self.nodes.unwrap_or(DEFAULT_NODES);
        let (h, p) = self.fields()?;
        CloakConfig {
            core: self.core.build(n)?,
            object: self.object.build(n)?,
            region: self.region.build(n)?,
            eps_m: self.epsilon_m,
            eps_s,
            zeta0,
            h,
            p,
        }
        .validate()
    }

    /// Forward-problem configuration; needs `epsilon_s` and `zeta0`.
    pub fn forward(&self) -> Result<ValidConfig> {
        let eps_s = self.epsilon_s.ok_or_else(|| CloakError::InvalidParameter("`epsilon_s` is required".into()))?;
        let zeta0 = self.zeta0.ok_or_else(|| CloakError::InvalidParameter("`zeta0` is required".into()))?;
        self.assemble(eps_s, zeta0)
    }

    /// Geometry and backgrounds for the design problem. Materials are
    /// placeholders unless given, since the optimizer replaces them.
    pub fn design(&self) -> Result<ValidConfig> {
        self.assemble(self.epsilon_s.unwrap_or(2.0 * self.epsilon_m), self.zeta0.unwrap_or(0.0))
    }

    pub fn optimize_options(&self) -> Result<OptimizeOptions> {
        let interval = |v: Option<[f64; 2]>| v.map(|[a, b]| Interval::new(a, b)).transpose();
        let eps = interval(self.epsilon_interval)?;
        if let Some(iv) = eps {
            if !(iv.lo > 0.0) {
                return Err(CloakError::InvalidParameter("epsilon interval must be positive".into()));
            }
        }
        Ok(OptimizeOptions {
            eps_interval: eps,
            zeta_interval: interval(self.zeta_interval)?,
            slip_source: self.slip_source.unwrap_or_default(),
            sampling: self.sampling.unwrap_or_default(),
        })
    }

    /// The same document with every default written out.
    pub fn resolved(&self) -> Result<Self> {
        let mut r = self.clone();
        let opts = self.optimize_options()?;
        let eps = opts.eps_interval.unwrap_or_else(|| Interval::default_permittivity(self.epsilon_m));
        let zeta = opts.zeta_interval.unwrap_or_else(Interval::default_zeta);
        let n = self.nodes.unwrap_or(DEFAULT_NODES);
        r.nodes = Some(n);
        for g in [&mut r.core, &mut r.object, &mut r.region] {
            g.nodes.get_or_insert(n);
        }
        r.epsilon_interval = Some([eps.lo, eps.hi]);
        r.zeta_interval = Some([zeta.lo, zeta.hi]);
        r.slip_source = Some(opts.slip_source);
        r.sampling = Some(opts.sampling);
        r.h.n.get_or_insert(1);
        if r.h.family == "disk-multipole" {
            r.h.phase.get_or_insert(Phase::Cos);
        }
        if r.h.family.starts_with("elliptic") {
            r.h.l = r.h.l.or(self.object.focal_half_distance());
        }
        Ok(r)
    }
}
