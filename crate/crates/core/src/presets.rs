//! Ready-made configurations: concentric disks, confocal ellipses and named
//! objects with a conformal half-scale core inside a circular cloak region.

use crate::analytic::Orientation;
use crate::error::Result;
use crate::field::{pressure_partner, CloakConfig, FieldFamily, HarmonicField, Phase, ValidConfig};
use crate::geometry::{make_circle, make_confocal_ellipse, make_named_shape, shrink_conformal, NamedShape, Point};

/// Concentric disks about the origin with `H` the order-`n` multipole.
#[allow(clippy::too_many_arguments)]
pub fn disks(
    radii: [f64; 3],
    n: u32,
    phase: Phase,
    nodes: usize,
    eps_m: f64,
    eps_s: f64,
    zeta0: f64,
) -> Result<ValidConfig> {
    let h = HarmonicField::new(FieldFamily::DiskMultipole { n, phase }, 1.0)?;
    CloakConfig {
        core: make_circle(Point::zeros(), radii[0], nodes)?,
        object: make_circle(Point::zeros(), radii[1], nodes)?,
        region: make_circle(Point::zeros(), radii[2], nodes)?,
        eps_m,
        eps_s,
        zeta0,
        h,
        p: pressure_partner(&h),
    }
    .validate()
}

/// Confocal ellipses `ξ_o < ξ_i < ξ_e` with the elliptic harmonic matching
/// `orientation`.
#[allow(clippy::too_many_arguments)]
pub fn confocal(
    l: f64,
    xi: [f64; 3],
    n: u32,
    orientation: Orientation,
    nodes: usize,
    eps_m: f64,
    eps_s: f64,
    zeta0: f64,
) -> Result<ValidConfig> {
    let family = match orientation {
        Orientation::X => FieldFamily::EllipticCos { n, l },
        Orientation::Y => FieldFamily::EllipticSin { n, l },
    };
    let h = HarmonicField::new(family, 1.0)?;
    CloakConfig {
        core: make_confocal_ellipse(l, xi[0], nodes)?,
        object: make_confocal_ellipse(l, xi[1], nodes)?,
        region: make_confocal_ellipse(l, xi[2], nodes)?,
        eps_m,
        eps_s,
        zeta0,
        h,
        p: pressure_partner(&h),
    }
    .validate()
}

/// Named object of unit scale, its half-scale conformal core and a circular
/// cloak region of radius `region_radius` centered at the origin, driven by a
/// uniform field along `x₁`.
pub fn named_object(
    shape: NamedShape,
    region_radius: f64,
    nodes: usize,
    eps_m: f64,
    eps_s: f64,
    zeta0: f64,
) -> Result<ValidConfig> {
    let object = make_named_shape(shape, 1.0, nodes)?;
    let core = shrink_conformal(&object, 0.5)?;
    let h = HarmonicField::uniform_x();
    CloakConfig {
        core,
        object,
        region: make_circle(Point::zeros(), region_radius, nodes)?,
        eps_m,
        eps_s,
        zeta0,
        h,
        p: pressure_partner(&h),
    }
    .validate()
}
