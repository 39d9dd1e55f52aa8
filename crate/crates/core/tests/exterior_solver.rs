use eocloak::analytic::{annulus_condition, annulus_series, confocal_condition, confocal_series, Orientation};
use eocloak::exterior::{eval_fields, export_grid, solve_all, solve_electric, solve_pressure, Region, Window};
use eocloak::field::Phase;
use eocloak::geometry::{EllipticCoords, Point};
use eocloak::presets;
use eocloak::CloakError;

fn ring(r: f64, m: usize) -> Vec<Point> {
    (0..m)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / m as f64;
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

#[test]
fn perfect_disks_leave_backgrounds_untouched() {
    let cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 2.0 / 3.0).unwrap();
    let (e, p) = solve_all(&cfg).unwrap();
    assert!(e.residual < 1e-12);
    let pts = ring(1.5, 50);
    let worst =
        e.potential_at(&pts).iter().zip(&pts).map(|((v, _, _), q)| (v - cfg.h.value(q)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "phi error {worst}");
    let pts = ring(2.5, 50);
    let worst =
        p.pressure_at(&cfg, &pts).iter().zip(&pts).map(|((v, _, _), q)| (v - cfg.p.value(q)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "p error {worst}");
}

#[test]
fn densities_are_mean_zero_and_slip_is_assigned() {
    let cfg = presets::disks([0.5, 1.0, 2.0], 2, Phase::Sin, 128, 1.0, 3.0, 0.8).unwrap();
    let (e, p) = solve_all(&cfg).unwrap();
    assert!(cfg.core.integrate(&e.phi_core).abs() < 1e-10);
    assert!(cfg.object.integrate(&e.phi_object).abs() < 1e-10);
    assert!(cfg.object.integrate(&p.psi_object).abs() < 1e-10);
    assert!(cfg.region.integrate(&p.psi_region).abs() < 1e-10);
    for (psi, flux) in p.psi_region.iter().zip(&e.flux_region) {
        assert!((psi - 12.0 * 0.8 * flux).abs() < 1e-12);
    }
    assert!(e.transmission_residual() < 1e-9);
    assert!(cfg.object.integrate(&e.flux_object_outer).abs() < 1e-10);
}

#[test]
fn disks_match_series_for_arbitrary_contrast() {
    let mut seed = 12345u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for n in 1..=3 {
        for &(eps, zeta) in &[(3.0, 1.0), (0.4, 0.2), (12.0, 2.5)] {
            let cfg = presets::disks([0.5, 1.0, 2.0], n, Phase::Cos, 256, 1.0, eps, zeta).unwrap();
            let (e, p) = solve_all(&cfg).unwrap();
            let oracle = annulus_series(0.5, 1.0, 2.0, n, Phase::Cos, eps, zeta).unwrap();
            let pts: Vec<Point> = (0..100)
                .map(|_| {
                    let r = 2.2 + 2.0 * next();
                    let t = 2.0 * std::f64::consts::PI * next();
                    Point::new(r * t.cos(), r * t.sin())
                })
                .collect();
            for ((q, (phi, _, _)), (pr, _, _)) in pts.iter().zip(e.potential_at(&pts)).zip(p.pressure_at(&cfg, &pts)) {
                let (phi_ref, p_ref) = oracle.eval(q).unwrap();
                assert!((phi - phi_ref).abs() < 1e-9, "n={n} eps={eps}: phi {phi} vs {phi_ref}");
                assert!((pr - p_ref).abs() < 1e-8, "n={n} eps={eps}: p {pr} vs {p_ref}");
            }
        }
    }
}

#[test]
fn ellipses_match_series() {
    let (l, xi) = (0.8, [0.25, 0.5, 1.0]);
    let coords = EllipticCoords::new(l).unwrap();
    for o in [Orientation::X, Orientation::Y] {
        for &(eps, zeta) in &[(2.5, 0.3), (0.5, 1.2)] {
            let cfg = presets::confocal(l, xi, 1, o, 256, 1.0, eps, zeta).unwrap();
            let (e, p) = solve_all(&cfg).unwrap();
            let oracle = confocal_series(l, xi[0], xi[1], xi[2], 1, o, eps, zeta).unwrap();
            let pts: Vec<Point> =
                (0..40).map(|k| coords.forward(1.3 + 0.02 * k as f64, 0.157 * k as f64 + 0.1)).collect();
            for ((q, (phi, _, _)), (pr, _, _)) in pts.iter().zip(e.potential_at(&pts)).zip(p.pressure_at(&cfg, &pts)) {
                let (phi_ref, p_ref) = oracle.eval(q).unwrap();
                assert!((phi - phi_ref).abs() < 1e-8, "{o:?}: phi {phi} vs {phi_ref}");
                assert!((pr - p_ref).abs() < 1e-8, "{o:?}: p {pr} vs {p_ref}");
            }
        }
        let d = confocal_condition(xi[0], xi[1], xi[2], 1, o).unwrap();
        let cfg = presets::confocal(l, xi, 1, o, 256, 1.0, d.eps_ratio, d.zeta0).unwrap();
        let (e, p) = solve_all(&cfg).unwrap();
        let pts: Vec<Point> = (0..40).map(|k| coords.forward(1.4, 0.157 * k as f64)).collect();
        for ((q, (phi, _, _)), (pr, _, _)) in pts.iter().zip(e.potential_at(&pts)).zip(p.pressure_at(&cfg, &pts)) {
            assert!((phi - cfg.h.value(q)).abs() < 1e-9);
            assert!((pr - cfg.p.value(q)).abs() < 1e-8);
        }
    }
}

#[test]
fn detuned_zeta_coefficient() {
    let cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 1.0).unwrap();
    let (_, p) = solve_all(&cfg).unwrap();
    let q = Point::new(3.0, 0.0);
    let (v, _, _) = p.pressure_at(&cfg, &[q])[0];
    // −6 r⁻¹ cos θ
    assert!((v - 36.0 + 2.0).abs() < 1e-10, "{v}");
}

#[test]
fn zero_background_gives_zero_fields() {
    let mut cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 64, 1.0, 2.0, 0.7).unwrap().into_inner();
    cfg.h = cfg.h.scaled(0.0);
    cfg.p = cfg.p.scaled(0.0);
    let cfg = cfg.validate().unwrap();
    let (e, p) = solve_all(&cfg).unwrap();
    assert!(e.phi_core.iter().chain(&e.phi_object).all(|v| *v == 0.0));
    assert!(p.psi_object.iter().chain(&p.psi_region).all(|v| *v == 0.0));
}

#[test]
fn zero_zeta_has_no_slip() {
    let cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 64, 1.0, 5.0 / 3.0, 0.0).unwrap();
    let (_, p) = solve_all(&cfg).unwrap();
    assert!(p.psi_region.iter().all(|v| *v == 0.0));
}

#[test]
fn pressure_rejects_foreign_electric_solution() {
    let a = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 64, 1.0, 2.0, 0.5).unwrap();
    let b = presets::disks([0.5, 1.0, 2.5], 1, Phase::Cos, 64, 1.0, 2.0, 0.5).unwrap();
    let e = solve_electric(&a).unwrap();
    assert!(matches!(solve_pressure(&b, &e), Err(CloakError::CurveMismatch)));
}

#[test]
fn field_samples_by_region() {
    let cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 2.0 / 3.0).unwrap();
    let (e, p) = solve_all(&cfg).unwrap();
    let pts = [Point::new(2.5, 0.0), Point::new(0.1, 0.0), Point::new(0.0, 0.75), Point::new(-1.5, 0.2)];
    let s = eval_fields(&cfg, &e, &p, &pts).unwrap();
    assert_eq!(s[0].region, Region::Exterior);
    let u = s[0].u.unwrap();
    assert!((u - Point::new(-1.0, 0.0)).norm() < 1e-10);
    assert_eq!(s[1].region, Region::Core);
    assert!(s[1].phi.is_none() && s[1].p.is_none() && s[1].u.is_none());
    assert_eq!(s[2].region, Region::Shell);
    assert!(s[2].phi.is_some() && s[2].p.is_none() && s[2].u.is_none());
    assert_eq!(s[3].region, Region::CloakAnnulus);
    let expect = -s[3].grad_p.unwrap() / 12.0 - s[3].grad_phi.unwrap() * (2.0 / 3.0);
    assert!((s[3].u.unwrap() - expect).norm() < 1e-14);

    let cfg0 = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 0.0).unwrap();
    let (e0, p0) = solve_all(&cfg0).unwrap();
    let s = eval_fields(&cfg0, &e0, &p0, &pts[3..]).unwrap();
    assert_eq!(s[0].u.unwrap(), -s[0].grad_p.unwrap() / 12.0);
}

#[test]
fn grid_export() {
    let window = Window { x0: -3.0, x1: 3.0, y0: -3.0, y1: 3.0 };
    let cfg = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 2.0 / 3.0).unwrap();
    let (e, p) = solve_all(&cfg).unwrap();
    let g = export_grid(&cfg, &e, &p, window, 121, 121).unwrap();
    assert_eq!(g.rows.len(), 14641);
    assert!(g.max_exterior_pressure_error() < 1e-8);
    assert!(g.metadata.excluded_rows > 0);
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,region,phi,phi_err,p,p_err,ux,uy");
    assert_eq!(text.lines().count(), 14642);
    let core_row = text.lines().find(|l| l.contains(",core,")).unwrap();
    assert!(core_row.ends_with(",core,,,,,,"), "{core_row}");

    let cfg0 = presets::disks([0.5, 1.0, 2.0], 1, Phase::Cos, 128, 1.0, 5.0 / 3.0, 0.0).unwrap();
    let (e0, p0) = solve_all(&cfg0).unwrap();
    let g0 = export_grid(&cfg0, &e0, &p0, window, 121, 121).unwrap();
    assert!(g0.max_exterior_pressure_error() > 0.1);

    assert_eq!(export_grid(&cfg, &e, &p, window, 2, 2).unwrap().rows.len(), 4);
    let empty = Window { x0: 1.0, x1: 1.0, y0: 0.0, y1: 1.0 };
    assert!(matches!(export_grid(&cfg, &e, &p, empty, 4, 4), Err(CloakError::Empty)));
}

#[test]
fn far_field_decay() {
    let cfg = presets::named_object(eocloak::geometry::NamedShape::Kite, 2.0, 128, 1.0, 2.0, 0.3).unwrap();
    let (e, _) = solve_all(&cfg).unwrap();
    let far = ring(100.0, 16);
    let worst =
        e.potential_at(&far).iter().zip(&far).map(|((v, _, _), q)| (v - cfg.h.value(q)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-3 * 100.0, "{worst}");
    let d = annulus_condition(0.5, 1.0, 2.0, 1).unwrap();
    assert!(d.eps_ratio > 1.0);
}
