use eocloak::geometry::{
    make_circle, make_confocal_ellipse, make_named_shape, shrink_conformal, Curve, EllipticCoords, NamedShape, Point,
};
use proptest::prelude::*;

fn smooth_corpus(n: usize) -> Vec<(String, Curve)> {
    let mut out = vec![
        ("circle".to_owned(), make_circle(Point::new(0.3, -0.2), 0.7, n).unwrap()),
        ("ellipse".to_owned(), make_confocal_ellipse(1.0, 0.5, n).unwrap()),
        ("thin ellipse".to_owned(), make_confocal_ellipse(1.0, 0.2, n).unwrap()),
    ];
    for shape in
        [NamedShape::Flower, NamedShape::Kite, NamedShape::Peanut, NamedShape::Polygon(3), NamedShape::Polygon(5)]
    {
        let c = make_named_shape(shape, 1.0, n).unwrap();
        out.push((format!("{shape} core"), shrink_conformal(&c, 0.5).unwrap()));
        out.push((shape.to_string(), c));
    }
    out
}

#[test]
fn perimeter_converges_spectrally() {
    for ((name, a), (_, b)) in smooth_corpus(256).into_iter().zip(smooth_corpus(512)) {
        let diff = (a.perimeter() - b.perimeter()).abs();
        assert!(diff < 1e-8, "{name}: {diff:e}");
    }
}

#[test]
fn normals_point_away_from_centroid_on_convex_curves() {
    let convex = [
        make_circle(Point::new(1.0, 2.0), 0.4, 64).unwrap(),
        make_confocal_ellipse(1.0, 0.3, 128).unwrap(),
        make_named_shape(NamedShape::Peanut, 1.0, 128).unwrap(),
        make_named_shape(NamedShape::Polygon(5), 1.0, 256).unwrap(),
    ];
    for c in &convex {
        let center = c.centroid();
        for (x, nu) in c.nodes().iter().zip(c.normals()) {
            assert!(nu.dot(&(x - center)) > 0.0);
        }
    }
}

#[test]
fn area_and_perimeter_of_ellipse() {
    let (l, xi) = (1.0f64, 0.5f64);
    let c = make_confocal_ellipse(l, xi, 256).unwrap();
    let (a, b) = (l * xi.cosh(), l * xi.sinh());
    assert!((c.area() - std::f64::consts::PI * a * b).abs() < 1e-12);
    assert!(c.centroid().norm() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elliptic_round_trip(xi in 0.1f64..3.0, eta in 0.0f64..std::f64::consts::TAU, l in 0.2f64..3.0) {
        let coords = EllipticCoords::new(l).unwrap();
        let p = coords.forward(xi, eta);
        let (xi2, eta2) = coords.inverse(&p);
        let back = coords.forward(xi2, eta2);
        prop_assert!((xi2 - xi).abs() < 1e-10);
        prop_assert!((back - p).norm() < 1e-10 * l.max(p.norm()));
    }

    #[test]
    fn shrink_keeps_curve_inside(f in 0.2f64..0.9) {
        let object = make_named_shape(NamedShape::Kite, 1.0, 128).unwrap();
        let core = shrink_conformal(&object, f).unwrap();
        prop_assert!((core.area() - f * f * object.area()).abs() < 1e-10);
        prop_assert!(core.nodes().iter().all(|p| object.contains(p)));
    }
}
