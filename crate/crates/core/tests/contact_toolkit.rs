use geoflex::contact::circle::{angle_gap, circle_dev, circle_linearize, CircleMap};
use geoflex::contact::curve::{cap_area, planar_circle, planar_polygon, polygon_area, small_circle};
use geoflex::contact::lift::{hopf_lift, nil_lift, wrap_angle, LiftOptions, TransportEnd};
use geoflex::geom::hopf::{hopf_projection, Chart};
use geoflex::geom::sphere::Vec3;
use geoflex::hopf::{poly_disk_area, poly_disk_area_boundary, HOPF_C};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn trig_map() -> impl Strategy<Value = (i64, f64, f64, f64)> {
    (-3i64..=3, -0.3..0.3f64, -0.2..0.2f64, -PI..PI)
}

fn make(d: i64, a: f64, b: f64, c: f64) -> CircleMap {
    CircleMap::from_lift(move |x| d as f64 * x + a * x.sin() + b * (3.0 * x).cos() + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_deviation_is_its_angle(theta in -10.0..10.0f64) {
        prop_assert!((circle_dev(&CircleMap::rotation(theta)).unwrap() - theta).abs() < 1e-10);
    }

    #[test]
    fn deviation_of_trig_map_is_its_constant((d, a, b, c) in trig_map()) {
        // mean of a sin x + b cos 3x over a period vanishes
        prop_assert!((circle_dev(&make(d, a, b, c)).unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn balanced_composition_has_zero_deviation((_, a, b, c) in trig_map()) {
        let g = make(1, a, b, c);
        let bal = g.compose(&CircleMap::rotation(-circle_dev(&g).unwrap()));
        prop_assert!(circle_dev(&bal).unwrap().abs() < 1e-9);
    }

    #[test]
    fn linearization_commutes_with_isometries((d, a, b, c) in trig_map(), r1 in -PI..PI, r2 in -PI..PI, flip1: bool, flip2: bool) {
        let iso = |r: f64, flip: bool| if flip { CircleMap::conjugation().compose(&CircleMap::rotation(r)) } else { CircleMap::rotation(r) };
        let (g1, g2) = (iso(r1, flip1), iso(r2, flip2));
        let f = make(d, a, b, c);
        let lhs = circle_linearize(&g1.compose(&f).compose(&g2)).unwrap();
        let rhs = g1.compose(&circle_linearize(&f).unwrap()).compose(&g2);
        for i in 0..32 {
            let x = TAU * i as f64 / 32.0;
            prop_assert!(angle_gap(lhs.lift(x), rhs.lift(x)) < 1e-9);
        }
    }

    #[test]
    fn nil_circle_holonomy_is_area(cx in -2.0..2.0f64, cy in -2.0..2.0f64, r in 0.05..2.0f64) {
        let off = nil_lift(&planar_circle([cx, cy], r), 0.3, &LiftOptions::default()).unwrap().offset;
        prop_assert!((off - PI * r * r).abs() < 1e-8 * (1.0 + PI * r * r));
    }

    #[test]
    fn nil_triangle_holonomy_is_area(v in prop::array::uniform6(-1.0..1.0f64)) {
        let pts = vec![[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]];
        let area = polygon_area(&pts);
        prop_assume!(area.abs() > 1e-3);
        let off = nil_lift(&planar_polygon(pts), 0.0, &LiftOptions::default()).unwrap().offset;
        prop_assert!((off - area).abs() < 1e-9);
    }

    #[test]
    fn hopf_cap_holonomy_is_half_the_area(ax in 0.3..1.0f64, ay in -1.0..1.0f64, az in -1.0..1.0f64, rho in 0.1..1.0f64) {
        let axis = Vec3::new(ax, ay, az).normalize();
        let c = small_circle(axis, rho);
        let b0 = c.at(0.0);
        let start = Chart::for_point(&b0).section(&b0);
        let t = hopf_lift(&c, start, &LiftOptions::default()).unwrap();
        let TransportEnd::S3(end) = t.endpoint else { panic!("hopf lift ends in S3") };
        prop_assert!((hopf_projection(end) - b0).norm() < 1e-9);
        prop_assert!((wrap_angle(t.offset) - wrap_angle(HOPF_C * cap_area(rho))).abs() < 1e-6);
    }

    #[test]
    fn disk_area_closed_form_matches_boundary(
        coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=6),
        ks in prop::collection::btree_set(1u32..=40, 6),
    ) {
        let terms: Vec<(Complex64, u32)> = coeffs.iter().zip(ks.iter()).map(|(&(a, b), &k)| (Complex64::new(a, b), k)).collect();
        let closed = poly_disk_area(&terms);
        let boundary = poly_disk_area_boundary(&terms, 256);
        prop_assert!((closed - boundary).abs() <= 1e-8 * closed.abs());
    }
}

#[test]
fn degree_follows_the_lift() {
    assert_eq!(make(-2, 0.1, 0.0, 0.0).degree(), -2);
    assert_eq!(CircleMap::conjugation().degree(), -1);
    let sampled = CircleMap::from_angles(&(0..256).map(|i| wrap_angle(3.0 * TAU * i as f64 / 256.0 + 0.4)).collect::<Vec<_>>()).unwrap();
    assert_eq!(sampled.degree(), 3);
    assert!((circle_dev(&sampled).unwrap() - 0.4).abs() < 1e-9);
}

#[test]
fn single_monomial_area() {
    let a = Complex64::new(0.6, -0.8);
    assert!((poly_disk_area(&[(a, 5)]) - 5.0 * PI).abs() < 1e-12);
}
