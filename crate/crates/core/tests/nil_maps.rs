use geoflex::analysis::{degree_preimage, degree_quadrature, Domain};
use geoflex::geom::nil::{contact_form, lattice_gap, nil_mul, nil_reduce, NilFrame, NilPoint};
use geoflex::geom::{GroupPoint, SelfMap};
use geoflex::legendrian::LegendrianSeries;
use geoflex::zoo::{eval_tk, SnMap, TkMap};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;

fn nil() -> impl Strategy<Value = NilPoint> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| NilPoint::new(x, y, z))
}

fn close(a: NilPoint, b: NilPoint, tol: f64) -> bool {
    (a.x - b.x).abs() < tol && (a.y - b.y).abs() < tol && (a.z - b.z).abs() < tol
}

proptest! {
    #[test]
    fn group_law_is_associative(p in nil(), q in nil(), r in nil()) {
        prop_assert!(close(nil_mul(nil_mul(p, q), r), nil_mul(p, nil_mul(q, r)), 1e-12));
    }

    #[test]
    fn scaling_is_a_homomorphism(p in nil(), q in nil(), k in 2i64..5) {
        let lhs = eval_tk(k, nil_mul(p, q));
        let rhs = nil_mul(eval_tk(k, p), eval_tk(k, q));
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn reduction_stays_in_the_orbit(p in nil()) {
        let r = nil_reduce(p);
        prop_assert!(lattice_gap(r, p) < 1e-12);
        prop_assert!([r.x, r.y, r.z].iter().all(|c| (0.0..1.0).contains(c)));
        prop_assert!(close(nil_reduce(r), r, 1e-14));
    }

    #[test]
    fn preimages_hit_the_target(x in 0.0..1.0f64, y in 0.0..1.0f64, z in 0.0..1.0f64, k in 2i64..4) {
        let m = TkMap { k };
        let t = NilPoint::new(x, y, z);
        let pre = m.preimages(&GroupPoint::Nil(t)).unwrap();
        prop_assert_eq!(pre.len() as i64, k.pow(4));
        for p in pre {
            let GroupPoint::Nil(q) = m.eval(&p) else { unreachable!() };
            prop_assert!(lattice_gap(q, t) < 1e-9);
        }
    }

    #[test]
    fn sandwich_fiber_goes_horizontal(p in nil()) {
        let s = LegendrianSeries::double_cross();
        // `∂z` pushed forward through the coordinate Jacobian, then tested against `dz − x dy`
        let j = s.phi_jacobian(p);
        let v = j * Vector3::z();
        prop_assert!(contact_form(s.eval_phi(p), v).abs() < 1e-9);
    }

    #[test]
    fn series_commutes_with_the_lattice(p in nil()) {
        prop_assert!(LegendrianSeries::double_cross().equivariance_residual(p) < 1e-10);
    }

    #[test]
    fn frame_matches_coordinate_jacobian(p in nil()) {
        let s = LegendrianSeries::double_cross();
        let fp = s.eval_phi(p);
        let h = 1e-6;
        let mut j = Matrix3::zeros();
        for c in 0..3 {
            let mut a = [p.x, p.y, p.z];
            let mut b = a;
            a[c] += h;
            b[c] -= h;
            let (fa, fb) = (s.eval_phi(NilPoint::new(a[0], a[1], a[2])), s.eval_phi(NilPoint::new(b[0], b[1], b[2])));
            j.set_column(c, &((fa.to_vector() - fb.to_vector()) / (2.0 * h)));
        }
        let fd = NilFrame::at(fp).matrix().try_inverse().unwrap() * j * NilFrame::at(p).matrix();
        prop_assert!((fd - s.phi_frame(p)).abs().max() < 1e-5);
    }
}

#[test]
fn scaling_degrees_agree_for_small_k() {
    let y = GroupPoint::Nil(NilPoint::new(0.41, 0.13, 0.77));
    for k in 2..=5 {
        let m = TkMap { k };
        let q = degree_quadrature(&m, &Domain::NilCube, 8, 1).unwrap();
        let p = degree_preimage(&m, &y).unwrap();
        assert_eq!(q.value, k.pow(4));
        assert_eq!(p.value, q.value);
    }
}

// Oracle: midpoint rule on the central-difference Jacobian of the cover map,
// independent of the analytic frame and of the refinement driver.
#[test]
fn sandwich_degree_by_brute_force() {
    let sn = SnMap::new(2, 1);
    let n = [96usize, 12, 24];
    let h = 1e-6;
    let mut total = 0.0;
    for i in 0..n[0] {
        for j in 0..n[1] {
            for l in 0..n[2] {
                let u = [(i as f64 + 0.5) / n[0] as f64, (j as f64 + 0.5) / n[1] as f64, (l as f64 + 0.5) / n[2] as f64];
                let mut jac = Matrix3::zeros();
                for c in 0..3 {
                    let (mut a, mut b) = (u, u);
                    a[c] += h;
                    b[c] -= h;
                    let fa = sn.eval_cover(NilPoint::new(a[0], a[1], a[2])).to_vector();
                    let fb = sn.eval_cover(NilPoint::new(b[0], b[1], b[2])).to_vector();
                    jac.set_column(c, &((fa - fb) / (2.0 * h)));
                }
                total += jac.determinant();
            }
        }
    }
    let raw = total / (n[0] * n[1] * n[2]) as f64;
    assert!((raw - 256.0).abs() < 0.5, "brute-force degree {raw}");
}
