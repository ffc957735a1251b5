use geoflex::analysis::{SampleDomain, Sobol};
use geoflex::geom::hopf::hopf_projection;
use geoflex::geom::quat::Quaternion;
use geoflex::geom::{GroupPoint, SelfMap};
use geoflex::hopf::{atlas::base_point, verify_ade, HopfConfig, HopfPipeline, HOPF_C};
use geoflex::zoo::{pack_s2, pack_s3, OddSphereMap, QuatRight};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

fn s2_point() -> impl Strategy<Value = GroupPoint> {
    (-1.0..1.0f64, 0.0..TAU).prop_map(|(z, a)| {
        let r = (1.0 - z * z).sqrt();
        GroupPoint::S2(nalgebra::Vector3::new(r * a.cos(), r * a.sin(), z))
    })
}

fn s3_point() -> impl Strategy<Value = GroupPoint> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("away from zero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
        .prop_map(|v| GroupPoint::S3(Quaternion::from_array(v).normalize().unwrap()))
}

fn neg(p: &GroupPoint) -> GroupPoint {
    match p {
        GroupPoint::S2(x) => GroupPoint::S2(-x),
        GroupPoint::S3(q) => GroupPoint::S3(-*q),
        _ => unreachable!(),
    }
}

fn gap(a: &GroupPoint, b: &GroupPoint) -> f64 {
    a.ambient().iter().zip(b.ambient()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn odd(dim: usize) -> &'static OddSphereMap {
    static S2: OnceLock<OddSphereMap> = OnceLock::new();
    static S3: OnceLock<OddSphereMap> = OnceLock::new();
    let cell = if dim == 2 { &S2 } else { &S3 };
    cell.get_or_init(|| OddSphereMap::build(6.0, dim).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn s2_map_is_odd(p in s2_point()) {
        let m = odd(2);
        prop_assert!(gap(&m.eval(&neg(&p)), &neg(&m.eval(&p))) < 1e-12);
    }

    #[test]
    fn s3_map_is_odd(p in s3_point()) {
        let m = odd(3);
        prop_assert!(gap(&m.eval(&neg(&p)), &neg(&m.eval(&p))) < 1e-12);
    }

    #[test]
    fn s2_preimages_map_to_target(y in s2_point()) {
        let m = odd(2);
        for x in m.preimages(&y).unwrap() {
            prop_assert!(gap(&m.eval(&x), &y) < 1e-8);
        }
    }

    #[test]
    fn s3_preimages_map_to_target(y in s3_point()) {
        let m = odd(3);
        for x in m.preimages(&y).unwrap() {
            prop_assert!(gap(&m.eval(&x), &y) < 1e-8);
        }
    }
}

#[test]
fn packings_respect_separation() {
    for l in [4.0, 8.0, 16.0] {
        let r = 1.0 / l;
        let p2 = pack_s2(l).unwrap();
        let p3 = pack_s3(l).unwrap();
        for (pair, edge) in [p2.separations(), p3.separations()] {
            // balls of radius 1/L with disjoint closures inside the polar cap
            assert!(pair >= 2.0 * r - 1e-12, "L={l}: pair {pair}");
            assert!(edge >= r - 1e-12, "L={l}: edge {edge}");
        }
        assert!(p2.radius == r && p3.radius == r && !p2.is_empty());
    }
}

#[test]
fn odd_degree_is_odd_and_counts_preimages() {
    let y = GroupPoint::S2(nalgebra::Vector3::new(0.3, -0.2, 0.9).normalize());
    for l in [4.0, 8.0] {
        let m = OddSphereMap::build(l, 2).unwrap();
        let deg = m.construction_degree();
        assert_eq!(deg % 2, 1);
        assert!(m.preimages(&y).unwrap().len() as i64 >= deg.abs());
    }
}

#[test]
fn ade_map_is_legendrian() {
    let r = verify_ade(QuatRight::ade().xi, 200);
    assert!(r.frame_residual < 1e-12);
    assert!(r.fd_residual < 1e-6);
    assert!(r.legendrian < 1e-12 && r.inverse_legendrian < 1e-12);
    assert!(r.commutation < 1e-12);
}

fn pipeline() -> &'static HopfPipeline {
    static P: OnceLock<HopfPipeline> = OnceLock::new();
    P.get_or_init(|| HopfPipeline::new(HopfConfig { epsilon: 2.0, ..Default::default() }).unwrap())
}

// Oracle: Riemann sum of the spherical area element of the exponential disk,
// with derivatives taken by central differences of the map itself.
#[test]
fn exponential_disk_has_the_target_area() {
    let p = pipeline();
    let fd = p.fiber(&base_point(0.35, 1.1)).unwrap();
    let (nr, na, h) = (600usize, 256usize, 1e-6);
    let mut area = 0.0;
    for i in 0..nr {
        let r = (i as f64 + 0.5) / nr as f64;
        for j in 0..na {
            let a = TAU * (j as f64 + 0.5) / na as f64;
            let w = Complex64::from_polar(r, a);
            let x = fd.phi2(w);
            let dx = (fd.phi2(w + h) - fd.phi2(w - h)) / (2.0 * h);
            let dy = (fd.phi2(w + Complex64::i() * h) - fd.phi2(w - Complex64::i() * h)) / (2.0 * h);
            area += x.dot(&dx.cross(&dy)) * r;
        }
    }
    area *= TAU / (nr * na) as f64;
    let target = HopfConfig::target_area();
    assert!((target - 4.0 * PI).abs() < 1e-12);
    assert!((area - target).abs() < 1e-3 * target, "area {area}");
}

#[test]
fn lift_stays_close_and_horizontal() {
    let p = pipeline();
    let sobol = Sobol::new(3);
    for i in 1..=12u64 {
        let GroupPoint::S3(x) = SampleDomain::S3.point(&sobol.point(i)) else { unreachable!() };
        let y = p.phi4(x).unwrap();
        assert!(x.angle_to(y) < p.config.epsilon, "displacement {}", x.angle_to(y));
        assert!(p.homotopy(x, 0.0).unwrap().dist(x) < 1e-9);
        assert!(p.homotopy(x, 1.0).unwrap().dist(y) < 1e-9);
        let fd = p.fiber(&hopf_projection(x)).unwrap();
        let s = fd.legendrian_sample(fd.chart.fiber_angle(x), p.config.lift);
        assert!(s.residual < 1e-5, "legendrian residual {}", s.residual);
    }
}

#[test]
fn balanced_fibers_sweep_the_full_circle() {
    let p = pipeline();
    for (eta, phi) in [(-0.8, 0.2), (0.0, 2.5), (0.7, 4.0)] {
        let fd = p.fiber(&base_point(eta, phi)).unwrap();
        assert!(fd.balanced_dev().unwrap().abs() < 1e-9);
        let sweep = HOPF_C * fd.boundary_sweep(64 * p.config.k_min() as usize);
        assert!((sweep - TAU).abs() < 1e-3, "sweep {sweep}");
    }
}
