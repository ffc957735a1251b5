use geoflex::analysis::{fit_exponent, h1_det_check, volume_bound_check};
use geoflex::exponents::{exponent_tables, MeasureOptions};
use geoflex::plot::exponent_svg;
use geoflex::report::{CheckRecord, Report};
use geoflex::suite::{random_polynomials, Suite, SuiteOptions, GROUPS};
use geoflex::zoo::{FamilyId, MapFamily};
use proptest::prelude::*;

proptest! {
    #[test]
    fn fit_recovers_power_law(a in 0.5..4.0f64, c in 0.1..10.0f64, l0 in 1.5..3.0f64) {
        let pairs: Vec<(f64, f64)> = (0..4).map(|i| {
            let l = l0 * 2f64.powi(i);
            (l, c * l.powf(a))
        }).collect();
        let fit = fit_exponent(&pairs).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-10);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
        prop_assert!(fit.residuals.iter().all(|r| r.abs() < 1e-9));
    }

    #[test]
    fn volume_bound_is_sharp(lip in 1.0..20.0f64, n in 2u32..5) {
        let top = lip.powi(n as i32);
        prop_assert!(volume_bound_check(top, lip, 1.0, n).is_ok());
        prop_assert!(volume_bound_check(-top, lip, 1.0, n).is_ok());
        prop_assert!(volume_bound_check(top * 1.01, lip, 1.0, n).is_err());
    }

    #[test]
    fn h1_degree_is_square_of_det(a in -4i64..5, b in -4i64..5, c in -4i64..5, d in -4i64..5) {
        let det = a * d - b * c;
        prop_assert!(h1_det_check(det * det, [[a, b], [c, d]]).is_ok());
        prop_assert!(h1_det_check(det * det + 1, [[a, b], [c, d]]).is_err());
    }
}

#[test]
fn quick_groups_pass() {
    let mut suite = Suite::new(SuiteOptions::default());
    for id in [6u8, 7, 8, 10] {
        let g = suite.run_group(id);
        let bad: Vec<_> = g.records.iter().filter(|r| !r.pass).map(|r| &r.name).collect();
        assert!(g.pass(), "group {id} ({}) failed: {bad:?}", g.title);
        assert_eq!(g.title, GROUPS[id as usize - 1].1);
    }
    assert!(suite.run_group(99).records.is_empty());
}

#[test]
fn report_body_is_deterministic() {
    let body = || {
        let mut s = Suite::new(SuiteOptions::default());
        let mut r = Report::new("selftest");
        for id in [6u8, 8] {
            let g = s.run_group(id);
            r.extend(g.records);
            r.time(g.title, g.seconds);
        }
        r
    };
    let (a, b) = (body(), body());
    assert_eq!(a.body_json(), b.body_json());
    assert!(!a.body_json().contains("seconds"));
    assert!(a.to_json().contains("timings"));
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn csv_quotes_awkward_fields() {
    let mut r = Report::new("x");
    r.push(CheckRecord::below("a, b", 0.5, 1.0, "disk_area").with_note("say \"hi\""));
    r.push(CheckRecord::exact("c", 3, 4, "tk_degree"));
    let csv = r.to_csv();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "name,measured,expected,pass,anchor,note");
    assert!(lines[1].starts_with("\"a, b\",0.5,"));
    assert!(lines[1].ends_with(",\"say \"\"hi\"\"\""));
    assert!(!r.all_pass());
    assert_eq!(r.failures().count(), 1);
}

#[test]
fn random_polynomials_are_reproducible() {
    let a = random_polynomials(20);
    assert_eq!(a, random_polynomials(20));
    for p in &a {
        assert!((1..=6).contains(&p.len()));
        let mut ks: Vec<u32> = p.iter().map(|t| t.1).collect();
        ks.sort_unstable();
        ks.dedup();
        assert_eq!(ks.len(), p.len());
        assert!(p.iter().all(|(c, k)| (1..=40).contains(k) && c.re.abs() <= 1.0 && c.im.abs() <= 1.0));
    }
}

#[test]
fn torus_table_and_plot() {
    let members: Vec<MapFamily> = [2, 3, 4].iter().map(|&k| MapFamily::new(FamilyId::parse("torus3.mu").unwrap(), k, 0)).collect();
    let tables = exponent_tables(&members, &MeasureOptions::default()).unwrap();
    assert_eq!(tables.len(), 1);
    let t = &tables[0];
    for (row, k) in t.rows.iter().zip([2i64, 3, 4]) {
        assert_eq!(row.degree, k.pow(3));
        assert!((row.lip_measured - k as f64).abs() < 1e-6 * k as f64);
    }
    let fit = t.fit.as_ref().unwrap();
    assert!((fit.slope - 3.0).abs() < 1e-6);
    let svg = exponent_svg(fit, t.target_slope, "torus").unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
}
