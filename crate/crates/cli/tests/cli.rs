use std::path::Path;
use std::process::{Command, Output};

fn geoflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoflex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exponents_csv_has_the_documented_columns() {
    let o = geoflex(&["exponents", "--families", "torus3.mu", "--k", "2,3,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "family,param,lip_measured,lip_bound,degree,residual,slope,target_slope");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[4]).collect::<Vec<_>>(), ["8", "27", "64"]);
    assert!((rows[0][6].parse::<f64>().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn exponents_json_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let plot = dir.path().join("t.svg");
    let o = geoflex(&[
        "exponents", "--families", "h2xe1.mu", "--k", "2,3,5", "--format", "json",
        "--out", out.to_str().unwrap(), "--plot", plot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v.get("report").is_some() && v.get("data").is_some() && v.get("timings").is_some());
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("<svg"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"families": [], "colour": "red"}"#);
    let o = geoflex(&["--config", &unknown, "exponents"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));

    let empty = write(dir.path(), "e.json", r#"{"families": []}"#);
    assert_eq!(geoflex(&["--config", &empty, "exponents"]).status.code(), Some(2));

    assert_eq!(geoflex(&["exponents", "--families", "torus3.mu", "--k", "2,3", "--resolution", "2"]).status.code(), Some(2));
    assert_eq!(geoflex(&["exponents", "--families", "torus3.mu", "--k", "2,3", "--samples", "3"]).status.code(), Some(2));
    assert_eq!(geoflex(&["area-poly", "--terms", "1,0", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(geoflex(&["selftest", "--groups", "42"]).status.code(), Some(2));
}

#[test]
fn config_file_selects_families() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"families": [{"family": "nil.Tk", "k": [2, 3, 4]}], "format": "csv"}"#);
    let o = geoflex(&["--config", &cfg, "exponents"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let degrees: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(degrees, ["16", "81", "256"]);
}

#[test]
fn holonomy_matches_area() {
    let dir = tempfile::tempdir().unwrap();
    let loops = write(
        dir.path(),
        "l.json",
        r#"{"loops": [
            {"kind": "circle", "params": [0.2, -0.1, 0.7]},
            {"kind": "square", "params": [1.5]},
            {"kind": "polygon", "params": [0, 0, 1, 0, 0, 2]}
        ]}"#,
    );
    let o = geoflex(&["holonomy", "--geometry", "nil", "--loops", &loops]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "loop,area,offset,ratio");
    let areas = [std::f64::consts::PI * 0.49, 2.25, 1.0];
    for (l, a) in lines.zip(areas) {
        let f: Vec<f64> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!((f[0] - a).abs() < 1e-9 && (f[1] - a).abs() < 1e-8 && (f[2] - 1.0).abs() < 1e-8, "{l}");
    }

    let caps = write(dir.path(), "h.json", r#"{"loops": [{"kind": "circle", "params": [0, 0, 1, 0.6]}]}"#);
    let o = geoflex(&["holonomy", "--geometry", "hopf", "--loops", &caps]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn area_poly_closed_form_agrees() {
    let o = geoflex(&["area-poly", "--terms", "1,0,3;0.5,0.5,7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    // π(1·3 + 0.5·7)
    assert!((row[2].parse::<f64>().unwrap() - 6.5 * std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(geoflex(&["area-poly"]).status.code(), Some(0));
}

#[test]
fn nil_legendrian_reports_the_failing_weight() {
    let o = geoflex(&["verify-legendrian", "--target", "nil"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL contact residual, cross weight 1"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let recs = v["report"]["records"].as_array().unwrap();
    assert!(recs.iter().filter(|r| r["pass"] == false).all(|r| r["name"].as_str().unwrap().contains("weight 1")));
}

#[test]
fn selftest_body_is_deterministic() {
    let run = || {
        let o = geoflex(&["selftest", "--groups", "6,7,8,10"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["report"].clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn selftest_csv_format() {
    let o = geoflex(&["selftest", "--groups", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("name,measured,expected,pass,anchor,note\n"));
    assert!(stderr(&o).contains("[PASS]  6 disk area formula"));
}
