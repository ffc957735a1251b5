use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use geoflex::analysis::{volume_bound_check, DEGREE_TOL};
use geoflex::contact::curve::{
    cap_area, planar_circle, planar_polygon, planar_square, polygon_area, small_circle,
    sphere_point_from_i, spherical_polygon, spherical_polygon_area,
};
use geoflex::contact::{hopf_holonomy, nil_holonomy, LiftOptions, PlanarCurve, SphereCurve};
use geoflex::exponents::{exponent_tables, FamilyTable, MeasureOptions};
use geoflex::geom::sphere::Vec3;
use geoflex::hopf::{
    construct, poly_disk_area, poly_disk_area_boundary, residual_field, HopfConfig, HopfPipeline,
    RunOptions,
};
use geoflex::plot::{exponent_svg, field_svg};
use geoflex::report::{csv_field, CheckRecord, Report};
use geoflex::suite::{hopf_records, random_polynomials, Suite, SuiteOptions, GROUPS};
use geoflex::zoo::{FamilyId, MapFamily};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "geoflex", version, about = "Degree, Lipschitz and Legendrian checks for self-maps of geometric 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    plot: Option<PathBuf>,
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Measure degree and Lipschitz constant across family members and fit slopes.
    Exponents {
        /// Comma-separated family ids, e.g. `nil.Sn,torus3.mu`.
        #[arg(long)]
        families: Option<String>,
        /// Comma-separated `k` (or `L`) values.
        #[arg(long)]
        k: Option<String>,
        /// Comma-separated sandwich depths for `nil.Sn`.
        #[arg(long)]
        n: Option<String>,
    },
    /// Residual checks for the Legendrian maps.
    VerifyLegendrian {
        #[arg(long, value_enum)]
        target: Option<Target>,
    },
    /// Holonomy against enclosed area for loops read from a JSON file.
    Holonomy {
        #[arg(long, value_enum)]
        geometry: Option<GeometryArg>,
        #[arg(long)]
        loops: Option<PathBuf>,
    },
    /// Build the C0-small Legendrian map of S3 and report its stages.
    ConstructHopf {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        kmin: Option<u32>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Closed-form disk area of fiber polynomials against boundary quadrature.
    AreaPoly {
        /// `re,im,k` triples separated by `;`.
        #[arg(long)]
        terms: Option<String>,
    },
    /// Run the full verification suite.
    Selftest {
        /// Comma-separated group ids (default: all).
        #[arg(long)]
        groups: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    Nil,
    Hopf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GeometryArg {
    Nil,
    Hopf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    families: Option<Vec<FamilySelection>>,
    resolution: Option<usize>,
    samples: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    plot: Option<PathBuf>,
    target: Option<Target>,
    geometry: Option<GeometryArg>,
    loops: Option<Vec<LoopSpec>>,
    epsilon: Option<f64>,
    kmin: Option<u32>,
    terms: Option<Vec<[f64; 3]>>,
    groups: Option<Vec<u8>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySelection {
    family: String,
    k: Vec<i64>,
    #[serde(default)]
    n: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFile {
    loops: Vec<LoopSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopSpec {
    kind: LoopKind,
    params: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LoopKind {
    Circle,
    Square,
    Polygon,
}

/// Malformed input; exits with status 2.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(ConfigError(msg.into()))
}

const MIN_RESOLUTION: usize = 4;
const MIN_SAMPLES: usize = 16;

/// Flags merged over the config file.
struct Settings {
    cfg: RunConfig,
    out: Option<PathBuf>,
    format: Option<Format>,
    plot: Option<PathBuf>,
    resolution: Option<usize>,
    samples: Option<usize>,
    tol: Option<f64>,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let cfg = match &cli.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                serde_json::from_str::<RunConfig>(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        let s = Settings {
            out: cli.out.clone().or(cfg.out.clone()),
            format: cli.format.or(cfg.format),
            plot: cli.plot.clone().or(cfg.plot.clone()),
            resolution: cli.resolution.or(cfg.resolution),
            samples: cli.samples.or(cfg.samples),
            tol: cli.tol.or(cfg.tol),
            cfg,
        };
        if let Some(r) = s.resolution {
            if r < MIN_RESOLUTION {
                bail!(config_err(format!("resolution {r} below minimum {MIN_RESOLUTION}")));
            }
        }
        if let Some(n) = s.samples {
            if n < MIN_SAMPLES {
                bail!(config_err(format!("samples {n} below minimum {MIN_SAMPLES}")));
            }
        }
        if let Some(t) = s.tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!(config_err(format!("tolerance {t} must be positive")));
            }
        }
        Ok(s)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|_| config_err(format!("bad {what} value '{x}'"))))
        .collect()
}

fn emit(settings: &Settings, body: &str) -> Result<()> {
    match &settings.out {
        Some(p) => write_file(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, body: &str) -> Result<()> {
    std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))
}

fn json_with_timings(report: &Report, extra: serde_json::Value) -> String {
    let timings: Vec<serde_json::Value> = report
        .timings
        .iter()
        .map(|(p, s)| serde_json::json!({ "phase": p, "seconds": s }))
        .collect();
    let v = serde_json::json!({ "report": report, "data": extra, "timings": timings });
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let s = Settings::from_cli(cli)?;
    let report = match &cli.cmd {
        Cmd::Exponents { families, k, n } => exponents(&s, families.as_deref(), k.as_deref(), n.as_deref())?,
        Cmd::VerifyLegendrian { target } => verify_legendrian(&s, target.or(s.cfg.target).unwrap_or(Target::Nil))?,
        Cmd::Holonomy { geometry, loops } => holonomy(&s, geometry.or(s.cfg.geometry), loops.as_deref())?,
        Cmd::ConstructHopf { epsilon, kmin, report } => {
            construct_hopf(&s, epsilon.or(s.cfg.epsilon), kmin.or(s.cfg.kmin), report.as_deref())?
        }
        Cmd::AreaPoly { terms } => area_poly(&s, terms.as_deref())?,
        Cmd::Selftest { groups } => selftest(&s, groups.as_deref())?,
    };
    for f in report.failures() {
        eprintln!("FAIL {}: measured {} expected {} [{}]", f.name, f.measured, f.relation.expected(), f.anchor);
    }
    Ok(report.all_pass())
}

fn selected_families(s: &Settings, families: Option<&str>, k: Option<&str>, n: Option<&str>) -> Result<Vec<MapFamily>> {
    let mut out = Vec::new();
    if let Some(list) = families {
        let ids: Vec<String> = parse_list(list, "family")?;
        if ids.is_empty() {
            bail!(config_err("empty family list"));
        }
        let ks: Vec<i64> = match k {
            Some(k) => parse_list(k, "k")?,
            None => bail!(config_err("--k is required with --families")),
        };
        let ns: Vec<u32> = n.map(|n| parse_list(n, "n")).transpose()?.unwrap_or_default();
        for id in ids {
            let fam = FamilyId::parse(&id).map_err(|e| config_err(e.to_string()))?;
            push_members(&mut out, fam, &ks, &ns)?;
        }
    } else if let Some(sel) = &s.cfg.families {
        if sel.is_empty() {
            bail!(config_err("empty family list"));
        }
        for f in sel {
            let fam = FamilyId::parse(&f.family).map_err(|e| config_err(e.to_string()))?;
            push_members(&mut out, fam, &f.k, &f.n)?;
        }
    } else {
        bail!(config_err("no families selected"));
    }
    if out.is_empty() {
        bail!(config_err("empty family list"));
    }
    Ok(out)
}

fn push_members(out: &mut Vec<MapFamily>, fam: FamilyId, ks: &[i64], ns: &[u32]) -> Result<()> {
    if ks.is_empty() {
        bail!(config_err(format!("{}: empty k list", fam.as_str())));
    }
    let ns: Vec<u32> = match (fam, ns.is_empty()) {
        (FamilyId::Sn, true) => bail!(config_err("nil.Sn needs n values")),
        (FamilyId::Sn, false) => ns.to_vec(),
        _ => vec![0],
    };
    for &k in ks {
        for &n in &ns {
            let m = MapFamily::new(fam, k, n);
            m.validate().map_err(|e| config_err(e.to_string()))?;
            out.push(m);
        }
    }
    Ok(())
}

/// Families whose slope must not exceed 3.
fn rail_applies(f: FamilyId) -> bool {
    matches!(f, FamilyId::Tk | FamilyId::Sn | FamilyId::MuTorus | FamilyId::IotaSol | FamilyId::MuProduct)
}

fn exponents(s: &Settings, families: Option<&str>, k: Option<&str>, n: Option<&str>) -> Result<Report> {
    let members = selected_families(s, families, k, n)?;
    let mut opts = MeasureOptions::default();
    if let Some(r) = s.resolution {
        opts.resolution = r;
    }
    if let Some(n) = s.samples {
        opts.lip_samples = n;
    }
    let tol = s.tol.unwrap_or(DEGREE_TOL);
    let t0 = Instant::now();
    let tables = exponent_tables(&members, &opts)?;
    let mut report = Report::new("exponents");
    report.time("measure", t0.elapsed().as_secs_f64());
    for t in &tables {
        for r in &t.rows {
            let label = r.label();
            if let Some(e) = r.member.expected_degree() {
                report.push(CheckRecord::exact(format!("{label} degree"), r.degree, e, degree_key(t.family)));
            }
            report.push(CheckRecord::below(format!("{label} degree residual"), r.residual, tol, degree_key(t.family)));
            if let Some(p) = r.preimage_degree {
                report.push(CheckRecord::exact(format!("{label} preimage degree"), p, r.degree, "dual_degree"));
            }
            let vb = volume_bound_check(r.degree as f64, r.lip_measured, 1.0, r.dim).is_ok();
            report.push(CheckRecord::exact(format!("{label} volume bound"), vb as i64, 1, "volume_bound"));
        }
        if let (Some(fit), true) = (&t.fit, rail_applies(t.family)) {
            report.push(CheckRecord::within(format!("{} slope at most 3", t.family.as_str()), fit.slope, f64::NEG_INFINITY, 3.0 + 1e-9, "volume_bound"));
        }
    }
    if let Some(p) = &s.plot {
        write_plots(p, &tables)?;
    }
    let body = match s.format.unwrap_or(Format::Csv) {
        Format::Csv => exponents_csv(&tables),
        Format::Json => json_with_timings(&report, serde_json::to_value(&tables)?),
    };
    emit(s, &body)?;
    Ok(report)
}

fn degree_key(f: FamilyId) -> &'static str {
    match f {
        FamilyId::Tk => "tk_degree",
        FamilyId::Sn => "sn_degree",
        FamilyId::MuTorus => "torus_exponent",
        FamilyId::IotaSol => "sol_exponent",
        FamilyId::MuProduct => "product_exponent",
        _ => "odd_map",
    }
}

fn exponents_csv(tables: &[FamilyTable]) -> String {
    let mut out = String::from("family,param,lip_measured,lip_bound,degree,residual,slope,target_slope\n");
    for t in tables {
        let slope = t.fit.as_ref().map_or(String::new(), |f| format!("{:.6}", f.slope));
        for r in &t.rows {
            out.push_str(&format!(
                "{},{},{:.9},{},{},{:.3e},{},{:.6}\n",
                t.family.as_str(),
                csv_field(&r.param()),
                r.lip_measured,
                r.lip_bound.map_or(String::new(), |b| format!("{b:.9}")),
                r.degree,
                r.residual,
                slope,
                t.target_slope
            ));
        }
    }
    out
}

fn write_plots(path: &Path, tables: &[FamilyTable]) -> Result<()> {
    let fitted: Vec<&FamilyTable> = tables.iter().filter(|t| t.fit.is_some()).collect();
    if fitted.is_empty() {
        bail!(config_err("--plot needs a family with at least 3 members"));
    }
    for t in &fitted {
        let fit = t.fit.as_ref().expect("filtered");
        let svg = exponent_svg(fit, t.target_slope, t.family.as_str())?;
        let target = if fitted.len() == 1 {
            path.to_path_buf()
        } else {
            let stem = path.file_stem().and_then(|x| x.to_str()).unwrap_or("plot");
            path.with_file_name(format!("{stem}-{}.svg", t.family.as_str()))
        };
        write_file(&target, &svg)?;
    }
    Ok(())
}

fn verify_legendrian(s: &Settings, target: Target) -> Result<Report> {
    let mut opts = SuiteOptions::default();
    if let Some(n) = s.samples {
        opts.pde_samples = n;
        opts.ade_samples = n;
    }
    let mut suite = Suite::new(opts);
    let mut report = Report::new(format!("verify-legendrian {}", if target == Target::Nil { "nil" } else { "hopf" }));
    let groups: &[u8] = match target {
        Target::Nil => &[2, 3],
        Target::Hopf => &[9, 10],
    };
    for &g in groups {
        let r = suite.run_group(g);
        report.time(r.title, r.seconds);
        report.extend(r.records);
    }
    let body = match s.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(s, &body)?;
    Ok(report)
}

fn nil_curve(l: &LoopSpec, i: usize) -> Result<(PlanarCurve, f64)> {
    let p = &l.params;
    let bad = |m: &str| config_err(format!("loop {i}: {m}"));
    match l.kind {
        LoopKind::Circle => {
            let [cx, cy, r] = p[..] else { return Err(bad("circle needs [cx, cy, r]")) };
            if r <= 0.0 {
                return Err(bad("radius must be positive"));
            }
            Ok((planar_circle([cx, cy], r), std::f64::consts::PI * r * r))
        }
        LoopKind::Square => {
            let [a] = p[..] else { return Err(bad("square needs [side]")) };
            if a <= 0.0 {
                return Err(bad("side must be positive"));
            }
            Ok((planar_square(a), a * a))
        }
        LoopKind::Polygon => {
            if p.len() < 6 || p.len() % 2 != 0 {
                return Err(bad("polygon needs at least 3 vertices [x1, y1, x2, y2, ...]"));
            }
            let v: Vec<[f64; 2]> = p.chunks(2).map(|c| [c[0], c[1]]).collect();
            let a = polygon_area(&v);
            Ok((planar_polygon(v), a))
        }
    }
}

fn sphere_curve(l: &LoopSpec, i: usize) -> Result<(SphereCurve, f64)> {
    let p = &l.params;
    let bad = |m: &str| config_err(format!("loop {i}: {m}"));
    match l.kind {
        LoopKind::Circle => {
            let [x, y, z, rho] = p[..] else { return Err(bad("circle needs [ax, ay, az, rho]")) };
            let axis = Vec3::new(x, y, z);
            if axis.norm() == 0.0 || !(rho > 0.0 && rho < std::f64::consts::PI) {
                return Err(bad("axis must be nonzero and rho in (0, pi)"));
            }
            Ok((small_circle(axis, rho), cap_area(rho)))
        }
        LoopKind::Square => {
            let [rho] = p[..] else { return Err(bad("square needs [rho]")) };
            if !(rho > 0.0 && rho < std::f64::consts::FRAC_PI_2) {
                return Err(bad("rho must be in (0, pi/2)"));
            }
            let v: Vec<Vec3> = (0..4).map(|a| sphere_point_from_i(rho, std::f64::consts::FRAC_PI_2 * a as f64)).collect();
            let area = spherical_polygon_area(&v);
            Ok((spherical_polygon(v), area))
        }
        LoopKind::Polygon => {
            if p.len() < 9 || p.len() % 3 != 0 {
                return Err(bad("polygon needs at least 3 vertices [x1, y1, z1, ...]"));
            }
            let v: Vec<Vec3> = p.chunks(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect();
            if v.iter().any(|x| x.norm() == 0.0) {
                return Err(bad("zero vertex"));
            }
            let v: Vec<Vec3> = v.into_iter().map(|x| x.normalize()).collect();
            let area = spherical_polygon_area(&v);
            Ok((spherical_polygon(v), area))
        }
    }
}

fn holonomy(s: &Settings, geometry: Option<GeometryArg>, loops: Option<&Path>) -> Result<Report> {
    let geometry = geometry.ok_or_else(|| config_err("--geometry nil|hopf is required"))?;
    let specs = match loops {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<LoopFile>(&text)
                .map_err(|e| config_err(format!("{}: {e}", p.display())))?
                .loops
        }
        None => s.cfg.loops.clone().ok_or_else(|| config_err("--loops <file> is required"))?,
    };
    if specs.is_empty() {
        bail!(config_err("empty loop list"));
    }
    let mut lift = LiftOptions::default();
    if let Some(n) = s.samples {
        lift.steps = n;
    }
    let (h, name, default_tol) = match geometry {
        GeometryArg::Nil => {
            let curves = specs.iter().enumerate().map(|(i, l)| nil_curve(l, i)).collect::<Result<Vec<_>>>()?;
            (nil_holonomy(&curves, &lift)?, "nil", 1e-6)
        }
        GeometryArg::Hopf => {
            let curves = specs.iter().enumerate().map(|(i, l)| sphere_curve(l, i)).collect::<Result<Vec<_>>>()?;
            (hopf_holonomy(&curves, &lift)?, "hopf", 1e-3)
        }
    };
    let mut report = Report::new(format!("holonomy {name}"));
    report.push(CheckRecord::below(format!("{name} holonomy spread"), h.spread, s.tol.unwrap_or(default_tol), "holonomy").with_note(format!("C = {:.12}", h.c)));
    let body = match s.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("loop,area,offset,ratio\n");
            for (i, (a, o, r)) in h.per_loop.iter().enumerate() {
                out.push_str(&format!("{i},{a:.12},{o:.12},{r:.12}\n"));
            }
            out
        }
        Format::Json => json_with_timings(&report, serde_json::to_value(&h)?),
    };
    emit(s, &body)?;
    Ok(report)
}

fn construct_hopf(s: &Settings, epsilon: Option<f64>, kmin: Option<u32>, report_path: Option<&Path>) -> Result<Report> {
    let mut config = HopfConfig::default();
    if let Some(e) = epsilon {
        config.epsilon = e;
    }
    config.k_min = kmin;
    config.validate().map_err(|e| config_err(e.to_string()))?;
    let mut opts = RunOptions::default();
    if let Some(n) = s.samples {
        opts.base_samples = n;
    }
    if let Some(r) = s.resolution {
        if let Some(rule) = opts.degree.as_mut() {
            rule.theta_nodes = r;
        }
    }
    let t0 = Instant::now();
    let run = construct(config, &opts)?;
    let mut report = Report::new("construct-hopf");
    report.time("construct", t0.elapsed().as_secs_f64());
    report.extend(hopf_records(&run));
    if let Some(p) = &s.plot {
        let pipe = HopfPipeline::new(config)?;
        let field = residual_field(&pipe, 12, 24, 4)?;
        write_file(p, &field_svg(&field, "legendrian residual over the base sphere")?)?;
    }
    let body = match s.format.unwrap_or(Format::Json) {
        Format::Json => json_with_timings(&report, serde_json::to_value(&run)?),
        Format::Csv => report.to_csv(),
    };
    match report_path {
        Some(p) => write_file(p, &body)?,
        None => emit(s, &body)?,
    }
    Ok(report)
}

fn area_poly(s: &Settings, terms: Option<&str>) -> Result<Report> {
    let polys: Vec<Vec<(Complex64, u32)>> = match terms.map(parse_terms).transpose()? {
        Some(t) => vec![t],
        None => match &s.cfg.terms {
            Some(t) => vec![triples_to_terms(t)?],
            None => random_polynomials(s.samples.unwrap_or(100)),
        },
    };
    let tol = s.tol.unwrap_or(1e-8);
    let mut report = Report::new("area-poly");
    let mut csv = String::from("index,terms,closed_form,boundary,rel_error\n");
    let mut worst: f64 = 0.0;
    for (i, p) in polys.iter().enumerate() {
        let closed = poly_disk_area(p);
        let boundary = poly_disk_area_boundary(p, s.resolution.unwrap_or(512).max(4 * p.iter().map(|t| t.1 as usize).max().unwrap_or(1) + 4));
        let rel = if closed == 0.0 { boundary.abs() } else { (closed - boundary).abs() / closed.abs() };
        worst = worst.max(rel);
        let desc: Vec<String> = p.iter().map(|(a, k)| format!("{}{:+}i:{}", a.re, a.im, k)).collect();
        csv.push_str(&format!("{i},{},{closed:.15},{boundary:.15},{rel:.3e}\n", csv_field(&desc.join(" "))));
    }
    report.push(CheckRecord::below(format!("closed form vs boundary, {} polynomials", polys.len()), worst, tol, "disk_area"));
    let body = match s.format.unwrap_or(Format::Csv) {
        Format::Csv => csv,
        Format::Json => report.to_json() + "\n",
    };
    emit(s, &body)?;
    Ok(report)
}

fn parse_terms(s: &str) -> Result<Vec<(Complex64, u32)>> {
    let triples = s
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<f64> = parse_list(t, "term")?;
            match v[..] {
                [re, im, k] => Ok([re, im, k]),
                _ => Err(config_err(format!("term '{t}' must be re,im,k"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    triples_to_terms(&triples)
}

fn triples_to_terms(t: &[[f64; 3]]) -> Result<Vec<(Complex64, u32)>> {
    if t.is_empty() {
        bail!(config_err("empty polynomial"));
    }
    let mut out: Vec<(Complex64, u32)> = Vec::new();
    for &[re, im, k] in t {
        if k < 0.0 || k.fract() != 0.0 {
            bail!(config_err(format!("exponent {k} must be a non-negative integer")));
        }
        let k = k as u32;
        if out.iter().any(|x| x.1 == k) {
            bail!(config_err(format!("exponent {k} repeated")));
        }
        out.push((Complex64::new(re, im), k));
    }
    Ok(out)
}

fn selftest(s: &Settings, groups: Option<&str>) -> Result<Report> {
    let ids: Vec<u8> = match groups {
        Some(g) => parse_list(g, "group")?,
        None => s.cfg.groups.clone().unwrap_or_else(|| GROUPS.iter().map(|g| g.0).collect()),
    };
    if ids.is_empty() {
        bail!(config_err("empty group list"));
    }
    if let Some(bad) = ids.iter().find(|i| !GROUPS.iter().any(|g| g.0 == **i)) {
        bail!(config_err(format!("unknown group {bad}")));
    }
    let mut opts = SuiteOptions::default();
    if let Some(n) = s.samples {
        opts.measure.lip_samples = n;
        opts.pde_samples = n;
    }
    if let Some(r) = s.resolution {
        opts.measure.resolution = r;
    }
    let mut suite = Suite::new(opts);
    let mut report = Report::new("selftest");
    for id in ids {
        let r = suite.run_group(id);
        eprintln!("[{}] {:>2} {} ({:.1}s)", if r.pass() { "PASS" } else { "FAIL" }, r.id, r.title, r.seconds);
        report.time(r.title, r.seconds);
        report.extend(r.records);
    }
    let body = match s.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(s, &body)?;
    Ok(report)
}
