//! End-to-end construction with per-stage diagnostics.

use super::atlas::{base_point, convert_fiber, AtlasReport, ChartAtlas};
use super::degree::{degree_phi4, PullbackDegree, PullbackRule};
use super::pipeline::{FiberData, HopfConfig, HopfPipeline, HOPF_C};
use super::poly::{eval_poly, eval_poly_deriv, poly_disk_area};
use crate::analysis::Sobol;
use crate::error::Result;
use crate::geom::hopf::Chart;
use crate::quadrature::{composite, gauss_legendre};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunOptions {
    pub base_samples: usize,
    pub angles_per_fiber: usize,
    pub degree: Option<PullbackRule>,
    /// Repeat the Legendrian residual on [`HopfConfig::coarse`].
    pub refinement: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            base_samples: 100,
            angles_per_fiber: 10,
            degree: Some(PullbackRule::default()),
            refinement: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Phi1Report {
    pub exponents: [u32; 2],
    /// `sup |max_i |a_i| − 1|`.
    pub max_coefficient_gap: f64,
    /// Chart-N and chart-S evaluations of the same `E` point on the overlap.
    pub overlap_residual: f64,
    /// `inf π Σ|a_i|² k_i / (π k_min)`.
    pub min_area_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Phi2Report {
    pub target_area: f64,
    pub max_area_error: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub max_radius_length: f64,
    /// `F(b, ·)` increases on a 32-point `t` grid at every sample.
    pub monotone: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Phi3Report {
    /// `sup |C·Area(φ₃(sector)) − θ|` over random sectors, by direct quadrature.
    pub max_sector_error: f64,
    /// `sup |Dev(ψ_b)|`.
    pub max_balanced_dev: f64,
    /// `sup |Dev(f_b)` trapezoid − Fourier closed form|.
    pub dev_route_gap: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Phi4Report {
    pub samples: usize,
    pub legendrian_max: f64,
    pub coarse_legendrian_max: Option<f64>,
    pub c0_max: f64,
    /// `sup |C·(boundary sweep) − 2π|`.
    pub max_sweep_error: f64,
    pub degree: Option<PullbackDegree>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HopfRun {
    pub config: HopfConfig,
    pub k_min: u32,
    pub atlas: AtlasReport,
    pub phi1: Phi1Report,
    pub phi2: Phi2Report,
    pub phi3: Phi3Report,
    pub phi4: Phi4Report,
}

/// Area-uniform base samples `(η, φ)`.
pub fn base_samples(count: usize, skip: u64) -> Vec<(f64, f64)> {
    let s = Sobol::new(2);
    (0..count)
        .map(|i| {
            let u = s.point(skip + i as u64);
            (2.0 * u[0] - 1.0, TAU * u[1])
        })
        .collect()
}

/// `Area(φ₂(sector α ∈ [a0, a1]))` by Gauss–Legendre in both directions, independent
/// of the Fourier representation used to build `ψ_b`.
pub fn sector_area_direct(fd: &FiberData, a0: f64, a1: f64, k_min: u32) -> f64 {
    let span = (40.0 / k_min as f64).min(1.0);
    let (mut rs, mut rw) = composite(1.0 - span, 1.0, 48, 10);
    let (ri, wi) = composite(0.0, 1.0 - span, 4, 10);
    rs.extend(ri);
    rw.extend(wi);
    let panels = ((a1 - a0) / 0.1).ceil().max(1.0) as usize;
    let (ax, aw) = composite(a0, a1, panels, 16);
    let mut acc = 0.0;
    for (a, wa) in ax.iter().zip(&aw) {
        for (r, wr) in rs.iter().zip(&rw) {
            let z = Complex64::from_polar(*r, *a);
            let rho = fd.t * eval_poly(&fd.terms, z).norm();
            let j = fd.t * fd.t * eval_poly_deriv(&fd.terms, z).norm_sqr();
            acc += wa * wr * r * j * crate::geom::sphere::sinc(rho);
        }
    }
    acc
}

/// Largest Legendrian residual over `angles` fiber angles, on a `rows × cols` grid in `(η, φ)`.
pub fn residual_field(p: &HopfPipeline, rows: usize, cols: usize, angles: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let eta = 1.0 - 2.0 * (i as f64 + 0.5) / rows as f64;
        let mut row = Vec::with_capacity(cols);
        for j in 0..cols {
            let phi = TAU * (j as f64 + 0.5) / cols as f64;
            let fd = p.fiber(&base_point(eta, phi))?;
            let worst = (0..angles)
                .map(|a| fd.legendrian_sample(TAU * (a as f64 + 0.25) / angles as f64, p.config.lift).residual)
                .fold(0.0, f64::max);
            row.push(worst);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn construct(config: HopfConfig, opts: &RunOptions) -> Result<HopfRun> {
    let p = HopfPipeline::new(config)?;
    let k_min = config.k_min();
    let bases = base_samples(opts.base_samples, 1);
    let sobol = Sobol::new(3);

    let mut phi1 = Phi1Report {
        exponents: [p.phi1.k_north, p.phi1.k_south],
        max_coefficient_gap: 0.0,
        overlap_residual: 0.0,
        min_area_ratio: f64::INFINITY,
    };
    let mut phi2 = Phi2Report {
        target_area: HopfConfig::target_area(),
        max_area_error: 0.0,
        t_min: f64::INFINITY,
        t_max: 0.0,
        max_radius_length: 0.0,
        monotone: true,
    };
    let mut phi3 = Phi3Report { max_sector_error: 0.0, max_balanced_dev: 0.0, dev_route_gap: 0.0 };
    let mut phi4 = Phi4Report {
        samples: 0,
        legendrian_max: 0.0,
        coarse_legendrian_max: None,
        c0_max: 0.0,
        max_sweep_error: 0.0,
        degree: None,
    };
    let coarse = if opts.refinement { Some(HopfPipeline::new(config.coarse())?) } else { None };
    let mut coarse_max: f64 = 0.0;
    let (gx, _) = gauss_legendre(32);

    for (i, (eta, phi)) in bases.iter().enumerate() {
        let b = base_point(*eta, *phi);
        let chart = Chart::for_point(&b);
        let terms = p.phi1.terms(&b, chart);
        let m = terms.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max);
        phi1.max_coefficient_gap = phi1.max_coefficient_gap.max((m - 1.0).abs());
        phi1.min_area_ratio = phi1.min_area_ratio.min(poly_disk_area(&terms) / (PI * k_min as f64));
        if eta.abs() < 0.6 {
            let w = Complex64::from_polar(0.9, *phi * 3.0);
            let other = chart.other();
            let a = p.phi1.eval(&b, chart, w);
            let c = p.phi1.eval(&b, other, convert_fiber(&b, chart, other, w));
            phi1.overlap_residual = phi1.overlap_residual.max((a - c).norm());
        }

        let fd = p.fiber(&b)?;
        phi2.max_area_error = phi2.max_area_error.max((fd.area - phi2.target_area).abs());
        phi2.t_min = phi2.t_min.min(fd.t);
        phi2.t_max = phi2.t_max.max(fd.t);
        let mut prev = 0.0;
        for x in &gx {
            let t = 0.5 * (x + 1.0) * config.t_max();
            let (f, _) = p.disk_area(&fd.terms, t);
            if f <= prev {
                phi2.monotone = false;
            }
            prev = f;
        }

        phi3.max_balanced_dev = phi3.max_balanced_dev.max(fd.balanced_dev()?.abs());
        phi3.dev_route_gap = phi3.dev_route_gap.max((fd.dev - fd.dev_closed).abs());
        let u = sobol.point(i as u64 + 1);
        let (th0, th) = (TAU * u[0], TAU * u[1]);
        let (a0, a1) = (fd.psi(th0), fd.psi(th0 + th));
        let err = (HOPF_C * sector_area_direct(&fd, a0, a1, k_min) - th).abs();
        phi3.max_sector_error = phi3.max_sector_error.max(err);

        phi4.max_sweep_error =
            phi4.max_sweep_error.max((HOPF_C * fd.boundary_sweep(64 * k_min as usize) - TAU).abs());
        let cfd = match &coarse {
            Some(c) => Some(c.fiber(&b)?),
            None => None,
        };
        for j in 0..opts.angles_per_fiber {
            let theta = TAU * ((j as f64 + u[2]) / opts.angles_per_fiber as f64);
            let s = fd.legendrian_sample(theta, config.lift);
            phi2.max_radius_length = phi2.max_radius_length.max(fd.radius_length(theta));
            phi4.legendrian_max = phi4.legendrian_max.max(s.residual);
            phi4.c0_max = phi4.c0_max.max(s.displacement);
            phi4.samples += 1;
            if let (Some(c), Some(cf)) = (&coarse, &cfd) {
                coarse_max = coarse_max.max(cf.legendrian_sample(theta, c.config.lift).residual);
            }
        }
    }
    if coarse.is_some() {
        phi4.coarse_legendrian_max = Some(coarse_max);
    }
    if let Some(rule) = &opts.degree {
        phi4.degree = Some(degree_phi4(&p, rule)?);
    }
    Ok(HopfRun { config, k_min, atlas: ChartAtlas::check(720), phi1, phi2, phi3, phi4 })
}
