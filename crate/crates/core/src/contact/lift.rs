//! Horizontal lifts for the Nil contact form and the Hopf connection.

use super::curve::{PlanarCurve, SphereCurve};
use crate::error::{Error, Result};
use crate::geom::hopf::{hopf_projection, pure, Chart};
use crate::geom::nil::NilPoint;
use crate::geom::quat::Quaternion;
use crate::geom::sphere::Vec3;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum TransportEnd {
    Nil(NilPoint),
    S3(Quaternion),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TransportResult {
    pub endpoint: TransportEnd,
    /// Real fiber offset for Nil; angle in `(−π, π]` for the Hopf circle.
    pub offset: f64,
    pub steps: usize,
    /// Richardson estimate `|Δ_N − Δ_{N/2}| / 15` of the offset error.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LiftOptions {
    pub steps: usize,
    /// Absolute tolerance per unit curve length.
    pub tol: f64,
    /// Step doublings allowed before giving up.
    pub max_depth: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            steps: 1 << 12,
            tol: 1e-8,
            max_depth: 4,
        }
    }
}

pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Splits `[0,1]` at the curve breaks and apportions `steps` over the pieces.
fn step_grid(breaks: &[f64], steps: usize) -> Vec<(f64, f64, usize)> {
    let mut cuts = vec![0.0];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|b| *b > 0.0 && *b < 1.0).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(1.0);
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1], ((w[1] - w[0]) * steps as f64).ceil().max(1.0) as usize))
        .collect()
}

/// Keeps evaluation parameters strictly inside a smooth piece so one-sided
/// derivatives come from the correct side of a break.
fn inside(a: f64, b: f64, s: f64) -> f64 {
    let pad = 1e-13 * (b - a);
    s.clamp(a + pad, b - pad)
}

fn refine<T>(
    opts: &LiftOptions,
    length: f64,
    run: impl Fn(usize) -> (T, f64),
) -> Result<(T, f64, usize, f64)> {
    let tol = opts.tol * length.max(1.0);
    let mut n = opts.steps.max(2);
    let mut coarse = run(n / 2).1;
    let mut last = 0.0;
    for _ in 0..=opts.max_depth {
        let (end, off) = run(n);
        let est = (off - coarse).abs() / 15.0;
        if est <= tol {
            return Ok((end, off, n, est));
        }
        last = est;
        coarse = off;
        n *= 2;
    }
    Err(Error::StepTooCoarse {
        estimate: last,
        tolerance: tol,
    })
}

/// Lift of a planar curve to Nil solving `ż = x ẏ`; the offset is `z(1) − z₀`.
pub fn nil_lift(curve: &PlanarCurve, z0: f64, opts: &LiftOptions) -> Result<TransportResult> {
    let run = |n: usize| {
        let mut z = z0;
        for (a, b, m) in step_grid(&curve.breaks, n) {
            let h = (b - a) / m as f64;
            let rate = |s: f64| {
                let s = inside(a, b, s);
                let p = curve.at(s);
                p[0] * curve.velocity(s)[1]
            };
            for i in 0..m {
                let s = a + i as f64 * h;
                let k1 = rate(s);
                let k2 = rate(s + 0.5 * h);
                let k4 = rate(s + h);
                // right side is independent of z, so k3 = k2
                z += h * (k1 + 4.0 * k2 + k4) / 6.0;
            }
        }
        (z, z - z0)
    };
    let (z, off, steps, est) = refine(opts, curve.length(), run)?;
    let end = curve.at(1.0);
    Ok(TransportResult {
        endpoint: TransportEnd::Nil(NilPoint::new(end[0], end[1], z)),
        offset: off,
        steps,
        error_estimate: est,
    })
}

/// Horizontal velocity `x w` over base velocity `db`:
/// `w = (−⟨ḃ, x k x̄⟩ j + ⟨ḃ, x j x̄⟩ k)/2`.
pub fn horizontal_rate(x: Quaternion, db: &Vec3) -> Quaternion {
    let xj = x * Quaternion::J * x.conj();
    let xk = x * Quaternion::K * x.conj();
    let d = pure(db);
    let w = Quaternion::new(0.0, 0.0, -d.dot(xk) / 2.0, d.dot(xj) / 2.0);
    x * w
}

/// RK4 horizontal lift on `n` steps, renormalized to S³ after every step.
pub fn lift_path(curve: &SphereCurve, start: Quaternion, n: usize) -> Quaternion {
    let mut x = start;
    for (a, b, m) in step_grid(&curve.breaks, n) {
        let h = (b - a) / m as f64;
        for i in 0..m {
            let s = a + i as f64 * h;
            let f = |q: Quaternion, s: f64| horizontal_rate(q, &curve.velocity(inside(a, b, s)));
            let k1 = f(x, s);
            let k2 = f(x + k1.scale(h / 2.0), s + h / 2.0);
            let k3 = f(x + k2.scale(h / 2.0), s + h / 2.0);
            let k4 = f(x + k3.scale(h), s + h);
            x = x + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
            x = x.scale(1.0 / x.norm());
        }
    }
    x
}

/// Fiber offset of `end` relative to `start`; closed curves compare directly,
/// open curves through the reference section of one chart.
fn hopf_offset(curve: &SphereCurve, start: Quaternion, end: Quaternion) -> f64 {
    if curve.closed {
        let r = start.conj() * end;
        return wrap_angle(r.x.atan2(r.w));
    }
    let (b0, b1) = (curve.at(0.0), curve.at(1.0));
    let chart = if Chart::North.margin(&b0).min(Chart::North.margin(&b1))
        >= Chart::South.margin(&b0).min(Chart::South.margin(&b1))
    {
        Chart::North
    } else {
        Chart::South
    };
    wrap_angle(chart.fiber_angle(end) - chart.fiber_angle(start))
}

/// Horizontal lift of a curve on S² starting at `start`.
pub fn hopf_lift(
    curve: &SphereCurve,
    start: Quaternion,
    opts: &LiftOptions,
) -> Result<TransportResult> {
    let gap = (hopf_projection(start) - curve.at(0.0)).norm();
    if gap > 1e-9 {
        return Err(Error::FiberMismatch(gap));
    }
    let run = |n: usize| {
        let end = lift_path(curve, start, n);
        (end, hopf_offset(curve, start, end))
    };
    let (end, off, steps, est) = refine(opts, curve.length(), run)?;
    Ok(TransportResult {
        endpoint: TransportEnd::S3(end),
        offset: off,
        steps,
        error_estimate: est,
    })
}

/// Mean holonomy-to-area ratio and its relative spread.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HolonomyRatio {
    pub c: f64,
    pub spread: f64,
    /// `(area, offset, ratio)` per loop.
    pub per_loop: Vec<(f64, f64, f64)>,
}

pub const MIN_LOOP_AREA: f64 = 1e-6;

pub fn holonomy_area_ratio(samples: &[(f64, f64)]) -> Result<HolonomyRatio> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no loops".into()));
    }
    let mut per_loop = Vec::with_capacity(samples.len());
    for (i, &(area, offset)) in samples.iter().enumerate() {
        if area.abs() < MIN_LOOP_AREA {
            return Err(Error::DegenerateLoop { index: i, area });
        }
        per_loop.push((area, offset, offset / area));
    }
    let ratios: Vec<f64> = per_loop.iter().map(|r| r.2).collect();
    let c = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    Ok(HolonomyRatio {
        c,
        spread: (hi - lo) / c.abs(),
        per_loop,
    })
}

/// Holonomy ratio of planar loops under the Nil contact form; areas supplied by the caller.
pub fn nil_holonomy(loops: &[(PlanarCurve, f64)], opts: &LiftOptions) -> Result<HolonomyRatio> {
    let mut samples = Vec::new();
    for (i, (c, area)) in loops.iter().enumerate() {
        if area.abs() < MIN_LOOP_AREA {
            return Err(Error::DegenerateLoop { index: i, area: *area });
        }
        samples.push((*area, nil_lift(c, 0.0, opts)?.offset));
    }
    holonomy_area_ratio(&samples)
}

/// Holonomy ratio of loops on S², each lifted from its chart section.
pub fn hopf_holonomy(loops: &[(SphereCurve, f64)], opts: &LiftOptions) -> Result<HolonomyRatio> {
    let mut samples = Vec::new();
    for (i, (c, area)) in loops.iter().enumerate() {
        if area.abs() < MIN_LOOP_AREA {
            return Err(Error::DegenerateLoop { index: i, area: *area });
        }
        let b0 = c.at(0.0);
        let start = Chart::for_point(&b0).section(&b0);
        samples.push((*area, hopf_lift(c, start, opts)?.offset));
    }
    holonomy_area_ratio(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::curve::*;

    #[test]
    fn nil_examples() {
        let o = LiftOptions::default();
        let c = PlanarCurve::constant([0.3, 0.4]);
        assert_eq!(nil_lift(&c, 1.0, &o).unwrap().offset, 0.0);
        let circ = planar_circle([0.0, 0.0], 1.0);
        assert!((nil_lift(&circ, 0.0, &o).unwrap().offset - PI).abs() < 1e-10);
        let sq = planar_square(1.7);
        assert!((nil_lift(&sq, 0.0, &o).unwrap().offset - 1.7 * 1.7).abs() < 1e-12);
    }

    #[test]
    fn fiber_mismatch() {
        let c = small_circle(Vec3::new(1.0, 0.0, 0.0), 0.3);
        let r = hopf_lift(&c, Quaternion::J, &LiftOptions::default());
        assert!(matches!(r, Err(Error::FiberMismatch(_))));
    }

    #[test]
    fn lift_stays_horizontal_and_projects() {
        let c = small_circle(Vec3::new(0.2, 0.5, 0.8), 0.7);
        let b0 = c.at(0.0);
        let start = Chart::for_point(&b0).section(&b0);
        let end = lift_path(&c, start, 512);
        assert!((end.norm() - 1.0).abs() < 1e-12);
        assert!((hopf_projection(end) - c.at(1.0)).norm() < 1e-9);
    }

    #[test]
    fn single_loop_spread_zero() {
        let r = holonomy_area_ratio(&[(2.0, 1.0)]).unwrap();
        assert_eq!(r.spread, 0.0);
        assert!(matches!(
            holonomy_area_ratio(&[(1e-9, 1.0)]),
            Err(Error::DegenerateLoop { index: 0, .. })
        ));
    }
}
