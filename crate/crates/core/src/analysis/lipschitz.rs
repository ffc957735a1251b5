use super::sobol::Sobol;
use crate::geom::lattice::SolPoint;
use crate::geom::nil::NilPoint;
use crate::geom::quat::Quaternion;
use crate::geom::sphere::Vec3;
use crate::geom::{frame_differential, operator_norm, GroupPoint, SelfMap};
use nalgebra::DMatrix;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LipMethod {
    AnalyticConstant,
    SampledSvd,
}

/// Sampled supremum of the differential norm. Sampled values are lower bounds.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LipschitzReport {
    pub sup: f64,
    pub witness: GroupPoint,
    pub samples: usize,
    /// Samples dropped because they sat on a seam or the differential failed.
    pub skipped: usize,
    pub method: LipMethod,
}

/// Parameterization of a sampling domain by the unit cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleDomain {
    NilCube,
    TorusCube,
    SolCube,
    ProductCube,
    /// Area-uniform on S².
    S2,
    /// Volume-uniform on S³.
    S3,
    S2S1,
}

impl SampleDomain {
    pub fn dim(self) -> usize {
        match self {
            SampleDomain::S2 => 2,
            _ => 3,
        }
    }

    pub fn point(self, u: &[f64]) -> GroupPoint {
        match self {
            SampleDomain::NilCube => GroupPoint::Nil(NilPoint::new(u[0], u[1], u[2])),
            SampleDomain::TorusCube => GroupPoint::Torus([u[0], u[1], u[2]]),
            SampleDomain::SolCube => GroupPoint::Sol(SolPoint::new(u[0], u[1], u[2])),
            SampleDomain::ProductCube => GroupPoint::Product {
                s: [u[0], u[1]],
                t: u[2],
            },
            SampleDomain::S2 => GroupPoint::S2(s2_point(u[0], u[1])),
            SampleDomain::S3 => {
                let (a, b) = ((1.0 - u[0]).max(0.0).sqrt(), u[0].max(0.0).sqrt());
                let (s1, c1) = (TAU * u[1]).sin_cos();
                let (s2, c2) = (TAU * u[2]).sin_cos();
                GroupPoint::S3(Quaternion::new(a * c1, a * s1, b * c2, b * s2))
            }
            SampleDomain::S2S1 => GroupPoint::S2S1 {
                x: s2_point(u[0], u[1]),
                z: TAU * u[2],
            },
        }
    }

    pub fn for_geometry(g: crate::geom::Geometry) -> Self {
        use crate::geom::Geometry as G;
        match g {
            G::Nil => SampleDomain::NilCube,
            G::Torus3 => SampleDomain::TorusCube,
            G::SolBundle => SampleDomain::SolCube,
            G::H2xE1 => SampleDomain::ProductCube,
            G::S2 => SampleDomain::S2,
            G::S3 => SampleDomain::S3,
            G::S2xS1 => SampleDomain::S2S1,
        }
    }
}

fn s2_point(u: f64, v: f64) -> Vec3 {
    let z = 2.0 * u - 1.0;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = (TAU * v).sin_cos();
    Vec3::new(r * c, r * s, z)
}

/// Options for [`lipschitz_sup`].
#[derive(Debug, Clone, Copy)]
pub struct LipOptions {
    pub samples: usize,
    /// Hill-climbing starts taken from the best samples.
    pub starts: usize,
    pub climb_iters: usize,
    /// Samples closer than this to a seam are skipped.
    pub seam_margin: f64,
    /// Declares the frame differential constant; one evaluation suffices.
    pub constant: bool,
}

impl Default for LipOptions {
    fn default() -> Self {
        LipOptions {
            samples: 10_000,
            starts: 8,
            climb_iters: 120,
            seam_margin: 1e-4,
            constant: false,
        }
    }
}

/// Supremum of the largest singular value of the frame differential over a
/// Sobol sample, refined by hill climbing in the cube parameters.
pub fn lipschitz_sup(
    map: &dyn SelfMap,
    domain: SampleDomain,
    opts: &LipOptions,
    seam_distance: Option<&dyn Fn(&GroupPoint) -> f64>,
) -> LipschitzReport {
    let norm_at = |u: &[f64]| -> Option<(f64, GroupPoint)> {
        let p = domain.point(u);
        if let Some(sd) = seam_distance {
            if sd(&p) < opts.seam_margin {
                return None;
            }
        }
        frame_differential(map, &p)
            .ok()
            .map(|m: DMatrix<f64>| (operator_norm(&m), p))
    };
    let sobol = Sobol::new(domain.dim());
    if opts.constant {
        let u = sobol.point(1);
        let (sup, witness) = norm_at(&u).expect("constant differential evaluates");
        return LipschitzReport {
            sup,
            witness,
            samples: 1,
            skipped: 0,
            method: LipMethod::AnalyticConstant,
        };
    }
    let mut scored: Vec<(f64, Vec<f64>, GroupPoint)> = Vec::with_capacity(opts.samples);
    let mut skipped = 0;
    for i in 1..=opts.samples as u64 {
        let u = sobol.point(i);
        match norm_at(&u) {
            Some((s, p)) => scored.push((s, u, p)),
            None => skipped += 1,
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored
        .first()
        .map(|(s, _, p)| (*s, *p))
        .unwrap_or((0.0, domain.point(&sobol.point(1))));
    let mut evals = scored.len();
    let step0 = 0.5 / (opts.samples as f64).powf(1.0 / domain.dim() as f64);
    for (s0, u0, _) in scored.iter().take(opts.starts) {
        let (mut cur, mut u) = (*s0, u0.clone());
        let mut step = step0;
        for _ in 0..opts.climb_iters {
            let mut improved = false;
            for d in 0..u.len() {
                for sign in [1.0, -1.0] {
                    let mut v = u.clone();
                    v[d] = (v[d] + sign * step).clamp(1e-12, 1.0 - 1e-12);
                    evals += 1;
                    if let Some((s, p)) = norm_at(&v) {
                        if s > cur {
                            cur = s;
                            u = v;
                            improved = true;
                            if s > best.0 {
                                best = (s, p);
                            }
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
        }
    }
    LipschitzReport {
        sup: best.0,
        witness: best.1,
        samples: evals,
        skipped,
        method: LipMethod::SampledSvd,
    }
}
