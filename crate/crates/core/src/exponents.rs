//! Degree and Lipschitz measurement of family members, and per-family exponent fits.

use crate::analysis::{
    degree_preimage, degree_quadrature, degree_sandwich, fit_exponent, lipschitz_sup,
    DegreeMethod, Domain, ExponentFit, LipMethod, LipOptions, SampleDomain,
};
use crate::analysis::Sobol;
use crate::error::Result;
use crate::geom::nil::NilPoint;
use crate::legendrian::LegendrianSeries;
use nalgebra::Matrix3;
use crate::geom::GroupPoint;
use crate::zoo::{FamilyId, IotaSol, MapFamily, OddSphereMap, S2S1Map, SnMap, CAT_MAP};

/// Generic cube parameters for the preimage target `y`.
pub const PREIMAGE_TARGET: [f64; 3] = [0.3123, 0.4567, 0.7891];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureOptions {
    /// Per-axis quadrature nodes before refinement.
    pub resolution: usize,
    pub max_levels: usize,
    pub lip_samples: usize,
    /// Base grid for the sandwich family.
    pub sandwich_base: [usize; 3],
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            resolution: 16,
            max_levels: 1,
            lip_samples: 10_000,
            sandwich_base: [128, 16, 32],
        }
    }
}

/// One member of a family, measured.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExponentRow {
    pub member: MapFamily,
    pub degree: i64,
    pub degree_raw: f64,
    pub residual: f64,
    pub degree_method: DegreeMethod,
    /// Signed preimage count, for families that enumerate preimages.
    pub preimage_degree: Option<i64>,
    pub lip_measured: f64,
    pub lip_method: LipMethod,
    pub lip_witness: GroupPoint,
    pub lip_bound: Option<f64>,
    pub dim: u32,
}

impl ExponentRow {
    pub fn param(&self) -> String {
        match self.member.family {
            FamilyId::Sn => format!("k={} n={}", self.member.k, self.member.n),
            FamilyId::OddS2 | FamilyId::OddS3 => format!("L={}", self.member.k),
            _ => format!("k={}", self.member.k),
        }
    }

    pub fn label(&self) -> String {
        format!("{} {}", self.member.family.as_str(), self.param())
    }
}

fn quadrature_domain(member: &MapFamily) -> Result<Option<Domain>> {
    Ok(match member.family {
        FamilyId::Tk => Some(Domain::NilCube),
        FamilyId::MuTorus => Some(Domain::TorusCube),
        FamilyId::MuProduct => Some(Domain::ProductCube),
        FamilyId::IotaSol => Some(Domain::SolCube(IotaSol::new(member.k, CAT_MAP)?.bundle)),
        _ => None,
    })
}

fn has_constant_frame(f: FamilyId) -> bool {
    matches!(
        f,
        FamilyId::Tk | FamilyId::MuTorus | FamilyId::IotaSol | FamilyId::MuProduct | FamilyId::QuatRight
    )
}

pub fn measure_member(member: &MapFamily, opts: &MeasureOptions) -> Result<ExponentRow> {
    member.validate()?;
    let geometry = member.geometry();
    let sample = SampleDomain::for_geometry(geometry);
    let map = member.build()?;
    let y = sample.point(&PREIMAGE_TARGET);

    let preimage_degree = match map.preimages(&y) {
        Some(_) => Some(degree_preimage(map.as_ref(), &y)?.value),
        None => None,
    };

    let (degree, raw, residual, method) = if member.family == FamilyId::Sn {
        let r = degree_sandwich(&SnMap::new(member.k, member.n), opts.sandwich_base, opts.max_levels + 1)?;
        (r.value, r.raw, r.residual, r.method)
    } else if let Some(dom) = quadrature_domain(member)? {
        let r = degree_quadrature(map.as_ref(), &dom, opts.resolution, opts.max_levels)?;
        (r.value, r.raw, r.residual, r.method)
    } else {
        let d = match member.family {
            FamilyId::OddS2 | FamilyId::OddS3 => OddSphereMap::build(member.k as f64, geometry.dim())?
                .construction_degree(),
            FamilyId::S2S1Product => S2S1Map::new(member.k)?.construction_degree(),
            _ => member.expected_degree().unwrap_or(0),
        };
        (d, d as f64, 0.0, DegreeMethod::Analytic)
    };

    let lip_opts = LipOptions {
        samples: opts.lip_samples,
        constant: has_constant_frame(member.family),
        ..LipOptions::default()
    };
    let lip = match member.family {
        FamilyId::OddS2 | FamilyId::OddS3 => {
            let m = OddSphereMap::build(member.k as f64, geometry.dim())?;
            let seam = |p: &GroupPoint| m.seam_distance(p);
            lipschitz_sup(&m, sample, &lip_opts, Some(&seam))
        }
        FamilyId::S2S1Product => {
            let m = S2S1Map::new(member.k)?;
            let seam = |p: &GroupPoint| match (&m.h, p) {
                (Some(h), GroupPoint::S2S1 { x, .. }) => h.seam_distance(&GroupPoint::S2(*x)),
                _ => f64::INFINITY,
            };
            lipschitz_sup(&m, sample, &lip_opts, Some(&seam))
        }
        _ => lipschitz_sup(map.as_ref(), sample, &lip_opts, None),
    };

    let lip_bound = match member.family {
        FamilyId::Sn => {
            let sn = SnMap::new(member.k, member.n);
            let mut extra = Vec::new();
            if let GroupPoint::Nil(q) = lip.witness {
                extra.push(sn.inner_point(q));
            }
            Some(sandwich_cap(&sn, &phi_entry_sup(&sn.series, opts.lip_samples, &extra)))
        }
        _ => member.expected_lip_bound(),
    };

    Ok(ExponentRow {
        member: *member,
        degree,
        degree_raw: raw,
        residual,
        degree_method: method,
        preimage_degree,
        lip_measured: lip.sup,
        lip_method: lip.method,
        lip_witness: lip.witness,
        lip_bound,
        dim: geometry.dim() as u32,
    })
}

/// Entrywise supremum of the `φ` frame over a Sobol sample plus `extra` points.
pub fn phi_entry_sup(series: &LegendrianSeries, samples: usize, extra: &[NilPoint]) -> Matrix3<f64> {
    let sobol = Sobol::new(3);
    let mut m = Matrix3::<f64>::zeros();
    let pts = (1..=samples as u64)
        .map(|i| {
            let u = sobol.point(i);
            NilPoint::new(u[0], u[1], u[2])
        })
        .chain(extra.iter().copied());
    for p in pts {
        let f = series.phi_frame(p);
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = m[(i, j)].max(f[(i, j)].abs());
            }
        }
    }
    m
}

/// Upper bound on `Lip(S_n)` from the entrywise bound `m` of the inner frame:
/// the Frobenius norm of the sandwich, whose `(i, j)` entry scales by `k^{n(w_i + w_j)}`
/// with weights `w = (1, 1, 2)`.
pub fn sandwich_cap(sn: &SnMap, m: &Matrix3<f64>) -> f64 {
    let k = sn.k as f64;
    let n = sn.n as i32;
    let w = [1, 1, 2];
    let mut fro = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            fro += (m[(i, j)] * k.powi(n * (w[i] + w[j]))).powi(2);
        }
    }
    fro.sqrt()
}

/// Rows of one family with the fitted slope of `log|deg|` on `log Lip`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FamilyTable {
    pub family: FamilyId,
    pub rows: Vec<ExponentRow>,
    pub fit: Option<ExponentFit>,
    pub target_slope: f64,
}

/// Measure every member and fit one slope per family, in first-seen order.
pub fn exponent_tables(members: &[MapFamily], opts: &MeasureOptions) -> Result<Vec<FamilyTable>> {
    let mut tables: Vec<FamilyTable> = Vec::new();
    for m in members {
        let row = measure_member(m, opts)?;
        match tables.iter_mut().find(|t| t.family == m.family) {
            Some(t) => t.rows.push(row),
            None => tables.push(FamilyTable {
                family: m.family,
                rows: vec![row],
                fit: None,
                target_slope: m.family.target_slope(),
            }),
        }
    }
    for t in &mut tables {
        let pairs: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.lip_measured, r.degree as f64)).collect();
        t.fit = fit_exponent(&pairs).ok();
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_member() {
        let r = measure_member(&MapFamily::new(FamilyId::MuTorus, 3, 0), &MeasureOptions::default()).unwrap();
        assert_eq!(r.degree, 27);
        assert_eq!(r.preimage_degree, Some(27));
        assert!((r.lip_measured - 3.0).abs() < 1e-12);
        assert_eq!(r.param(), "k=3");
    }

    #[test]
    fn product_table_fits_slope_one() {
        let members: Vec<MapFamily> =
            [2, 3, 5].iter().map(|&k| MapFamily::new(FamilyId::MuProduct, k, 0)).collect();
        let t = exponent_tables(&members, &MeasureOptions::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0].fit.as_ref().unwrap().slope - 1.0).abs() < 1e-9);
    }
}
