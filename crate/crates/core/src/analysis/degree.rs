use crate::error::{Error, Result};
use crate::geom::lattice::{SolBundle, SolPoint};
use crate::geom::nil::NilPoint;
use crate::geom::{frame_differential, GroupPoint, SelfMap};
use crate::zoo::SnMap;

/// Residual below which a raw degree counts as resolved.
pub const DEGREE_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMethod {
    Quadrature,
    Preimage,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DegreeReport {
    pub value: i64,
    pub raw: f64,
    pub residual: f64,
    pub method: DegreeMethod,
    /// Largest per-axis node count, or the preimage count.
    pub resolution: usize,
}

impl DegreeReport {
    pub fn from_raw(raw: f64, method: DegreeMethod, resolution: usize) -> Self {
        let value = raw.round() as i64;
        DegreeReport {
            value,
            raw,
            residual: (raw - value as f64).abs(),
            method,
            resolution,
        }
    }

    pub fn resolved(&self) -> bool {
        self.residual < DEGREE_TOL
    }
}

/// Coordinate fundamental domain `[0,1)³` of a quotient, with its volume density.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    NilCube,
    TorusCube,
    ProductCube,
    SolCube(SolBundle),
}

impl Domain {
    pub fn point(&self, u: [f64; 3]) -> GroupPoint {
        match self {
            Domain::NilCube => GroupPoint::Nil(NilPoint::new(u[0], u[1], u[2])),
            Domain::TorusCube => GroupPoint::Torus(u),
            Domain::ProductCube => GroupPoint::Product {
                s: [u[0], u[1]],
                t: u[2],
            },
            Domain::SolCube(_) => GroupPoint::Sol(SolPoint::new(u[0], u[1], u[2])),
        }
    }

    fn density(&self, p: &GroupPoint) -> f64 {
        match (self, p) {
            (Domain::SolCube(b), GroupPoint::Sol(q)) => b.volume_density(q.t),
            _ => 1.0,
        }
    }

    fn constant_density(&self) -> bool {
        !matches!(self, Domain::SolCube(_))
    }
}

/// Tensor midpoint rule on `[0,1)³`.
pub fn midpoint_cube(f: &dyn Fn([f64; 3]) -> f64, n: [usize; 3]) -> f64 {
    let h = n.map(|m| 1.0 / m as f64);
    let mut total = 0.0;
    for i in 0..n[0] {
        let x = (i as f64 + 0.5) * h[0];
        let mut plane = 0.0;
        for j in 0..n[1] {
            let y = (j as f64 + 0.5) * h[1];
            let mut line = 0.0;
            for l in 0..n[2] {
                line += f([x, y, (l as f64 + 0.5) * h[2]]);
            }
            plane += line;
        }
        total += plane;
    }
    total * h[0] * h[1] * h[2]
}

/// Midpoint values at `n` and `2n`, combined as `(4 I₂ₙ − Iₙ)/3`, doubling
/// until the combined value rounds within tolerance or `max_levels` is spent.
/// Returns the raw value and the finest node counts.
pub fn refined_integral(
    f: &dyn Fn([f64; 3]) -> f64,
    base: [usize; 3],
    max_levels: usize,
) -> (f64, [usize; 3]) {
    let mut n = base;
    let mut coarse = midpoint_cube(f, n);
    let mut best = (coarse, n);
    for _ in 0..max_levels.max(1) {
        let fine_n = n.map(|m| 2 * m);
        let fine = midpoint_cube(f, fine_n);
        let rich = (4.0 * fine - coarse) / 3.0;
        best = (rich, fine_n);
        let resid = (rich - rich.round()).abs();
        if resid < DEGREE_TOL && (fine - coarse).abs() < DEGREE_TOL {
            break;
        }
        coarse = fine;
        n = fine_n;
    }
    best
}

/// Degree as `∫ det(coordinate Jacobian)` over the fundamental domain (coordinate volume 1).
pub fn degree_quadrature(
    map: &dyn SelfMap,
    domain: &Domain,
    resolution: usize,
    max_levels: usize,
) -> Result<DegreeReport> {
    let integrand = |u: [f64; 3]| -> f64 {
        let p = domain.point(u);
        let det = frame_differential(map, &p).map(|m| m.determinant()).unwrap_or(f64::NAN);
        if domain.constant_density() {
            det
        } else {
            det * domain.density(&p) / domain.density(&map.eval(&p))
        }
    };
    let (raw, n) = refined_integral(&integrand, [resolution; 3], max_levels);
    finish_quadrature(raw, n[0])
}

fn finish_quadrature(raw: f64, resolution: usize) -> Result<DegreeReport> {
    let r = DegreeReport::from_raw(raw, DegreeMethod::Quadrature, resolution);
    if !raw.is_finite() || !r.resolved() {
        return Err(Error::Unresolved {
            raw,
            residual: r.residual,
        });
    }
    Ok(r)
}

/// Degree of `S_n`. Depth 1 integrates the sandwich directly on an anisotropic
/// grid; deeper sandwiches use that `Tⁿ` covers the cube `k⁴ⁿ`-to-one with
/// Jacobian `k⁴ⁿ`, so the integral of `det(Dⁿ F_φ(Tⁿ·) Dⁿ)` equals `k⁸ⁿ ∫ det F_φ`.
pub fn degree_sandwich(sn: &SnMap, base: [usize; 3], max_levels: usize) -> Result<DegreeReport> {
    if sn.n <= 1 {
        let f = |u: [f64; 3]| sn.frame(NilPoint::new(u[0], u[1], u[2])).determinant();
        let (raw, n) = refined_integral(&f, base, max_levels);
        return finish_quadrature(raw, n.into_iter().max().unwrap_or(0));
    }
    let f = |u: [f64; 3]| sn.series.phi_frame(NilPoint::new(u[0], u[1], u[2])).determinant();
    let (inner, n) = refined_integral(&f, base, max_levels);
    let raw = inner * (sn.k as f64).powi(8 * sn.n as i32);
    finish_quadrature(raw, n.into_iter().max().unwrap_or(0))
}

/// Minimum `|det|` for a preimage to count as regular.
pub const REGULAR_DET: f64 = 1e-9;

/// Signed preimage count at `y`.
pub fn degree_preimage(map: &dyn SelfMap, y: &GroupPoint) -> Result<DegreeReport> {
    let pre = map.preimages(y).ok_or_else(|| {
        Error::InvalidParameter("family does not enumerate preimages".into())
    })?;
    let mut total = 0i64;
    for x in &pre {
        let det = frame_differential(map, x)?.determinant();
        if det.abs() < REGULAR_DET {
            return Err(Error::NotRegular(det));
        }
        total += det.signum() as i64;
    }
    Ok(DegreeReport {
        value: total,
        raw: total as f64,
        residual: 0.0,
        method: DegreeMethod::Preimage,
        resolution: pre.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{MuTorus, TkMap};

    #[test]
    fn identity_torus_degree_one() {
        let r = degree_quadrature(&MuTorus { k: 1 }, &Domain::TorusCube, 4, 1).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn tk_two_ways() {
        let q = degree_quadrature(&TkMap { k: 2 }, &Domain::NilCube, 8, 1).unwrap();
        assert_eq!(q.value, 16);
        let p = degree_preimage(
            &TkMap { k: 2 },
            &GroupPoint::Nil(NilPoint::new(0.31, 0.62, 0.17)),
        )
        .unwrap();
        assert_eq!(p.value, 16);
        assert_eq!(p.resolution, 16);
    }

    #[test]
    fn midpoint_integrates_trig_exactly() {
        let f = |u: [f64; 3]| 1.0 + (std::f64::consts::TAU * (u[0] + 2.0 * u[2])).cos();
        assert!((midpoint_cube(&f, [8, 2, 8]) - 1.0).abs() < 1e-14);
    }
}
