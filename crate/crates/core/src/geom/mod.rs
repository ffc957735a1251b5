//! Coordinate models, frames and lattices for the geometries carrying the map families.

pub mod hopf;
pub mod lattice;
pub mod nil;
pub mod quat;
pub mod sphere;

use crate::error::{Error, Result};
use lattice::{SolBundle, SolPoint};
use nalgebra::{DMatrix, Vector3, Vector4};
use nil::{NilFrame, NilPoint};
use quat::Quaternion;
use sphere::{s2_frame, sphere_exp, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Nil,
    Torus3,
    SolBundle,
    H2xE1,
    S2,
    S3,
    S2xS1,
}

impl Geometry {
    pub fn dim(self) -> usize {
        match self {
            Geometry::S2 => 2,
            _ => 3,
        }
    }

    /// Riemannian volume of the closed manifold (coordinate cube convention for quotients).
    pub fn volume(self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Geometry::S2 => 4.0 * PI,
            Geometry::S3 => 2.0 * PI * PI,
            Geometry::S2xS1 => 8.0 * PI * PI,
            _ => 1.0,
        }
    }
}

/// A point of one of the model geometries. Flat and nilpotent models carry
/// cover coordinates; reduction to a fundamental domain is explicit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum GroupPoint {
    Nil(NilPoint),
    Torus([f64; 3]),
    Sol(SolPoint),
    /// Abstract surface chart coordinates and circle coordinate (period 1).
    Product { s: [f64; 2], t: f64 },
    S2(Vec3),
    S3(Quaternion),
    /// Sphere point and circle angle (period 2π).
    S2S1 { x: Vec3, z: f64 },
}

impl GroupPoint {
    pub fn geometry(&self) -> Geometry {
        match self {
            GroupPoint::Nil(_) => Geometry::Nil,
            GroupPoint::Torus(_) => Geometry::Torus3,
            GroupPoint::Sol(_) => Geometry::SolBundle,
            GroupPoint::Product { .. } => Geometry::H2xE1,
            GroupPoint::S2(_) => Geometry::S2,
            GroupPoint::S3(_) => Geometry::S3,
            GroupPoint::S2S1 { .. } => Geometry::S2xS1,
        }
    }

    pub fn ambient(&self) -> Vec<f64> {
        match *self {
            GroupPoint::Nil(p) => vec![p.x, p.y, p.z],
            GroupPoint::Torus(v) => v.to_vec(),
            GroupPoint::Sol(p) => vec![p.v[0], p.v[1], p.t],
            GroupPoint::Product { s, t } => vec![s[0], s[1], t],
            GroupPoint::S2(x) => x.as_slice().to_vec(),
            GroupPoint::S3(q) => q.to_array().to_vec(),
            GroupPoint::S2S1 { x, z } => vec![x[0], x[1], x[2], z],
        }
    }

    /// Point reached from `self` by moving `h` along the ambient tangent `d`.
    fn step(&self, d: &[f64], h: f64) -> GroupPoint {
        let add3 = |a: [f64; 3]| [a[0] + h * d[0], a[1] + h * d[1], a[2] + h * d[2]];
        match *self {
            GroupPoint::Nil(p) => {
                let a = add3([p.x, p.y, p.z]);
                GroupPoint::Nil(NilPoint::new(a[0], a[1], a[2]))
            }
            GroupPoint::Torus(v) => GroupPoint::Torus(add3(v)),
            GroupPoint::Sol(p) => {
                let a = add3([p.v[0], p.v[1], p.t]);
                GroupPoint::Sol(SolPoint::new(a[0], a[1], a[2]))
            }
            GroupPoint::Product { s, t } => {
                let a = add3([s[0], s[1], t]);
                GroupPoint::Product {
                    s: [a[0], a[1]],
                    t: a[2],
                }
            }
            GroupPoint::S2(x) => {
                let u = Vec3::new(d[0], d[1], d[2]) * h;
                GroupPoint::S2(sphere_exp(&x, &u))
            }
            GroupPoint::S3(q) => {
                let b = Vector4::new(q.w, q.x, q.y, q.z);
                let u = Vector4::new(d[0], d[1], d[2], d[3]) * h;
                let r = sphere_exp(&b, &u);
                GroupPoint::S3(Quaternion::new(r[0], r[1], r[2], r[3]))
            }
            GroupPoint::S2S1 { x, z } => {
                let u = Vec3::new(d[0], d[1], d[2]) * h;
                GroupPoint::S2S1 {
                    x: sphere_exp(&x, &u),
                    z: z + h * d[3],
                }
            }
        }
    }
}

/// Orthonormal frame and frame-coordinate map of a geometry at a point.
pub struct FrameModel<'a> {
    pub sol: Option<&'a SolBundle>,
}

impl FrameModel<'_> {
    /// Frame vectors at `p` in ambient coordinates.
    pub fn frame(&self, p: &GroupPoint) -> Result<Vec<Vec<f64>>> {
        Ok(match *p {
            GroupPoint::Nil(q) => {
                let f = NilFrame::at(q);
                [f.e1, f.e2, f.e3].iter().map(|e| e.as_slice().to_vec()).collect()
            }
            GroupPoint::Torus(_) | GroupPoint::Product { .. } => identity_frame(3),
            GroupPoint::Sol(q) => {
                let r = self.sol_bundle()?.frame_factor_cover(q.t)?;
                let ri = r.try_inverse().expect("invertible frame factor");
                vec![
                    vec![ri[(0, 0)], ri[(1, 0)], 0.0],
                    vec![ri[(0, 1)], ri[(1, 1)], 0.0],
                    vec![0.0, 0.0, 1.0],
                ]
            }
            GroupPoint::S2(x) => s2_frame(&x).iter().map(|e| e.as_slice().to_vec()).collect(),
            GroupPoint::S3(q) => quat::s3_frame(q).iter().map(|e| e.to_array().to_vec()).collect(),
            GroupPoint::S2S1 { x, .. } => {
                let [u, v] = s2_frame(&x);
                vec![
                    vec![u[0], u[1], u[2], 0.0],
                    vec![v[0], v[1], v[2], 0.0],
                    vec![0.0, 0.0, 0.0, 1.0],
                ]
            }
        })
    }

    /// Frame coordinates at `p` of an ambient tangent vector `v`.
    pub fn coords(&self, p: &GroupPoint, v: &[f64]) -> Result<Vec<f64>> {
        Ok(match *p {
            GroupPoint::Nil(q) => {
                let c = NilFrame::at(q).coords_of(Vector3::new(v[0], v[1], v[2]));
                c.as_slice().to_vec()
            }
            GroupPoint::Torus(_) | GroupPoint::Product { .. } => v.to_vec(),
            GroupPoint::Sol(q) => {
                let r = self.sol_bundle()?.frame_factor_cover(q.t)?;
                let w = r * nalgebra::Vector2::new(v[0], v[1]);
                vec![w[0], w[1], v[2]]
            }
            GroupPoint::S2(_) | GroupPoint::S3(_) | GroupPoint::S2S1 { .. } => {
                let f = self.frame(p)?;
                f.iter()
                    .map(|e| e.iter().zip(v).map(|(a, b)| a * b).sum())
                    .collect()
            }
        })
    }

    fn sol_bundle(&self) -> Result<&SolBundle> {
        self.sol
            .ok_or_else(|| Error::InvalidParameter("Sol frame needs the bundle".into()))
    }
}

fn identity_frame(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// A smooth (or piecewise smooth) self-map of one of the model geometries.
pub trait SelfMap: Sync {
    fn geometry(&self) -> Geometry;

    /// Evaluation on the cover (flat and nilpotent models) or the sphere itself.
    fn eval(&self, p: &GroupPoint) -> GroupPoint;

    /// Closed-form frame differential, when available.
    fn frame_matrix(&self, _p: &GroupPoint) -> Option<DMatrix<f64>> {
        None
    }

    /// Bundle data for Sol frames.
    fn sol_bundle(&self) -> Option<&SolBundle> {
        None
    }

    /// All preimages of `y` in the fundamental domain, when they enumerate exactly.
    fn preimages(&self, _y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        None
    }
}

pub const FD_STEP: f64 = 1e-5;
pub const FD_REL_TOL: f64 = 1e-6;

/// Matrix of `df_p` in the orthonormal frames at `p` and `f(p)`.
pub fn frame_differential(map: &dyn SelfMap, p: &GroupPoint) -> Result<DMatrix<f64>> {
    if let Some(m) = map.frame_matrix(p) {
        return Ok(m);
    }
    finite_difference_differential(map, p, FD_STEP)
}

/// Central differences at `h` and `h/2`, Richardson-combined.
pub fn finite_difference_differential(
    map: &dyn SelfMap,
    p: &GroupPoint,
    h: f64,
) -> Result<DMatrix<f64>> {
    let model = FrameModel {
        sol: map.sol_bundle(),
    };
    let n = map.geometry().dim();
    let fp = map.eval(p);
    let frame = model.frame(p)?;
    let central = |h: f64| -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(n, n);
        for (j, e) in frame.iter().enumerate() {
            let a = map.eval(&p.step(e, h)).ambient();
            let b = map.eval(&p.step(e, -h)).ambient();
            let mut d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect();
            if let GroupPoint::S2S1 { .. } = fp {
                let w = a[3] - b[3];
                d[3] = (w - (w / std::f64::consts::TAU).round() * std::f64::consts::TAU) / (2.0 * h);
            }
            let c = model.coords(&fp, &d)?;
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    };
    let d1 = central(h)?;
    let d2 = central(h / 2.0)?;
    let change = (&d2 - &d1).norm() / d2.norm().max(1.0);
    if change > FD_REL_TOL {
        return Err(Error::StepTooLarge { change });
    }
    Ok((d2 * 4.0 - d1) / 3.0)
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Identity(Geometry);
    impl SelfMap for Identity {
        fn geometry(&self) -> Geometry {
            self.0
        }
        fn eval(&self, p: &GroupPoint) -> GroupPoint {
            *p
        }
    }

    #[test]
    fn identity_differential_is_identity() {
        let pts = [
            GroupPoint::Nil(NilPoint::new(0.3, -1.2, 2.0)),
            GroupPoint::Torus([0.1, 0.2, 0.3]),
            GroupPoint::S2(Vec3::new(0.0, 0.6, 0.8)),
            GroupPoint::S3(Quaternion::new(0.5, 0.5, -0.5, 0.5)),
            GroupPoint::S2S1 {
                x: Vec3::new(0.0, 0.0, 1.0),
                z: 3.0,
            },
        ];
        for p in pts {
            let m = frame_differential(&Identity(p.geometry()), &p).unwrap();
            let id = DMatrix::<f64>::identity(m.nrows(), m.ncols());
            assert!((m - id).norm() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn sol_identity_differential() {
        let b = SolBundle::new([[2, 1], [1, 1]]).unwrap();
        struct SolId(SolBundle);
        impl SelfMap for SolId {
            fn geometry(&self) -> Geometry {
                Geometry::SolBundle
            }
            fn eval(&self, p: &GroupPoint) -> GroupPoint {
                *p
            }
            fn sol_bundle(&self) -> Option<&SolBundle> {
                Some(&self.0)
            }
        }
        let p = GroupPoint::Sol(SolPoint::new(0.3, 0.4, 0.7));
        let m = frame_differential(&SolId(b), &p).unwrap();
        assert!((m - DMatrix::<f64>::identity(3, 3)).norm() < 1e-8);
    }
}
