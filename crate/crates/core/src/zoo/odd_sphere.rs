//! Odd self-maps of S² and S³ whose degree grows like `L^dim`.
//!
//! Upper hemisphere: the band `π/4 ≤ θ ≤ π/2` (polar angle from the pole)
//! stretches onto the upper hemisphere; each packed ball of radius `1/L` is
//! blown up onto the sphere minus the pole; the rest of the cap goes to the pole.
//! The lower hemisphere is fixed by `h(−x) = −h(x)`.

use super::packing::{pack_s2, pack_s3, SpherePacking};
use crate::error::Result;
use crate::geom::quat::Quaternion;
use crate::geom::sphere::{geodesic_distance, rotation_to_pole};
use crate::geom::{Geometry, GroupPoint, SelfMap};
use nalgebra::{SMatrix, SVector, Vector3, Vector4};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[derive(Debug, Clone)]
pub struct OddSphere<const N: usize> {
    pub l: f64,
    pub packing: SpherePacking<N>,
    rotations: Vec<SMatrix<f64, N, N>>,
}

/// Which piece of the construction a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Band,
    Ball(usize),
    Collapsed,
}

fn polar<const N: usize>(x: &SVector<f64, N>) -> (f64, SVector<f64, N>) {
    let mut t = *x;
    t[N - 1] = 0.0;
    (t.norm().atan2(x[N - 1]), t)
}

/// Point at polar angle `phi` in the direction of the tangential vector `t` of norm `tn`.
fn from_polar<const N: usize>(phi: f64, t: &SVector<f64, N>, scale: f64) -> SVector<f64, N> {
    let mut out = t * scale;
    out[N - 1] = phi.cos();
    out
}

impl<const N: usize> OddSphere<N> {
    pub fn from_packing(packing: SpherePacking<N>) -> Self {
        let rotations = packing.centers.iter().map(rotation_to_pole).collect();
        OddSphere {
            l: packing.l,
            packing,
            rotations,
        }
    }

    pub fn ball_count(&self) -> usize {
        self.packing.len()
    }

    /// Degree by construction: each ball and its antipode contribute +1, the band +1.
    pub fn construction_degree(&self) -> i64 {
        2 * self.ball_count() as i64 + 1
    }

    /// Lipschitz constant of the construction: blow-up factor `πL`, band factor 2.
    pub fn lip_bound(&self) -> f64 {
        (PI * self.l).max(2.0)
    }

    pub fn piece(&self, x: &SVector<f64, N>) -> Piece {
        let up = if x[N - 1] >= 0.0 { *x } else { -x };
        let (theta, _) = polar(&up);
        if theta >= FRAC_PI_4 {
            return Piece::Band;
        }
        for (i, c) in self.packing.centers.iter().enumerate() {
            if geodesic_distance(c, &up) < self.packing.radius {
                return Piece::Ball(i);
            }
        }
        Piece::Collapsed
    }

    pub fn eval(&self, x: &SVector<f64, N>) -> SVector<f64, N> {
        if x[N - 1] < 0.0 {
            return -self.eval_upper(&-x);
        }
        self.eval_upper(x)
    }

    fn eval_upper(&self, x: &SVector<f64, N>) -> SVector<f64, N> {
        let (theta, t) = polar(x);
        let mut pole = SVector::<f64, N>::zeros();
        pole[N - 1] = 1.0;
        if theta >= FRAC_PI_4 {
            let phi = 2.0 * (theta - FRAC_PI_4);
            return from_polar(phi, &t, phi.sin() / t.norm());
        }
        for (c, rot) in self.packing.centers.iter().zip(&self.rotations) {
            if geodesic_distance(c, x) < self.packing.radius {
                return self.blow_up(&(rot * x));
            }
        }
        pole
    }

    /// Geodesic-polar blow-up of the ball around the pole, followed by the half-turn
    /// in the `(e₀, e_last)` plane so the ball boundary lands on the pole.
    fn blow_up(&self, y: &SVector<f64, N>) -> SVector<f64, N> {
        let (r, t) = polar(y);
        let a = PI * self.l * r;
        let factor = if r < 1e-9 {
            PI * self.l
        } else {
            a.sin() / r.sin()
        };
        let mut out = from_polar(a, &t, factor);
        out[0] = -out[0];
        out[N - 1] = -out[N - 1];
        out
    }

    /// All preimages of `y`: one in the band, one per ball, one per antipodal ball.
    pub fn preimages(&self, y: &SVector<f64, N>) -> Vec<SVector<f64, N>> {
        let mut out = Vec::with_capacity(self.construction_degree() as usize);
        // band
        let (yu, sign) = if y[N - 1] >= 0.0 { (*y, 1.0) } else { (-y, -1.0) };
        let (phi, t) = polar(&yu);
        let theta = phi / 2.0 + FRAC_PI_4;
        if t.norm() > 0.0 && phi < FRAC_PI_2 {
            out.push(from_polar(theta, &t, theta.sin() / t.norm()) * sign);
        }
        for target in [*y, -y] {
            let s = if target == *y { 1.0 } else { -1.0 };
            // undo the half-turn
            let mut w = target;
            w[0] = -w[0];
            w[N - 1] = -w[N - 1];
            let (a, t) = polar(&w);
            if t.norm() == 0.0 {
                continue;
            }
            let r = a / (PI * self.l);
            let local = from_polar(r, &t, r.sin() / t.norm());
            for rot in &self.rotations {
                out.push(rot.transpose() * local * s);
            }
        }
        out
    }
}

/// Odd map on S² or S³ as a geometry self-map.
#[derive(Debug, Clone)]
pub enum OddSphereMap {
    S2(OddSphere<3>),
    S3(OddSphere<4>),
}

impl OddSphereMap {
    pub fn build(l: f64, dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(OddSphereMap::S2(OddSphere::from_packing(pack_s2(l)?))),
            3 => Ok(OddSphereMap::S3(OddSphere::from_packing(pack_s3(l)?))),
            d => Err(crate::Error::InvalidParameter(format!("sphere dimension {d}"))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OddSphereMap::S2(_) => 2,
            OddSphereMap::S3(_) => 3,
        }
    }

    pub fn l(&self) -> f64 {
        match self {
            OddSphereMap::S2(m) => m.l,
            OddSphereMap::S3(m) => m.l,
        }
    }

    pub fn ball_count(&self) -> usize {
        match self {
            OddSphereMap::S2(m) => m.ball_count(),
            OddSphereMap::S3(m) => m.ball_count(),
        }
    }

    pub fn construction_degree(&self) -> i64 {
        2 * self.ball_count() as i64 + 1
    }

    pub fn lip_bound(&self) -> f64 {
        (PI * self.l()).max(2.0)
    }

    /// Distance from `x` to the nearest seam (ball boundaries, band edge, equator).
    pub fn seam_distance(&self, p: &GroupPoint) -> f64 {
        fn go<const N: usize>(m: &OddSphere<N>, x: &SVector<f64, N>) -> f64 {
            let up = if x[N - 1] >= 0.0 { *x } else { -x };
            let (theta, _) = polar(&up);
            let mut d = (theta - FRAC_PI_4).abs().min((FRAC_PI_2 - theta).abs());
            for c in &m.packing.centers {
                d = d.min((geodesic_distance(c, &up) - m.packing.radius).abs());
            }
            d
        }
        match (self, p) {
            (OddSphereMap::S2(m), GroupPoint::S2(x)) => go(m, x),
            (OddSphereMap::S3(m), GroupPoint::S3(q)) => go(m, &q4(*q)),
            _ => 0.0,
        }
    }
}

fn q4(q: Quaternion) -> Vector4<f64> {
    Vector4::new(q.w, q.x, q.y, q.z)
}

fn v4q(v: Vector4<f64>) -> Quaternion {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

impl SelfMap for OddSphereMap {
    fn geometry(&self) -> Geometry {
        match self {
            OddSphereMap::S2(_) => Geometry::S2,
            OddSphereMap::S3(_) => Geometry::S3,
        }
    }

    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        match (self, p) {
            (OddSphereMap::S2(m), GroupPoint::S2(x)) => GroupPoint::S2(m.eval(x)),
            (OddSphereMap::S3(m), GroupPoint::S3(q)) => GroupPoint::S3(v4q(m.eval(&q4(*q)))),
            _ => panic!("odd sphere map evaluated at {p:?}"),
        }
    }

    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        match (self, y) {
            (OddSphereMap::S2(m), GroupPoint::S2(x)) => {
                Some(m.preimages(x).into_iter().map(GroupPoint::S2).collect())
            }
            (OddSphereMap::S3(m), GroupPoint::S3(q)) => Some(
                m.preimages(&q4(*q))
                    .into_iter()
                    .map(|v| GroupPoint::S3(v4q(v)))
                    .collect(),
            ),
            _ => None,
        }
    }
}

pub fn vec3(p: &GroupPoint) -> Option<Vector3<f64>> {
    match p {
        GroupPoint::S2(x) => Some(*x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_and_unit() {
        let m = OddSphere::from_packing(pack_s2(6.0).unwrap());
        for i in 0..500 {
            let a = i as f64 * 0.7;
            let zc = (i as f64 * 0.013).sin();
            let r = (1.0 - zc * zc).sqrt();
            let x = Vector3::new(r * a.cos(), r * a.sin(), zc);
            let hx = m.eval(&x);
            assert!((hx.norm() - 1.0).abs() < 1e-12);
            assert!((m.eval(&-x) + hx).norm() < 1e-12);
        }
    }

    #[test]
    fn preimages_map_back() {
        let m = OddSphere::from_packing(pack_s3(4.0).unwrap());
        let y = Vector4::new(0.3, -0.2, 0.5, 0.4).normalize();
        let pre = m.preimages(&y);
        assert_eq!(pre.len() as i64, m.construction_degree());
        for x in pre {
            assert!((m.eval(&x) - y).norm() < 1e-10);
        }
    }

    #[test]
    fn ball_center_goes_to_south() {
        let m = OddSphere::from_packing(pack_s2(5.0).unwrap());
        let c = m.packing.centers[0];
        assert!((m.eval(&c) - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-12);
    }
}
