//! Unit spheres in ℝ³ and ℝ⁴ (points as fixed arrays).

use nalgebra::{SVector, Vector3};

pub type Vec3 = Vector3<f64>;

/// Oriented tangent basis `(u, v)` at `p ∈ S²` with `u × v = p`.
pub fn s2_frame(p: &Vec3) -> [Vec3; 2] {
    let a = if p[2].abs() < 0.9 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        Vec3::new(1.0, 0.0, 0.0)
    };
    let u = (a - p * a.dot(p)).normalize();
    let v = p.cross(&u);
    [u, v]
}

/// Geodesic distance between unit vectors of any dimension.
pub fn geodesic_distance<const N: usize>(a: &SVector<f64, N>, b: &SVector<f64, N>) -> f64 {
    let c = a.dot(b).clamp(-1.0, 1.0);
    if c > 0.9 {
        2.0 * (0.5 * (a - b).norm()).asin()
    } else {
        c.acos()
    }
}

/// Exponential map of the unit sphere: point at distance `|u|` from `b` along tangent `u`.
pub fn sphere_exp<const N: usize>(b: &SVector<f64, N>, u: &SVector<f64, N>) -> SVector<f64, N> {
    let r = u.norm();
    b * r.cos() + u * sinc(r)
}

pub fn sinc(r: f64) -> f64 {
    if r.abs() < 1e-4 {
        1.0 - r * r / 6.0 + r.powi(4) / 120.0
    } else {
        r.sin() / r
    }
}

pub const NORTH3: [f64; 3] = [0.0, 0.0, 1.0];

/// Rotation sending `c` to the last basis vector, as an orthogonal matrix (Householder pair).
pub fn rotation_to_pole<const N: usize>(c: &SVector<f64, N>) -> nalgebra::SMatrix<f64, N, N> {
    let mut pole = SVector::<f64, N>::zeros();
    pole[N - 1] = 1.0;
    let id = nalgebra::SMatrix::<f64, N, N>::identity();
    let reflect = |n: &SVector<f64, N>| id - n * n.transpose() * 2.0;
    // reflection through the bisector moving c to pole, followed by a reflection fixing pole
    let d = c - pole;
    let h1 = if d.norm() < 1e-14 {
        id
    } else {
        reflect(&d.normalize())
    };
    let mut e0 = SVector::<f64, N>::zeros();
    e0[0] = 1.0;
    let h2 = if d.norm() < 1e-14 { id } else { reflect(&e0) };
    h2 * h1
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector4;

    #[test]
    fn frame_orientation() {
        for p in [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.6, 0.0, 0.8), Vec3::new(0.0, -1.0, 0.0)] {
            let [u, v] = s2_frame(&p);
            assert!((u.cross(&v) - p).norm() < 1e-14);
            assert!(u.dot(&p).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_is_proper_and_hits_pole() {
        let c = Vector4::new(0.1, -0.5, 0.3, 0.2).normalize();
        let r = rotation_to_pole(&c);
        assert!((r * c - Vector4::new(0.0, 0.0, 0.0, 1.0)).norm() < 1e-14);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
        let c3 = Vec3::new(0.0, 0.0, -1.0);
        let r3 = rotation_to_pole(&c3);
        assert!((r3 * c3 - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-14);
        assert!((r3.determinant() - 1.0).abs() < 1e-12);
    }
}
