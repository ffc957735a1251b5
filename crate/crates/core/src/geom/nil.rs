//! Heisenberg group in coordinates `(x, y, z)` with contact form `dz - x dy`.
//!
//! Lattice quotients use the *left* action: `γ ∈ Nil_Z` sends `p` to `γ·p`.

use nalgebra::{Matrix3, Vector3};
use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct NilPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl NilPoint {
    pub const IDENTITY: NilPoint = NilPoint::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        NilPoint { x, y, z }
    }

    pub fn inverse(self) -> Self {
        NilPoint::new(-self.x, -self.y, self.x * self.y - self.z)
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        NilPoint::new(v[0], v[1], v[2])
    }

    pub fn dist_coords(self, o: NilPoint) -> f64 {
        (self.to_vector() - o.to_vector()).norm()
    }
}

/// `(x,y,z)·(x',y',z') = (x+x', y+y', z+z'+x y')`.
pub fn nil_mul(p: NilPoint, q: NilPoint) -> NilPoint {
    NilPoint::new(p.x + q.x, p.y + q.y, p.z + q.z + p.x * q.y)
}

impl Mul for NilPoint {
    type Output = NilPoint;
    fn mul(self, q: NilPoint) -> NilPoint {
        nil_mul(self, q)
    }
}

/// Element of the integer lattice `Nil_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct NilWord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl NilWord {
    pub fn point(self) -> NilPoint {
        NilPoint::new(self.a as f64, self.b as f64, self.c as f64)
    }

    pub fn act(self, p: NilPoint) -> NilPoint {
        nil_mul(self.point(), p)
    }
}

/// Reduction to the cube `[0,1)³` by left multiplication, returning the word used.
pub fn nil_reduce_with_word(p: NilPoint) -> (NilPoint, NilWord) {
    let a = -p.x.floor();
    let b = -p.y.floor();
    let zs = p.z + a * p.y;
    let c = -zs.floor();
    let mut q = NilPoint::new(p.x + a, p.y + b, zs + c);
    // floor(v) + v can round up to exactly 1.0
    if q.x >= 1.0 {
        q.x = 0.0;
    }
    if q.y >= 1.0 {
        q.y = 0.0;
    }
    if q.z >= 1.0 {
        q.z = 0.0;
    }
    (
        q,
        NilWord {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        },
    )
}

pub fn nil_reduce(p: NilPoint) -> NilPoint {
    nil_reduce_with_word(p).0
}

/// Distance from `a · b⁻¹` to the nearest lattice element; zero iff `a ∈ Nil_Z · b`.
pub fn lattice_gap(a: NilPoint, b: NilPoint) -> f64 {
    let w = nil_mul(a, b.inverse());
    let d = |t: f64| (t - t.round()).abs();
    d(w.x).max(d(w.y)).max(d(w.z))
}

/// Columns `e1 = ∂x`, `e2 = ∂y + x ∂z`, `e3 = ∂z` as coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NilFrame {
    pub basepoint: NilPoint,
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
    pub e3: Vector3<f64>,
}

impl NilFrame {
    pub fn at(p: NilPoint) -> Self {
        NilFrame {
            basepoint: p,
            e1: Vector3::new(1.0, 0.0, 0.0),
            e2: Vector3::new(0.0, 1.0, p.x),
            e3: Vector3::new(0.0, 0.0, 1.0),
        }
    }

    /// Frame-to-coordinate matrix.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.e1, self.e2, self.e3])
    }

    /// Frame coordinates of a coordinate vector based here.
    pub fn coords_of(&self, v: Vector3<f64>) -> Vector3<f64> {
        Vector3::new(v[0], v[1], v[2] - self.basepoint.x * v[1])
    }
}

/// Contact form `dz - x dy` evaluated on a coordinate vector at `p`.
pub fn contact_form(p: NilPoint, v: Vector3<f64>) -> f64 {
    v[2] - p.x * v[1]
}

/// Frame matrix of a map from its coordinate Jacobian `j` at `p`, image `fp`.
pub fn frame_from_jacobian(p: NilPoint, fp: NilPoint, j: &Matrix3<f64>) -> Matrix3<f64> {
    let e = NilFrame::at(p).matrix();
    let einv = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -fp.x, 1.0);
    einv * j * e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        let p = nil_mul(NilPoint::new(1.0, 0.0, 0.0), NilPoint::new(0.0, 1.0, 0.0));
        assert_eq!(p, NilPoint::new(1.0, 1.0, 1.0));
        let (a, b, c) = (0.7, -1.3, 2.1);
        let q = nil_mul(NilPoint::new(a, b, c), NilPoint::new(-a, -b, a * b - c));
        assert!(q.dist_coords(NilPoint::IDENTITY) < 1e-15);
    }

    #[test]
    fn reduce_examples() {
        let p = NilPoint::new(0.3, 0.6, 0.9);
        assert_eq!(nil_reduce(p), p);
        let (q, w) = nil_reduce_with_word(NilPoint::new(1.3, 0.6, 0.9));
        assert!((q.x - 0.3).abs() < 1e-12);
        assert_eq!(w, NilWord { a: -1, b: 0, c: 0 });
        assert!((q.z - 0.3).abs() < 1e-12);
    }

    #[test]
    fn frame_e2_shape() {
        let f = NilFrame::at(NilPoint::new(2.5, 1.0, -3.0));
        assert_eq!(f.e2, Vector3::new(0.0, 1.0, 2.5));
        assert_eq!(f.coords_of(f.e2), Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(contact_form(f.basepoint, f.e2), 0.0);
    }
}
