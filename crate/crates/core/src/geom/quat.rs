use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Quaternion `w + x i + y j + z k`. Unit quaternions model S³.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    /// `cos θ + sin θ i`, the fiber action of the Hopf circle.
    pub fn exp_i(theta: f64) -> Self {
        Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(self, o: Quaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// `a⁻¹ q a`.
    pub fn conjugate_by(self, a: Quaternion) -> Result<Self> {
        Ok(a.inverse()? * self * a)
    }

    pub fn vec(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn dist(self, o: Quaternion) -> f64 {
        (self - o).norm()
    }

    /// Geodesic distance on the unit sphere.
    pub fn angle_to(self, o: Quaternion) -> f64 {
        let c = self.dot(o).clamp(-1.0, 1.0);
        let s = (self - o).norm();
        // acos loses precision near 0; use chord when small
        if c > 0.9 {
            2.0 * (0.5 * s).asin()
        } else {
            c.acos()
        }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Left-invariant frame `(X, Y, Z) = (q i, q j, q k)` at `q`.
pub fn s3_frame(q: Quaternion) -> [Quaternion; 3] {
    [q * Quaternion::I, q * Quaternion::J, q * Quaternion::K]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        assert!(close(Q::I * Q::J, Q::K));
        assert!(close(Q::J * Q::K, Q::I));
        assert!(close(Q::K * Q::I, Q::J));
        assert!(close(Q::J * Q::I, -Q::K));
        assert!(close(Q::I * Q::I, -Q::ONE));
    }

    #[test]
    fn xi_conjugation() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let xi = Quaternion::new(s, 0.0, s, 0.0);
        assert!(close(Quaternion::I.conjugate_by(xi).unwrap(), Quaternion::K));
        assert!(close(Quaternion::J.conjugate_by(xi).unwrap(), Quaternion::J));
        assert!(close(Quaternion::K.conjugate_by(xi).unwrap(), -Quaternion::I));
    }

    #[test]
    fn zero_normalize_fails() {
        assert_eq!(Quaternion::default().normalize(), Err(Error::ZeroQuaternion));
    }

    #[test]
    fn frame_at_one() {
        let f = s3_frame(Quaternion::ONE);
        assert!(close(f[0], Quaternion::I));
        assert!(close(f[1], Quaternion::J));
        assert!(close(f[2], Quaternion::K));
    }
}
