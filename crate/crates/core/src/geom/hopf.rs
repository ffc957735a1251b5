//! Hopf fibration `π(q) = q i q̄`, fibers `q e^{iθ}`, and the two reference sections.

use super::quat::Quaternion;
use super::sphere::Vec3;

pub fn hopf_projection(q: Quaternion) -> Vec3 {
    let v = q * Quaternion::I * q.conj();
    Vec3::new(v.x, v.y, v.z)
}

pub fn pure(v: &Vec3) -> Quaternion {
    Quaternion::pure([v[0], v[1], v[2]])
}

/// The two charts of S²: `North` avoids `−i`, `South` avoids `+i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Chart {
    North,
    South,
}

impl Chart {
    /// Chart whose singular point is farther from `b`.
    pub fn for_point(b: &Vec3) -> Chart {
        if b[0] >= 0.0 {
            Chart::North
        } else {
            Chart::South
        }
    }

    pub fn other(self) -> Chart {
        match self {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        }
    }

    /// `s_N(b) = (1 − b i)/|1 − b i|`, `s_S(b) = (1 + b i) j/|1 + b i|`.
    pub fn section(self, b: &Vec3) -> Quaternion {
        let bi = pure(b) * Quaternion::I;
        match self {
            Chart::North => (Quaternion::ONE - bi).scale(1.0 / (2.0 * (1.0 + b[0])).sqrt()),
            Chart::South => {
                (Quaternion::ONE + bi).scale(1.0 / (2.0 * (1.0 - b[0])).sqrt()) * Quaternion::J
            }
        }
    }

    /// Derivative of the section along the base velocity `db`.
    pub fn section_derivative(self, b: &Vec3, db: &Vec3) -> Quaternion {
        let sign = match self {
            Chart::North => -1.0,
            Chart::South => 1.0,
        };
        let u = Quaternion::ONE + (pure(b) * Quaternion::I).scale(sign);
        let du = (pure(db) * Quaternion::I).scale(sign);
        let n = u.norm();
        let d = du.scale(1.0 / n) - u.scale(u.dot(du) / (n * n * n));
        match self {
            Chart::North => d,
            Chart::South => d * Quaternion::J,
        }
    }

    /// Fiber coordinate of `x` relative to this chart's section over `π(x)`.
    pub fn fiber_angle(self, x: Quaternion) -> f64 {
        let r = self.section(&hopf_projection(x)).conj() * x;
        r.x.atan2(r.w)
    }

    /// Distance margin `1 ± ⟨b, i⟩` to the singular point.
    pub fn margin(self, b: &Vec3) -> f64 {
        match self {
            Chart::North => 1.0 + b[0],
            Chart::South => 1.0 - b[0],
        }
    }
}
