use crate::error::{Error, Result};
use crate::geom::nil::{nil_reduce, NilPoint};
use nalgebra::{Matrix2, Vector2};

/// Integer 2×2 matrix, row-major.
pub type IntMat2 = [[i64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeSpec {
    NilInteger,
    CubicTorus,
    /// Mapping torus `T²×[0,1] / (v,1)∼(Av,0)`.
    TorusBundle { a: IntMat2 },
    /// Surface factor kept abstract; circle of length 1.
    Product { genus: u32 },
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LatticeSpec::TorusBundle { a } => {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                let tr = a[0][0] + a[1][1];
                if det != 1 {
                    return Err(Error::InvalidParameter(format!("det A = {det}, need 1")));
                }
                if tr.abs() <= 2 {
                    return Err(Error::InvalidParameter(format!(
                        "|tr A| = {}, need > 2",
                        tr.abs()
                    )));
                }
                Ok(())
            }
            LatticeSpec::Product { genus } if genus < 2 => Err(Error::InvalidParameter(format!(
                "surface genus {genus}, need >= 2"
            ))),
            _ => Ok(()),
        }
    }
}

pub fn torus_reduce(v: [f64; 3]) -> [f64; 3] {
    v.map(frac)
}

/// Fractional part in `[0,1)`.
pub fn frac(t: f64) -> f64 {
    let f = t - t.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

pub fn nil_lattice_reduce(p: NilPoint) -> NilPoint {
    nil_reduce(p)
}

/// Point `(v, t)` of the cover `ℝ² × ℝ` of a torus bundle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolPoint {
    pub v: [f64; 2],
    pub t: f64,
}

impl SolPoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        SolPoint { v: [x, y], t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolBundle {
    pub a: Matrix2<f64>,
    pub a_int: IntMat2,
}

/// Below this determinant the interpolated metric counts as degenerate.
pub const MIN_METRIC_DET: f64 = 1e-3;

impl SolBundle {
    pub fn new(a: IntMat2) -> Result<Self> {
        LatticeSpec::TorusBundle { a }.validate()?;
        let m = Matrix2::new(a[0][0] as f64, a[0][1] as f64, a[1][0] as f64, a[1][1] as f64);
        Ok(SolBundle { a: m, a_int: a })
    }

    pub fn apply_power(&self, v: Vector2<f64>, n: i64) -> Vector2<f64> {
        let m = if n >= 0 {
            self.a
        } else {
            self.a.try_inverse().expect("det A = 1")
        };
        let mut w = v;
        for _ in 0..n.unsigned_abs() {
            w = m * w;
        }
        w
    }

    /// Representative with `t ∈ [0,1)` and `v ∈ [0,1)²`.
    ///
    /// Uses `(v, t+1) ∼ (A v, t)`, so lowering `t` by `n` applies `Aⁿ`.
    pub fn reduce(&self, p: SolPoint) -> SolPoint {
        let n = p.t.floor();
        let w = self.apply_power(Vector2::new(p.v[0], p.v[1]), n as i64);
        SolPoint {
            v: [frac(w[0]), frac(w[1])],
            t: frac(p.t - n),
        }
    }

    /// Flat metric on the fiber at height `t`: `(1-t) I + t AᵀA`.
    ///
    /// At `t = 1` this is the pullback of the `t = 0` metric under the gluing.
    pub fn metric(&self, t: f64) -> Result<Matrix2<f64>> {
        let q = Matrix2::identity() * (1.0 - t) + self.a.transpose() * self.a * t;
        let d = q.determinant();
        if d < MIN_METRIC_DET {
            return Err(Error::InvalidParameter(format!(
                "fiber metric degenerate at t = {t}: det {d:.3e}"
            )));
        }
        Ok(q)
    }

    /// Upper-triangular `R` with `Q_t = Rᵀ R`; frame coordinates of a fiber vector are `R v`.
    pub fn frame_factor(&self, t: f64) -> Result<Matrix2<f64>> {
        let q = self.metric(t)?;
        let l = q.cholesky().expect("positive definite").l();
        Ok(l.transpose())
    }

    /// Frame factor on the cover, where the deck map `(v, t) ↦ (A v, t - 1)` is an isometry.
    pub fn frame_factor_cover(&self, t: f64) -> Result<Matrix2<f64>> {
        let n = t.floor();
        let r = self.frame_factor(t - n)?;
        let mut m = Matrix2::identity();
        let step = if n >= 0.0 {
            self.a
        } else {
            self.a.try_inverse().expect("det A = 1")
        };
        for _ in 0..(n.abs() as i64) {
            m = step * m;
        }
        Ok(r * m)
    }

    /// Checks the metric matches across the gluing.
    pub fn gluing_residual(&self) -> f64 {
        let q0 = Matrix2::identity();
        let q1 = self.a.transpose() * self.a;
        let pulled = self.a.transpose() * q0 * self.a;
        (q1 - pulled).norm()
    }

    pub fn volume_density(&self, t: f64) -> f64 {
        self.metric(frac(t)).map(|q| q.determinant().sqrt()).unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sol_condition() {
        assert!(LatticeSpec::TorusBundle { a: [[2, 1], [1, 1]] }.validate().is_ok());
        assert!(LatticeSpec::TorusBundle { a: [[1, 1], [0, 1]] }.validate().is_err());
        assert!(LatticeSpec::TorusBundle { a: [[2, 0], [0, 1]] }.validate().is_err());
    }

    #[test]
    fn reduce_fixes_fundamental_domain() {
        let b = SolBundle::new([[2, 1], [1, 1]]).unwrap();
        let p = SolPoint::new(0.25, 0.5, 0.3);
        assert_eq!(b.reduce(p), p);
        let q = b.reduce(SolPoint::new(0.1, 0.2, 1.4));
        // (v, 1.4) ~ (A v, 0.4)
        assert!((q.t - 0.4).abs() < 1e-12);
        assert!((q.v[0] - 0.4).abs() < 1e-12);
        assert!((q.v[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn metric_glues() {
        let b = SolBundle::new([[2, 1], [1, 1]]).unwrap();
        assert!(b.gluing_residual() < 1e-12);
        for i in 0..=100 {
            assert!(b.metric(i as f64 / 100.0).is_ok());
        }
    }
}
