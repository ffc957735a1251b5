//! Equivariant correction series on Nil and the map
//! `φ(x,y,z) = (x + x̃, y + ỹ, z + x ỹ + z̃)`.
//!
//! The double-sum term of `z̃` carries a weight. With weight 1 the contact
//! condition `1 + ∂z̃/∂z − x̃ ∂ỹ/∂z = 0` fails by
//! `−2π ψ₁ψ₂ [cos 2π(z+(2n−m)y) + cos 2π(3z+(2n+m)y)]`; weight 2 cancels it.

use crate::geom::nil::{frame_from_jacobian, NilPoint};
use crate::geom::{nil::nil_mul, Geometry, GroupPoint, SelfMap};
use nalgebra::{DMatrix, Matrix3};
use std::f64::consts::{PI, TAU};

const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

/// `(ψ₁, ψ₂, ψ₁′, ψ₂′)` at `x`.
pub fn eval_bumps(x: f64) -> (f64, f64, f64, f64) {
    let (a, da) = psi1(x);
    let (b, db) = psi2(x);
    (a, b, da, db)
}

/// `ψ₁` and its derivative: `(2π)^{-1/2} (1 + e^s)^{-1/2}`, `s = 1/(1/2 − |x|) − 1/|x|`.
pub fn psi1(x: f64) -> (f64, f64) {
    let ax = x.abs();
    if ax >= 0.5 {
        return (0.0, 0.0);
    }
    if ax == 0.0 {
        return (INV_SQRT_TAU, 0.0);
    }
    let s = 1.0 / (0.5 - ax) - 1.0 / ax;
    let softplus = if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    };
    let v = INV_SQRT_TAU * (-0.5 * softplus).exp();
    let sigmoid = if s > 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    };
    let ds = x.signum() * (1.0 / ((0.5 - ax) * (0.5 - ax)) + 1.0 / (x * x));
    let dv = if v == 0.0 || sigmoid == 0.0 {
        0.0
    } else {
        -0.5 * v * sigmoid * ds
    };
    (v, dv)
}

pub fn psi2(x: f64) -> (f64, f64) {
    psi1(x - 0.5)
}

/// `2π Σₙ (ψ₁²(x+n) + ψ₂²(x+n))`.
pub fn normalization(x: f64) -> f64 {
    let (u1, _) = psi1_index(x);
    let (u2, _) = psi2_index(x);
    TAU * (psi1(u1).0.powi(2) + psi2(u2).0.powi(2))
}

/// The unique `n` with `x + n ∈ [−1/2, 1/2)`, returned as `(x + n, n)`.
fn psi1_index(x: f64) -> (f64, i64) {
    let n = (0.5 - x).floor();
    (x + n, n as i64)
}

/// The unique `n` with `x + n ∈ [0, 1)`.
fn psi2_index(x: f64) -> (f64, i64) {
    let n = -x.floor();
    (x + n, n as i64)
}

/// Values and coordinate gradients of `x̃, ỹ, z̃`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TildeTriple {
    pub xt: f64,
    pub yt: f64,
    pub zt: f64,
    pub dxt: [f64; 3],
    pub dyt: [f64; 3],
    pub dzt: [f64; 3],
}

/// The correction series with a chosen double-sum weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendrianSeries {
    pub cross_weight: f64,
}

impl Default for LegendrianSeries {
    fn default() -> Self {
        Self::unit_cross()
    }
}

impl LegendrianSeries {
    /// Double sum with weight 1.
    pub fn unit_cross() -> Self {
        LegendrianSeries { cross_weight: 1.0 }
    }

    /// Double sum with weight 2, which solves the contact equation exactly.
    pub fn double_cross() -> Self {
        LegendrianSeries { cross_weight: 2.0 }
    }

    pub fn eval_tilde(&self, p: NilPoint) -> TildeTriple {
        let (x, y, z) = (p.x, p.y, p.z);
        let (u1, m) = psi1_index(x);
        let (u2, n) = psi2_index(x);
        let (a, da) = psi1(u1);
        let (b, db) = psi2(u2);
        let (m, n) = (m as f64, n as f64);
        let mut t = TildeTriple::default();

        // phases and their (y, z) partials
        let p1 = TAU * (z + m * y);
        let p2 = 2.0 * TAU * (z + n * y);
        let (s1, c1) = p1.sin_cos();
        let (s2, c2) = p2.sin_cos();
        let (s1d, c1d) = (2.0 * p1).sin_cos();
        let (s2d, c2d) = (2.0 * p2).sin_cos();

        t.xt = a * c1 + b * c2;
        t.dxt = [
            da * c1 + db * c2,
            -a * s1 * TAU * m - b * s2 * 2.0 * TAU * n,
            -a * s1 * TAU - b * s2 * 2.0 * TAU,
        ];

        t.yt = 2.0 * a * s1 + b * s2;
        t.dyt = [
            2.0 * da * s1 + db * s2,
            2.0 * a * c1 * TAU * m + b * c2 * 2.0 * TAU * n,
            2.0 * a * c1 * TAU + b * c2 * 2.0 * TAU,
        ];

        let q1 = TAU * (z + (2.0 * n - m) * y);
        let q3 = TAU * (3.0 * z + (2.0 * n + m) * y);
        let (sq1, cq1) = q1.sin_cos();
        let (sq3, cq3) = q3.sin_cos();
        let w = self.cross_weight;
        let bracket = sq1 + sq3 / 3.0;
        let dbr_dy = cq1 * TAU * (2.0 * n - m) + cq3 * TAU * (2.0 * n + m) / 3.0;
        let dbr_dz = cq1 * TAU + cq3 * TAU;

        t.zt = a * a * s1d / 2.0 + b * b * s2d / 4.0 + w * a * b * bracket;
        t.dzt = [
            a * da * s1d + b * db * s2d / 2.0 + w * (da * b + a * db) * bracket,
            a * a * c1d * 2.0 * TAU * m / 2.0
                + b * b * c2d * 4.0 * TAU * n / 4.0
                + w * a * b * dbr_dy,
            a * a * c1d * 2.0 * TAU / 2.0 + b * b * c2d * 4.0 * TAU / 4.0 + w * a * b * dbr_dz,
        ];
        t
    }

    pub fn eval_phi(&self, p: NilPoint) -> NilPoint {
        let t = self.eval_tilde(p);
        NilPoint::new(p.x + t.xt, p.y + t.yt, p.z + p.x * t.yt + t.zt)
    }

    /// Coordinate Jacobian of `φ`.
    pub fn phi_jacobian(&self, p: NilPoint) -> Matrix3<f64> {
        let t = self.eval_tilde(p);
        let mut j = Matrix3::identity();
        for c in 0..3 {
            j[(0, c)] += t.dxt[c];
            j[(1, c)] += t.dyt[c];
            j[(2, c)] += p.x * t.dyt[c] + t.dzt[c];
        }
        j[(2, 0)] += t.yt;
        j
    }

    /// Frame matrix of `dφ`.
    pub fn phi_frame(&self, p: NilPoint) -> Matrix3<f64> {
        let j = self.phi_jacobian(p);
        frame_from_jacobian(p, self.eval_phi(p), &j)
    }

    /// `1 + ∂z̃/∂z − x̃ ∂ỹ/∂z`.
    pub fn pde_residual(&self, p: NilPoint) -> f64 {
        let t = self.eval_tilde(p);
        1.0 + t.dzt[2] - t.xt * t.dyt[2]
    }

    /// Largest change of `x̃, ỹ, z̃` under the three lattice generators.
    pub fn invariance_residual(&self, p: NilPoint) -> f64 {
        let t0 = self.eval_tilde(p);
        generators()
            .iter()
            .map(|g| {
                let t = self.eval_tilde(nil_mul(*g, p));
                (t.xt - t0.xt)
                    .abs()
                    .max((t.yt - t0.yt).abs())
                    .max((t.zt - t0.zt).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `max_γ |φ(γ·p) − γ·φ(p)|` over the generators.
    pub fn equivariance_residual(&self, p: NilPoint) -> f64 {
        let fp = self.eval_phi(p);
        generators()
            .iter()
            .map(|g| self.eval_phi(nil_mul(*g, p)).dist_coords(nil_mul(*g, fp)))
            .fold(0.0, f64::max)
    }

    /// Straight-line homotopy from the identity (`t = 0`) to `φ` (`t = 1`).
    pub fn homotopy(&self, p: NilPoint, t: f64) -> NilPoint {
        let s = self.eval_tilde(p);
        NilPoint::new(
            p.x + t * s.xt,
            p.y + t * s.yt,
            p.z + t * (p.x * s.yt + s.zt),
        )
    }

    /// Dominant `(y, z)` Fourier modes of the contact residual on the slice at `x`.
    pub fn residual_spectrum(&self, x: f64, grid: usize, keep: usize) -> Vec<FrequencyDefect> {
        let g = grid.max(8);
        let vals: Vec<f64> = (0..g * g)
            .map(|idx| {
                let (iy, iz) = (idx / g, idx % g);
                self.pde_residual(NilPoint::new(x, iy as f64 / g as f64, iz as f64 / g as f64))
            })
            .collect();
        let half = (g / 2) as i64;
        let mut modes = Vec::new();
        for ny in -half + 1..half {
            for nz in 0..half {
                if nz == 0 && ny < 0 {
                    continue;
                }
                let (mut re, mut im) = (0.0, 0.0);
                for (idx, v) in vals.iter().enumerate() {
                    let (iy, iz) = ((idx / g) as f64, (idx % g) as f64);
                    let ph = TAU * (ny as f64 * iy + nz as f64 * iz) / g as f64;
                    re += v * ph.cos();
                    im -= v * ph.sin();
                }
                let scale = if ny == 0 && nz == 0 { 1.0 } else { 2.0 };
                let amp = scale * (re * re + im * im).sqrt() / (g * g) as f64;
                if amp > 1e-10 {
                    modes.push(FrequencyDefect {
                        x,
                        nu_y: ny,
                        nu_z: nz,
                        amplitude: amp,
                    });
                }
            }
        }
        modes.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
        modes.truncate(keep);
        modes
    }
}

/// A Fourier mode `e^{2πi(ν_y y + ν_z z)}` present in the contact residual.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FrequencyDefect {
    pub x: f64,
    pub nu_y: i64,
    pub nu_z: i64,
    pub amplitude: f64,
}

/// Lattice generators `(1,0,0)`, `(0,1,0)`, `(0,0,1)`.
pub fn generators() -> [NilPoint; 3] {
    [
        NilPoint::new(1.0, 0.0, 0.0),
        NilPoint::new(0.0, 1.0, 0.0),
        NilPoint::new(0.0, 0.0, 1.0),
    ]
}

/// Predicted amplitude of the weight-1 defect at `x`: `2π ψ₁ψ₂` on each of two modes.
pub fn unit_cross_defect_amplitude(x: f64) -> f64 {
    let (u1, _) = psi1_index(x);
    let (u2, _) = psi2_index(x);
    2.0 * PI * psi1(u1).0 * psi2(u2).0
}

/// `φ` as a self-map of Nil with analytic frame differential.
#[derive(Debug, Clone, Copy, Default)]
pub struct NilLegendrianMap {
    pub series: LegendrianSeries,
}

impl SelfMap for NilLegendrianMap {
    fn geometry(&self) -> Geometry {
        Geometry::Nil
    }

    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        match p {
            GroupPoint::Nil(q) => GroupPoint::Nil(self.series.eval_phi(*q)),
            other => panic!("Nil map evaluated at {other:?}"),
        }
    }

    fn frame_matrix(&self, p: &GroupPoint) -> Option<DMatrix<f64>> {
        match p {
            GroupPoint::Nil(q) => {
                let m = self.series.phi_frame(*q);
                Some(DMatrix::from_column_slice(3, 3, m.as_slice()))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force oracle: wide index sums, no support bookkeeping.
    fn oracle_tilde(p: NilPoint, w: f64) -> [f64; 3] {
        let (x, y, z) = (p.x, p.y, p.z);
        let (mut xt, mut yt, mut zt) = (0.0, 0.0, 0.0);
        for n in -4..=4 {
            let nf = n as f64;
            let a = psi1(x + nf).0;
            let b = psi2(x + nf).0;
            xt += a * (TAU * (z + nf * y)).cos() + b * (2.0 * TAU * (z + nf * y)).cos();
            yt += 2.0 * a * (TAU * (z + nf * y)).sin() + b * (2.0 * TAU * (z + nf * y)).sin();
            zt += a * a * (2.0 * TAU * (z + nf * y)).sin() / 2.0
                + b * b * (4.0 * TAU * (z + nf * y)).sin() / 4.0;
            for m in -4..=4 {
                let mf = m as f64;
                let am = psi1(x + mf).0;
                zt += w
                    * am
                    * b
                    * ((TAU * (z + (2.0 * nf - mf) * y)).sin()
                        + (TAU * (3.0 * z + (2.0 * nf + mf) * y)).sin() / 3.0);
            }
        }
        [xt, yt, zt]
    }

    #[test]
    fn bump_values() {
        assert_eq!(psi1(0.0).0, INV_SQRT_TAU);
        assert_eq!(psi1(0.5), (0.0, 0.0));
        assert_eq!(psi1(-0.5), (0.0, 0.0));
        assert_eq!(psi1(0.8).0, 0.0);
        let total = TAU
            * (psi1(0.3).0.powi(2)
                + psi1(-0.7).0.powi(2)
                + psi2(0.3).0.powi(2)
                + psi2(-0.7).0.powi(2));
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bump_derivative_matches_differences() {
        for &x in &[-0.45, -0.3, -0.1, -0.01, 0.02, 0.2, 0.37, 0.49] {
            let h = 1e-6;
            let fd = (psi1(x + h).0 - psi1(x - h).0) / (2.0 * h);
            let d = psi1(x).1;
            assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-3), "x={x} {fd} {d}");
        }
    }

    #[test]
    fn tilde_matches_brute_force_sum() {
        for w in [1.0, 2.0] {
            let s = LegendrianSeries { cross_weight: w };
            for i in 0..200 {
                let p = NilPoint::new(
                    -2.0 + 0.0237 * i as f64,
                    (i as f64 * 0.618).sin() * 3.0,
                    (i as f64 * 1.3).cos() * 2.0,
                );
                let t = s.eval_tilde(p);
                let o = oracle_tilde(p, w);
                assert!((t.xt - o[0]).abs() < 1e-13);
                assert!((t.yt - o[1]).abs() < 1e-13);
                assert!((t.zt - o[2]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partials_match_differences() {
        let s = LegendrianSeries::double_cross();
        for i in 0..100 {
            let p = NilPoint::new(0.01 + 0.0099 * i as f64, 0.37 * i as f64, 0.11 * i as f64);
            let t = s.eval_tilde(p);
            let h = 1e-6;
            for c in 0..3 {
                let mut a = [p.x, p.y, p.z];
                let mut b = a;
                a[c] += h;
                b[c] -= h;
                let ta = s.eval_tilde(NilPoint::new(a[0], a[1], a[2]));
                let tb = s.eval_tilde(NilPoint::new(b[0], b[1], b[2]));
                for (got, fd) in [
                    (t.dxt[c], (ta.xt - tb.xt) / (2.0 * h)),
                    (t.dyt[c], (ta.yt - tb.yt) / (2.0 * h)),
                    (t.dzt[c], (ta.zt - tb.zt) / (2.0 * h)),
                ] {
                    assert!((got - fd).abs() < 1e-6 * got.abs().max(1.0), "{p:?} {c}");
                }
            }
        }
    }

    #[test]
    fn double_weight_is_legendrian() {
        let s = LegendrianSeries::double_cross();
        assert!(s.pde_residual(NilPoint::new(0.0, 0.37, 0.81)).abs() < 1e-10);
        for i in 0..500 {
            let p = NilPoint::new(i as f64 / 500.0, (i as f64 * 0.7).fract(), (i as f64 * 0.31).fract());
            assert!(s.pde_residual(p).abs() < 1e-10);
            assert!(s.phi_frame(p)[(2, 2)].abs() < 1e-10);
        }
    }

    #[test]
    fn unit_weight_defect_has_predicted_modes() {
        let s = LegendrianSeries::unit_cross();
        let x = 0.3;
        let modes = s.residual_spectrum(x, 16, 4);
        let amp = unit_cross_defect_amplitude(x);
        assert_eq!(modes.len(), 2);
        for m in &modes {
            assert!((m.amplitude - amp).abs() < 1e-9);
            assert!(m.nu_z == 1 || m.nu_z == 3);
            assert_eq!(m.nu_y, 0);
        }
    }

    #[test]
    fn homotopy_endpoints() {
        let s = LegendrianSeries::double_cross();
        let p = NilPoint::new(0.2, 0.4, 0.6);
        assert_eq!(s.homotopy(p, 0.0), p);
        assert!(s.homotopy(p, 1.0).dist_coords(s.eval_phi(p)) < 1e-15);
    }
}
