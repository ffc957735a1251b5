//! Fiberwise polynomial bundle map `E → TS²`.

use super::atlas::{frame_vector, transition};
use crate::geom::hopf::Chart;
use crate::geom::sphere::Vec3;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Multiplicity-counted area of `w ↦ Σ a_i w^{k_i}` on the closed unit disk.
pub fn poly_disk_area(terms: &[(Complex64, u32)]) -> f64 {
    PI * terms.iter().map(|(a, k)| a.norm_sqr() * *k as f64).sum::<f64>()
}

/// Same area from the boundary: `∮ u dv` on `samples` equally spaced points.
pub fn poly_disk_area_boundary(terms: &[(Complex64, u32)], samples: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..samples {
        let th = TAU * i as f64 / samples as f64;
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for (a, k) in terms {
            let w = Complex64::from_polar(1.0, *k as f64 * th);
            f += a * w;
            df += a * w * Complex64::new(0.0, *k as f64);
        }
        acc += f.re * df.im;
    }
    acc * TAU / samples as f64
}

pub fn eval_poly(terms: &[(Complex64, u32)], w: Complex64) -> Complex64 {
    terms.iter().map(|(a, k)| a * w.powu(*k)).sum()
}

pub fn eval_poly_deriv(terms: &[(Complex64, u32)], w: Complex64) -> Complex64 {
    terms
        .iter()
        .filter(|(_, k)| *k > 0)
        .map(|(a, k)| a * (*k as f64) * w.powu(k - 1))
        .sum()
}

/// Smooth step: 0 for `s ≤ 0`, 1 for `s ≥ 1`.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

/// Chart cutoff: `h_N = 1` for `η ≥ −0.3`, `0` for `η ≤ −0.6`; `h_S(η) = h_N(−η)`.
pub fn chart_weight(chart: Chart, eta: f64) -> f64 {
    let e = match chart {
        Chart::North => eta,
        Chart::South => -eta,
    };
    smooth_step((e + 0.6) / 0.3)
}

/// `φ₁ = h_N frame_N[w_N^{k_N}] + h_S frame_S[w_S^{k_S}]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FiberPolynomial {
    pub k_north: u32,
    pub k_south: u32,
}

impl FiberPolynomial {
    pub fn new(k_min: u32) -> Self {
        FiberPolynomial { k_north: k_min, k_south: k_min + 1 }
    }

    pub fn exponent(&self, chart: Chart) -> u32 {
        match chart {
            Chart::North => self.k_north,
            Chart::South => self.k_south,
        }
    }

    /// Polynomial terms in the frame and fiber coordinate of `chart`.
    /// With `u = s_c⁻¹ s_{c'}` the other chart contributes `h_{c'} u^{2−k'} w^{k'}`.
    pub fn terms(&self, b: &Vec3, chart: Chart) -> Vec<(Complex64, u32)> {
        let mut out = Vec::with_capacity(2);
        let own = chart_weight(chart, b[0]);
        if own > 0.0 {
            out.push((Complex64::new(own, 0.0), self.exponent(chart)));
        }
        let other = chart.other();
        let h = chart_weight(other, b[0]);
        if h > 0.0 {
            let k = self.exponent(other);
            let u = transition(b, chart, other);
            let c = u.conj().powu(k - 2) * h;
            out.push((c, k));
        }
        out
    }

    /// Tangent vector at `b` for the `E` point with `chart` coordinate `w`.
    pub fn eval(&self, b: &Vec3, chart: Chart, w: Complex64) -> Vec3 {
        frame_vector(chart.section(b), eval_poly(&self.terms(b, chart), w))
    }

    pub fn disk_area(&self, b: &Vec3) -> f64 {
        poly_disk_area(&self.terms(b, Chart::for_point(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::atlas::{base_point, convert_fiber};

    #[test]
    fn closed_form_matches_boundary() {
        let terms = [(Complex64::new(0.6, -0.2), 7), (Complex64::new(-0.3, 0.9), 8)];
        let a = poly_disk_area(&terms);
        let b = poly_disk_area_boundary(&terms, 1 << 12);
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn charts_agree_on_overlap() {
        let p = FiberPolynomial::new(9);
        for eta in [-0.55, -0.4, -0.1, 0.2, 0.45] {
            let b = base_point(eta, 0.7 + eta);
            let w = Complex64::from_polar(0.8, 1.3);
            let vn = p.eval(&b, Chart::North, w);
            let ws = convert_fiber(&b, Chart::North, Chart::South, w);
            let vs = p.eval(&b, Chart::South, ws);
            assert!((vn - vs).norm() < 1e-12, "eta {eta}");
            assert!(vn.dot(&b).abs() < 1e-12);
        }
    }

    #[test]
    fn leading_coefficient_is_one() {
        let p = FiberPolynomial::new(5);
        for eta in [-0.99, -0.45, 0.0, 0.45, 0.99] {
            let b = base_point(eta, 2.0);
            let m = p
                .terms(&b, Chart::for_point(&b))
                .iter()
                .map(|(a, _)| a.norm())
                .fold(0.0, f64::max);
            assert!((m - 1.0).abs() < 1e-12);
        }
    }
}
