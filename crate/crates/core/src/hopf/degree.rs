//! Degree of `φ₄` by pulling back the volume form of S³.

use super::atlas::base_point;
use super::pipeline::HopfPipeline;
use crate::analysis::{DegreeMethod, DegreeReport};
use crate::error::Result;
use crate::geom::hopf::Chart;
use crate::geom::quat::Quaternion;
use crate::quadrature::gauss_legendre;
use nalgebra::Matrix4;
use std::f64::consts::TAU;

/// Tensor rule in `(η, φ, ψ)`; `theta_nodes` counts the fiber direction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PullbackRule {
    /// Gauss–Legendre nodes per `η` panel; panels break at the chart cutoffs.
    pub eta_order: usize,
    pub phi_nodes: usize,
    pub theta_nodes: usize,
}

impl Default for PullbackRule {
    fn default() -> Self {
        PullbackRule { eta_order: 10, phi_nodes: 1, theta_nodes: 256 }
    }
}

const ETA_BREAKS: [f64; 7] = [-1.0, -0.6, -0.3, 0.0, 0.3, 0.6, 1.0];
const STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PullbackDegree {
    pub report: DegreeReport,
    /// `∫ det[x, ∂x]` for the identity; `2π²` up to orientation.
    pub identity_volume: f64,
    /// Spread of the `θ`-integrated density across `φ` nodes, relative.
    pub phi_spread: f64,
}

fn col(q: Quaternion) -> nalgebra::Vector4<f64> {
    nalgebra::Vector4::new(q.w, q.x, q.y, q.z)
}

/// `∫∫ det dφ dψ` at fixed `η` for `φ₄` and the identity, and the relative spread over `φ`.
/// Fiber points are parameterized by the reparameterized angle `ψ` of their radius,
/// `x = s_c(b) e^{iψ_b⁻¹(ψ)}`, which keeps the integrand free of the steep parts of `ψ_b`.
pub fn slice(p: &HopfPipeline, eta: f64, rule: &PullbackRule) -> Result<(f64, f64, f64)> {
    let h = STEP;
    let d = 0.5 / h;
    let lift = p.config.lift;
    let mut per_phi = Vec::with_capacity(rule.phi_nodes);
    let mut ident = 0.0;
    let cell = TAU / rule.theta_nodes as f64 * TAU / rule.phi_nodes as f64;
    for j in 0..rule.phi_nodes {
        let phi = TAU * (j as f64 + 0.5) / rule.phi_nodes as f64;
        let chart = Chart::for_point(&base_point(eta, phi));
        let offsets = [(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)];
        let fibers = offsets
            .iter()
            .map(|(de, dp)| p.fiber_in(&base_point(eta + de, phi + dp), chart))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = 0.0;
        let mut acc_id = 0.0;
        for l in 0..rule.theta_nodes {
            let psi = TAU * l as f64 / rule.theta_nodes as f64;
            let xs: Vec<Quaternion> =
                fibers.iter().map(|fd| fd.point(fd.theta_of_psi(psi))).collect();
            let ys: Vec<Quaternion> = fibers.iter().map(|fd| fd.phi4_psi(psi, lift)).collect();
            let c = &fibers[0];
            let (xu, xd) = (c.point(c.theta_of_psi(psi + h)), c.point(c.theta_of_psi(psi - h)));
            let (yu, yd) = (c.phi4_psi(psi + h, lift), c.phi4_psi(psi - h, lift));
            let m = Matrix4::from_columns(&[
                col(ys[0]),
                col(ys[1] - ys[2]) * d,
                col(ys[3] - ys[4]) * d,
                col(yu - yd) * d,
            ]);
            acc += m.determinant();
            let mi = Matrix4::from_columns(&[
                col(xs[0]),
                col(xs[1] - xs[2]) * d,
                col(xs[3] - xs[4]) * d,
                col(xu - xd) * d,
            ]);
            acc_id += mi.determinant();
        }
        per_phi.push(acc * cell);
        ident += acc_id * cell;
    }
    let total: f64 = per_phi.iter().sum();
    let lo = per_phi.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = per_phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = if total != 0.0 { (hi - lo) * rule.phi_nodes as f64 / total.abs() } else { 0.0 };
    Ok((total, ident, spread))
}

pub fn degree_phi4(p: &HopfPipeline, rule: &PullbackRule) -> Result<PullbackDegree> {
    let (gx, gw) = gauss_legendre(rule.eta_order);
    let mut total = 0.0;
    let mut ident = 0.0;
    let mut spread: f64 = 0.0;
    for w in ETA_BREAKS.windows(2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (xe, we) in gx.iter().zip(&gw) {
            let (a, b, s) = slice(p, mid + half * xe, rule)?;
            total += we * half * a;
            ident += we * half * b;
            spread = spread.max(s);
        }
    }
    let raw = total / ident;
    let resolution = rule.theta_nodes.max(6 * rule.eta_order).max(rule.phi_nodes);
    Ok(PullbackDegree {
        report: DegreeReport::from_raw(raw, DegreeMethod::Quadrature, resolution),
        identity_volume: ident,
        phi_spread: spread,
    })
}
