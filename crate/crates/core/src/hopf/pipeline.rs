//! Legendrian self-map of S³ close to the identity, built in four stages:
//! `φ₁` fiberwise polynomial, `φ₂` exponential with area normalization,
//! `φ₃` sector-area reparameterization, `φ₄` horizontal lift of radii.

use super::atlas::{base_point, fiber_point, frame_vector};
use super::poly::{eval_poly, eval_poly_deriv, poly_disk_area, FiberPolynomial};
use crate::contact::circle::{circle_dev_with, CircleMap, MIN_DEV_SAMPLES};
use crate::contact::curve::SphereCurve;
use crate::contact::lift::lift_path;
use crate::error::{Error, Result};
use crate::geom::hopf::{hopf_projection, Chart};
use crate::geom::quat::Quaternion;
use crate::geom::sphere::{sinc, sphere_exp, Vec3};
use crate::quadrature::{composite, gauss_legendre};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Holonomy-to-area constant of the round Hopf fibration.
pub const HOPF_C: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineStage {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

/// How radii are lifted to S³.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMethod {
    /// `θ̇ = −⟨σ̄σ̇, i⟩` along a chart section, Gauss–Legendre on graded panels.
    Section { panels: usize, order: usize },
    /// RK4 horizontal-lift ODE.
    Ode { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HopfConfig {
    pub epsilon: f64,
    /// Smallest exponent; `None` picks `⌈(A/2π)·16n²/ε²⌉` for target area `A`.
    pub k_min: Option<u32>,
    /// Gauss–Legendre panels across the boundary layer `[1 − 40/k, 1]` of the disk.
    pub radial_panels: usize,
    pub radial_order: usize,
    /// Equally spaced angles for disk and sector quadrature.
    pub angular: usize,
    pub root_tol: f64,
    pub lift: LiftMethod,
}

impl Default for HopfConfig {
    fn default() -> Self {
        HopfConfig {
            epsilon: 1.0,
            k_min: None,
            radial_panels: 20,
            radial_order: 8,
            angular: 64,
            root_tol: 1e-10,
            lift: LiftMethod::Section { panels: 4, order: 12 },
        }
    }
}

impl HopfConfig {
    pub const N_TERMS: usize = 2;

    pub fn target_area() -> f64 {
        TAU / HOPF_C
    }

    pub fn t_max(&self) -> f64 {
        self.epsilon / (2.0 * Self::N_TERMS as f64)
    }

    pub fn k_min(&self) -> u32 {
        self.k_min.unwrap_or_else(|| {
            let n = Self::N_TERMS as f64;
            let k = Self::target_area() / TAU * 16.0 * n * n / (self.epsilon * self.epsilon);
            k.ceil() as u32
        })
    }

    /// Coarser quadrature on every axis, for refinement studies.
    pub fn coarse(&self) -> Self {
        HopfConfig {
            radial_panels: (self.radial_panels / 2).max(2),
            radial_order: (self.radial_order / 2).max(2),
            angular: (self.angular / 2).max(8),
            lift: match self.lift {
                LiftMethod::Section { panels, order } => LiftMethod::Section {
                    panels: (panels / 2).max(1),
                    order: (order / 2).max(2),
                },
                LiftMethod::Ode { steps } => LiftMethod::Ode { steps: (steps / 2).max(8) },
            },
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.epsilon > 0.0
            && self.radial_panels >= 1
            && self.radial_order >= 2
            && self.angular >= 8
            && self.root_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid hopf config {self:?}")))
        }
    }
}

/// `t² sinc(tρ)` and its `t` derivative `t (sinc(tρ) + cos(tρ))`.
fn area_kernel(t: f64, rho: f64) -> (f64, f64) {
    let s = sinc(t * rho);
    (t * t * s, t * (s + (t * rho).cos()))
}

/// Per-fiber data for `φ₂` and `φ₃`: scale `t(b)` and the balanced reparameterization.
#[derive(Debug, Clone)]
pub struct FiberData {
    pub base: Vec3,
    pub chart: Chart,
    pub terms: Vec<(Complex64, u32)>,
    pub t: f64,
    /// `F(b, t(b))`.
    pub area: f64,
    /// Normalized sector density `A'(α)/mean = 1 + Σ p_m cos mα + q_m sin mα`.
    pub p: Arc<Vec<f64>>,
    pub q: Arc<Vec<f64>>,
    /// `Dev(f_b)`, trapezoid quadrature of the cumulative area.
    pub dev: f64,
    /// `Dev(f_b)` from the Fourier coefficients, `−Σ q_m/m`.
    pub dev_closed: f64,
}

/// Normalized cumulative sector area `F(α) = α + Σ (p_m sin mα + q_m (1 − cos mα))/m`.
fn sector_value(p: &[f64], q: &[f64], a: f64) -> (f64, f64) {
    let (mut v, mut d) = (a, 1.0);
    for (i, (pm, qm)) in p.iter().zip(q).enumerate() {
        let m = (i + 1) as f64;
        let (s, c) = (m * a).sin_cos();
        v += (pm * s + qm * (1.0 - c)) / m;
        d += pm * c + qm * s;
    }
    (v, d)
}

/// Inverse of the normalized sector area on ℝ (it commutes with `+2π`).
fn sector_inverse(p: &[f64], q: &[f64], theta: f64) -> f64 {
    let turns = (theta / TAU).floor();
    let r = theta - turns * TAU;
    let (mut lo, mut hi) = (0.0, TAU);
    let mut a = r;
    for _ in 0..100 {
        let (v, d) = sector_value(p, q, a);
        let g = v - r;
        if g.abs() < 1e-14 {
            break;
        }
        if g > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let next = a - g / d;
        a = if next > lo && next < hi && d > 0.0 { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 {
            break;
        }
    }
    a + turns * TAU
}

impl FiberData {
    pub fn sector_area(&self, a: f64) -> f64 {
        sector_value(&self.p, &self.q, a).0
    }

    /// `f_b`, inverse of the normalized sector area.
    pub fn unbalanced(&self, theta: f64) -> f64 {
        sector_inverse(&self.p, &self.q, theta)
    }

    /// `ψ_b = f_b ∘ R_{−Dev(f_b)}`.
    pub fn psi(&self, theta: f64) -> f64 {
        self.unbalanced(theta - self.dev)
    }

    pub fn psi_map(&self) -> CircleMap {
        let (p, q, dev) = (self.p.clone(), self.q.clone(), self.dev);
        CircleMap::from_lift(move |x| sector_inverse(&p, &q, x - dev))
    }

    /// `ψ_b⁻¹ = R_{Dev(f_b)} ∘ F`.
    pub fn psi_inverse_map(&self) -> CircleMap {
        let (p, q, dev) = (self.p.clone(), self.q.clone(), self.dev);
        CircleMap::from_lift(move |a| sector_value(&p, &q, a).0 + dev)
    }

    /// `Dev(ψ_b)` through the inverse.
    pub fn balanced_dev(&self) -> Result<f64> {
        Ok(-circle_dev_with(&self.psi_inverse_map(), MIN_DEV_SAMPLES)?)
    }

    pub fn section(&self) -> Quaternion {
        self.chart.section(&self.base)
    }

    /// Tangent vector `t·φ₁(w)` at the base point.
    pub fn scaled(&self, w: Complex64) -> Vec3 {
        frame_vector(self.section(), eval_poly(&self.terms, w) * self.t)
    }

    /// `φ₂(w) = exp_b(t φ₁(w))`.
    pub fn phi2(&self, w: Complex64) -> Vec3 {
        sphere_exp(&self.base, &self.scaled(w))
    }

    /// `φ₃(r e^{iθ}) = φ₂(r e^{iψ(θ)})`.
    pub fn phi3(&self, r: f64, theta: f64) -> Vec3 {
        self.phi2(Complex64::from_polar(r, self.psi(theta)))
    }

    /// Fiber point over the base with chart angle `θ`.
    pub fn point(&self, theta: f64) -> Quaternion {
        fiber_point(&self.base, self.chart, Complex64::from_polar(1.0, theta))
    }

    /// `ψ_b⁻¹(ψ) = F(ψ) + Dev(f_b)`.
    pub fn theta_of_psi(&self, psi: f64) -> f64 {
        self.sector_area(psi) + self.dev
    }

    /// Radius `s ↦ φ₃(s^{1/k₁} e^{iθ})` with `ψ = ψ_b(θ)`, and its velocity; the
    /// substitution makes the leading term linear in `s`.
    pub fn radius(&self, psi: f64) -> (impl Fn(f64) -> Vec3 + Clone, impl Fn(f64) -> Vec3 + Clone) {
        let k1 = self.terms.iter().map(|(_, k)| *k).min().unwrap_or(1) as f64;
        let coef: Vec<(Complex64, f64)> = self
            .terms
            .iter()
            .map(|(a, k)| (a * Complex64::from_polar(self.t, *k as f64 * psi), *k as f64 / k1))
            .collect();
        let sec = self.section();
        let b = self.base;
        let c2 = coef.clone();
        let tangent = move |s: f64| -> (Vec3, Vec3) {
            let mut g = Complex64::new(0.0, 0.0);
            let mut dg = Complex64::new(0.0, 0.0);
            for (a, e) in &c2 {
                g += a * s.powf(*e);
                dg += a * (*e * s.powf(*e - 1.0));
            }
            (frame_vector(sec, g), frame_vector(sec, dg))
        };
        let t1 = tangent.clone();
        let eval = move |s: f64| sphere_exp(&b, &t1(s).0);
        let deriv = move |s: f64| {
            let (v, dv) = tangent(s);
            exp_derivative(&b, &v, &dv)
        };
        (eval, deriv)
    }

    /// `φ₄` on the fiber: lift of the radius at chart angle `θ` starting at [`Self::point`].
    pub fn phi4(&self, theta: f64, method: LiftMethod) -> Quaternion {
        self.lift_to(theta, method, 1.0)
    }

    /// `φ₄` at the fiber point whose radius has reparameterized angle `ψ`.
    pub fn phi4_psi(&self, psi: f64, method: LiftMethod) -> Quaternion {
        self.lift_radius(self.point(self.theta_of_psi(psi)), psi, method, 1.0)
    }

    /// Lift of the radius up to parameter `tau` (the homotopy from the identity).
    pub fn lift_to(&self, theta: f64, method: LiftMethod, tau: f64) -> Quaternion {
        self.lift_radius(self.point(theta), self.psi(theta), method, tau)
    }

    fn lift_radius(&self, start: Quaternion, psi: f64, method: LiftMethod, tau: f64) -> Quaternion {
        if tau <= 0.0 {
            return start;
        }
        let (eval, deriv) = self.radius(psi);
        match method {
            LiftMethod::Section { panels, order } => {
                let (nodes, weights) = graded_nodes(tau, panels, order);
                let margin = |c: Chart| {
                    nodes.iter().map(|s| c.margin(&eval(*s))).fold(c.margin(&eval(tau)), f64::min)
                };
                let chart = if margin(self.chart) >= margin(self.chart.other()) {
                    self.chart
                } else {
                    self.chart.other()
                };
                if margin(chart) < 0.05 {
                    return self.ode_lift(start, eval, deriv, tau, 4096);
                }
                let mut dtheta = 0.0;
                for (s, w) in nodes.iter().zip(&weights) {
                    let p = eval(*s);
                    let sig = chart.section(&p);
                    let ds = chart.section_derivative(&p, &deriv(*s));
                    dtheta -= w * (sig.conj() * ds).x;
                }
                let th0 = chart.fiber_angle(start);
                chart.section(&eval(tau)) * Quaternion::exp_i(th0 + dtheta)
            }
            LiftMethod::Ode { steps } => self.ode_lift(start, eval, deriv, tau, steps),
        }
    }

    fn ode_lift(
        &self,
        start: Quaternion,
        eval: impl Fn(f64) -> Vec3 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> Vec3 + Send + Sync + 'static,
        tau: f64,
        steps: usize,
    ) -> Quaternion {
        let mut curve = SphereCurve::new(move |s| eval(s * tau), move |s| deriv(s * tau) * tau, false);
        curve.breaks = GRADING.iter().map(|g| g / tau).filter(|g| *g < 1.0).collect();
        lift_path(&curve, start, steps)
    }

    /// Length of the base radius at angle `θ`.
    pub fn radius_length(&self, theta: f64) -> f64 {
        let (_, deriv) = self.radius(self.psi(theta));
        let (nodes, weights) = graded_nodes(1.0, 4, 12);
        nodes.iter().zip(&weights).map(|(s, w)| w * deriv(*s).norm()).sum()
    }

    /// Area swept about the base point by the boundary image `φ₃(e^{iθ})`:
    /// `∮ (1 − cos ρ) dα`, sampled in the reparameterized angle.
    pub fn boundary_sweep(&self, samples: usize) -> f64 {
        let mut acc = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=samples {
            let th = TAU * i as f64 / samples as f64;
            let z = eval_poly(&self.terms, Complex64::from_polar(1.0, th)) * self.t;
            let (rho, al) = (z.norm(), z.arg());
            if let Some((pr, pa)) = prev {
                let da = crate::contact::lift::wrap_angle(al - pa);
                acc += 0.5 * ((1.0 - pr.cos()) + (1.0 - rho.cos())) * da;
            }
            prev = Some((rho, al));
        }
        acc
    }
}

/// Panel edges for radii; the `s^{1/k₁}` factor of higher terms varies on a log scale near 0.
const GRADING: [f64; 7] = [1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1];

fn graded_nodes(tau: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let mut edges = vec![0.0];
    edges.extend(GRADING.iter().copied().filter(|g| *g < tau));
    let last = *edges.last().unwrap_or(&0.0);
    for i in 1..=panels {
        edges.push(last + (tau - last) * i as f64 / panels as f64);
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, wt) in gx.iter().zip(&gw) {
            nodes.push(m + h * x);
            weights.push(h * wt);
        }
    }
    (nodes, weights)
}

/// Derivative of `exp_b(v)` along `dv`.
pub fn exp_derivative(b: &Vec3, v: &Vec3, dv: &Vec3) -> Vec3 {
    let rho = v.norm();
    if rho < 1e-12 {
        return *dv - b * v.dot(dv);
    }
    let drho = v.dot(dv) / rho;
    let s = sinc(rho);
    let ds = (rho.cos() - s) / rho;
    -b * (rho.sin() * drho) + dv * s + v * (ds * drho)
}

/// The pipeline with its quadrature rules.
#[derive(Debug, Clone)]
pub struct HopfPipeline {
    pub config: HopfConfig,
    pub phi1: FiberPolynomial,
    radial: (Vec<f64>, Vec<f64>),
}

/// Diagnostics for one base sample.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FiberDiagnostics {
    pub eta: f64,
    pub phi: f64,
    pub t: f64,
    pub poly_area: f64,
    pub area: f64,
    pub dev: f64,
    pub dev_closed: f64,
    pub dev_balanced: f64,
}

impl HopfPipeline {
    pub fn new(config: HopfConfig) -> Result<Self> {
        config.validate()?;
        let k = config.k_min();
        let span = (40.0 / k as f64).min(1.0);
        let (mut x, mut w) = composite(1.0 - span, 1.0, config.radial_panels, config.radial_order);
        if span < 1.0 {
            let (xi, wi) = composite(0.0, 1.0 - span, 2, config.radial_order);
            x.extend(xi);
            w.extend(wi);
        }
        Ok(HopfPipeline { config, phi1: FiberPolynomial::new(k), radial: (x, w) })
    }

    /// `|f|` and `|f'|² r w_r w_α` on the polar grid.
    fn disk_samples(&self, terms: &[(Complex64, u32)]) -> Vec<(usize, f64, f64)> {
        let m = self.config.angular;
        let (rs, ws) = &self.radial;
        let mut out = Vec::with_capacity(m * rs.len());
        for j in 0..m {
            let a = TAU * j as f64 / m as f64;
            for (r, w) in rs.iter().zip(ws) {
                let z = Complex64::from_polar(*r, a);
                let f = eval_poly(terms, z).norm();
                let df = eval_poly_deriv(terms, z).norm_sqr();
                out.push((j, f, df * r * w * TAU / m as f64));
            }
        }
        out
    }

    /// `F(b, t)` and `∂F/∂t` for the given terms.
    pub fn disk_area(&self, terms: &[(Complex64, u32)], t: f64) -> (f64, f64) {
        area_from(&self.disk_samples(terms), t)
    }

    /// Builds `t(b)` and `ψ_b` for the fiber over `b`.
    pub fn fiber(&self, b: &Vec3) -> Result<FiberData> {
        self.fiber_in(b, Chart::for_point(b))
    }

    /// Same in the coordinates of a given chart.
    pub fn fiber_in(&self, b: &Vec3, chart: Chart) -> Result<FiberData> {
        let terms = self.phi1.terms(b, chart);
        let samples = self.disk_samples(&terms);
        let target = HopfConfig::target_area();
        let t_max = self.config.t_max();
        let (f_max, _) = area_from(&samples, t_max);
        if f_max < target {
            return Err(Error::RootNotBracketed { base: [b[0], b[1], b[2]], value: f_max, target });
        }
        let (mut lo, mut hi) = (0.0, t_max);
        let mut t = (target / poly_disk_area(&terms)).sqrt().min(t_max);
        let mut area = f_max;
        for _ in 0..200 {
            let (f, df) = area_from(&samples, t);
            area = f;
            let g = f - target;
            if g.abs() <= self.config.root_tol {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let next = t - g / df;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        let m = self.config.angular;
        let mut density = vec![0.0; m];
        for (j, f, w) in &samples {
            density[*j] += w * area_kernel(t, *f).0;
        }
        let mean = density.iter().sum::<f64>() / m as f64;
        let min = density.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::NonMonotoneArea(min / mean));
        }
        let harmonics = m / 2 - 1;
        let mut p = vec![0.0; harmonics];
        let mut q = vec![0.0; harmonics];
        for h in 0..harmonics {
            let mm = (h + 1) as f64;
            for (j, d) in density.iter().enumerate() {
                let a = TAU * j as f64 / m as f64;
                p[h] += 2.0 * d * (mm * a).cos() / (m as f64 * mean);
                q[h] += 2.0 * d * (mm * a).sin() / (m as f64 * mean);
            }
        }
        let dev_closed = -q.iter().enumerate().map(|(h, qm)| qm / (h + 1) as f64).sum::<f64>();
        let (pa, qa) = (Arc::new(p), Arc::new(q));
        let (pc, qc) = (pa.clone(), qa.clone());
        // Dev of a circle diffeomorphism is minus Dev of its inverse, and the
        // cumulative area is smooth where its inverse is steep.
        let sector = CircleMap::from_lift(move |a| sector_value(&pc, &qc, a).0);
        let dev = -circle_dev_with(&sector, MIN_DEV_SAMPLES)?;
        Ok(FiberData { base: *b, chart, terms, t, area, p: pa, q: qa, dev, dev_closed })
    }

    pub fn diagnostics(&self, eta: f64, phi: f64) -> Result<FiberDiagnostics> {
        let b = base_point(eta, phi);
        let fd = self.fiber(&b)?;
        Ok(FiberDiagnostics {
            eta,
            phi,
            t: fd.t,
            poly_area: poly_disk_area(&fd.terms),
            area: fd.area,
            dev: fd.dev,
            dev_closed: fd.dev_closed,
            dev_balanced: fd.balanced_dev()?,
        })
    }

    /// `φ₄(x)`.
    pub fn phi4(&self, x: Quaternion) -> Result<Quaternion> {
        let x = x.normalize()?;
        let b = hopf_projection(x);
        let fd = self.fiber(&b)?;
        Ok(fd.phi4(fd.chart.fiber_angle(x), self.config.lift))
    }

    /// Homotopy `H(x, τ)` from the identity (`τ = 0`) to `φ₄` (`τ = 1`).
    pub fn homotopy(&self, x: Quaternion, tau: f64) -> Result<Quaternion> {
        let x = x.normalize()?;
        let b = hopf_projection(x);
        let fd = self.fiber(&b)?;
        Ok(fd.lift_to(fd.chart.fiber_angle(x), self.config.lift, tau))
    }
}

fn area_from(samples: &[(usize, f64, f64)], t: f64) -> (f64, f64) {
    samples.iter().fold((0.0, 0.0), |(f, d), (_, rho, w)| {
        let (k, dk) = area_kernel(t, *rho);
        (f + w * k, d + w * dk)
    })
}

/// Fiber-direction pushforward `d/dθ φ₄(x e^{iθ})` and its contact-form component.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LegendrianSample {
    pub theta: f64,
    pub speed: f64,
    /// `|⟨v, φ₄(x) i⟩| / |v|`.
    pub residual: f64,
    /// Geodesic distance `d(x, φ₄(x))`.
    pub displacement: f64,
}

pub const FIBER_FD_STEP: f64 = 1e-5;

impl FiberData {
    /// The fiber derivative is taken in the radius angle `ψ` and is parallel to
    /// `d/dθ` by the chain rule; `ψ` keeps the difference quotient away from the
    /// steep parts of `ψ_b`.
    pub fn legendrian_sample(&self, theta: f64, method: LiftMethod) -> LegendrianSample {
        let h = FIBER_FD_STEP;
        let psi = self.psi(theta);
        let y = self.phi4_psi(psi, method);
        let v = (self.phi4_psi(psi + h, method) - self.phi4_psi(psi - h, method)).scale(0.5 / h);
        let dtheta = self.theta_of_psi(psi + h) - self.theta_of_psi(psi - h);
        let speed = v.norm() * 2.0 * h / dtheta;
        let residual = v.dot(y * Quaternion::I).abs() / v.norm();
        LegendrianSample { theta, speed, residual, displacement: self.point(theta).angle_to(y) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> HopfPipeline {
        HopfPipeline::new(HopfConfig { epsilon: 2.0, ..Default::default() }).unwrap()
    }

    #[test]
    fn default_exponent() {
        assert_eq!(HopfConfig::default().k_min(), 128);
        assert_eq!(HopfConfig { epsilon: 2.0, ..Default::default() }.k_min(), 32);
    }

    #[test]
    fn area_hits_target() {
        let p = small();
        for eta in [-0.9, -0.45, 0.0, 0.45, 0.9] {
            let fd = p.fiber(&base_point(eta, 0.4)).unwrap();
            assert!((fd.area - HopfConfig::target_area()).abs() < 1e-9);
            assert!(fd.t > 0.0 && fd.t <= p.config.t_max());
            assert!((fd.dev - fd.dev_closed).abs() < 1e-9, "{} {}", fd.dev, fd.dev_closed);
        }
    }

    #[test]
    fn exp_derivative_matches_fd() {
        let b = base_point(0.3, 1.0);
        let s = Chart::North.section(&b);
        let v = frame_vector(s, Complex64::new(0.3, 0.2));
        let dv = frame_vector(s, Complex64::new(-0.1, 0.7));
        let h = 1e-6;
        let fd = (sphere_exp(&b, &(v + dv * h)) - sphere_exp(&b, &(v - dv * h))) / (2.0 * h);
        assert!((fd - exp_derivative(&b, &v, &dv)).norm() < 1e-8);
    }

    #[test]
    fn sector_inverse_roundtrip() {
        let p = vec![0.2, -0.05];
        let q = vec![0.1, 0.03];
        for th in [-3.0, 0.0, 1.0, 5.0, 9.0] {
            let a = sector_inverse(&p, &q, th);
            let (v, _) = sector_value(&p, &q, a - (th / TAU).floor() * TAU);
            assert!((v + (th / TAU).floor() * TAU - th).abs() < 1e-12);
        }
    }

    #[test]
    fn lifts_agree_and_stay_on_fiber_image() {
        let p = small();
        let fd = p.fiber(&base_point(0.2, 2.0)).unwrap();
        for th in [0.0, 1.3, 4.0] {
            let a = fd.phi4(th, LiftMethod::Section { panels: 4, order: 12 });
            let b = fd.phi4(th, LiftMethod::Ode { steps: 4096 });
            assert!(a.dist(b) < 1e-6, "{}", a.dist(b));
            assert!((hopf_projection(a) - fd.phi3(1.0, th)).norm() < 1e-12);
        }
    }

    #[test]
    fn fiber_direction_is_horizontal() {
        let p = small();
        let fd = p.fiber(&base_point(-0.4, 0.3)).unwrap();
        for th in [0.1, 2.0, 5.5] {
            let s = fd.legendrian_sample(th, p.config.lift);
            assert!(s.residual < 1e-4, "{s:?}");
            assert!(s.displacement < p.config.epsilon);
        }
    }
}
