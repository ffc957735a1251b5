//! Two-chart atlas of S² with the Hopf line bundle `E` and the tangent bundle.

use crate::geom::hopf::{hopf_projection, Chart};
use crate::geom::quat::Quaternion;
use crate::geom::sphere::Vec3;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Tangent vector at `π(s)` with frame coordinate `ζ`: `s (ζ j) s̄`.
pub fn frame_vector(section: Quaternion, zeta: Complex64) -> Vec3 {
    let q = Quaternion::new(0.0, 0.0, zeta.re, zeta.im);
    let v = section * q * section.conj();
    Vec3::new(v.x, v.y, v.z)
}

/// Inverse of [`frame_vector`] for a tangent vector `v` at `π(s)`.
pub fn frame_coords(section: Quaternion, v: &Vec3) -> Complex64 {
    let q = section.conj() * Quaternion::pure([v[0], v[1], v[2]]) * section;
    Complex64::new(q.y, q.z)
}

/// `s_from⁻¹ s_to`, a unit complex number on the overlap.
pub fn transition(b: &Vec3, from: Chart, to: Chart) -> Complex64 {
    let q = from.section(b).conj() * to.section(b);
    Complex64::new(q.w, q.x)
}

/// Conversion of an `E` fiber coordinate: `w_to = ū w_from` with `u = s_from⁻¹ s_to`.
pub fn convert_fiber(b: &Vec3, from: Chart, to: Chart, w: Complex64) -> Complex64 {
    transition(b, from, to).conj() * w
}

/// Fiber point of S³ over `b` with chart coordinate `w` on the unit circle.
pub fn fiber_point(b: &Vec3, chart: Chart, w: Complex64) -> Quaternion {
    chart.section(b) * Quaternion::new(w.re, w.im, 0.0, 0.0)
}

/// Atlas checks on the overlap.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AtlasReport {
    /// Largest `|u_NS u_SN − 1|` and off-circle component of transitions.
    pub cocycle_residual: f64,
    /// Winding of the `E` transition around the equator.
    pub e_winding: i64,
    /// Winding of the tangent-bundle transition (`u²`) around the equator.
    pub tangent_winding: i64,
    /// Largest mismatch of tangent frames related by `u²`.
    pub frame_residual: f64,
}

pub struct ChartAtlas;

impl ChartAtlas {
    pub fn check(samples: usize) -> AtlasReport {
        let mut cocycle: f64 = 0.0;
        let mut frame: f64 = 0.0;
        let mut wind_e = 0.0;
        let mut wind_t = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=samples {
            let a = TAU * i as f64 / samples as f64;
            let b = Vec3::new(0.0, a.cos(), a.sin());
            let q = Chart::North.section(&b).conj() * Chart::South.section(&b);
            cocycle = cocycle.max(q.y.hypot(q.z));
            let u = transition(&b, Chart::North, Chart::South);
            let back = transition(&b, Chart::South, Chart::North);
            cocycle = cocycle.max((u * back - 1.0).norm());
            let zeta = Complex64::new(0.3, -0.7);
            let via_s = frame_vector(Chart::South.section(&b), zeta);
            let via_n = frame_vector(Chart::North.section(&b), u * u * zeta);
            frame = frame.max((via_s - via_n).norm());
            let (ae, at) = (u.arg(), (u * u).arg());
            if let Some((pe, pt)) = prev {
                wind_e += crate::contact::lift::wrap_angle(ae - pe);
                wind_t += crate::contact::lift::wrap_angle(at - pt);
            }
            prev = Some((ae, at));
        }
        AtlasReport {
            cocycle_residual: cocycle,
            e_winding: (wind_e / TAU).round() as i64,
            tangent_winding: (wind_t / TAU).round() as i64,
            frame_residual: frame,
        }
    }
}

/// Base point `(η, √(1−η²) cos φ, √(1−η²) sin φ)`.
pub fn base_point(eta: f64, phi: f64) -> Vec3 {
    let r = (1.0 - eta * eta).max(0.0).sqrt();
    Vec3::new(eta, r * phi.cos(), r * phi.sin())
}

pub fn projects_to(x: Quaternion, b: &Vec3) -> f64 {
    (hopf_projection(x) - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_is_consistent() {
        let r = ChartAtlas::check(720);
        assert!(r.cocycle_residual < 1e-12);
        assert!(r.frame_residual < 1e-12);
        assert_eq!(r.e_winding.abs(), 1);
        assert_eq!(r.tangent_winding.abs(), 2);
    }

    #[test]
    fn frame_is_oriented_and_inverts() {
        let b = base_point(0.3, 1.1);
        let s = Chart::North.section(&b);
        let e1 = frame_vector(s, Complex64::new(1.0, 0.0));
        let e2 = frame_vector(s, Complex64::new(0.0, 1.0));
        assert!((e1.cross(&e2) - b).norm() < 1e-12);
        let z = Complex64::new(0.4, 0.9);
        assert!((frame_coords(s, &frame_vector(s, z)) - z).norm() < 1e-12);
    }

    #[test]
    fn fiber_conversion_preserves_point() {
        let b = base_point(-0.1, 2.0);
        let w = Complex64::from_polar(1.0, 0.8);
        let x = fiber_point(&b, Chart::North, w);
        let ws = convert_fiber(&b, Chart::North, Chart::South, w);
        let y = fiber_point(&b, Chart::South, ws);
        assert!(x.dist(y) < 1e-12);
    }
}
