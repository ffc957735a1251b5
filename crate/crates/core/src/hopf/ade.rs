//! Right multiplication `r_ξ(q) = q ξ` with `ξ = (1 + j)/√2`: Legendrian and inverse Legendrian.

use crate::analysis::{SampleDomain, Sobol};
use crate::geom::quat::Quaternion;
use crate::geom::GroupPoint;
use crate::zoo::QuatRight;
use nalgebra::{Matrix3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AdeReport {
    pub samples: usize,
    /// Largest entry of `frame − [Z, Y, −X]`.
    pub frame_residual: f64,
    /// Largest gap between the analytic frame and finite differences of `q ↦ q ξ`.
    pub fd_residual: f64,
    /// `sup |α(f_* X)|`.
    pub legendrian: f64,
    /// `sup` distance of the fiber direction from `f_*(D)`.
    pub inverse_legendrian: f64,
    /// `sup |r_ξ(g q h) − g r_ξ(q) h|` over `h ∈ {±1, ±j}`.
    pub commutation: f64,
}

/// Frame columns `(Z, Y, −X)`.
pub fn ade_expected() -> Matrix3<f64> {
    Matrix3::from_columns(&[Vector3::z(), Vector3::y(), -Vector3::x()])
}

fn fd_frame(xi: Quaternion, q: Quaternion) -> Matrix3<f64> {
    let h = 1e-6;
    let fq = q * xi;
    let cols = [Quaternion::I, Quaternion::J, Quaternion::K].map(|e| {
        let step = |s: f64| {
            let c = Quaternion::new(s.cos(), 0.0, 0.0, 0.0) + e.scale(s.sin());
            q * c * xi
        };
        let d = (step(h) - step(-h)).scale(0.5 / h);
        let v = fq.conj() * d;
        Vector3::new(v.x, v.y, v.z)
    });
    Matrix3::from_columns(&cols)
}

pub fn verify_ade(xi: Quaternion, samples: usize) -> AdeReport {
    let map = QuatRight { xi };
    let expected = ade_expected();
    let sobol = Sobol::new(3);
    let hs = [Quaternion::ONE, -Quaternion::ONE, Quaternion::J, -Quaternion::J];
    let mut r = AdeReport {
        samples,
        frame_residual: 0.0,
        fd_residual: 0.0,
        legendrian: 0.0,
        inverse_legendrian: 0.0,
        commutation: 0.0,
    };
    for i in 0..samples {
        let GroupPoint::S3(q) = SampleDomain::S3.point(&sobol.point(i as u64)) else {
            unreachable!()
        };
        let m = map.frame_at(q);
        r.frame_residual = r.frame_residual.max((m - expected).amax());
        r.fd_residual = r.fd_residual.max((fd_frame(xi, q) - m).amax());
        let fx = m.column(0);
        r.legendrian = r.legendrian.max(fx[0].abs());
        let n = m.column(1).cross(&m.column(2)).normalize();
        r.inverse_legendrian = r.inverse_legendrian.max(n[0].abs());
        let g = Quaternion::new(0.3, -0.5, 0.7, 0.1).normalize().expect("unit");
        for h in hs {
            let lhs = (g * q * h) * xi;
            let rhs = g * (q * xi) * h;
            r.commutation = r.commutation.max(lhs.dist(rhs));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ade_holds() {
        let r = verify_ade(QuatRight::ade().xi, 200);
        assert!(r.frame_residual < 1e-12);
        assert!(r.fd_residual < 1e-8);
        assert!(r.legendrian < 1e-12);
        assert!(r.inverse_legendrian < 1e-12);
        assert!(r.commutation < 1e-12);
    }

    #[test]
    fn generic_xi_is_not_legendrian() {
        let xi = Quaternion::new(0.8, 0.0, 0.0, 0.6);
        let r = verify_ade(xi, 20);
        assert!(r.frame_residual > 0.1);
    }
}
