//! Circle maps through continuous lifts `g̃: ℝ → ℝ`, deviation and linearization.

use crate::error::{Error, Result};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Minimum sample count for deviation quadrature.
pub const MIN_DEV_SAMPLES: usize = 1 << 10;

/// A circle map given by a lift with `g̃(x + 2π) = g̃(x) + 2π d`.
#[derive(Clone)]
pub struct CircleMap {
    lift: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for CircleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CircleMap(g̃(0) = {})", self.lift(0.0))
    }
}

impl CircleMap {
    pub fn from_lift(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CircleMap { lift: Arc::new(f) }
    }

    pub fn identity() -> Self {
        Self::from_lift(|x| x)
    }

    pub fn rotation(theta: f64) -> Self {
        Self::from_lift(move |x| x + theta)
    }

    /// `z ↦ e^{iθ} z^d`.
    pub fn linear(d: i64, theta: f64) -> Self {
        Self::from_lift(move |x| d as f64 * x + theta)
    }

    /// Complex conjugation `z ↦ z̄`.
    pub fn conjugation() -> Self {
        Self::from_lift(|x| -x)
    }

    /// Continuous lift through `M` samples of `g` taken mod 2π at `x_i = 2π i / M`,
    /// unwrapped to the nearest branch and linearly interpolated.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        let m = angles.len();
        if m < 2 {
            return Err(Error::InvalidParameter("need at least 2 samples".into()));
        }
        let mut lift = Vec::with_capacity(m + 1);
        lift.push(angles[0]);
        for i in 1..=m {
            let prev = lift[i - 1];
            let raw = angles[i % m];
            let jump = crate::contact::lift::wrap_angle(raw - prev);
            if jump.abs() > PI / 2.0 {
                return Err(Error::LiftJump { index: i, jump });
            }
            lift.push(prev + jump);
        }
        let degree_total = lift[m] - lift[0];
        let lift = Arc::new(lift);
        Ok(Self::from_lift(move |x| {
            let t = x / TAU * m as f64;
            let k = t.floor();
            let cycles = (k / m as f64).floor();
            let i = (k - cycles * m as f64) as usize;
            let f = t - k;
            lift[i] + f * (lift[i + 1] - lift[i]) + cycles * degree_total
        }))
    }

    pub fn lift(&self, x: f64) -> f64 {
        (self.lift)(x)
    }

    pub fn degree(&self) -> i64 {
        ((self.lift(TAU) - self.lift(0.0)) / TAU).round() as i64
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CircleMap) -> CircleMap {
        let (a, b) = (self.lift.clone(), other.lift.clone());
        Self::from_lift(move |x| a(b(x)))
    }
}

/// `(1/2π) ∫₀^{2π} (g̃(x) − d x) dx` by the trapezoid rule on `samples ≥ 2¹⁰` nodes.
pub fn circle_dev_with(map: &CircleMap, samples: usize) -> Result<f64> {
    let m = samples.max(MIN_DEV_SAMPLES);
    let d = map.degree() as f64;
    let mut prev = map.lift(0.0);
    let mut total = 0.0;
    for i in 0..m {
        let x = TAU * i as f64 / m as f64;
        let g = if i == 0 { prev } else { map.lift(x) };
        if i > 0 {
            let jump = g - prev - d * TAU / m as f64;
            if jump.abs() > PI {
                return Err(Error::LiftJump { index: i, jump });
            }
            prev = g;
        }
        total += g - d * x;
    }
    Ok(total / m as f64)
}

pub fn circle_dev(map: &CircleMap) -> Result<f64> {
    circle_dev_with(map, MIN_DEV_SAMPLES)
}

/// `z ↦ e^{i Dev(g)} z^{d(g)}`.
pub fn circle_linearize(map: &CircleMap) -> Result<CircleMap> {
    Ok(CircleMap::linear(map.degree(), circle_dev(map)?))
}

/// Difference of two angles measured on the circle.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    crate::contact::lift::wrap_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_deviations() {
        assert!(circle_dev(&CircleMap::identity()).unwrap().abs() < 1e-15);
        assert!((circle_dev(&CircleMap::rotation(1.234)).unwrap() - 1.234).abs() < 1e-12);
        let g = CircleMap::from_lift(|x| x + 0.7 * x.sin());
        assert!(circle_dev(&g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn degree_of_power() {
        let g = CircleMap::linear(-3, 0.5);
        assert_eq!(g.degree(), -3);
        let l = circle_linearize(&g).unwrap();
        assert!((l.lift(1.0) - g.lift(1.0)).abs() < 1e-12);
    }

    #[test]
    fn sampled_lift_matches() {
        let g = CircleMap::from_lift(|x| 2.0 * x + 0.3 * x.sin() + 5.0);
        let angles: Vec<f64> = (0..4096).map(|i| g.lift(TAU * i as f64 / 4096.0).rem_euclid(TAU)).collect();
        let s = CircleMap::from_angles(&angles).unwrap();
        assert_eq!(s.degree(), 2);
        let d1 = circle_dev(&g).unwrap();
        let d2 = circle_dev_with(&s, 4096).unwrap();
        assert!(angle_gap(d1, d2) < 1e-6, "{d1} {d2}");
    }

    #[test]
    fn coarse_samples_jump() {
        let angles: Vec<f64> = (0..5).map(|i| (3.0 * TAU * i as f64 / 5.0).rem_euclid(TAU)).collect();
        assert!(matches!(CircleMap::from_angles(&angles), Err(Error::LiftJump { .. })));
    }
}
