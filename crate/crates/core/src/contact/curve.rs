//! Parameterized curves on `[0, 1]` in the plane or on S².

use crate::geom::sphere::{s2_frame, Vec3};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Points a curve can take values in.
pub trait CurvePoint: Copy + Send + Sync + 'static {
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn dist(self, o: Self) -> f64;
    fn norm(self) -> f64 {
        self.dist(Self::zero())
    }
}

impl CurvePoint for [f64; 2] {
    fn zero() -> Self {
        [0.0, 0.0]
    }
    fn scale(self, s: f64) -> Self {
        [self[0] * s, self[1] * s]
    }
    fn dist(self, o: Self) -> f64 {
        (self[0] - o[0]).hypot(self[1] - o[1])
    }
}

impl CurvePoint for Vec3 {
    fn zero() -> Self {
        Vec3::zeros()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn dist(self, o: Self) -> f64 {
        nalgebra::Matrix::norm(&(self - o))
    }
}

type Fun<P> = Arc<dyn Fn(f64) -> P + Send + Sync>;

/// A curve `s ↦ γ(s)` with its derivative.
#[derive(Clone)]
pub struct ParamCurve<P> {
    eval: Fun<P>,
    deriv: Fun<P>,
    pub closed: bool,
    /// Parameters where the derivative may jump; integrators align steps here.
    pub breaks: Vec<f64>,
}

impl<P> std::fmt::Debug for ParamCurve<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParamCurve")
            .field("closed", &self.closed)
            .field("breaks", &self.breaks)
            .finish()
    }
}

pub type PlanarCurve = ParamCurve<[f64; 2]>;
pub type SphereCurve = ParamCurve<Vec3>;

impl<P: CurvePoint> ParamCurve<P> {
    pub fn new(
        eval: impl Fn(f64) -> P + Send + Sync + 'static,
        deriv: impl Fn(f64) -> P + Send + Sync + 'static,
        closed: bool,
    ) -> Self {
        ParamCurve {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            closed,
            breaks: Vec::new(),
        }
    }

    pub fn at(&self, s: f64) -> P {
        (self.eval)(s)
    }

    pub fn velocity(&self, s: f64) -> P {
        (self.deriv)(s)
    }

    pub fn constant(p: P) -> Self {
        Self::new(move |_| p, |_| P::zero(), true)
    }

    /// Endpoint gap; closed curves must have it below `1e-12`.
    pub fn closure_gap(&self) -> f64 {
        self.at(0.0).dist(self.at(1.0))
    }

    pub fn reversed(&self) -> Self {
        let (e, d) = (self.eval.clone(), self.deriv.clone());
        ParamCurve {
            eval: Arc::new(move |s| e(1.0 - s)),
            deriv: Arc::new(move |s| d(1.0 - s).scale(-1.0)),
            closed: self.closed,
            breaks: self.breaks.iter().rev().map(|b| 1.0 - b).collect(),
        }
    }

    /// `self` on `[0, 1/2]` then `next` on `[1/2, 1]`.
    pub fn then(&self, next: &Self) -> Self {
        let (e1, d1) = (self.eval.clone(), self.deriv.clone());
        let (e2, d2) = (next.eval.clone(), next.deriv.clone());
        let mut breaks: Vec<f64> = self.breaks.iter().map(|b| b / 2.0).collect();
        breaks.push(0.5);
        breaks.extend(next.breaks.iter().map(|b| 0.5 + b / 2.0));
        ParamCurve {
            eval: Arc::new(move |s| if s < 0.5 { e1(2.0 * s) } else { e2(2.0 * s - 1.0) }),
            deriv: Arc::new(move |s| {
                if s < 0.5 {
                    d1(2.0 * s).scale(2.0)
                } else {
                    d2(2.0 * s - 1.0).scale(2.0)
                }
            }),
            closed: self.at(0.0).dist(next.at(1.0)) < 1e-12,
            breaks,
        }
    }

    /// Length by Gauss–Legendre quadrature per smooth piece.
    pub fn length(&self) -> f64 {
        let mut cuts = vec![0.0];
        cuts.extend(self.breaks.iter().copied().filter(|b| *b > 0.0 && *b < 1.0));
        cuts.push(1.0);
        let (nodes, weights) = crate::quadrature::gauss_legendre(16);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            for panel in 0..16 {
                let lo = a + (b - a) * panel as f64 / 16.0;
                let hi = a + (b - a) * (panel + 1) as f64 / 16.0;
                for (x, wt) in nodes.iter().zip(&weights) {
                    let s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                    total += 0.5 * (hi - lo) * wt * self.velocity(s).norm();
                }
            }
        }
        total
    }
}

/// Circle of radius `r` about `c`, counterclockwise.
pub fn planar_circle(c: [f64; 2], r: f64) -> PlanarCurve {
    ParamCurve::new(
        move |s| [c[0] + r * (TAU * s).cos(), c[1] + r * (TAU * s).sin()],
        move |s| [-TAU * r * (TAU * s).sin(), TAU * r * (TAU * s).cos()],
        true,
    )
}

/// Closed polygon through `v`, each edge on an equal parameter interval.
pub fn planar_polygon(v: Vec<[f64; 2]>) -> PlanarCurve {
    let n = v.len();
    let v2 = v.clone();
    let edge = move |s: f64| {
        let t = (s.clamp(0.0, 1.0) * n as f64).min(n as f64 - 1e-15);
        let i = t.floor() as usize;
        (i, t - i as f64)
    };
    let e2 = edge.clone();
    let mut c = ParamCurve::new(
        move |s| {
            let (i, f) = edge(s);
            let (a, b) = (v[i], v[(i + 1) % n]);
            [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
        },
        move |s| {
            let (i, _) = e2(s);
            let (a, b) = (v2[i], v2[(i + 1) % n]);
            [n as f64 * (b[0] - a[0]), n as f64 * (b[1] - a[1])]
        },
        true,
    );
    c.breaks = (1..n).map(|i| i as f64 / n as f64).collect();
    c
}

/// Square `[0,a]²`, counterclockwise from the origin.
pub fn planar_square(a: f64) -> PlanarCurve {
    planar_polygon(vec![[0.0, 0.0], [a, 0.0], [a, a], [0.0, a]])
}

/// Signed shoelace area.
pub fn polygon_area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

/// Small circle at angular radius `rho` about `axis`, counterclockwise seen from outside.
pub fn small_circle(axis: Vec3, rho: f64) -> SphereCurve {
    let a = axis.normalize();
    let [u, v] = s2_frame(&a);
    ParamCurve::new(
        move |s| a * rho.cos() + (u * (TAU * s).cos() + v * (TAU * s).sin()) * rho.sin(),
        move |s| (-u * (TAU * s).sin() + v * (TAU * s).cos()) * (TAU * rho.sin()),
        true,
    )
}

/// Area `2π(1 − cos ρ)` of the cap bounded by [`small_circle`].
pub fn cap_area(rho: f64) -> f64 {
    TAU * (1.0 - rho.cos())
}

/// Closed geodesic polygon through unit vectors `v`.
pub fn spherical_polygon(v: Vec<Vec3>) -> SphereCurve {
    let n = v.len();
    let edges: Vec<(Vec3, Vec3, f64)> = (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let t = (b - a * a.dot(&b)).normalize();
            let ang = a.dot(&b).clamp(-1.0, 1.0).acos();
            (a, t, ang)
        })
        .collect();
    let e2 = edges.clone();
    let locate = move |s: f64| {
        let t = (s.clamp(0.0, 1.0) * n as f64).min(n as f64 - 1e-15);
        let i = t.floor() as usize;
        (i, t - i as f64)
    };
    let l2 = locate.clone();
    let mut c = ParamCurve::new(
        move |s| {
            let (i, f) = locate(s);
            let (a, t, ang) = edges[i];
            a * (f * ang).cos() + t * (f * ang).sin()
        },
        move |s| {
            let (i, f) = l2(s);
            let (a, t, ang) = e2[i];
            (-a * (f * ang).sin() + t * (f * ang).cos()) * (ang * n as f64)
        },
        true,
    );
    c.breaks = (1..n).map(|i| i as f64 / n as f64).collect();
    c
}

/// Enclosed area of a counterclockwise geodesic polygon (Girard).
pub fn spherical_polygon_area(v: &[Vec3]) -> f64 {
    let n = v.len();
    let mut sum = 0.0;
    for i in 0..n {
        let p = v[i];
        let next = v[(i + 1) % n];
        let prev = v[(i + n - 1) % n];
        let tn = (next - p * p.dot(&next)).normalize();
        let tp = (prev - p * p.dot(&prev)).normalize();
        let ang = p.dot(&tn.cross(&tp)).atan2(tn.dot(&tp)).rem_euclid(TAU);
        sum += ang;
    }
    sum - (n as f64 - 2.0) * PI
}

/// Point at angle `polar` from `+i` and azimuth `az` in the `(j, k)` plane.
pub fn sphere_point_from_i(polar: f64, az: f64) -> Vec3 {
    Vec3::new(polar.cos(), polar.sin() * az.cos(), polar.sin() * az.sin())
}
