//! Self-map families with declared degree and Lipschitz expectations.

pub mod odd_sphere;
pub mod packing;

use crate::error::{Error, Result};
use crate::geom::lattice::{frac, SolBundle, SolPoint};
use crate::geom::nil::{nil_reduce, NilPoint};
use crate::geom::quat::Quaternion;
use crate::geom::sphere::Vec3;
use crate::geom::{Geometry, GroupPoint, SelfMap};
use crate::legendrian::LegendrianSeries;
use nalgebra::{DMatrix, Matrix3};
pub use odd_sphere::OddSphereMap;
pub use packing::{pack_s2, pack_s3, SpherePacking};
use std::f64::consts::TAU;

fn diag(d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))
}

/// `(x, y, z) ↦ (kx, ky, k²z)`, a lattice-preserving automorphism of Nil.
#[derive(Debug, Clone, Copy)]
pub struct TkMap {
    pub k: i64,
}

pub fn eval_tk(k: i64, p: NilPoint) -> NilPoint {
    let k = k as f64;
    NilPoint::new(k * p.x, k * p.y, k * k * p.z)
}

impl SelfMap for TkMap {
    fn geometry(&self) -> Geometry {
        Geometry::Nil
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        match p {
            GroupPoint::Nil(q) => GroupPoint::Nil(eval_tk(self.k, *q)),
            _ => panic!("T_k needs a Nil point"),
        }
    }
    fn frame_matrix(&self, _p: &GroupPoint) -> Option<DMatrix<f64>> {
        let k = self.k as f64;
        Some(diag(&[k, k, k * k]))
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::Nil(q) = y else { return None };
        let q = nil_reduce(*q);
        let k = self.k;
        let kf = k as f64;
        let mut out = Vec::with_capacity((k * k * k * k) as usize);
        for a in 0..k {
            for b in 0..k {
                let shift = q.z + a as f64 * q.y;
                let c0 = (-shift).ceil() as i64;
                for c in c0..c0 + k * k {
                    out.push(GroupPoint::Nil(NilPoint::new(
                        (a as f64 + q.x) / kf,
                        (b as f64 + q.y) / kf,
                        (c as f64 + shift) / (kf * kf),
                    )));
                }
            }
        }
        Some(out)
    }
}

/// `S_n = T_kⁿ ∘ φ ∘ T_kⁿ` with a Legendrian `φ`.
#[derive(Debug, Clone, Copy)]
pub struct SnMap {
    pub k: i64,
    pub n: u32,
    pub series: LegendrianSeries,
}

impl SnMap {
    pub fn new(k: i64, n: u32) -> Self {
        SnMap {
            k,
            n,
            series: LegendrianSeries::double_cross(),
        }
    }

    fn tk_pow(&self, p: NilPoint) -> NilPoint {
        (0..self.n).fold(p, |q, _| eval_tk(self.k, q))
    }

    /// Composition on the cover.
    pub fn eval_cover(&self, p: NilPoint) -> NilPoint {
        self.tk_pow(self.series.eval_phi(self.tk_pow(p)))
    }

    /// Composition with reduction to the fundamental domain between stages.
    pub fn eval_reduced(&self, p: NilPoint) -> NilPoint {
        let mut q = nil_reduce(p);
        for _ in 0..self.n {
            q = nil_reduce(eval_tk(self.k, q));
        }
        q = nil_reduce(self.series.eval_phi(q));
        for _ in 0..self.n {
            q = nil_reduce(eval_tk(self.k, q));
        }
        q
    }

    /// `Tⁿ p` reduced to the fundamental domain, where `φ` is evaluated.
    pub fn inner_point(&self, p: NilPoint) -> NilPoint {
        let mut q = nil_reduce(p);
        for _ in 0..self.n {
            q = nil_reduce(eval_tk(self.k, q));
        }
        q
    }

    /// `Dⁿ F_φ(Tⁿ p) Dⁿ` with `D = diag(k, k, k²)`.
    pub fn frame(&self, p: NilPoint) -> Matrix3<f64> {
        self.frame_from_inner(&self.series.phi_frame(self.inner_point(p)))
    }

    /// Sandwich a `φ` frame matrix between the `Tⁿ` factors.
    pub fn frame_from_inner(&self, inner: &Matrix3<f64>) -> Matrix3<f64> {
        let k = self.k as f64;
        let s = [k.powi(self.n as i32), k.powi(self.n as i32), k.powi(2 * self.n as i32)];
        Matrix3::from_fn(|i, j| s[i] * inner[(i, j)] * s[j])
    }

    pub fn expected_degree(&self) -> i64 {
        self.k.pow(8 * self.n)
    }
}

impl SelfMap for SnMap {
    fn geometry(&self) -> Geometry {
        Geometry::Nil
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        match p {
            GroupPoint::Nil(q) => GroupPoint::Nil(self.eval_cover(*q)),
            _ => panic!("S_n needs a Nil point"),
        }
    }
    fn frame_matrix(&self, p: &GroupPoint) -> Option<DMatrix<f64>> {
        let GroupPoint::Nil(q) = p else { return None };
        let m = self.frame(*q);
        Some(DMatrix::from_column_slice(3, 3, m.as_slice()))
    }
}

/// `v ↦ k v` on the cubic 3-torus.
#[derive(Debug, Clone, Copy)]
pub struct MuTorus {
    pub k: i64,
}

pub fn eval_mu_torus(k: i64, v: [f64; 3]) -> [f64; 3] {
    v.map(|c| frac(k as f64 * c))
}

impl SelfMap for MuTorus {
    fn geometry(&self) -> Geometry {
        Geometry::Torus3
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        let GroupPoint::Torus(v) = p else { panic!("torus map needs a torus point") };
        GroupPoint::Torus(v.map(|c| self.k as f64 * c))
    }
    fn frame_matrix(&self, _p: &GroupPoint) -> Option<DMatrix<f64>> {
        let k = self.k as f64;
        Some(diag(&[k, k, k]))
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::Torus(v) = y else { return None };
        let k = self.k;
        let v = v.map(frac);
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    out.push(GroupPoint::Torus([
                        (a as f64 + v[0]) / k as f64,
                        (b as f64 + v[1]) / k as f64,
                        (c as f64 + v[2]) / k as f64,
                    ]));
                }
            }
        }
        Some(out)
    }
}

/// `(v, t) ↦ (k v, t)` on the mapping torus of a hyperbolic `A`.
#[derive(Debug, Clone, Copy)]
pub struct IotaSol {
    pub k: i64,
    pub bundle: SolBundle,
}

impl IotaSol {
    pub fn new(k: i64, a: [[i64; 2]; 2]) -> Result<Self> {
        if k % 2 == 0 {
            return Err(Error::InvalidParameter(format!("k = {k} must be odd")));
        }
        Ok(IotaSol {
            k,
            bundle: SolBundle::new(a)?,
        })
    }

    pub fn eval_reduced(&self, p: SolPoint) -> Result<SolPoint> {
        let k = self.k as f64;
        let q = self.bundle.reduce(p);
        let out = self.bundle.reduce(SolPoint::new(k * q.v[0], k * q.v[1], q.t));
        // the two representatives of a glued point must agree
        if q.t == 0.0 {
            let alt = self.bundle.apply_power(nalgebra::Vector2::new(q.v[0], q.v[1]), -1);
            let other = self.bundle.reduce(SolPoint::new(k * alt[0], k * alt[1], 1.0));
            let d = torus_gap(out.v, other.v);
            if d > 1e-9 {
                return Err(Error::GluingMismatch(d));
            }
        }
        Ok(out)
    }
}

fn torus_gap(a: [f64; 2], b: [f64; 2]) -> f64 {
    let w = |x: f64| (x - x.round()).abs();
    w(a[0] - b[0]).max(w(a[1] - b[1]))
}

impl SelfMap for IotaSol {
    fn geometry(&self) -> Geometry {
        Geometry::SolBundle
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        let GroupPoint::Sol(q) = p else { panic!("Sol map needs a Sol point") };
        let k = self.k as f64;
        GroupPoint::Sol(SolPoint::new(k * q.v[0], k * q.v[1], q.t))
    }
    fn frame_matrix(&self, _p: &GroupPoint) -> Option<DMatrix<f64>> {
        let k = self.k as f64;
        Some(diag(&[k, k, 1.0]))
    }
    fn sol_bundle(&self) -> Option<&SolBundle> {
        Some(&self.bundle)
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::Sol(q) = y else { return None };
        let q = self.bundle.reduce(*q);
        let k = self.k;
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                out.push(GroupPoint::Sol(SolPoint::new(
                    (a as f64 + q.v[0]) / k as f64,
                    (b as f64 + q.v[1]) / k as f64,
                    q.t,
                )));
            }
        }
        Some(out)
    }
}

/// `(σ, t) ↦ (σ, k t)` on a surface times a circle of length 1.
#[derive(Debug, Clone, Copy)]
pub struct MuProduct {
    pub k: i64,
}

impl SelfMap for MuProduct {
    fn geometry(&self) -> Geometry {
        Geometry::H2xE1
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        let GroupPoint::Product { s, t } = p else { panic!("product map needs a product point") };
        GroupPoint::Product {
            s: *s,
            t: self.k as f64 * t,
        }
    }
    fn frame_matrix(&self, _p: &GroupPoint) -> Option<DMatrix<f64>> {
        Some(diag(&[1.0, 1.0, self.k as f64]))
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::Product { s, t } = y else { return None };
        let t = frac(*t);
        Some(
            (0..self.k)
                .map(|a| GroupPoint::Product {
                    s: *s,
                    t: (a as f64 + t) / self.k as f64,
                })
                .collect(),
        )
    }
}

/// `(x, z) ↦ (h_k(x), z^k)` on S² × S¹ with `z` an angle.
#[derive(Debug, Clone)]
pub struct S2S1Map {
    pub k: i64,
    /// `None` stands for the identity (`k = 1`).
    pub h: Option<OddSphereMap>,
}

impl S2S1Map {
    pub fn new(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k = {k}")));
        }
        let h = if k == 1 {
            None
        } else {
            Some(OddSphereMap::build(k as f64, 2)?)
        };
        Ok(S2S1Map { k, h })
    }

    pub fn sphere_degree(&self) -> i64 {
        self.h.as_ref().map_or(1, |h| h.construction_degree())
    }

    pub fn construction_degree(&self) -> i64 {
        self.k * self.sphere_degree()
    }

    fn h(&self, x: &Vec3) -> Vec3 {
        match &self.h {
            None => *x,
            Some(m) => match m.eval(&GroupPoint::S2(*x)) {
                GroupPoint::S2(y) => y,
                _ => unreachable!(),
            },
        }
    }

    /// `(x, z) ↦ (−x, z̄)`.
    pub fn involution(p: &GroupPoint) -> GroupPoint {
        let GroupPoint::S2S1 { x, z } = p else { panic!("needs an S²×S¹ point") };
        GroupPoint::S2S1 { x: -x, z: -z }
    }
}

impl SelfMap for S2S1Map {
    fn geometry(&self) -> Geometry {
        Geometry::S2xS1
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        let GroupPoint::S2S1 { x, z } = p else { panic!("needs an S²×S¹ point") };
        GroupPoint::S2S1 {
            x: self.h(x),
            z: self.k as f64 * z,
        }
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::S2S1 { x, z } = y else { return None };
        let xs: Vec<Vec3> = match &self.h {
            None => vec![*x],
            Some(m) => m
                .preimages(&GroupPoint::S2(*x))?
                .into_iter()
                .filter_map(|p| odd_sphere::vec3(&p))
                .collect(),
        };
        let z0 = z.rem_euclid(TAU);
        let mut out = Vec::new();
        for xp in xs {
            for a in 0..self.k {
                out.push(GroupPoint::S2S1 {
                    x: xp,
                    z: (z0 + TAU * a as f64) / self.k as f64,
                });
            }
        }
        Some(out)
    }
}

/// Right multiplication `q ↦ q ξ` on S³.
#[derive(Debug, Clone, Copy)]
pub struct QuatRight {
    pub xi: Quaternion,
}

impl QuatRight {
    /// `ξ = (1 + j)/√2`.
    pub fn ade() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        QuatRight {
            xi: Quaternion::new(s, 0.0, s, 0.0),
        }
    }

    /// Column `j` is the frame expansion of `(q e_j) ξ` at `q ξ`, i.e. `im(ξ⁻¹ e_j ξ)`.
    pub fn frame_at(&self, q: Quaternion) -> Matrix3<f64> {
        let fq = q * self.xi;
        let inv = fq.conj();
        let cols = [Quaternion::I, Quaternion::J, Quaternion::K].map(|e| {
            let v = inv * (q * e * self.xi);
            nalgebra::Vector3::new(v.x, v.y, v.z)
        });
        Matrix3::from_columns(&cols)
    }
}

impl SelfMap for QuatRight {
    fn geometry(&self) -> Geometry {
        Geometry::S3
    }
    fn eval(&self, p: &GroupPoint) -> GroupPoint {
        let GroupPoint::S3(q) = p else { panic!("needs an S³ point") };
        GroupPoint::S3(*q * self.xi)
    }
    fn frame_matrix(&self, p: &GroupPoint) -> Option<DMatrix<f64>> {
        let GroupPoint::S3(q) = p else { return None };
        let m = self.frame_at(*q);
        Some(DMatrix::from_column_slice(3, 3, m.as_slice()))
    }
    fn preimages(&self, y: &GroupPoint) -> Option<Vec<GroupPoint>> {
        let GroupPoint::S3(q) = y else { return None };
        Some(vec![GroupPoint::S3(*q * self.xi.conj())])
    }
}

/// Family identifiers used by configuration files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FamilyId {
    #[serde(rename = "nil.Tk")]
    Tk,
    #[serde(rename = "nil.Sn")]
    Sn,
    #[serde(rename = "torus3.mu")]
    MuTorus,
    #[serde(rename = "sol.iota")]
    IotaSol,
    #[serde(rename = "h2xe1.mu")]
    MuProduct,
    #[serde(rename = "s2.odd")]
    OddS2,
    #[serde(rename = "s3.odd")]
    OddS3,
    #[serde(rename = "s2s1.product")]
    S2S1Product,
    #[serde(rename = "s3.quat_right")]
    QuatRight,
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId::Tk,
        FamilyId::Sn,
        FamilyId::MuTorus,
        FamilyId::IotaSol,
        FamilyId::MuProduct,
        FamilyId::OddS2,
        FamilyId::OddS3,
        FamilyId::S2S1Product,
        FamilyId::QuatRight,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Tk => "nil.Tk",
            FamilyId::Sn => "nil.Sn",
            FamilyId::MuTorus => "torus3.mu",
            FamilyId::IotaSol => "sol.iota",
            FamilyId::MuProduct => "h2xe1.mu",
            FamilyId::OddS2 => "s2.odd",
            FamilyId::OddS3 => "s3.odd",
            FamilyId::S2S1Product => "s2s1.product",
            FamilyId::QuatRight => "s3.quat_right",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }

    pub fn geometry(self) -> Geometry {
        match self {
            FamilyId::Tk | FamilyId::Sn => Geometry::Nil,
            FamilyId::MuTorus => Geometry::Torus3,
            FamilyId::IotaSol => Geometry::SolBundle,
            FamilyId::MuProduct => Geometry::H2xE1,
            FamilyId::OddS2 => Geometry::S2,
            FamilyId::OddS3 | FamilyId::QuatRight => Geometry::S3,
            FamilyId::S2S1Product => Geometry::S2xS1,
        }
    }

    /// Exponent the family realizes for `|deg| ≲ Lip^α`.
    pub fn target_slope(self) -> f64 {
        match self {
            FamilyId::Tk => 2.0,
            FamilyId::Sn => 8.0 / 3.0,
            FamilyId::MuTorus => 3.0,
            FamilyId::IotaSol => 2.0,
            FamilyId::MuProduct => 1.0,
            FamilyId::OddS2 => 2.0,
            FamilyId::OddS3 | FamilyId::S2S1Product => 3.0,
            FamilyId::QuatRight => 0.0,
        }
    }
}

/// Default Sol monodromy.
pub const CAT_MAP: [[i64; 2]; 2] = [[2, 1], [1, 1]];

/// A family member: identifier plus integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MapFamily {
    pub family: FamilyId,
    /// `k` for the scaling families, `L` for the odd sphere maps.
    pub k: i64,
    /// Sandwich depth for `nil.Sn`.
    #[serde(default)]
    pub n: u32,
}

impl MapFamily {
    pub fn new(family: FamilyId, k: i64, n: u32) -> Self {
        MapFamily { family, k, n }
    }

    pub fn geometry(&self) -> Geometry {
        self.family.geometry()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("{}: {m}", self.family.as_str())));
        match self.family {
            FamilyId::Tk | FamilyId::Sn if self.k < 2 => bad("k >= 2 required"),
            FamilyId::MuTorus | FamilyId::MuProduct | FamilyId::S2S1Product if self.k < 1 => {
                bad("k >= 1 required")
            }
            FamilyId::IotaSol if self.k < 1 || self.k % 2 == 0 => bad("odd k >= 1 required"),
            FamilyId::OddS2 | FamilyId::OddS3 if self.k < 2 => bad("L >= 2 required"),
            _ => Ok(()),
        }
    }

    /// Degree predicted by the construction, where it is a closed formula.
    pub fn expected_degree(&self) -> Option<i64> {
        let k = self.k;
        match self.family {
            FamilyId::Tk => Some(k.pow(4)),
            FamilyId::Sn => Some(k.pow(8 * self.n)),
            FamilyId::MuTorus => Some(k.pow(3)),
            FamilyId::IotaSol => Some(k * k),
            FamilyId::MuProduct => Some(k),
            FamilyId::QuatRight => Some(1),
            // depends on the packing
            FamilyId::OddS2 | FamilyId::OddS3 | FamilyId::S2S1Product => None,
        }
    }

    /// Upper bound or exact value of the Lipschitz constant, where closed-form.
    pub fn expected_lip_bound(&self) -> Option<f64> {
        let k = self.k as f64;
        match self.family {
            FamilyId::Tk => Some(k * k),
            FamilyId::MuTorus | FamilyId::IotaSol | FamilyId::MuProduct => Some(k),
            FamilyId::OddS2 | FamilyId::OddS3 => Some((std::f64::consts::PI * k).max(2.0)),
            FamilyId::QuatRight => Some(1.0),
            FamilyId::Sn | FamilyId::S2S1Product => None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn SelfMap>> {
        self.validate()?;
        Ok(match self.family {
            FamilyId::Tk => Box::new(TkMap { k: self.k }),
            FamilyId::Sn => Box::new(SnMap::new(self.k, self.n)),
            FamilyId::MuTorus => Box::new(MuTorus { k: self.k }),
            FamilyId::IotaSol => Box::new(IotaSol::new(self.k, CAT_MAP)?),
            FamilyId::MuProduct => Box::new(MuProduct { k: self.k }),
            FamilyId::OddS2 => Box::new(OddSphereMap::build(self.k as f64, 2)?),
            FamilyId::OddS3 => Box::new(OddSphereMap::build(self.k as f64, 3)?),
            FamilyId::S2S1Product => Box::new(S2S1Map::new(self.k)?),
            FamilyId::QuatRight => Box::new(QuatRight::ade()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::frame_differential;

    #[test]
    fn tk_examples() {
        assert_eq!(eval_tk(2, NilPoint::new(1.0, 1.0, 1.0)), NilPoint::new(2.0, 2.0, 4.0));
        let m = TkMap { k: 3 };
        let pre = m.preimages(&GroupPoint::Nil(NilPoint::new(0.2, 0.7, 0.4))).unwrap();
        assert_eq!(pre.len(), 81);
        for p in pre {
            let GroupPoint::Nil(q) = p else { unreachable!() };
            assert!([q.x, q.y, q.z].iter().all(|c| (0.0..1.0).contains(c)));
            let img = nil_reduce(eval_tk(3, q));
            assert!(img.dist_coords(NilPoint::new(0.2, 0.7, 0.4)) < 1e-12);
        }
    }

    #[test]
    fn sn_zero_is_phi() {
        let s = SnMap::new(2, 0);
        let p = NilPoint::new(0.3, 0.2, 0.9);
        assert_eq!(s.eval_cover(p), s.series.eval_phi(p));
    }

    #[test]
    fn sn_reduced_agrees_with_cover() {
        let s = SnMap::new(2, 1);
        for i in 0..50 {
            let p = NilPoint::new(0.02 * i as f64, (0.37 * i as f64).fract(), (0.71 * i as f64).fract());
            let a = nil_reduce(s.eval_cover(p));
            let b = s.eval_reduced(p);
            let d = crate::geom::nil::lattice_gap(a, b);
            assert!(d < 1e-9, "{d}");
        }
    }

    #[test]
    fn sn_frame_matches_fd_on_cover() {
        let s = SnMap::new(2, 1);
        let p = GroupPoint::Nil(NilPoint::new(0.31, 0.47, 0.12));
        let a = frame_differential(&s, &p).unwrap();
        let b = crate::geom::finite_difference_differential(&s, &p, 1e-6).unwrap();
        assert!((&a - &b).norm() < 1e-4 * a.norm(), "{a} {b}");
    }

    #[test]
    fn iota_glues() {
        let m = IotaSol::new(3, CAT_MAP).unwrap();
        assert!(m.eval_reduced(SolPoint::new(0.3, 0.8, 0.0)).is_ok());
        assert!(IotaSol::new(4, CAT_MAP).is_err());
    }

    #[test]
    fn ade_frame() {
        let m = QuatRight::ade().frame_at(Quaternion::new(0.5, -0.5, 0.5, 0.5));
        let want = Matrix3::new(0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        assert!((m - want).norm() < 1e-12, "{m}");
    }

    #[test]
    fn family_ids_roundtrip() {
        for f in FamilyId::ALL {
            assert_eq!(FamilyId::parse(f.as_str()).unwrap(), f);
        }
        assert!(FamilyId::parse("nope").is_err());
    }
}
