use crate::error::{Error, Result};
use crate::geom::sphere::geodesic_distance;
use nalgebra::SVector;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

/// Centers of disjoint geodesic balls of radius `1/L` inside the polar cap of
/// radius `π/4` around the last basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePacking<const N: usize> {
    pub dim: usize,
    pub centers: Vec<SVector<f64, N>>,
    pub radius: f64,
    pub l: f64,
}

/// Candidate count scale: about `4 L^dim` per unit of sphere volume.
fn candidate_count(l: f64, dim: usize) -> usize {
    let vol = if dim == 2 { 4.0 * PI } else { 2.0 * PI * PI };
    (4.0 * l.powi(dim as i32) * vol).ceil().max(64.0) as usize
}

/// Fibonacci lattice on S² (`i + 1/2` offsets).
pub fn fibonacci_s2(count: usize) -> Vec<SVector<f64, 3>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let zc = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - zc * zc).max(0.0).sqrt();
            let a = golden * i as f64;
            SVector::<f64, 3>::new(r * a.cos(), r * a.sin(), zc)
        })
        .collect()
}

/// Super-Fibonacci spiral on S³.
pub fn fibonacci_s3(count: usize) -> Vec<SVector<f64, 4>> {
    let phi = 2f64.sqrt();
    let psi = 1.533_751_168_755_204_3;
    (0..count)
        .map(|i| {
            let s = i as f64 + 0.5;
            let r = (s / count as f64).sqrt();
            let big = (1.0 - s / count as f64).max(0.0).sqrt();
            let a = TAU * s / phi;
            let b = TAU * s / psi;
            SVector::<f64, 4>::new(r * a.sin(), r * a.cos(), big * b.sin(), big * b.cos())
        })
        .collect()
}

/// Greedy packing over a deterministic candidate sequence.
pub fn greedy_packing<const N: usize>(
    candidates: impl IntoIterator<Item = SVector<f64, N>>,
    l: f64,
) -> Result<SpherePacking<N>> {
    let radius = 1.0 / l;
    let mut pole = SVector::<f64, N>::zeros();
    pole[N - 1] = 1.0;
    let mut centers: Vec<SVector<f64, N>> = Vec::new();
    for c in candidates {
        let theta = geodesic_distance(&c, &pole);
        if FRAC_PI_4 - theta <= radius {
            continue;
        }
        if centers
            .iter()
            .all(|o| geodesic_distance(o, &c) > 2.0 * radius)
        {
            centers.push(c);
        }
    }
    if centers.is_empty() {
        return Err(Error::PackingEmpty(l));
    }
    Ok(SpherePacking {
        dim: N - 1,
        centers,
        radius,
        l,
    })
}

pub fn pack_s2(l: f64) -> Result<SpherePacking<3>> {
    check_l(l)?;
    let mut c = fibonacci_s2(candidate_count(l, 2));
    // nearest-pole first gives a denser greedy result
    c.sort_by(|a, b| b[2].total_cmp(&a[2]));
    greedy_packing(c, l)
}

pub fn pack_s3(l: f64) -> Result<SpherePacking<4>> {
    check_l(l)?;
    let mut c: Vec<_> = fibonacci_s3(candidate_count(l, 3))
        .into_iter()
        .filter(|v| v[3] > 0.5)
        .collect();
    c.sort_by(|a, b| b[3].total_cmp(&a[3]));
    greedy_packing(c, l)
}

fn check_l(l: f64) -> Result<()> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidParameter(format!("L = {l}")));
    }
    Ok(())
}

impl<const N: usize> SpherePacking<N> {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Smallest pairwise distance and smallest distance to the cap boundary.
    pub fn separations(&self) -> (f64, f64) {
        let mut pole = SVector::<f64, N>::zeros();
        pole[N - 1] = 1.0;
        let mut pair = f64::INFINITY;
        for (i, a) in self.centers.iter().enumerate() {
            for b in &self.centers[i + 1..] {
                pair = pair.min(geodesic_distance(a, b));
            }
        }
        let edge = self
            .centers
            .iter()
            .map(|c| FRAC_PI_4 - geodesic_distance(c, &pole))
            .fold(f64::INFINITY, f64::min);
        (pair, edge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_hold() {
        for l in [4.0, 8.0] {
            let p = pack_s2(l).unwrap();
            let (pair, edge) = p.separations();
            assert!(pair > 2.0 / l && edge > 1.0 / l);
            let q = pack_s3(l).unwrap();
            let (pair, edge) = q.separations();
            assert!(pair > 2.0 / l && edge > 1.0 / l);
        }
    }

    #[test]
    fn small_l_is_empty() {
        assert_eq!(pack_s2(1.2), Err(Error::PackingEmpty(1.2)));
    }

    #[test]
    fn candidates_are_unit() {
        for v in fibonacci_s3(100) {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }
}
