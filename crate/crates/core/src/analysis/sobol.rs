//! Sobol low-discrepancy sequence (Joe–Kuo direction numbers, up to 6 dimensions).

const BITS: usize = 32;

/// `(s, a, m₁..m_s)` for dimensions 2..=6.
const PRIMITIVE: [(u32, u32, &[u32]); 5] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
];

#[derive(Debug, Clone)]
pub struct Sobol {
    dim: usize,
    directions: Vec<[u32; BITS]>,
}

impl Sobol {
    pub const MAX_DIM: usize = 6;

    pub fn new(dim: usize) -> Self {
        assert!((1..=Self::MAX_DIM).contains(&dim), "Sobol dimension {dim}");
        let mut directions = Vec::with_capacity(dim);
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1 << (31 - k);
        }
        directions.push(first);
        for &(s, a, m) in PRIMITIVE.iter().take(dim - 1) {
            let s = s as usize;
            let mut v = [0u32; BITS];
            for k in 0..s {
                v[k] = m[k] << (31 - k);
            }
            for k in s..BITS {
                let mut x = v[k - s] ^ (v[k - s] >> s);
                for i in 1..s {
                    if (a >> (s - 1 - i)) & 1 == 1 {
                        x ^= v[k - i];
                    }
                }
                v[k] = x;
            }
            directions.push(v);
        }
        Sobol { dim, directions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Point `index` (index 0 is the origin).
    pub fn point(&self, index: u64) -> Vec<f64> {
        let gray = index ^ (index >> 1);
        self.directions
            .iter()
            .map(|v| {
                let mut x = 0u32;
                for (k, dv) in v.iter().enumerate() {
                    if (gray >> k) & 1 == 1 {
                        x ^= dv;
                    }
                }
                (x as f64 + 0.5) / 4_294_967_296.0
            })
            .collect()
    }

    /// `count` points skipping the origin.
    pub fn points(&self, count: usize) -> Vec<Vec<f64>> {
        (1..=count as u64).map(|i| self.point(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_dimension_is_van_der_corput() {
        let s = Sobol::new(1);
        let got: Vec<f64> = (1..4).map(|i| s.point(i)[0]).collect();
        // gray-code order: 1/2, 3/4, 1/4
        let want = [0.5, 0.75, 0.25];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn second_dimension_known_values() {
        let s = Sobol::new(2);
        let want = [[0.5, 0.5], [0.75, 0.25], [0.25, 0.75], [0.375, 0.375]];
        for (i, w) in want.iter().enumerate() {
            let p = s.point(i as u64 + 1);
            assert!((p[0] - w[0]).abs() < 1e-9 && (p[1] - w[1]).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn stratified_in_each_coordinate() {
        let s = Sobol::new(4);
        let pts: Vec<Vec<f64>> = (0..256).map(|i| s.point(i)).collect();
        for d in 0..4 {
            let mut bins = [0; 16];
            for p in &pts {
                bins[(p[d] * 16.0) as usize] += 1;
            }
            assert!(bins.iter().all(|&b| b == 16), "dim {d}: {bins:?}");
        }
    }
}
