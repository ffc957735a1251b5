use crate::error::{Error, Result};

/// `|deg| ≤ vol_ratio · Lipⁿ`, with relative slack `1e-6`.
pub fn volume_bound_check(deg: f64, lip: f64, vol_ratio: f64, n: u32) -> Result<()> {
    let bound = vol_ratio * lip.powi(n as i32);
    if deg.abs() <= bound * (1.0 + 1e-6) {
        Ok(())
    } else {
        Err(Error::ViolatedBound {
            degree: deg,
            bound,
        })
    }
}

/// `deg = det(f_{#1})²` for fiber-preserving self-maps of the Heisenberg nilmanifold.
pub fn h1_det_check(measured: i64, f1: [[i64; 2]; 2]) -> Result<()> {
    let det = f1[0][0] * f1[1][1] - f1[0][1] * f1[1][0];
    let expected = det * det;
    if measured == expected {
        Ok(())
    } else {
        Err(Error::Mismatch { measured, expected })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_examples() {
        assert!(volume_bound_check(16.0, 4.0, 1.0, 3).is_ok());
        assert!(volume_bound_check(27.0, 3.0, 1.0, 3).is_ok());
        assert!(volume_bound_check(256.0, 7.9, 1.0, 3).is_ok());
        assert!(matches!(
            volume_bound_check(256.0, 6.0, 1.0, 3),
            Err(Error::ViolatedBound { .. })
        ));
    }

    #[test]
    fn h1_examples() {
        assert!(h1_det_check(16, [[2, 0], [0, 2]]).is_ok());
        assert!(h1_det_check(1, [[1, 0], [0, 1]]).is_ok());
        assert!(h1_det_check(256, [[4, 0], [0, 4]]).is_ok());
        assert_eq!(
            h1_det_check(15, [[2, 0], [0, 2]]),
            Err(Error::Mismatch {
                measured: 15,
                expected: 16
            })
        );
    }
}
