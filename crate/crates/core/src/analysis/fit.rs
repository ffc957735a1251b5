use crate::error::{Error, Result};

/// Least-squares slope of `log|deg|` against `log Lip`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExponentFit {
    /// `(log Lip, log |deg|)`.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    /// Smallest and largest slope between consecutive points.
    pub consecutive: (f64, f64),
}

/// Fit from `(Lip, |deg|)` pairs.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: pairs.len(),
        });
    }
    if let Some(&(l, d)) = pairs.iter().find(|(l, d)| *l <= 0.0 || *d == 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot take logs of Lip = {l}, deg = {d}"
        )));
    }
    let points: Vec<(f64, f64)> = pairs.iter().map(|(l, d)| (l.ln(), d.abs().ln())).collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all Lipschitz values equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = points.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for w in points.windows(2) {
        let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(ExponentFit {
        points,
        slope,
        intercept,
        residuals,
        consecutive: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pairs: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0f64].iter().map(|k| (*k, k.powi(3))).collect();
        let f = fit_exponent(&pairs).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert!((f.consecutive.0 - 3.0).abs() < 1e-12 && (f.consecutive.1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(
            fit_exponent(&[(2.0, 8.0), (3.0, 27.0)]),
            Err(Error::InsufficientPoints { needed: 3, got: 2 })
        );
    }
}
