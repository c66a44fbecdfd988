//! Point-error summaries and forecast skill.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::AlignedPair;

/// Error statistics of a test series against its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    /// 95th percentile of the absolute error.
    pub q95_abs: f64,
    pub n: usize,
}

impl ErrorSummary {
    /// Value of the chosen metric.
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Mae => self.mae,
            Metric::Mse => self.mse,
            Metric::Rmse => self.rmse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Mae,
    Mse,
    Rmse,
}

/// MAE, MSE, RMSE and absolute-error q95 of `test - reference`.
///
/// Sums run sequentially in index order.
pub fn error_summary(pair: &AlignedPair) -> Result<ErrorSummary> {
    if pair.is_empty() {
        return Err(Error::Empty("error_summary"));
    }
    let n = pair.len();
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut abs_err = Vec::with_capacity(n);
    for (t, r) in pair.test().iter().zip(pair.reference()) {
        let e = t - r;
        abs_sum += e.abs();
        sq_sum += e * e;
        abs_err.push(e.abs());
    }
    let mse = sq_sum / n as f64;
    abs_err.sort_by(f64::total_cmp);
    Ok(ErrorSummary {
        mae: abs_sum / n as f64,
        mse,
        rmse: mse.sqrt(),
        q95_abs: quantile_sorted(&abs_err, 0.95),
        n,
    })
}

/// Quantile of ascending-sorted data by linear interpolation between order
/// statistics at position `(n - 1) * q`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// `1 - err_forecast / err_reference`.
pub fn forecast_skill(err_forecast: f64, err_reference: f64) -> Result<f64> {
    if err_reference == 0.0 {
        return Err(Error::DegenerateReference);
    }
    Ok(1.0 - err_forecast / err_reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(t: &[f64], r: &[f64]) -> AlignedPair {
        AlignedPair::from_values(t.to_vec(), r.to_vec()).unwrap()
    }

    #[test]
    fn identical_series_have_zero_error() {
        let s = error_summary(&pair(&[1.0, 5.0, 9.0], &[1.0, 5.0, 9.0])).unwrap();
        assert_eq!((s.mae, s.mse, s.rmse, s.q95_abs, s.n), (0.0, 0.0, 0.0, 0.0, 3));
    }

    #[test]
    fn two_point_arithmetic() {
        let s = error_summary(&pair(&[3.0, 0.0], &[0.0, 4.0])).unwrap();
        assert_eq!(s.mae, 3.5);
        assert_eq!(s.mse, 12.5);
        assert!((s.rmse - 3.5355339).abs() < 1e-6);
    }

    #[test]
    fn q95_interpolates_order_statistics() {
        let errs: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
        let s = error_summary(&pair(&errs, &[0.0; 10])).unwrap();
        assert!((s.q95_abs - 95.5).abs() < 1e-12);
    }

    #[test]
    fn empty_pair_is_error() {
        assert!(error_summary(&pair(&[], &[])).is_err());
    }

    #[test]
    fn skill_examples() {
        assert!((forecast_skill(80.0, 100.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((forecast_skill(120.0, 100.0).unwrap() + 0.2).abs() < 1e-15);
        assert_eq!(forecast_skill(100.0, 100.0).unwrap(), 0.0);
        assert!(matches!(forecast_skill(1.0, 0.0), Err(Error::DegenerateReference)));
    }

    proptest! {
        #[test]
        fn ordering_of_summaries(e in prop::collection::vec(-500f64..500.0, 1..80)) {
            let s = error_summary(&pair(&e, &vec![0.0; e.len()])).unwrap();
            let max = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(s.mae <= s.rmse * (1.0 + 1e-12) + 1e-12);
            prop_assert!(s.rmse <= max * (1.0 + 1e-12) + 1e-12);
            prop_assert!(s.q95_abs <= max);
            prop_assert_eq!(s.rmse, s.mse.sqrt());
        }

        #[test]
        fn skill_scale_invariant(f in 0.0f64..1e3, r in 1e-3f64..1e3, k in 1e-3f64..1e3) {
            let a = forecast_skill(f, r).unwrap();
            let b = forecast_skill(k * f, k * r).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }
}
