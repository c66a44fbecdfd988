//! Time-series containers, alignment, normalization and gap splitting.

use crate::error::{Error, Result};
use crate::time::Timestamp;

/// Default sampling cadence of sky-camera / pyranometer records, in seconds.
pub const DEFAULT_STEP: i64 = 120;

/// Shortest round-trip text for a value, switching to exponent notation for
/// very small or large magnitudes.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}

/// Timestamped real values on a strictly increasing UTC grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<Timestamp>,
    values: Vec<f64>,
    nominal_step: i64,
}

impl TimeSeries {
    /// Builds a series with the default 120 s nominal step.
    pub fn new(timestamps: Vec<Timestamp>, values: Vec<f64>) -> Result<Self> {
        Self::with_step(timestamps, values, DEFAULT_STEP)
    }

    pub fn with_step(timestamps: Vec<Timestamp>, values: Vec<f64>, nominal_step: i64) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: values.len(),
            });
        }
        if nominal_step <= 0 {
            return Err(Error::invalid("nominal step", format!("{nominal_step} s")));
        }
        if let Some(w) = timestamps.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "time series",
                format!("timestamps not strictly increasing at {} -> {}", w[0], w[1]),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("time series", format!("non-finite value {v}")));
        }
        Ok(Self {
            timestamps,
            values,
            nominal_step,
        })
    }

    pub fn empty(nominal_step: i64) -> Self {
        Self {
            timestamps: Vec::new(),
            values: Vec::new(),
            nominal_step,
        }
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nominal_step(&self) -> i64 {
        self.nominal_step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the sample at exactly `t`, if present.
    pub fn index_of(&self, t: Timestamp) -> Option<usize> {
        self.timestamps.binary_search(&t).ok()
    }

    /// Value at exactly `t`, if present.
    pub fn value_at(&self, t: Timestamp) -> Option<f64> {
        self.index_of(t).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Timestamp, f64)> + '_ {
        self.timestamps.iter().copied().zip(self.values.iter().copied())
    }

    /// Contiguous sub-range by index.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            timestamps: self.timestamps[range.clone()].to_vec(),
            values: self.values[range].to_vec(),
            nominal_step: self.nominal_step,
        }
    }

    /// Keeps only the samples whose timestamp satisfies `keep`.
    pub fn filter_time(&self, mut keep: impl FnMut(Timestamp) -> bool) -> Self {
        let (timestamps, values) = self.iter().filter(|(t, _)| keep(*t)).unzip();
        Self {
            timestamps,
            values,
            nominal_step: self.nominal_step,
        }
    }

    /// Splits into per-UTC-day series, in chronological order.
    pub fn split_days(&self) -> Vec<TimeSeries> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len()
                || crate::time::utc_day(self.timestamps[i]) != crate::time::utc_day(self.timestamps[start])
            {
                if i > start {
                    out.push(self.slice(start..i));
                }
                start = i;
            }
        }
        out
    }
}

/// Forecast values, each valid at its own timestamp, issued `horizon` seconds earlier.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSeries {
    series: TimeSeries,
    horizon: i64,
    producer: String,
}

impl ForecastSeries {
    /// `horizon` is in seconds and must be a non-negative multiple of the
    /// series' nominal step. A zero horizon is accepted for identity
    /// persistence.
    pub fn new(series: TimeSeries, horizon: i64, producer: impl Into<String>) -> Result<Self> {
        if horizon < 0 || horizon % series.nominal_step() != 0 {
            return Err(Error::invalid(
                "forecast horizon",
                format!("{horizon} s is not a non-negative multiple of {} s", series.nominal_step()),
            ));
        }
        Ok(Self {
            series,
            horizon,
            producer: producer.into(),
        })
    }

    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn into_series(self) -> TimeSeries {
        self.series
    }

    /// Horizon in seconds.
    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn producer(&self) -> &str {
        &self.producer
    }
}

impl std::ops::Deref for ForecastSeries {
    type Target = TimeSeries;

    fn deref(&self) -> &TimeSeries {
        &self.series
    }
}

/// Test and reference values on a shared timestamp grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    timestamps: Vec<Timestamp>,
    test: Vec<f64>,
    reference: Vec<f64>,
}

impl AlignedPair {
    pub fn new(timestamps: Vec<Timestamp>, test: Vec<f64>, reference: Vec<f64>) -> Result<Self> {
        if test.len() != reference.len() {
            return Err(Error::LengthMismatch {
                left: test.len(),
                right: reference.len(),
            });
        }
        if timestamps.len() != test.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: test.len(),
            });
        }
        Ok(Self {
            timestamps,
            test,
            reference,
        })
    }

    /// Pair of raw arrays on an implicit index grid `0..n`.
    pub fn from_values(test: Vec<f64>, reference: Vec<f64>) -> Result<Self> {
        let timestamps = (0..test.len() as i64).collect();
        Self::new(timestamps, test, reference)
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn test(&self) -> &[f64] {
        &self.test
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn len(&self) -> usize {
        self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.test.is_empty()
    }

    pub fn test_series(&self, nominal_step: i64) -> Result<TimeSeries> {
        TimeSeries::with_step(self.timestamps.clone(), self.test.clone(), nominal_step)
    }

    pub fn reference_series(&self, nominal_step: i64) -> Result<TimeSeries> {
        TimeSeries::with_step(self.timestamps.clone(), self.reference.clone(), nominal_step)
    }

    /// Restricts the pair to timestamps satisfying `keep`.
    pub fn filter_time(&self, mut keep: impl FnMut(Timestamp) -> bool) -> Self {
        let mut out = Self {
            timestamps: Vec::new(),
            test: Vec::new(),
            reference: Vec::new(),
        };
        for i in 0..self.len() {
            if keep(self.timestamps[i]) {
                out.timestamps.push(self.timestamps[i]);
                out.test.push(self.test[i]);
                out.reference.push(self.reference[i]);
            }
        }
        out
    }
}

/// Pairs `test` with `reference` on the intersection of their grids.
///
/// Missing points are dropped, never interpolated.
pub fn align(test: &TimeSeries, reference: &TimeSeries) -> Result<AlignedPair> {
    let (mut i, mut j) = (0, 0);
    let (tt, rt) = (test.timestamps(), reference.timestamps());
    let mut out = AlignedPair {
        timestamps: Vec::new(),
        test: Vec::new(),
        reference: Vec::new(),
    };
    while i < tt.len() && j < rt.len() {
        match tt[i].cmp(&rt[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.timestamps.push(tt[i]);
                out.test.push(test.values()[i]);
                out.reference.push(reference.values()[j]);
                i += 1;
                j += 1;
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok(out)
}

/// Min-max scales values into `[0, 1]`. A constant input maps to all zeros.
pub fn minmax_normalize(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Empty("minmax_normalize"));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if range == 0.0 {
        return Ok(vec![0.0; values.len()]);
    }
    Ok(values.iter().map(|v| ((v - lo) / range).clamp(0.0, 1.0)).collect())
}

/// Cuts the series wherever consecutive timestamps are more than `max_gap` seconds apart.
pub fn split_contiguous(series: &TimeSeries, max_gap: i64) -> Vec<TimeSeries> {
    if series.is_empty() {
        return Vec::new();
    }
    let ts = series.timestamps();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..ts.len() {
        if ts[i] - ts[i - 1] > max_gap {
            out.push(series.slice(start..i));
            start = i;
        }
    }
    out.push(series.slice(start..ts.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(t: &[i64], v: &[f64]) -> TimeSeries {
        TimeSeries::new(t.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_series() {
        assert!(TimeSeries::new(vec![0, 0], vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(vec![0, 120], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn align_intersection() {
        let test = ts(&[1, 2, 3], &[10.0, 20.0, 30.0]);
        let reference = ts(&[2, 3, 4], &[200.0, 300.0, 400.0]);
        let pair = align(&test, &reference).unwrap();
        assert_eq!(pair.timestamps(), &[2, 3]);
        assert_eq!(pair.test(), &[20.0, 30.0]);
        assert_eq!(pair.reference(), &[200.0, 300.0]);
    }

    #[test]
    fn align_identical_grids() {
        let a = ts(&[0, 120, 240], &[1.0, 2.0, 3.0]);
        let b = ts(&[0, 120, 240], &[4.0, 5.0, 6.0]);
        let pair = align(&a, &b).unwrap();
        assert_eq!(pair.test(), a.values());
        assert_eq!(pair.reference(), b.values());
    }

    #[test]
    fn align_disjoint_is_error() {
        let a = ts(&[0, 120], &[1.0, 2.0]);
        let b = ts(&[60, 180], &[1.0, 2.0]);
        assert!(matches!(align(&a, &b), Err(Error::NoOverlap)));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(minmax_normalize(&[2.0, 4.0, 6.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(minmax_normalize(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0, 0.0, 0.0]);
        assert_eq!(minmax_normalize(&[-1.0, 0.0, 3.0]).unwrap(), vec![0.0, 0.25, 1.0]);
        assert!(minmax_normalize(&[]).is_err());
    }

    #[test]
    fn split_on_gaps() {
        let s = ts(&[0, 120, 240, 840, 960], &[0.0; 5]);
        let parts = split_contiguous(&s, 240);
        assert_eq!(parts.iter().map(|p| p.len()).collect::<Vec<_>>(), vec![3, 2]);

        let uniform = ts(&[0, 120, 240, 360], &[0.0; 4]);
        assert_eq!(split_contiguous(&uniform, 240).len(), 1);

        let single = ts(&[42], &[1.0]);
        let parts = split_contiguous(&single, 240);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].len(), 1);
    }

    #[test]
    fn forecast_horizon_must_be_step_multiple() {
        let s = ts(&[0, 120], &[1.0, 2.0]);
        assert!(ForecastSeries::new(s.clone(), 600, "x").is_ok());
        assert!(ForecastSeries::new(s.clone(), 0, "x").is_ok());
        assert!(ForecastSeries::new(s.clone(), 90, "x").is_err());
        assert!(ForecastSeries::new(s, -120, "x").is_err());
    }

    fn arb_series() -> impl Strategy<Value = TimeSeries> {
        prop::collection::vec((1i64..600, -1e3f64..1e3), 1..60).prop_map(|steps| {
            let mut t = 0;
            let (ts, vs): (Vec<_>, Vec<_>) = steps
                .into_iter()
                .map(|(dt, v)| {
                    t += dt;
                    (t, v)
                })
                .unzip();
            TimeSeries::new(ts, vs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn align_is_idempotent(a in arb_series(), b in arb_series()) {
            if let Ok(pair) = align(&a, &b) {
                let again = align(&pair.test_series(120).unwrap(), &pair.reference_series(120).unwrap()).unwrap();
                prop_assert_eq!(again, pair);
            }
        }

        #[test]
        fn normalize_bounded_and_monotone(v in prop::collection::vec(-1e6f64..1e6, 1..50)) {
            let out = minmax_normalize(&v).unwrap();
            for (i, a) in out.iter().enumerate() {
                prop_assert!((0.0..=1.0).contains(a));
                for (j, b) in out.iter().enumerate() {
                    if v[i] <= v[j] {
                        prop_assert!(a <= b);
                    }
                }
            }
        }

        #[test]
        fn split_partitions_input(s in arb_series(), gap in 1i64..600) {
            let parts = split_contiguous(&s, gap);
            let ts: Vec<i64> = parts.iter().flat_map(|p| p.timestamps().to_vec()).collect();
            let vs: Vec<f64> = parts.iter().flat_map(|p| p.values().to_vec()).collect();
            prop_assert_eq!(ts.as_slice(), s.timestamps());
            prop_assert_eq!(vs.as_slice(), s.values());
            for p in &parts {
                prop_assert!(p.timestamps().windows(2).all(|w| w[1] - w[0] <= gap));
            }
        }
    }
}
