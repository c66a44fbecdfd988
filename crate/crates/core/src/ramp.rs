//! Swinging-door ramp extraction and the ramp score.
//!
//! The swinging door walks left to right from a pivot sample and keeps two
//! "doors": the steepest admissible slope `U` (minimum over visited points of
//! the slope to `y_k + ε`) and the shallowest admissible slope `L` (maximum of
//! the slope to `y_k - ε`). While `L <= U` some line through the pivot stays
//! within `ε` of every visited point. The segment closes at the last point
//! for which that held; that point becomes the next pivot. Segment slopes are
//! the pivot-to-close chord slopes, in W/m²/min.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{AlignedPair, TimeSeries};
use crate::solar::ClearSkyProvider;
use crate::time::{self, Timestamp};

/// Default τ_CLS: ε is this fraction of the daily clear-sky maximum.
pub const DEFAULT_TAU_CLS: f64 = 0.05;

/// One swinging-door segment, pivot to closing sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RampSegment {
    pub t_start: Timestamp,
    pub t_end: Timestamp,
    /// W/m²/min.
    pub slope: f64,
    pub start_index: usize,
    pub end_index: usize,
}

/// Piecewise-constant slope over `[breakpoints[0], breakpoints[last]]`;
/// `slopes[k]` holds on `[breakpoints[k], breakpoints[k + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFunction {
    breakpoints: Vec<Timestamp>,
    slopes: Vec<f64>,
}

impl SlopeFunction {
    pub fn new(breakpoints: Vec<Timestamp>, slopes: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != slopes.len() + 1 || slopes.is_empty() {
            return Err(Error::invalid(
                "slope function",
                format!("{} breakpoints for {} slopes", breakpoints.len(), slopes.len()),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("slope function", "breakpoints not strictly increasing"));
        }
        Ok(Self { breakpoints, slopes })
    }

    /// Tiles consecutive segments into a slope function.
    pub fn from_segments(segments: &[RampSegment]) -> Result<Self> {
        let first = segments.first().ok_or(Error::Empty("segments"))?;
        let mut breakpoints = vec![first.t_start];
        let mut slopes = Vec::with_capacity(segments.len());
        for s in segments {
            if s.t_start != *breakpoints.last().unwrap() {
                return Err(Error::invalid("slope function", "segments do not tile"));
            }
            breakpoints.push(s.t_end);
            slopes.push(s.slope);
        }
        Self::new(breakpoints, slopes)
    }

    pub fn breakpoints(&self) -> &[Timestamp] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn start(&self) -> Timestamp {
        self.breakpoints[0]
    }

    pub fn end(&self) -> Timestamp {
        *self.breakpoints.last().unwrap()
    }
}

/// `ε = τ · max(clear-sky irradiance over the day)`.
pub fn epsilon_for_day(clearsky_day: &TimeSeries, tau: f64) -> Result<f64> {
    if clearsky_day.is_empty() {
        return Err(Error::Empty("clear-sky day"));
    }
    let max = clearsky_day.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(tau * max)
}

/// Segments `series` with the swinging-door envelope of half-width `epsilon`.
pub fn swinging_door(series: &TimeSeries, epsilon: f64) -> Result<Vec<RampSegment>> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            what: "swinging door",
            needed: 2,
            got: series.len(),
        });
    }
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon", format!("{epsilon}")));
    }
    let ts = series.timestamps();
    let ys = series.values();
    let n = ys.len();
    let minutes = |i: usize, j: usize| (ts[j] - ts[i]) as f64 / 60.0;

    let mut segments = Vec::new();
    let mut pivot = 0;
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut k = 1;
    while k < n {
        let dt = minutes(pivot, k);
        let u = (ys[k] + epsilon - ys[pivot]) / dt;
        let l = (ys[k] - epsilon - ys[pivot]) / dt;
        let new_upper = upper.min(u);
        let new_lower = lower.max(l);
        if new_lower > new_upper && k - 1 > pivot {
            let close = k - 1;
            segments.push(chord(ts, ys, pivot, close));
            pivot = close;
            upper = f64::INFINITY;
            lower = f64::NEG_INFINITY;
            // re-visit k against the new pivot
            continue;
        }
        upper = new_upper;
        lower = new_lower;
        k += 1;
    }
    segments.push(chord(ts, ys, pivot, n - 1));
    Ok(segments)
}

fn chord(ts: &[Timestamp], ys: &[f64], start: usize, end: usize) -> RampSegment {
    let dt = (ts[end] - ts[start]) as f64 / 60.0;
    RampSegment {
        t_start: ts[start],
        t_end: ts[end],
        slope: (ys[end] - ys[start]) / dt,
        start_index: start,
        end_index: end,
    }
}

/// Mean absolute slope difference over `[t_min, t_max]`, integrated exactly
/// over the merged breakpoints of both functions.
pub fn ramp_score(
    test: &SlopeFunction,
    reference: &SlopeFunction,
    t_min: Timestamp,
    t_max: Timestamp,
) -> Result<f64> {
    if t_max <= t_min {
        return Err(Error::ZeroLengthInterval(t_min, t_max));
    }
    for f in [test, reference] {
        if f.start() > t_min || f.end() < t_max {
            return Err(Error::NotCovered(t_min, t_max));
        }
    }
    let piece = |f: &SlopeFunction, from: usize, t: Timestamp| {
        // advance to the piece whose half-open interval contains t
        let mut k = from;
        while k + 1 < f.slopes.len() && f.breakpoints[k + 1] <= t {
            k += 1;
        }
        k
    };
    let (mut a, mut b) = (piece(test, 0, t_min), piece(reference, 0, t_min));
    let mut t = t_min;
    let mut integral = 0.0;
    while t < t_max {
        let next = test.breakpoints[a + 1]
            .min(reference.breakpoints[b + 1])
            .min(t_max);
        integral += (test.slopes[a] - reference.slopes[b]).abs() * (next - t) as f64;
        t = next;
        a = piece(test, a, t);
        b = piece(reference, b, t);
    }
    Ok(integral / (t_max - t_min) as f64)
}

/// Ramp score of one UTC day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayRampScore {
    /// Days since the epoch.
    pub day: i64,
    pub epsilon: f64,
    pub score: f64,
    /// Seconds between the first and last sample of the day.
    pub duration: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RampEvaluation {
    /// Duration-weighted mean over days, W/m²/min.
    pub score: f64,
    pub days: Vec<DayRampScore>,
}

/// Segments test and reference day by day with `ε = τ · daily clear-sky max`
/// and averages the per-day ramp scores weighted by day duration.
///
/// Days with fewer than two samples are skipped.
pub fn daily_ramp_score(
    pair: &AlignedPair,
    provider: &ClearSkyProvider,
    tau: f64,
    nominal_step: i64,
) -> Result<RampEvaluation> {
    let test = pair.test_series(nominal_step)?;
    let reference = pair.reference_series(nominal_step)?;
    let mut days = Vec::new();
    for (t_day, r_day) in test.split_days().into_iter().zip(reference.split_days()) {
        if t_day.len() < 2 {
            continue;
        }
        let day = time::utc_day(t_day.timestamps()[0]);
        let epsilon = epsilon_for_day(&provider.day_series(day, nominal_step)?, tau)?;
        let t_min = t_day.timestamps()[0];
        let t_max = *t_day.timestamps().last().unwrap();
        let sd_test = SlopeFunction::from_segments(&swinging_door(&t_day, epsilon)?)?;
        let sd_ref = SlopeFunction::from_segments(&swinging_door(&r_day, epsilon)?)?;
        days.push(DayRampScore {
            day,
            epsilon,
            score: ramp_score(&sd_test, &sd_ref, t_min, t_max)?,
            duration: t_max - t_min,
        });
    }
    let total: i64 = days.iter().map(|d| d.duration).sum();
    if total == 0 {
        return Err(Error::TooShort {
            what: "ramp evaluation (points per day)",
            needed: 2,
            got: 1,
        });
    }
    let score = days.iter().map(|d| d.score * d.duration as f64).sum::<f64>() / total as f64;
    Ok(RampEvaluation { score, days })
}
