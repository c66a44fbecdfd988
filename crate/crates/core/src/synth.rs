//! Deterministic synthetic irradiance scenarios for tests and demos.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::Record;
use crate::error::{Error, Result};
use crate::series::{ForecastSeries, TimeSeries, DEFAULT_STEP};
use crate::solar::{haurwitz_ghi, simple_persistence, solar_position, Site};
use crate::time::Timestamp;

/// A cloud passage: GHI is scaled by `attenuation` over `[start, start + duration]`,
/// with linear transitions of `edge` seconds at each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudEvent {
    pub start: Timestamp,
    /// Seconds.
    pub duration: i64,
    pub attenuation: f64,
    /// Seconds.
    pub edge: i64,
}

impl CloudEvent {
    /// Multiplicative factor on the clear-sky index at `t`.
    pub fn factor(&self, t: Timestamp) -> f64 {
        let rel = t - self.start;
        if rel < 0 || rel > self.duration {
            return 1.0;
        }
        let weight = if self.edge == 0 {
            1.0
        } else {
            let e = self.edge as f64;
            (rel as f64 / e).min((self.duration - rel) as f64 / e).min(1.0)
        };
        1.0 - (1.0 - self.attenuation) * weight
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub site: Site,
    pub start: Timestamp,
    /// Exclusive.
    pub end: Timestamp,
    /// Seconds.
    pub cadence: i64,
    pub events: Vec<CloudEvent>,
    /// Standard deviation of the multiplicative noise on the clear-sky index.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(site: Site, start: Timestamp, end: Timestamp) -> Self {
        Self {
            site,
            start,
            end,
            cadence: DEFAULT_STEP,
            events: Vec::new(),
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.cadence <= 0 || self.end < self.start {
            return Err(Error::invalid("scenario", "cadence must be > 0 and end >= start"));
        }
        for e in &self.events {
            if !(0.0..=1.0).contains(&e.attenuation) || e.duration <= 0 || e.edge < 0 || 2 * e.edge > e.duration {
                return Err(Error::invalid("cloud event", format!("{e:?}")));
            }
        }
        let mut sorted = self.events.clone();
        sorted.sort_by_key(|e| e.start);
        if let Some(w) = sorted.windows(2).find(|w| w[0].start + w[0].duration > w[1].start) {
            return Err(Error::invalid(
                "cloud events",
                format!("events starting at {} and {} overlap", w[0].start, w[1].start),
            ));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::invalid("scenario", "noise sigma must be >= 0"));
        }
        Ok(())
    }

    /// Grid instants with the sun above the horizon, and their clear-sky GHI.
    fn daylight(&self) -> (Vec<Timestamp>, Vec<f64>) {
        let mut ts = Vec::new();
        let mut clear = Vec::new();
        let mut t = self.start;
        while t < self.end {
            let z = solar_position(self.site.lat_deg, self.site.lon_deg, t).sza_deg;
            if z < 90.0 {
                ts.push(t);
                clear.push(haurwitz_ghi(z));
            }
            t += self.cadence;
        }
        (ts, clear)
    }

    /// Product of the event factors at `t`.
    pub fn attenuation_at(&self, t: Timestamp) -> f64 {
        self.events.iter().map(|e| e.factor(t)).product()
    }
}

/// Events sorted by start; valid scenarios never overlap, so only events
/// starting at or before `t` and ending at or after it can act on `t`.
struct EventIndex(Vec<CloudEvent>);

impl EventIndex {
    fn new(events: &[CloudEvent]) -> Self {
        let mut sorted = events.to_vec();
        sorted.sort_by_key(|e| e.start);
        Self(sorted)
    }

    fn attenuation_at(&self, t: Timestamp) -> f64 {
        let upto = self.0.partition_point(|e| e.start <= t);
        self.0[..upto]
            .iter()
            .rev()
            .take_while(|e| e.start + e.duration >= t)
            .map(|e| e.factor(t))
            .product()
    }
}

/// Clear-sky GHI at every daylight grid instant.
pub fn gen_clear_day(spec: &ScenarioSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let (ts, clear) = spec.daylight();
    TimeSeries::with_step(ts, clear, spec.cadence)
}

/// Clear sky attenuated by the cloud events, with optional seeded noise on
/// the clear-sky index (clipped at zero).
pub fn gen_cloud_transits(spec: &ScenarioSpec) -> Result<TimeSeries> {
    let events = EventIndex::new(&spec.events);
    gen_with_index(spec, |t| events.attenuation_at(t))
}

/// Clear sky scaled by a deterministic index `mean + amplitude · sin(2π t / period)`
/// (then by any cloud events and noise).
pub fn gen_kc_drift(spec: &ScenarioSpec, mean: f64, amplitude: f64, period: i64) -> Result<TimeSeries> {
    if period <= 0 {
        return Err(Error::invalid("drift period", format!("{period}")));
    }
    let events = EventIndex::new(&spec.events);
    gen_with_index(spec, |t| {
        let phase = 2.0 * std::f64::consts::PI * (t.rem_euclid(period)) as f64 / period as f64;
        (mean + amplitude * phase.sin()).max(0.0) * events.attenuation_at(t)
    })
}

fn gen_with_index(spec: &ScenarioSpec, index: impl Fn(Timestamp) -> f64) -> Result<TimeSeries> {
    spec.validate()?;
    let (ts, clear) = spec.daylight();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = ts
        .iter()
        .zip(&clear)
        .map(|(&t, &c)| {
            let mut k = index(t);
            if spec.noise_sigma > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                k *= 1.0 + spec.noise_sigma * z;
            }
            (k * c).max(0.0)
        })
        .collect();
    TimeSeries::with_step(ts, values, spec.cadence)
}

/// Dips of `duration` every `period` seconds between `start` and `end`.
pub fn periodic_events(
    start: Timestamp,
    end: Timestamp,
    period: i64,
    duration: i64,
    attenuation: f64,
    edge: i64,
) -> Vec<CloudEvent> {
    (start..end)
        .step_by(period.max(1) as usize)
        .map(|s| CloudEvent {
            start: s,
            duration,
            attenuation,
            edge,
        })
        .collect()
}

/// Forecast that reproduces the series `k` steps late.
pub fn lag_forecast(series: &TimeSeries, k: i64) -> Result<ForecastSeries> {
    if k <= 0 {
        return Err(Error::invalid("lag", format!("k must be > 0, got {k}")));
    }
    let f = simple_persistence(series, k * series.nominal_step())?;
    let horizon = f.horizon();
    ForecastSeries::new(f.into_series(), horizon, format!("lag_{k}"))
}

/// Dataset records for a generated series: solar angles, analytic clear sky
/// and frame intensities that follow the clear-sky index.
pub fn to_records(series: &TimeSeries, site: Site) -> Vec<Record> {
    series
        .iter()
        .map(|(t, ghi)| {
            let a = solar_position(site.lat_deg, site.lon_deg, t);
            let clr = haurwitz_ghi(a.sza_deg);
            let kc = if clr > 0.0 { ghi / clr } else { 0.0 };
            Record {
                timestamp: t,
                ghi,
                sza_deg: Some(a.sza_deg),
                saa_deg: Some(a.saa_deg),
                ghi_clr: Some(clr),
                frame_mean_long: Some((40.0 + 150.0 * kc).clamp(0.0, 255.0)),
                frame_mean_short: Some((10.0 + 60.0 * kc).clamp(0.0, 255.0)),
            }
        })
        .collect()
}
