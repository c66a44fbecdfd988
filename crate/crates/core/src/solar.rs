//! Solar geometry, clear-sky irradiance and the persistence reference forecasts.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::{ForecastSeries, TimeSeries};
use crate::time::{self, Timestamp};

/// Clear-sky values below this (W/m²) make the clear-sky index fall back to 1.
pub const CLEARSKY_FLOOR: f64 = 20.0;
/// Upper clamp on the clear-sky index.
pub const KC_MAX: f64 = 1.5;

/// Latitude / longitude of the SIRTA observatory (Palaiseau, France).
pub const SIRTA: Site = Site {
    lat_deg: 48.713,
    lon_deg: 2.208,
};

/// Observation site, degrees north / east.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Site {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl Site {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat_deg) || !(-180.0..=180.0).contains(&lon_deg) {
            return Err(Error::invalid("site", format!("lat {lat_deg}, lon {lon_deg}")));
        }
        Ok(Self { lat_deg, lon_deg })
    }
}

/// Sun position: zenith in `[0, 180]`, azimuth clockwise from north in `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarAngles {
    pub sza_deg: f64,
    pub saa_deg: f64,
}

/// Low-accuracy solar position (Spencer/NOAA series for declination and
/// equation of time, then hour angle). Good to a few tenths of a degree.
pub fn solar_position(lat_deg: f64, lon_deg: f64, t: Timestamp) -> SolarAngles {
    let year = time::utc_year(t);
    let days_in_year = if chrono::NaiveDate::from_ymd_opt(year, 2, 29).is_some() {
        366.0
    } else {
        365.0
    };
    let hours = time::seconds_of_day(t) as f64 / 3600.0;
    let gamma = 2.0 * PI / days_in_year * (time::utc_ordinal(t) as f64 - 1.0 + (hours - 12.0) / 24.0);

    let eq_time_min = 229.18
        * (0.000075 + 0.001868 * gamma.cos()
            - 0.032077 * gamma.sin()
            - 0.014615 * (2.0 * gamma).cos()
            - 0.040849 * (2.0 * gamma).sin());
    let decl = 0.006918 - 0.399912 * gamma.cos() + 0.070257 * gamma.sin()
        - 0.006758 * (2.0 * gamma).cos()
        + 0.000907 * (2.0 * gamma).sin()
        - 0.002697 * (3.0 * gamma).cos()
        + 0.00148 * (3.0 * gamma).sin();

    let true_solar_min = hours * 60.0 + eq_time_min + 4.0 * lon_deg;
    let hour_angle = (true_solar_min / 4.0 - 180.0).to_radians();
    let lat = lat_deg.to_radians();

    let cos_zen = (lat.sin() * decl.sin() + lat.cos() * decl.cos() * hour_angle.cos()).clamp(-1.0, 1.0);
    let sza_deg = cos_zen.acos().to_degrees();

    let az = hour_angle
        .sin()
        .atan2(hour_angle.cos() * lat.sin() - decl.tan() * lat.cos())
        .to_degrees()
        + 180.0;
    SolarAngles {
        sza_deg,
        saa_deg: az.rem_euclid(360.0),
    }
}

/// Haurwitz clear-sky GHI for a zenith angle in degrees; zero at or below the horizon.
pub fn haurwitz_ghi(sza_deg: f64) -> f64 {
    if sza_deg >= 90.0 {
        return 0.0;
    }
    let cz = sza_deg.to_radians().cos();
    if cz <= 0.0 {
        return 0.0;
    }
    1098.0 * cz * (-0.057 / cz).exp()
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Analytic,
    Table { timestamps: Vec<Timestamp>, ghi: Vec<f64> },
}

/// Source of clear-sky GHI: the analytic Haurwitz model at a site, or a
/// timestamp-indexed table (e.g. the `ghi_clr` column of a dataset).
#[derive(Debug, Clone, PartialEq)]
pub struct ClearSkyProvider {
    site: Site,
    source: Source,
}

impl ClearSkyProvider {
    pub fn analytic(site: Site) -> Self {
        Self {
            site,
            source: Source::Analytic,
        }
    }

    /// Table mode. Timestamps must be strictly increasing and values non-negative.
    pub fn table(site: Site, timestamps: Vec<Timestamp>, ghi: Vec<f64>) -> Result<Self> {
        if timestamps.len() != ghi.len() {
            return Err(Error::LengthMismatch {
                left: timestamps.len(),
                right: ghi.len(),
            });
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("clear-sky table", "timestamps not strictly increasing"));
        }
        if let Some(v) = ghi.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid("clear-sky table", format!("value {v}")));
        }
        Ok(Self {
            site,
            source: Source::Table { timestamps, ghi },
        })
    }

    pub fn site(&self) -> Site {
        self.site
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.source, Source::Analytic)
    }

    /// Clear-sky GHI at `t`, W/m².
    pub fn ghi(&self, t: Timestamp) -> Result<f64> {
        match &self.source {
            Source::Analytic => {
                let angles = solar_position(self.site.lat_deg, self.site.lon_deg, t);
                Ok(haurwitz_ghi(angles.sza_deg))
            }
            Source::Table { timestamps, ghi } => timestamps
                .binary_search(&t)
                .map(|i| ghi[i])
                .map_err(|_| Error::NoClearSkyValue(t)),
        }
    }
}

impl ClearSkyProvider {
    /// Clear-sky values over one UTC day (`day` = days since the epoch).
    ///
    /// Analytic mode samples the whole day every `step` seconds; table mode
    /// returns the table entries that fall in that day.
    pub fn day_series(&self, day: i64, step: i64) -> Result<TimeSeries> {
        let start = day * time::SECONDS_PER_DAY;
        let end = start + time::SECONDS_PER_DAY;
        match &self.source {
            Source::Analytic => {
                let ts: Vec<Timestamp> = (start..end).step_by(step.max(1) as usize).collect();
                let vs = ts.iter().map(|&t| self.ghi(t)).collect::<Result<Vec<_>>>()?;
                TimeSeries::with_step(ts, vs, step)
            }
            Source::Table { timestamps, ghi } => {
                let lo = timestamps.partition_point(|&t| t < start);
                let hi = timestamps.partition_point(|&t| t < end);
                TimeSeries::with_step(timestamps[lo..hi].to_vec(), ghi[lo..hi].to_vec(), step)
            }
        }
    }
}

/// `ghi / ghi_clr`, with the low-sun floor rule and clamp to `[0, KC_MAX]`.
pub fn clearsky_index(ghi: f64, ghi_clr: f64) -> f64 {
    if ghi_clr < CLEARSKY_FLOOR {
        return 1.0;
    }
    (ghi / ghi_clr).clamp(0.0, KC_MAX)
}

/// Smart persistence: hold the clear-sky index of `t` and rescale by the
/// clear-sky irradiance at `t + horizon`. Emitted only where `t + horizon`
/// is itself on the series grid.
pub fn smart_persistence(
    series: &TimeSeries,
    provider: &ClearSkyProvider,
    horizon: i64,
) -> Result<ForecastSeries> {
    check_horizon(series, horizon)?;
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (t, y) in series.iter() {
        let target = t + horizon;
        if series.index_of(target).is_none() {
            continue;
        }
        ts.push(target);
        vs.push(persist_clearsky_index(y, provider.ghi(t)?, provider.ghi(target)?));
    }
    let out = TimeSeries::with_step(ts, vs, series.nominal_step())?;
    ForecastSeries::new(out, horizon, "smart_persistence")
}

/// `clearsky_index(y, clr_now) * clr_target`, evaluated as
/// `y * (clr_target / clr_now)` inside the clamp so that an unchanged
/// clear-sky value reproduces `y` exactly.
fn persist_clearsky_index(y: f64, clr_now: f64, clr_target: f64) -> f64 {
    let kc = clearsky_index(y, clr_now);
    if clr_now < CLEARSKY_FLOOR || kc == 0.0 || kc == KC_MAX {
        kc * clr_target
    } else {
        y * (clr_target / clr_now)
    }
}

/// Plain persistence: the value at `t` is forecast for `t + horizon`.
pub fn simple_persistence(series: &TimeSeries, horizon: i64) -> Result<ForecastSeries> {
    check_horizon(series, horizon)?;
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (t, y) in series.iter() {
        let target = t + horizon;
        if series.index_of(target).is_some() {
            ts.push(target);
            vs.push(y);
        }
    }
    let out = TimeSeries::with_step(ts, vs, series.nominal_step())?;
    ForecastSeries::new(out, horizon, "simple_persistence")
}

fn check_horizon(series: &TimeSeries, horizon: i64) -> Result<()> {
    if horizon < 0 || horizon % series.nominal_step() != 0 {
        return Err(Error::invalid(
            "forecast horizon",
            format!("{horizon} s is not a non-negative multiple of {} s", series.nominal_step()),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_timestamp;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn haurwitz_reference_values() {
        assert_eq!(haurwitz_ghi(90.0), 0.0);
        assert_eq!(haurwitz_ghi(120.0), 0.0);
        // Independent evaluation: 1098 * exp(-0.057) and 549 * exp(-0.114).
        assert!(close(haurwitz_ghi(0.0), 1037.16429, 1e-4));
        assert!(close(haurwitz_ghi(60.0), 489.84962, 1e-4));
    }

    #[test]
    fn equinox_noon_at_equator_is_overhead() {
        // 2019-03-20 ~12:07 UTC: solar noon on the Greenwich meridian near equinox.
        let t0 = parse_timestamp("2019-03-20T11:30:00Z").unwrap();
        let min = (0..90)
            .map(|m| solar_position(0.0, 0.0, t0 + m * 60).sza_deg)
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.6, "min SZA {min}");
    }

    #[test]
    fn summer_solstice_noon_at_sirta() {
        // Published solar-position tables give SZA 25.3 deg at local solar noon
        // on 2019-06-21 for latitude 48.7 N.
        let t0 = parse_timestamp("2019-06-21T11:00:00Z").unwrap();
        let (min, at) = (0..120)
            .map(|m| (solar_position(48.7, 2.2, t0 + m * 60).sza_deg, m))
            .fold((f64::INFINITY, 0), |acc, x| if x.0 < acc.0 { x } else { acc });
        assert!(close(min, 25.3, 0.5), "min SZA {min}");
        let noon = solar_position(48.7, 2.2, t0 + at * 60);
        assert!(close(noon.saa_deg, 180.0, 2.0), "azimuth {}", noon.saa_deg);
    }

    #[test]
    fn midnight_is_below_horizon() {
        for date in ["2019-01-15", "2019-06-21", "2019-10-01"] {
            let t = parse_timestamp(&format!("{date}T00:00:00Z")).unwrap();
            assert!(solar_position(45.0, 0.0, t).sza_deg > 90.0);
        }
    }

    #[test]
    fn morning_sun_is_in_the_east() {
        let t = parse_timestamp("2019-06-21T06:00:00Z").unwrap();
        let a = solar_position(48.7, 2.2, t);
        assert!(a.saa_deg > 45.0 && a.saa_deg < 110.0, "{a:?}");
    }

    #[test]
    fn clearsky_index_rules() {
        assert_eq!(clearsky_index(400.0, 800.0), 0.5);
        assert_eq!(clearsky_index(5.0, 0.0), 1.0);
        assert_eq!(clearsky_index(1600.0, 800.0), 1.5);
        assert_eq!(clearsky_index(0.0, 500.0), 0.0);
    }

    #[test]
    fn table_provider_lookup() {
        let p = ClearSkyProvider::table(SIRTA, vec![0, 120], vec![10.0, 20.0]).unwrap();
        assert_eq!(p.ghi(120).unwrap(), 20.0);
        assert!(matches!(p.ghi(60), Err(Error::NoClearSkyValue(60))));
        assert!(ClearSkyProvider::table(SIRTA, vec![0, 0], vec![1.0, 1.0]).is_err());
        assert!(ClearSkyProvider::table(SIRTA, vec![0], vec![-1.0]).is_err());
    }

    #[test]
    fn smart_persistence_arithmetic() {
        let series = TimeSeries::new(vec![0, 600], vec![400.0, 123.0]).unwrap();
        let p = ClearSkyProvider::table(SIRTA, vec![0, 600], vec![800.0, 900.0]).unwrap();
        let f = smart_persistence(&series, &p, 600).unwrap();
        assert_eq!(f.timestamps(), &[600]);
        assert_eq!(f.values(), &[450.0]);
        assert_eq!(f.horizon(), 600);
    }

    #[test]
    fn constant_clearsky_matches_simple_persistence() {
        let ts: Vec<i64> = (0..30).map(|i| i * 120).collect();
        let vs: Vec<f64> = (0..30).map(|i| 350.0 + 300.0 * (i as f64).sin()).collect();
        let series = TimeSeries::new(ts.clone(), vs).unwrap();
        let p = ClearSkyProvider::table(SIRTA, ts.clone(), vec![700.0; ts.len()]).unwrap();
        for h in [0, 120, 600] {
            let smart = smart_persistence(&series, &p, h).unwrap();
            let simple = simple_persistence(&series, h).unwrap();
            assert_eq!(smart.series(), simple.series());
        }
    }

    #[test]
    fn proportional_day_has_zero_error() {
        let site = SIRTA;
        let p = ClearSkyProvider::analytic(site);
        let t0 = parse_timestamp("2019-06-21T06:00:00Z").unwrap();
        let ts: Vec<i64> = (0..300).map(|i| t0 + i * 120).collect();
        let vs: Vec<f64> = ts.iter().map(|&t| 0.7 * p.ghi(t).unwrap()).collect();
        let series = TimeSeries::new(ts, vs).unwrap();
        for h in [120, 600, 1800] {
            let f = smart_persistence(&series, &p, h).unwrap();
            for (t, v) in f.iter() {
                let obs = series.value_at(t).unwrap();
                assert!((v - obs).abs() < 1e-9, "h {h} t {t}: {v} vs {obs}");
            }
        }
    }

    #[test]
    fn simple_persistence_edges() {
        let series = TimeSeries::new(vec![0, 120, 240], vec![1.0, 2.0, 3.0]).unwrap();
        let f = simple_persistence(&series, 120).unwrap();
        assert_eq!(f.timestamps(), &[120, 240]);
        assert_eq!(f.values(), &[1.0, 2.0]);
        let id = simple_persistence(&series, 0).unwrap();
        assert_eq!(id.series(), &series);
        let one = TimeSeries::new(vec![0], vec![5.0]).unwrap();
        assert!(simple_persistence(&one, 120).unwrap().is_empty());
        assert!(simple_persistence(&series, 100).is_err());
    }
}
