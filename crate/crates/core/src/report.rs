//! Benchmark evaluation: per-forecast, per-horizon error, skill, ramp and
//! temporal-distortion scores against smart persistence, with JSON and CSV
//! emitters.
//!
//! # Forecast CSV schema
//!
//! ```text
//! producer,loss,horizon_min,timestamp,ghi
//! lag_5,,10,2019-07-26T09:30:00Z,512.5
//! ```
//!
//! `timestamp` is the valid time of the forecast; `loss` may be empty.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{self, choose_windows, eligible_windows, Record, SplitSpec};
use crate::distortion::summarize_sequences;
use crate::error::{Error, Result};
use crate::metrics::{error_summary, forecast_skill, ErrorSummary, Metric};
use crate::ramp::daily_ramp_score;
use crate::series::{format_value, AlignedPair, ForecastSeries, TimeSeries, DEFAULT_STEP};
use crate::solar::{simple_persistence, smart_persistence, ClearSkyProvider, Site};
use crate::time::{self, Timestamp};

pub const SCHEMA_VERSION: u32 = 1;
pub const SPM_PRODUCER: &str = "smart_persistence";
pub const SIMPLE_PRODUCER: &str = "simple_persistence";
pub const FORECAST_HEADER: [&str; 5] = ["producer", "loss", "horizon_min", "timestamp", "ghi"];

/// A forecast to score, tagged with its producer and training loss.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastInput {
    pub producer: String,
    pub loss: String,
    pub forecast: ForecastSeries,
}

/// Reads a forecast CSV; one [`ForecastInput`] per (producer, loss, horizon).
pub fn load_forecasts(path: impl AsRef<Path>) -> Result<Vec<ForecastInput>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_forecasts(std::io::BufReader::new(file), &path.display().to_string())
}

pub fn read_forecasts<R: Read>(reader: R, name: &str) -> Result<Vec<ForecastInput>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if headers != FORECAST_HEADER {
        return Err(Error::Row {
            path: name.into(),
            line: 1,
            reason: format!("header must be {:?}", FORECAST_HEADER.join(",")),
        });
    }
    type Key = (String, String, i64);
    let mut groups: BTreeMap<Key, Vec<(Timestamp, f64, u64)>> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |reason: String| Error::Row {
            path: name.into(),
            line,
            reason,
        };
        if row.len() != FORECAST_HEADER.len() {
            return Err(bad(format!("expected 5 fields, got {}", row.len())));
        }
        let producer = row[0].trim().to_string();
        if producer.is_empty() {
            return Err(bad("producer is required".into()));
        }
        let horizon: i64 = row[2]
            .trim()
            .parse()
            .map_err(|e| bad(format!("horizon_min {:?}: {e}", &row[2])))?;
        let t = time::parse_timestamp(&row[3]).map_err(|e| bad(e.to_string()))?;
        let v: f64 = row[4].trim().parse().map_err(|e| bad(format!("ghi {:?}: {e}", &row[4])))?;
        if !v.is_finite() {
            return Err(bad(format!("ghi not finite: {v}")));
        }
        groups
            .entry((producer, row[1].trim().to_string(), horizon))
            .or_default()
            .push((t, v, line));
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((producer, loss, horizon_min), mut rows) in groups {
        rows.sort_by_key(|r| r.0);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateTimestamp {
                path: name.into(),
                line: w[0].2.max(w[1].2),
                timestamp: time::format_timestamp(w[0].0),
            });
        }
        let series = TimeSeries::with_step(
            rows.iter().map(|r| r.0).collect(),
            rows.iter().map(|r| r.1).collect(),
            DEFAULT_STEP,
        )?;
        let forecast = ForecastSeries::new(series, horizon_min * 60, producer.clone()).map_err(|e| Error::Row {
            path: name.into(),
            line: rows[0].2,
            reason: e.to_string(),
        })?;
        out.push(ForecastInput {
            producer,
            loss,
            forecast,
        });
    }
    Ok(out)
}

/// Writes forecasts in the forecast schema.
pub fn write_forecasts<W: Write>(inputs: &[ForecastInput], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(FORECAST_HEADER)?;
    for f in inputs {
        let h = (f.forecast.horizon() / 60).to_string();
        for (t, v) in f.forecast.iter() {
            w.write_record([f.producer.as_str(), f.loss.as_str(), h.as_str(), &time::format_timestamp(t), &format_value(v)])?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Minutes; empty means every horizon present among the forecasts (or 10).
    pub horizons_min: Vec<i64>,
    pub tau_cls: f64,
    pub gamma: f64,
    pub sza_max_deg: f64,
    pub seed: u64,
    pub site: Site,
    pub sequences: usize,
    pub sequence_len: usize,
    /// Seconds.
    pub sequence_gap: i64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            horizons_min: Vec::new(),
            tau_cls: crate::ramp::DEFAULT_TAU_CLS,
            gamma: dataset::DEFAULT_GAMMA,
            sza_max_deg: dataset::DEFAULT_SZA_MAX,
            seed: 0,
            site: crate::solar::SIRTA,
            sequences: dataset::SEQUENCE_COUNT,
            sequence_len: dataset::SEQUENCE_LEN,
            sequence_gap: dataset::SEQUENCE_GAP,
        }
    }
}

/// One line of the benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub producer: String,
    pub loss: String,
    pub horizon_min: i64,
    pub errors: ErrorSummary,
    /// Smart persistence errors on the same timestamps.
    pub reference_errors: ErrorSummary,
    /// Fractions (not percent). `None` when the reference error is zero.
    pub fs_mse: Option<f64>,
    pub fs_rmse: Option<f64>,
    pub fs_mae: Option<f64>,
    pub fs_mse_pct: Option<f64>,
    pub fs_rmse_pct: Option<f64>,
    pub fs_mae_pct: Option<f64>,
    /// W/m²/min.
    pub ramp_score: Option<f64>,
    pub ramp_score_reference: Option<f64>,
    pub ramp_delta_pct: Option<f64>,
    pub q95_delta_pct: Option<f64>,
    /// Mean of per-sequence TDI, percent.
    pub tdi_pct: Option<f64>,
    pub tdi_pooled_pct: Option<f64>,
    pub tdm: Option<f64>,
    pub sequences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub dataset_sha256: String,
    pub seed: u64,
    pub config: EvalConfig,
    pub tdi_aggregation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub schema_version: u32,
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

/// SHA-256 of a file, hex.
pub fn file_sha256(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn pct_delta(value: f64, reference: f64) -> Option<f64> {
    (reference != 0.0).then(|| 100.0 * (value - reference) / reference)
}

/// Dataset records with solar angles filled, their GHI series and clear-sky
/// source.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub records: Vec<Record>,
    pub observed: TimeSeries,
    pub provider: ClearSkyProvider,
}

impl Prepared {
    pub fn new(records: &[Record], site: Site) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        let mut records = records.to_vec();
        dataset::fill_solar_angles(&mut records, site);
        let observed = dataset::ghi_series(&records)?;
        let provider = dataset::clearsky_provider(&records, site)?;
        Ok(Self {
            records,
            observed,
            provider,
        })
    }
}

/// Requested horizons in minutes, ascending; falls back to the horizons of
/// the supplied forecasts, then to 10 min.
pub fn resolve_horizons(config: &EvalConfig, forecasts: &[ForecastInput]) -> Result<Vec<i64>> {
    let mut horizons: BTreeSet<i64> = config.horizons_min.iter().copied().collect();
    if horizons.is_empty() {
        horizons.extend(forecasts.iter().map(|f| f.forecast.horizon() / 60));
    }
    if horizons.is_empty() {
        horizons.insert(10);
    }
    if let Some(h) = horizons.iter().find(|&&h| h <= 0) {
        return Err(Error::invalid("horizon", format!("{h} min")));
    }
    Ok(horizons.into_iter().collect())
}

/// Smart persistence, simple persistence, then the supplied forecasts of
/// horizon `h` minutes sorted by (producer, loss). Empty losses become `-`.
pub fn lineup_for_horizon(
    observed: &TimeSeries,
    provider: &ClearSkyProvider,
    forecasts: &[ForecastInput],
    h: i64,
) -> Result<Vec<ForecastInput>> {
    let baseline = |producer: &str, forecast| ForecastInput {
        producer: producer.to_string(),
        loss: "-".to_string(),
        forecast,
    };
    let mut out = vec![
        baseline(SPM_PRODUCER, smart_persistence(observed, provider, h * 60)?),
        baseline(SIMPLE_PRODUCER, simple_persistence(observed, h * 60)?),
    ];
    let mut users: Vec<ForecastInput> = forecasts
        .iter()
        .filter(|f| f.forecast.horizon() == h * 60)
        .map(|f| ForecastInput {
            loss: if f.loss.is_empty() { "-".into() } else { f.loss.clone() },
            ..f.clone()
        })
        .collect();
    users.sort_by(|a, b| (&a.producer, &a.loss).cmp(&(&b.producer, &b.loss)));
    out.extend(users);
    Ok(out)
}

struct Context<'a> {
    records: Vec<Record>,
    observed: TimeSeries,
    provider: ClearSkyProvider,
    config: &'a EvalConfig,
    windows: Vec<dataset::SequenceWindow>,
}

impl Context<'_> {
    fn in_scope(&self, t: Timestamp) -> bool {
        self.observed
            .index_of(t)
            .and_then(|i| self.records[i].sza_deg)
            .is_some_and(|z| z < self.config.sza_max_deg)
    }

    fn score(&self, producer: &str, loss: &str, forecast: &ForecastSeries, spm: &ForecastSeries) -> Result<Option<ReportRow>> {
        let grid: Vec<Timestamp> = forecast
            .timestamps()
            .iter()
            .copied()
            .filter(|&t| self.in_scope(t) && spm.index_of(t).is_some())
            .collect();
        if grid.is_empty() {
            return Ok(None);
        }
        let keep: BTreeSet<Timestamp> = grid.iter().copied().collect();
        let pair = crate::series::align(forecast, &self.observed)?.filter_time(|t| keep.contains(&t));
        let pair_ref = crate::series::align(spm, &self.observed)?.filter_time(|t| keep.contains(&t));
        let errors = error_summary(&pair)?;
        let reference_errors = error_summary(&pair_ref)?;
        let fs = |m: Metric| forecast_skill(errors.get(m), reference_errors.get(m)).ok();
        let ramp = |p: &AlignedPair| daily_ramp_score(p, &self.provider, self.config.tau_cls, DEFAULT_STEP).ok();
        let ramp_score = ramp(&pair).map(|r| r.score);
        let ramp_score_reference = ramp(&pair_ref).map(|r| r.score);

        let seq_pairs = covered_sequences(&self.observed, &self.windows, forecast, self.config)?;
        let distortion = if seq_pairs.is_empty() {
            None
        } else {
            Some(summarize_sequences(&seq_pairs)?)
        };

        let (fs_mse, fs_rmse, fs_mae) = (fs(Metric::Mse), fs(Metric::Rmse), fs(Metric::Mae));
        Ok(Some(ReportRow {
            producer: producer.to_string(),
            loss: loss.to_string(),
            horizon_min: forecast.horizon() / 60,
            fs_mse_pct: fs_mse.map(|v| 100.0 * v),
            fs_rmse_pct: fs_rmse.map(|v| 100.0 * v),
            fs_mae_pct: fs_mae.map(|v| 100.0 * v),
            fs_mse,
            fs_rmse,
            fs_mae,
            ramp_delta_pct: ramp_score.zip(ramp_score_reference).and_then(|(a, b)| pct_delta(a, b)),
            ramp_score,
            ramp_score_reference,
            q95_delta_pct: pct_delta(errors.q95_abs, reference_errors.q95_abs),
            errors,
            reference_errors,
            tdi_pct: distortion.map(|d| d.tdi_mean),
            tdi_pooled_pct: distortion.map(|d| d.tdi_pooled),
            tdm: distortion.map(|d| d.tdm_pooled),
            sequences: distortion.map_or(0, |d| d.sequences),
        }))
    }
}

/// Candidate distortion windows: `config.sequence_len` consecutive records
/// whose last record is below the SZA limit (records need SZA).
pub fn candidate_windows(records: &[Record], config: &EvalConfig) -> Vec<dataset::SequenceWindow> {
    let spec = SplitSpec {
        sza_max_deg: config.sza_max_deg,
        sequence_len: config.sequence_len,
        ..SplitSpec::new((0, 0), (0, 0), (0, 0), config.seed)
    };
    eligible_windows(records, &spec, None)
}

/// Up to `config.sequences` forecast/observation pairs over separated
/// windows that the forecast fully covers, drawn with `config.seed`.
/// Chronological order.
pub fn covered_sequences(
    observed: &TimeSeries,
    candidates: &[dataset::SequenceWindow],
    forecast: &TimeSeries,
    config: &EvalConfig,
) -> Result<Vec<AlignedPair>> {
    // prefix count of observed instants the forecast covers
    let mut covered = Vec::with_capacity(observed.len() + 1);
    covered.push(0usize);
    let mut k = 0;
    let f_ts = forecast.timestamps();
    for &t in observed.timestamps() {
        while k < f_ts.len() && f_ts[k] < t {
            k += 1;
        }
        let hit = k < f_ts.len() && f_ts[k] == t;
        covered.push(covered.last().unwrap() + hit as usize);
    }
    let usable: Vec<_> = candidates
        .iter()
        .copied()
        .filter(|w| covered[w.end_index + 1] - covered[w.start_index] == w.end_index + 1 - w.start_index)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    choose_windows(&usable, config.sequences, config.sequence_gap, &mut rng)
        .into_iter()
        .map(|w| {
            let ts = &observed.timestamps()[w.start_index..=w.end_index];
            let test = ts.iter().map(|&t| forecast.value_at(t).unwrap()).collect();
            AlignedPair::new(ts.to_vec(), test, observed.values()[w.start_index..=w.end_index].to_vec())
        })
        .collect()
}

/// Scores smart persistence, simple persistence and every supplied forecast
/// against the observations, per horizon.
///
/// Each row is computed on the timestamps where the forecast, smart
/// persistence and an in-scope observation (SZA below the limit) all exist;
/// the smart-persistence reference errors are recomputed on that same grid.
/// Distortion uses up to `config.sequences` separated windows of consecutive
/// records that the forecast fully covers, drawn with `config.seed`.
pub fn evaluate(
    records: &[Record],
    forecasts: &[ForecastInput],
    config: &EvalConfig,
    dataset_sha256: String,
) -> Result<BenchmarkReport> {
    let prepared = Prepared::new(records, config.site)?;
    let windows = candidate_windows(&prepared.records, config);
    let ctx = Context {
        records: prepared.records,
        observed: prepared.observed,
        provider: prepared.provider,
        config,
        windows,
    };
    let mut rows = Vec::new();
    for h in resolve_horizons(config, forecasts)? {
        let lineup = lineup_for_horizon(&ctx.observed, &ctx.provider, forecasts, h)?;
        let spm = &lineup[0].forecast;
        for f in &lineup {
            rows.extend(ctx.score(&f.producer, &f.loss, &f.forecast, spm)?);
        }
    }
    Ok(BenchmarkReport {
        schema_version: SCHEMA_VERSION,
        metadata: ReportMetadata {
            dataset_sha256,
            seed: config.seed,
            config: config.clone(),
            tdi_aggregation: "tdi_pct: mean of per-sequence TDI; tdi_pooled_pct and tdm: pooled late/advance areas"
                .to_string(),
        },
        rows,
    })
}

impl BenchmarkReport {
    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n").map_err(|e| Error::io("<json writer>", e))
    }

    /// Table-style CSV: percentages and scores rounded for display.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "schema_version",
            "producer",
            "loss",
            "horizon_min",
            "n",
            "fs_mse_pct",
            "fs_rmse_pct",
            "fs_mae_pct",
            "ramp_w_m2_min",
            "ramp_delta_pct",
            "q95_w_m2",
            "q95_delta_pct",
            "tdi_pct",
            "tdm",
            "mae_w_m2",
            "rmse_w_m2",
            "sequences",
        ])?;
        let f1 = |v: Option<f64>| v.map(|x| format!("{x:.1}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                self.schema_version.to_string(),
                r.producer.clone(),
                r.loss.clone(),
                r.horizon_min.to_string(),
                r.errors.n.to_string(),
                f1(r.fs_mse_pct),
                f1(r.fs_rmse_pct),
                f1(r.fs_mae_pct),
                f1(r.ramp_score),
                f1(r.ramp_delta_pct),
                format!("{:.1}", r.errors.q95_abs),
                f1(r.q95_delta_pct),
                f1(r.tdi_pct),
                r.tdm.map(|x| format!("{x:.2}")).unwrap_or_default(),
                format!("{:.3}", r.errors.mae),
                format!("{:.3}", r.errors.rmse),
                r.sequences.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}
