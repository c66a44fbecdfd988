//! Command-line surface. Every subcommand is a thin wrapper that loads
//! inputs, calls the library and writes CSV/JSON; [`run`] returns the paths
//! written so callers (and tests) can inspect them.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dataset::{self, Role, SplitSpec};
use crate::distortion::{sequence_path, summarize_sequences, tdi_tdm, DistortionSummary};
use crate::error::{Error, Result};
use crate::learner::{self, Architecture, Loss, TrainConfig};
use crate::ramp::{epsilon_for_day, swinging_door};
use crate::report::{self, EvalConfig, ForecastInput, Prepared};
use crate::series::{format_value, ForecastSeries, TimeSeries, DEFAULT_STEP};
use crate::solar::{Site, SIRTA};
use crate::synth::{self, ScenarioSpec};
use crate::time::{self, SECONDS_PER_DAY};

#[derive(Debug, Parser)]
#[command(name = "irradiance-skill", version, about = "Irradiance forecast benchmarking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Benchmark report (JSON + CSV) for persistence baselines and forecasts.
    Evaluate(EvaluateArgs),
    /// Swinging-door segments of the observations and forecasts.
    Ramps(RampsArgs),
    /// Per-sequence TDI/TDM and warp paths.
    Distortion(DistortionArgs),
    /// Train the tabular baseline learner.
    Train(TrainArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Seeded train/validation/test sample and sequence selection.
    Split(SplitArgs),
}

/// Options shared by every subcommand; flags override `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Shared {
    /// TOML file with any of: seed, tau_cls, gamma, sza_max, lat, lon, horizon, sequences.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ramp threshold as a fraction of the daily clear-sky maximum [default: 0.05].
    #[arg(long, visible_alias = "epsilon-tau")]
    pub tau_cls: Option<f64>,
    /// QC relative jump threshold [default: 0.1].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Solar zenith angle limit in degrees [default: 80].
    #[arg(long)]
    pub sza_max: Option<f64>,
    /// Site latitude [default: SIRTA].
    #[arg(long, allow_hyphen_values = true)]
    pub lat: Option<f64>,
    /// Site longitude [default: SIRTA].
    #[arg(long, allow_hyphen_values = true)]
    pub lon: Option<f64>,
}

/// Keys accepted in the `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub tau_cls: Option<f64>,
    pub gamma: Option<f64>,
    pub sza_max: Option<f64>,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
    pub horizon: Option<Vec<i64>>,
    pub sequences: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::invalid("config file", format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub tau_cls: f64,
    pub gamma: f64,
    pub sza_max: f64,
    pub site: Site,
    pub horizons: Vec<i64>,
    pub sequences: usize,
}

impl Shared {
    pub fn resolve(&self, horizons: &[i64], sequences: Option<usize>) -> Result<Settings> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let site = Site::new(
            self.lat.or(file.lat).unwrap_or(SIRTA.lat_deg),
            self.lon.or(file.lon).unwrap_or(SIRTA.lon_deg),
        )?;
        let settings = Settings {
            seed: self.seed.or(file.seed).unwrap_or(0),
            tau_cls: self.tau_cls.or(file.tau_cls).unwrap_or(crate::ramp::DEFAULT_TAU_CLS),
            gamma: self.gamma.or(file.gamma).unwrap_or(dataset::DEFAULT_GAMMA),
            sza_max: self.sza_max.or(file.sza_max).unwrap_or(dataset::DEFAULT_SZA_MAX),
            site,
            horizons: if horizons.is_empty() {
                file.horizon.unwrap_or_default()
            } else {
                horizons.to_vec()
            },
            sequences: sequences.or(file.sequences).unwrap_or(dataset::SEQUENCE_COUNT),
        };
        if !(settings.tau_cls > 0.0) || !(settings.gamma >= 0.0) || !(settings.sza_max > 0.0 && settings.sza_max <= 90.0) {
            return Err(Error::invalid(
                "settings",
                "tau_cls must be > 0, gamma >= 0 and sza_max in (0, 90]",
            ));
        }
        Ok(settings)
    }
}

impl Settings {
    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            horizons_min: self.horizons.clone(),
            tau_cls: self.tau_cls,
            gamma: self.gamma,
            sza_max_deg: self.sza_max,
            seed: self.seed,
            site: self.site,
            sequences: self.sequences,
            ..EvalConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[arg(long)]
    pub dataset: PathBuf,
    /// Forecast CSV (producer,loss,horizon_min,timestamp,ghi); repeatable.
    #[arg(long)]
    pub forecast: Vec<PathBuf>,
    /// Horizon in minutes; repeatable.
    #[arg(long)]
    pub horizon: Vec<i64>,
    /// Number of distortion sequences [default: 100].
    #[arg(long)]
    pub sequences: Option<usize>,
    /// Output directory for report.json and report.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RampsArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub forecast: Vec<PathBuf>,
    /// Only segment forecasts of these horizons (minutes).
    #[arg(long)]
    pub horizon: Vec<i64>,
    /// Segment CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub forecast: Vec<PathBuf>,
    #[arg(long)]
    pub horizon: Vec<i64>,
    #[arg(long)]
    pub sequences: Option<usize>,
    /// Output directory for distortion.json, sequences.csv and paths.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    L1,
    L2,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value = "l2", ignore_case = true)]
    pub loss: LossArg,
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f64,
    #[arg(long, default_value_t = 10)]
    pub batch: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    /// Hidden ReLU units; 0 trains a linear model.
    #[arg(long, default_value_t = 16)]
    pub hidden: usize,
    /// Forecast horizon in minutes.
    #[arg(long, default_value_t = 10)]
    pub horizon: i64,
    #[arg(long, default_value_t = 2017)]
    pub train_year: i32,
    #[arg(long, default_value_t = 2018)]
    pub val_year: i32,
    #[arg(long, default_value_t = 2019)]
    pub test_year: i32,
    #[arg(long, default_value_t = 35_000)]
    pub train_count: usize,
    #[arg(long, default_value_t = 10_000)]
    pub val_count: usize,
    #[arg(long, default_value_t = 10_000)]
    pub test_count: usize,
    /// Training-set fractions for a learning curve, e.g. 0.25,0.5,1.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Clear,
    Transits,
    Drift,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub shared: Shared,
    /// First UTC day, YYYY-MM-DD.
    #[arg(long, default_value = "2019-01-01")]
    pub start: String,
    #[arg(long, default_value_t = 1)]
    pub days: i64,
    #[arg(long, value_enum, default_value = "transits")]
    pub scenario: Scenario,
    /// Minutes between cloud passages.
    #[arg(long, default_value_t = 40)]
    pub period_min: i64,
    /// Minutes each passage lasts.
    #[arg(long, default_value_t = 20)]
    pub dip_min: i64,
    #[arg(long, default_value_t = 0.3)]
    pub attenuation: f64,
    /// Minutes of linear transition at each side of a passage.
    #[arg(long, default_value_t = 4)]
    pub edge_min: i64,
    #[arg(long, default_value_t = 0.7)]
    pub kc_mean: f64,
    #[arg(long, default_value_t = 0.2)]
    pub kc_amplitude: f64,
    #[arg(long, default_value_t = 90)]
    pub kc_period_min: i64,
    /// Standard deviation of multiplicative noise on the clear-sky index.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Also write a forecast that lags the series by this many steps.
    #[arg(long)]
    pub lag: Option<i64>,
    /// Dataset CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Lag forecast CSV path (with --lag).
    #[arg(long)]
    pub forecast_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 2017)]
    pub train_year: i32,
    #[arg(long, default_value_t = 2018)]
    pub val_year: i32,
    #[arg(long, default_value_t = 2019)]
    pub test_year: i32,
    #[arg(long, default_value_t = 35_000)]
    pub train_count: usize,
    #[arg(long, default_value_t = 10_000)]
    pub val_count: usize,
    #[arg(long, default_value_t = 10_000)]
    pub test_count: usize,
    /// Minimum spacing between samples, minutes.
    #[arg(long, default_value_t = 4)]
    pub min_spacing_min: i64,
    /// Sequences per role [default: 100].
    #[arg(long)]
    pub sequences: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command and returns the files it wrote.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match cli.command {
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Ramps(a) => cmd_ramps(&a),
        Command::Distortion(a) => cmd_distortion(&a),
        Command::Train(a) => cmd_train(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Split(a) => cmd_split(&a),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    use std::io::Write;
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn load_all_forecasts(paths: &[PathBuf]) -> Result<Vec<ForecastInput>> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(report::load_forecasts(p)?);
    }
    Ok(out)
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&a.horizon, a.sequences)?;
    let records = dataset::load_csv(&a.dataset)?;
    let forecasts = load_all_forecasts(&a.forecast)?;
    let report = report::evaluate(&records, &forecasts, &settings.eval_config(), report::file_sha256(&a.dataset)?)?;
    let json = a.out.join("report.json");
    let csv = a.out.join("report.csv");
    report.write_json(create(&json)?)?;
    report.write_csv(create(&csv)?)?;
    Ok(vec![json, csv])
}

/// `series,horizon_min,day,epsilon,t_start,t_end,slope`; slopes in W/m²/min.
pub fn cmd_ramps(a: &RampsArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&a.horizon, None)?;
    let records = dataset::load_csv(&a.dataset)?;
    let prepared = Prepared::new(&records, settings.site)?;
    let mut targets: Vec<(String, String, TimeSeries)> = vec![("observed".into(), String::new(), prepared.observed.clone())];
    for f in load_all_forecasts(&a.forecast)? {
        let h = f.forecast.horizon() / 60;
        if settings.horizons.is_empty() || settings.horizons.contains(&h) {
            targets.push((f.producer.clone(), h.to_string(), f.forecast.into_series()));
        }
    }
    let mut w = csv::Writer::from_writer(create(&a.out)?);
    w.write_record(["series", "horizon_min", "day", "epsilon", "t_start", "t_end", "slope"])?;
    for (name, horizon, series) in &targets {
        for day in series.split_days() {
            if day.len() < 2 {
                continue;
            }
            let d = time::utc_day(day.timestamps()[0]);
            let eps = epsilon_for_day(&prepared.provider.day_series(d, DEFAULT_STEP)?, settings.tau_cls)?;
            let date = time::format_timestamp(d * SECONDS_PER_DAY)[..10].to_string();
            for seg in swinging_door(&day, eps)? {
                w.write_record([
                    name.as_str(),
                    horizon.as_str(),
                    &date,
                    &format_value(eps),
                    &time::format_timestamp(seg.t_start),
                    &time::format_timestamp(seg.t_end),
                    &format_value(seg.slope),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(&a.out, e))?;
    Ok(vec![a.out.clone()])
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceDistortion {
    pub t_start: String,
    pub t_end: String,
    pub tdi: f64,
    pub tdi_adv: f64,
    pub tdi_late: f64,
    pub tdm: f64,
    pub dtw_cost: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionEntry {
    pub producer: String,
    pub loss: String,
    pub horizon_min: i64,
    pub summary: Option<DistortionSummary>,
    pub sequences: Vec<SequenceDistortion>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionOutput {
    pub schema_version: u32,
    pub seed: u64,
    pub sequence_len: usize,
    pub entries: Vec<DistortionEntry>,
}

pub fn cmd_distortion(a: &DistortionArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&a.horizon, a.sequences)?;
    let config = settings.eval_config();
    let records = dataset::load_csv(&a.dataset)?;
    let forecasts = load_all_forecasts(&a.forecast)?;
    let prepared = Prepared::new(&records, settings.site)?;
    let candidates = report::candidate_windows(&prepared.records, &config);

    let seq_path = a.out.join("sequences.csv");
    let path_path = a.out.join("paths.csv");
    let mut seq_csv = csv::Writer::from_writer(create(&seq_path)?);
    let mut path_csv = csv::Writer::from_writer(create(&path_path)?);
    seq_csv.write_record(["producer", "loss", "horizon_min", "sequence", "t_start", "t_end", "tdi", "tdi_adv", "tdi_late", "tdm"])?;
    path_csv.write_record(["producer", "loss", "horizon_min", "sequence", "i", "j"])?;

    let mut entries = Vec::new();
    for h in report::resolve_horizons(&config, &forecasts)? {
        for f in report::lineup_for_horizon(&prepared.observed, &prepared.provider, &forecasts, h)? {
            let pairs = report::covered_sequences(&prepared.observed, &candidates, &f.forecast, &config)?;
            let mut sequences = Vec::with_capacity(pairs.len());
            for (k, pair) in pairs.iter().enumerate() {
                let path = sequence_path(pair)?;
                let rep = tdi_tdm(&path);
                let s = SequenceDistortion {
                    t_start: time::format_timestamp(pair.timestamps()[0]),
                    t_end: time::format_timestamp(*pair.timestamps().last().unwrap()),
                    tdi: rep.tdi,
                    tdi_adv: rep.tdi_adv,
                    tdi_late: rep.tdi_late,
                    tdm: rep.tdm,
                    dtw_cost: path.cost,
                };
                let (hs, ks) = (h.to_string(), k.to_string());
                seq_csv.write_record([
                    f.producer.as_str(),
                    &f.loss,
                    &hs,
                    &ks,
                    &s.t_start,
                    &s.t_end,
                    &format_value(s.tdi),
                    &format_value(s.tdi_adv),
                    &format_value(s.tdi_late),
                    &format_value(s.tdm),
                ])?;
                for (i, j) in &path.steps {
                    path_csv.write_record([f.producer.as_str(), &f.loss, &hs, &ks, &i.to_string(), &j.to_string()])?;
                }
                sequences.push(s);
            }
            entries.push(DistortionEntry {
                summary: if pairs.is_empty() { None } else { Some(summarize_sequences(&pairs)?) },
                producer: f.producer,
                loss: f.loss,
                horizon_min: h,
                sequences,
            });
        }
    }
    seq_csv.flush().map_err(|e| Error::io(&seq_path, e))?;
    path_csv.flush().map_err(|e| Error::io(&path_path, e))?;
    let json_path = a.out.join("distortion.json");
    write_json(
        &DistortionOutput {
            schema_version: report::SCHEMA_VERSION,
            seed: settings.seed,
            sequence_len: config.sequence_len,
            entries,
        },
        &json_path,
    )?;
    Ok(vec![json_path, seq_path, path_path])
}

#[derive(Debug, Clone, Serialize)]
struct TrainSummary {
    config: TrainConfig,
    best_epoch: usize,
    train_samples: usize,
    val_samples: usize,
    test_samples: usize,
    skipped_anchors: usize,
    test: learner::CurvePoint,
}

pub fn cmd_train(a: &TrainArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&[a.horizon], None)?;
    if a.horizon <= 0 {
        return Err(Error::invalid("horizon", format!("{} min", a.horizon)));
    }
    let records = dataset::load_csv(&a.dataset)?;
    let prepared = Prepared::new(&records, settings.site)?;
    let mut spec = SplitSpec::new(
        (a.train_year, a.train_count),
        (a.val_year, a.val_count),
        (a.test_year, a.test_count),
        settings.seed,
    );
    spec.gamma = settings.gamma;
    spec.sza_max_deg = settings.sza_max;
    let selection = dataset::select_samples(&prepared.records, &spec)?;
    let horizon = a.horizon * 60;
    let mut sets = Vec::new();
    let mut skipped = 0;
    for role in Role::ALL {
        let (set, s) = learner::build_dataset(&prepared.records, &selection[&role], horizon, &prepared.provider)?;
        skipped += s;
        sets.push(set);
    }
    let config = TrainConfig {
        architecture: if a.hidden == 0 {
            Architecture::Linear
        } else {
            Architecture::Hidden { width: a.hidden }
        },
        loss: match a.loss {
            LossArg::L1 => Loss::L1,
            LossArg::L2 => Loss::L2,
        },
        weight_decay: a.weight_decay,
        learning_rate: a.lr,
        batch_size: a.batch,
        epochs: a.epochs,
        seed: settings.seed,
        horizon,
        ..TrainConfig::default()
    };
    let outcome = learner::train(&sets[0], &sets[1], &config)?;
    let test = &sets[2];
    let point = learner::skill_on(&outcome.model, test)?;

    let model_path = a.out.join("model.json");
    let history_path = a.out.join("history.csv");
    let forecast_path = a.out.join("forecasts.csv");
    let summary_path = a.out.join("summary.json");
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    outcome.model.save(&model_path)?;
    learner::write_history_csv(&outcome.history, create(&history_path)?)?;
    let producer = if a.hidden == 0 { "linear" } else { "mlp" };
    let series = TimeSeries::with_step(test.times.clone(), outcome.model.predict_all(test), DEFAULT_STEP)?;
    let forecast = ForecastInput {
        producer: producer.into(),
        loss: config.loss.to_string(),
        forecast: ForecastSeries::new(series, horizon, producer)?,
    };
    report::write_forecasts(&[forecast], create(&forecast_path)?)?;
    write_json(
        &TrainSummary {
            config: config.clone(),
            best_epoch: outcome.best_epoch,
            train_samples: sets[0].len(),
            val_samples: sets[1].len(),
            test_samples: test.len(),
            skipped_anchors: skipped,
            test: learner::CurvePoint {
                samples: sets[0].len(),
                ..point
            },
        },
        &summary_path,
    )?;
    let mut written = vec![model_path, history_path, forecast_path, summary_path];
    if !a.fractions.is_empty() {
        let curve = learner::learning_curve(&sets[0], &sets[1], test, &config, &a.fractions)?;
        let curve_path = a.out.join("learning_curve.csv");
        let mut w = csv::Writer::from_writer(create(&curve_path)?);
        for p in &curve {
            w.serialize(p)?;
        }
        w.flush().map_err(|e| Error::io(&curve_path, e))?;
        written.push(curve_path);
    }
    Ok(written)
}

pub fn cmd_synth(a: &SynthArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&[], None)?;
    let day = chrono::NaiveDate::parse_from_str(&a.start, "%Y-%m-%d")
        .map_err(|e| Error::invalid("start", format!("{:?}: {e}", a.start)))?;
    let start = day.and_hms_opt(0, 0, 0).unwrap().and_utc().timestamp();
    if a.days <= 0 {
        return Err(Error::invalid("days", format!("{}", a.days)));
    }
    let mut spec = ScenarioSpec::new(settings.site, start, start + a.days * SECONDS_PER_DAY);
    spec.noise_sigma = a.noise;
    spec.seed = settings.seed;
    if a.scenario == Scenario::Transits {
        if a.period_min <= 0 || a.dip_min <= 0 || a.dip_min > a.period_min {
            return Err(Error::invalid("transits", "need 0 < dip_min <= period_min"));
        }
        spec.events = synth::periodic_events(spec.start, spec.end, a.period_min * 60, a.dip_min * 60, a.attenuation, a.edge_min * 60);
    }
    let series = match a.scenario {
        Scenario::Clear => synth::gen_clear_day(&spec)?,
        Scenario::Transits => synth::gen_cloud_transits(&spec)?,
        Scenario::Drift => synth::gen_kc_drift(&spec, a.kc_mean, a.kc_amplitude, a.kc_period_min * 60)?,
    };
    dataset::write_csv(&synth::to_records(&series, settings.site), create(&a.out)?)?;
    let mut written = vec![a.out.clone()];
    if let Some(k) = a.lag {
        let path = a
            .forecast_out
            .clone()
            .ok_or_else(|| Error::invalid("lag", "--forecast-out is required with --lag"))?;
        let f = synth::lag_forecast(&series, k)?;
        let input = ForecastInput {
            producer: f.producer().to_string(),
            loss: String::new(),
            forecast: f,
        };
        report::write_forecasts(&[input], create(&path)?)?;
        written.push(path);
    }
    Ok(written)
}

pub fn cmd_split(a: &SplitArgs) -> Result<Vec<PathBuf>> {
    let settings = a.shared.resolve(&[], a.sequences)?;
    let records = dataset::load_csv(&a.dataset)?;
    let prepared = Prepared::new(&records, settings.site)?;
    let mut spec = SplitSpec::new(
        (a.train_year, a.train_count),
        (a.val_year, a.val_count),
        (a.test_year, a.test_count),
        settings.seed,
    );
    spec.gamma = settings.gamma;
    spec.sza_max_deg = settings.sza_max;
    spec.min_spacing = a.min_spacing_min * 60;
    spec.sequence_count = settings.sequences;
    let selection = dataset::select_samples(&prepared.records, &spec)?;
    let mut written = Vec::new();
    for role in Role::ALL {
        let name = role.name();
        let indices = &selection[&role];
        let samples = a.out.join(format!("{name}_samples.csv"));
        dataset::write_selection_csv(&prepared.records, indices, create(&samples)?)?;
        let stats = a.out.join(format!("{name}_stats.csv"));
        dataset::split_stats(&prepared.records, indices, spec.sza_max_deg).write_csv(create(&stats)?)?;
        let seqs = a.out.join(format!("{name}_sequences.csv"));
        let set = dataset::build_sequences(&prepared.records, &spec, role)?;
        dataset::write_sequences_csv(&set, create(&seqs)?)?;
        written.extend([samples, stats, seqs]);
    }
    Ok(written)
}
