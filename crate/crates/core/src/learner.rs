//! Tabular baseline forecaster on the auxiliary features (GHI and sun
//! angles at 0, 2, 4, 6 and 8 minutes of lag), trained with a
//! weight-decayed L1 or L2 loss and ADAM.
//!
//! Features and target are standardized with training-set statistics; the
//! network works in that space and [`Model::predict`] maps back to W/m².

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Record;
use crate::error::{Error, Result};
use crate::metrics::forecast_skill;
use crate::solar::{clearsky_index, ClearSkyProvider};
use crate::time::Timestamp;

/// Lags of the auxiliary inputs, minutes before the anchor.
pub const LAGS_MIN: [i64; 5] = [0, 2, 4, 6, 8];
pub const FEATURES_PER_LAG: usize = 7;
pub const FEATURE_COUNT: usize = LAGS_MIN.len() * FEATURES_PER_LAG;

pub const CHECKPOINT_FORMAT: &str = "irradiance-skill-model";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Feature vector and target for the anchor record.
///
/// Per lag block: GHI, SZA, cos SZA, sin SZA, SAA, cos SAA, sin SAA. Blocks
/// run from lag 0 to lag 8 min. The target is GHI at `anchor + horizon`.
pub fn featurize(records: &[Record], anchor: usize, horizon: i64) -> Result<(Vec<f64>, f64)> {
    let t0 = records[anchor].timestamp;
    let find = |t: Timestamp| records.binary_search_by_key(&t, |r| r.timestamp).ok();
    let mut x = Vec::with_capacity(FEATURE_COUNT);
    for lag in LAGS_MIN {
        let r = find(t0 - lag * 60)
            .map(|i| &records[i])
            .ok_or(Error::IncompleteWindow(t0))?;
        let (Some(sza), Some(saa)) = (r.sza_deg, r.saa_deg) else {
            return Err(Error::IncompleteWindow(t0));
        };
        let (zs, zc) = sza.to_radians().sin_cos();
        let (as_, ac) = saa.to_radians().sin_cos();
        x.extend([r.ghi, sza, zc, zs, saa, ac, as_]);
    }
    let target = find(t0 + horizon).ok_or(Error::IncompleteWindow(t0))?;
    Ok((x, records[target].ghi))
}

/// Tabular supervised set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    /// Valid time of each target.
    pub times: Vec<Timestamp>,
    /// Smart-persistence forecast of each target, when known.
    pub reference: Option<Vec<f64>>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Rows `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            times: indices.iter().map(|&i| self.times[i]).collect(),
            reference: self
                .reference
                .as_ref()
                .map(|r| indices.iter().map(|&i| r[i]).collect()),
        }
    }
}

/// Featurizes every anchor whose window is complete, attaching the smart
/// persistence forecast of each target. Returns the set and the number of
/// anchors skipped for incomplete windows.
pub fn build_dataset(
    records: &[Record],
    anchors: &[usize],
    horizon: i64,
    provider: &ClearSkyProvider,
) -> Result<(Dataset, usize)> {
    let mut out = Dataset {
        reference: Some(Vec::new()),
        ..Dataset::default()
    };
    let mut skipped = 0;
    for &a in anchors {
        match featurize(records, a, horizon) {
            Ok((x, y)) => {
                let t = records[a].timestamp;
                let spm = clearsky_index(records[a].ghi, provider.ghi(t)?) * provider.ghi(t + horizon)?;
                out.features.push(x);
                out.targets.push(y);
                out.times.push(t + horizon);
                out.reference.as_mut().unwrap().push(spm);
            }
            Err(Error::IncompleteWindow(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, skipped))
}

/// Per-feature standardization plus target standardization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub feature_mean: Vec<f64>,
    pub feature_scale: Vec<f64>,
    pub target_mean: f64,
    pub target_scale: f64,
}

impl Normalizer {
    /// Mean and population standard deviation; zero spread maps to scale 1.
    pub fn fit(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("normalizer fit"));
        }
        let d = data.features[0].len();
        let n = data.len() as f64;
        let stats = |col: &dyn Fn(usize) -> f64| {
            let mean = (0..data.len()).map(col).sum::<f64>() / n;
            let var = (0..data.len()).map(|i| (col(i) - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            (mean, if sd > 1e-12 { sd } else { 1.0 })
        };
        let (feature_mean, feature_scale) = (0..d).map(|k| stats(&|i| data.features[i][k])).unzip();
        let (target_mean, target_scale) = stats(&|i| data.targets[i]);
        Ok(Self {
            feature_mean,
            feature_scale,
            target_mean,
            target_scale,
        })
    }

    pub fn features(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.feature_mean.iter().zip(&self.feature_scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn target(&self, y: f64) -> f64 {
        (y - self.target_mean) / self.target_scale
    }

    pub fn untarget(&self, z: f64) -> f64 {
        z * self.target_scale + self.target_mean
    }

    pub fn apply(&self, data: &Dataset) -> Dataset {
        Dataset {
            features: data.features.iter().map(|x| self.features(x)).collect(),
            targets: data.targets.iter().map(|&y| self.target(y)).collect(),
            times: data.times.clone(),
            reference: data.reference.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Architecture {
    Linear,
    /// One ReLU hidden layer.
    Hidden { width: usize },
}

/// Fully connected layer, `weights` row-major `outputs × inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Dense {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            biases: vec![0.0; outputs],
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let row = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                row.iter().zip(x).fold(self.biases[o], |acc, (w, v)| acc + w * v)
            })
            .collect()
    }
}

/// Network weights; ReLU between layers, identity at the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub architecture: Architecture,
    pub layers: Vec<Dense>,
}

impl ModelParams {
    pub fn zeros(architecture: Architecture, inputs: usize) -> Self {
        let layers = match architecture {
            Architecture::Linear => vec![Dense::zeros(inputs, 1)],
            Architecture::Hidden { width } => vec![Dense::zeros(inputs, width), Dense::zeros(width, 1)],
        };
        Self { architecture, layers }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(architecture: Architecture, inputs: usize, rng: &mut impl Rng) -> Self {
        let mut p = Self::zeros(architecture, inputs);
        for layer in &mut p.layers {
            let a = (6.0 / (layer.inputs + layer.outputs) as f64).sqrt();
            for w in &mut layer.weights {
                *w = rng.random_range(-a..a);
            }
        }
        p
    }

    pub fn inputs(&self) -> usize {
        self.layers[0].inputs
    }

    /// All parameters, layer by layer, weights before biases.
    pub fn values(&self) -> impl Iterator<Item = &f64> {
        self.layers.iter().flat_map(|l| l.weights.iter().chain(&l.biases))
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.biases.iter_mut()))
    }

    pub fn count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(|v| v.is_finite())
    }

    fn weight_sq_sum(&self) -> f64 {
        self.layers.iter().flat_map(|l| &l.weights).map(|w| w * w).sum()
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        let mut h = x.to_vec();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            h = layer.forward(&h);
            if k < last {
                h.iter_mut().for_each(|v| *v = v.max(0.0));
            }
        }
        h[0]
    }

    /// Forward pass keeping pre-activations of every layer.
    fn forward_trace(&self, x: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut inputs = vec![x.to_vec()];
        let mut pre = Vec::with_capacity(self.layers.len());
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let z = layer.forward(inputs.last().unwrap());
            if k < last {
                inputs.push(z.iter().map(|v| v.max(0.0)).collect());
            }
            pre.push(z);
        }
        (inputs, pre)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    L1,
    L2,
}

impl std::str::FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L1" | "MAE" => Ok(Loss::L1),
            "L2" | "MSE" => Ok(Loss::L2),
            _ => Err(Error::invalid("loss", format!("{s:?} (expected L1 or L2)"))),
        }
    }
}

impl std::fmt::Display for Loss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Loss::L1 => "L1",
            Loss::L2 => "L2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub architecture: Architecture,
    pub loss: Loss,
    pub weight_decay: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
    /// Seconds.
    pub horizon: i64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            architecture: Architecture::Hidden { width: 16 },
            loss: Loss::L2,
            weight_decay: 1e-5,
            learning_rate: 1e-4,
            batch_size: 10,
            epochs: 50,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
            horizon: 600,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) || self.batch_size == 0 || !(self.weight_decay >= 0.0) {
            return Err(Error::invalid(
                "train config",
                "learning_rate >= 0, weight_decay >= 0 and batch_size >= 1 required",
            ));
        }
        Ok(())
    }
}

/// Mean data loss over `batch` plus `½ λ Σ w²` over weights (biases excluded),
/// and its gradient. The L1 subgradient uses `sign(0) = 0`; ReLU uses a zero
/// derivative at 0.
pub fn loss_and_grad(
    params: &ModelParams,
    data: &Dataset,
    batch: &[usize],
    config: &TrainConfig,
) -> (f64, ModelParams) {
    let mut grad = ModelParams::zeros(params.architecture, params.inputs());
    let n = batch.len().max(1) as f64;
    let mut data_loss = 0.0;
    for &i in batch {
        let (inputs, pre) = params.forward_trace(&data.features[i]);
        let residual = pre.last().unwrap()[0] - data.targets[i];
        let mut delta = vec![match config.loss {
            Loss::L2 => {
                data_loss += residual * residual;
                2.0 * residual / n
            }
            Loss::L1 => {
                data_loss += residual.abs();
                if residual > 0.0 {
                    1.0 / n
                } else if residual < 0.0 {
                    -1.0 / n
                } else {
                    0.0
                }
            }
        }];
        for k in (0..params.layers.len()).rev() {
            let layer = &params.layers[k];
            let g = &mut grad.layers[k];
            let input = &inputs[k];
            for (o, d) in delta.iter().enumerate() {
                g.biases[o] += d;
                let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                for (gw, x) in row.iter_mut().zip(input) {
                    *gw += d * x;
                }
            }
            if k > 0 {
                let below = &pre[k - 1];
                delta = (0..layer.inputs)
                    .map(|j| {
                        if below[j] <= 0.0 {
                            return 0.0;
                        }
                        (0..layer.outputs).map(|o| delta[o] * layer.weights[o * layer.inputs + j]).sum()
                    })
                    .collect();
            }
        }
    }
    let lambda = config.weight_decay;
    for (g, p) in grad.layers.iter_mut().zip(&params.layers) {
        for (gw, w) in g.weights.iter_mut().zip(&p.weights) {
            *gw += lambda * w;
        }
    }
    (data_loss / n + 0.5 * lambda * params.weight_sq_sum(), grad)
}

/// First / second moment estimates and step count.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(params: &ModelParams) -> Self {
        let n = params.count();
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected ADAM update.
pub fn adam_step(params: &mut ModelParams, grads: &ModelParams, state: &mut AdamState, config: &TrainConfig) {
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - config.beta1.powi(t);
    let c2 = 1.0 - config.beta2.powi(t);
    for (((p, g), m), v) in params
        .values_mut()
        .zip(grads.values())
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = config.beta1 * *m + (1.0 - config.beta1) * g;
        *v = config.beta2 * *v + (1.0 - config.beta2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Objective over the whole (standardized) training set after the epoch.
    pub train_loss: f64,
    pub val_loss: f64,
    pub best_val_loss: f64,
    /// W/m².
    pub train_rmse: f64,
    /// W/m².
    pub val_rmse: f64,
}

/// Trained network with its normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub params: ModelParams,
    pub normalizer: Normalizer,
    /// Seconds.
    pub horizon: i64,
}

impl Model {
    /// Forecast in W/m² for raw features.
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.normalizer.untarget(self.params.forward(&self.normalizer.features(x)))
    }

    pub fn predict_all(&self, data: &Dataset) -> Vec<f64> {
        data.features.iter().map(|x| self.predict(x)).collect()
    }

    /// For a linear network: weights and bias acting on raw features.
    pub fn raw_linear(&self) -> Option<(Vec<f64>, f64)> {
        let [layer] = self.params.layers.as_slice() else {
            return None;
        };
        let nz = &self.normalizer;
        let w: Vec<f64> = layer
            .weights
            .iter()
            .zip(&nz.feature_scale)
            .map(|(w, s)| w * nz.target_scale / s)
            .collect();
        let shift: f64 = layer
            .weights
            .iter()
            .zip(nz.feature_mean.iter().zip(&nz.feature_scale))
            .map(|(w, (m, s))| w * m / s)
            .sum();
        Some((w, (layer.biases[0] - shift) * nz.target_scale + nz.target_mean))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, &Checkpoint::from(self))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let ck: Checkpoint = serde_json::from_slice(&bytes)?;
        if ck.format != CHECKPOINT_FORMAT || ck.version != CHECKPOINT_VERSION {
            return Err(Error::invalid(
                "checkpoint",
                format!("unsupported format {:?} version {}", ck.format, ck.version),
            ));
        }
        let model = Model {
            params: ModelParams {
                architecture: ck.architecture,
                layers: ck.layers,
            },
            normalizer: ck.normalizer,
            horizon: ck.horizon_s,
        };
        let expected = ModelParams::zeros(model.params.architecture, model.params.inputs());
        let shapes_ok = expected.layers.len() == model.params.layers.len()
            && expected.layers.iter().zip(&model.params.layers).all(|(a, b)| {
                a.inputs == b.inputs
                    && a.outputs == b.outputs
                    && a.weights.len() == b.weights.len()
                    && a.biases.len() == b.biases.len()
            });
        if !shapes_ok || !model.params.is_finite() || model.normalizer.feature_mean.len() != model.params.inputs() {
            return Err(Error::invalid("checkpoint", "inconsistent shapes or non-finite weights"));
        }
        Ok(model)
    }
}

/// On-disk JSON layout of a [`Model`].
#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    architecture: Architecture,
    horizon_s: i64,
    normalizer: Normalizer,
    layers: Vec<Dense>,
}

impl From<&Model> for Checkpoint {
    fn from(m: &Model) -> Self {
        Self {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            architecture: m.params.architecture,
            horizon_s: m.horizon,
            normalizer: m.normalizer.clone(),
            layers: m.params.layers.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    /// Parameters of the epoch with the lowest validation loss.
    pub model: Model,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
}

fn full_loss(params: &ModelParams, data: &Dataset, config: &TrainConfig) -> f64 {
    let all: Vec<usize> = (0..data.len()).collect();
    loss_and_grad_value(params, data, &all, config)
}

fn loss_and_grad_value(params: &ModelParams, data: &Dataset, batch: &[usize], config: &TrainConfig) -> f64 {
    let n = batch.len().max(1) as f64;
    let data_loss: f64 = batch
        .iter()
        .map(|&i| {
            let r = params.forward(&data.features[i]) - data.targets[i];
            match config.loss {
                Loss::L1 => r.abs(),
                Loss::L2 => r * r,
            }
        })
        .sum();
    data_loss / n + 0.5 * config.weight_decay * params.weight_sq_sum()
}

fn rmse_raw(model_params: &ModelParams, normalizer: &Normalizer, raw: &Dataset, normed: &Dataset) -> f64 {
    let sq: f64 = normed
        .features
        .iter()
        .zip(&raw.targets)
        .map(|(x, y)| (normalizer.untarget(model_params.forward(x)) - y).powi(2))
        .sum();
    (sq / raw.len().max(1) as f64).sqrt()
}

/// Mini-batch ADAM training with per-epoch seeded shuffling; keeps the
/// parameters of the best validation epoch.
pub fn train(train_set: &Dataset, validation: &Dataset, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if train_set.is_empty() || validation.is_empty() {
        return Err(Error::Empty("training or validation set"));
    }
    let normalizer = Normalizer::fit(train_set)?;
    let tr = normalizer.apply(train_set);
    let va = normalizer.apply(validation);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = ModelParams::init(config.architecture, tr.features[0].len(), &mut rng);
    let mut state = AdamState::new(&params);
    let mut order: Vec<usize> = (0..tr.len()).collect();

    let mut best = (f64::INFINITY, params.clone(), 0usize);
    let mut history = Vec::with_capacity(config.epochs);
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            let (_, grad) = loss_and_grad(&params, &tr, batch, config);
            adam_step(&mut params, &grad, &mut state, config);
        }
        let train_loss = full_loss(&params, &tr, config);
        let val_loss = full_loss(&params, &va, config);
        if !train_loss.is_finite() || !val_loss.is_finite() || !params.is_finite() {
            return Err(Error::Diverged(epoch));
        }
        if val_loss < best.0 {
            best = (val_loss, params.clone(), epoch);
        }
        history.push(EpochRecord {
            epoch,
            train_loss,
            val_loss,
            best_val_loss: best.0,
            train_rmse: rmse_raw(&params, &normalizer, train_set, &tr),
            val_rmse: rmse_raw(&params, &normalizer, validation, &va),
        });
    }
    Ok(TrainOutcome {
        model: Model {
            params: best.1,
            normalizer,
            horizon: config.horizon,
        },
        history,
        best_epoch: best.2,
    })
}

/// Writes `epoch,train_loss,val_loss,best_val_loss,train_rmse,val_rmse`.
pub fn write_history_csv<W: Write>(history: &[EpochRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for h in history {
        w.serialize(h)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// One point of a learning curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub fraction: f64,
    pub samples: usize,
    /// W/m².
    pub rmse: f64,
    /// W/m², smart persistence on the same test rows.
    pub rmse_reference: f64,
    /// RMSE forecast skill against smart persistence.
    pub fs_rmse: f64,
}

/// RMSE of predictions against targets.
pub fn rmse(pred: &[f64], target: &[f64]) -> f64 {
    let sq: f64 = pred.iter().zip(target).map(|(p, t)| (p - t).powi(2)).sum();
    (sq / pred.len().max(1) as f64).sqrt()
}

/// RMSE forecast skill of `model` vs the test set's reference forecasts.
pub fn skill_on(model: &Model, test: &Dataset) -> Result<CurvePoint> {
    let reference = test
        .reference
        .as_ref()
        .ok_or_else(|| Error::invalid("test set", "no reference forecasts"))?;
    let r = rmse(&model.predict_all(test), &test.targets);
    let r_ref = rmse(reference, &test.targets);
    Ok(CurvePoint {
        fraction: 1.0,
        samples: 0,
        rmse: r,
        rmse_reference: r_ref,
        fs_rmse: forecast_skill(r, r_ref)?,
    })
}

/// Trains on nested training subsets and scores each against smart
/// persistence on `test`.
///
/// The subsets are prefixes of one seeded permutation, restored to original
/// row order, so fraction 1.0 is exactly a plain [`train`] run.
pub fn learning_curve(
    train_set: &Dataset,
    validation: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    fractions: &[f64],
) -> Result<Vec<CurvePoint>> {
    if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(Error::invalid("fraction", format!("{f} not in (0, 1]")));
    }
    let mut perm: Vec<usize> = (0..train_set.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_cafe));
    let mut out = Vec::with_capacity(fractions.len());
    for &f in fractions {
        let take = ((f * train_set.len() as f64).ceil() as usize).clamp(1, train_set.len());
        let mut idx = perm[..take].to_vec();
        idx.sort_unstable();
        let subset = train_set.subset(&idx);
        let outcome = train(&subset, validation, config)?;
        let point = skill_on(&outcome.model, test)?;
        out.push(CurvePoint {
            fraction: f,
            samples: take,
            ..point
        });
    }
    Ok(out)
}
