#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use irradiance_skill::dataset::{write_csv, Record};
use irradiance_skill::learner::Dataset;
use irradiance_skill::solar::SIRTA;
use irradiance_skill::synth::{gen_cloud_transits, gen_kc_drift, periodic_events, to_records, ScenarioSpec};
use irradiance_skill::time::date_start;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 2019 at 2-min cadence: periodic cloud passages plus mild noise.
pub fn synthetic_year() -> &'static [Record] {
    static YEAR: OnceLock<Vec<Record>> = OnceLock::new();
    YEAR.get_or_init(build_synthetic_year)
}

fn build_synthetic_year() -> Vec<Record> {
    let start = date_start(2019, 1, 1).unwrap();
    let mut spec = ScenarioSpec::new(SIRTA, start, date_start(2020, 1, 1).unwrap());
    spec.events = periodic_events(start, spec.end, 3000, 1200, 0.35, 240);
    spec.noise_sigma = 0.02;
    spec.seed = 11;
    to_records(&gen_cloud_transits(&spec).unwrap(), SIRTA)
}

/// Cloud passages every 40 min (20 min at 30 % of clear sky) over `days`.
pub fn transit_records(year: i32, month: u32, days: i64) -> Vec<Record> {
    let start = date_start(year, month, 1).unwrap();
    let mut spec = ScenarioSpec::new(SIRTA, start, start + days * 86_400);
    spec.events = periodic_events(start, spec.end, 2400, 1200, 0.3, 240);
    to_records(&gen_cloud_transits(&spec).unwrap(), SIRTA)
}

/// Clear-sky index oscillating with a one-hour period, months `from..to`
/// of each year.
pub fn drift_records(years: &[i32], from: u32, to: u32) -> Vec<Record> {
    let mut out = Vec::new();
    for &year in years {
        let mut spec = ScenarioSpec::new(SIRTA, date_start(year, from, 1).unwrap(), date_start(year, to, 1).unwrap());
        spec.seed = year as u64;
        spec.noise_sigma = 0.01;
        out.extend(to_records(&gen_kc_drift(&spec, 0.65, 0.3, 3600).unwrap(), SIRTA));
    }
    out
}

/// Noiseless linear data: `y = w·x + b` with features of mixed offsets and
/// scales. Returns the set and the generating `(w, b)`.
pub fn linear_fixture(n: usize, d: usize, seed: u64) -> (Dataset, Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(-20.0..20.0)).collect();
    let b = 300.0;
    let mut data = Dataset::default();
    for i in 0..n {
        let x: Vec<f64> = (0..d)
            .map(|j| (j % 7) as f64 * 10.0 + (1.0 + (j % 5) as f64) * rng.random_range(-1.0..1.0))
            .collect();
        data.targets.push(w.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() + b);
        data.features.push(x);
        data.times.push(i as i64 * 240);
    }
    (data, w, b)
}

pub fn write_records(dir: &Path, name: &str, records: &[Record]) -> PathBuf {
    let path = dir.join(name);
    write_csv(records, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

/// Least-squares `[w.., b]` via SVD.
pub fn least_squares(data: &Dataset) -> Vec<f64> {
    let n = data.len();
    let d = data.features[0].len();
    let x = nalgebra::DMatrix::from_fn(n, d + 1, |i, j| if j < d { data.features[i][j] } else { 1.0 });
    let y = nalgebra::DVector::from_column_slice(&data.targets);
    let theta = x.svd(true, true).solve(&y, 1e-12).unwrap();
    theta.iter().copied().collect()
}
