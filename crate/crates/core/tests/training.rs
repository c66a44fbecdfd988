mod common;

use irradiance_skill::dataset::{clearsky_provider, select_samples, Role, SplitSpec};
use irradiance_skill::learner::{build_dataset, learning_curve, train, Architecture, Loss, Model, TrainConfig};
use irradiance_skill::solar::SIRTA;

fn distance(model: &Model, oracle: &[f64]) -> f64 {
    let (w, b) = model.raw_linear().unwrap();
    w.iter()
        .chain([&b])
        .zip(oracle)
        .map(|(a, o)| (a - o).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn full_batch_linear_approaches_least_squares() {
    let (data, _, _) = common::linear_fixture(400, 8, 21);
    let oracle = common::least_squares(&data);
    let config = |epochs| TrainConfig {
        architecture: Architecture::Linear,
        loss: Loss::L2,
        weight_decay: 0.0,
        learning_rate: 1e-2,
        batch_size: data.len(),
        epochs,
        seed: 4,
        ..TrainConfig::default()
    };
    let dists: Vec<f64> = [10, 100, 1000]
        .iter()
        .map(|&e| distance(&train(&data, &data, &config(e)).unwrap().model, &oracle))
        .collect();
    assert!(dists.windows(2).all(|w| w[1] < w[0]), "{dists:?}");
    let scale = oracle.iter().map(|o| o * o).sum::<f64>().sqrt();
    assert!(dists[2] / scale < 1e-9, "{dists:?}");
}

#[test]
fn full_batch_history_is_reproducible_and_decreasing() {
    let (data, _, _) = common::linear_fixture(200, 5, 2);
    let config = TrainConfig {
        architecture: Architecture::Linear,
        learning_rate: 1e-2,
        batch_size: data.len(),
        epochs: 300,
        weight_decay: 0.0,
        ..TrainConfig::default()
    };
    let a = train(&data, &data, &config).unwrap();
    let b = train(&data, &data, &config).unwrap();
    assert_eq!(a, b);
    let first = a.history.first().unwrap().train_loss;
    let last = a.history.last().unwrap().train_loss;
    assert!(last < 0.1 * first, "{first} -> {last}");
}

#[test]
fn more_training_data_does_not_lose_skill() {
    let records = common::drift_records(&[2017, 2018, 2019], 5, 6);
    let provider = clearsky_provider(&records, SIRTA).unwrap();
    let spec = SplitSpec::new((2017, 1500), (2018, 300), (2019, 300), 9);
    let selection = select_samples(&records, &spec).unwrap();
    let set = |role| build_dataset(&records, &selection[&role], 600, &provider).unwrap().0;
    let config = TrainConfig {
        learning_rate: 1e-3,
        epochs: 10,
        seed: 9,
        horizon: 600,
        ..TrainConfig::default()
    };
    let curve = learning_curve(&set(Role::Train), &set(Role::Validation), &set(Role::Test), &config, &[0.1, 1.0]).unwrap();
    assert_eq!(curve.len(), 2);
    assert!(curve[0].samples < curve[1].samples);
    assert!(curve[1].fs_rmse >= curve[0].fs_rmse, "{curve:?}");
}

#[test]
fn checkpoint_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (data, _, _) = common::linear_fixture(100, 6, 7);
    let config = TrainConfig {
        architecture: Architecture::Hidden { width: 4 },
        epochs: 3,
        ..TrainConfig::default()
    };
    let model = train(&data, &data, &config).unwrap().model;
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    let back = Model::load(&path).unwrap();
    assert_eq!(back, model);
    assert_eq!(back.predict_all(&data), model.predict_all(&data));
    assert!(back.raw_linear().is_none());

    std::fs::write(&path, "{}").unwrap();
    assert!(Model::load(&path).is_err());
}
