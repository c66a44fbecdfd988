//! Train the tabular learner on a drifting clear-sky-index scenario and
//! compare it with smart persistence on held-out data.
//!
//! Run with `cargo run --release --example train_baseline`.

use irradiance_skill::dataset::{clearsky_provider, select_samples, Role, SplitSpec};
use irradiance_skill::learner::{build_dataset, learning_curve, skill_on, train, Architecture, Loss, TrainConfig};
use irradiance_skill::solar::SIRTA;
use irradiance_skill::synth::{gen_kc_drift, to_records, ScenarioSpec};
use irradiance_skill::time::date_start;

fn main() -> irradiance_skill::Result<()> {
    let mut records = Vec::new();
    for year in [2017, 2018, 2019] {
        let mut spec = ScenarioSpec::new(SIRTA, date_start(year, 4, 1)?, date_start(year, 6, 1)?);
        spec.seed = year as u64;
        spec.noise_sigma = 0.01;
        records.extend(to_records(&gen_kc_drift(&spec, 0.65, 0.3, 3600)?, SIRTA));
    }
    let provider = clearsky_provider(&records, SIRTA)?;
    let selection = select_samples(&records, &SplitSpec::new((2017, 3000), (2018, 800), (2019, 800), 1))?;
    let horizon = 600;
    let set = |role: Role| build_dataset(&records, &selection[&role], horizon, &provider).map(|(d, _)| d);
    let (tr, va, te) = (set(Role::Train)?, set(Role::Validation)?, set(Role::Test)?);

    for (architecture, loss) in [
        (Architecture::Linear, Loss::L2),
        (Architecture::Hidden { width: 16 }, Loss::L2),
        (Architecture::Hidden { width: 16 }, Loss::L1),
    ] {
        let config = TrainConfig {
            architecture,
            loss,
            learning_rate: 1e-3,
            epochs: 30,
            horizon,
            ..TrainConfig::default()
        };
        let outcome = train(&tr, &va, &config)?;
        let p = skill_on(&outcome.model, &te)?;
        println!(
            "{architecture:?} {loss}: best epoch {}, test RMSE {:.3} vs SPM {:.2} W/m2, FS_RMSE {:.1} %",
            outcome.best_epoch,
            p.rmse,
            p.rmse_reference,
            100.0 * p.fs_rmse
        );
    }

    let config = TrainConfig {
        learning_rate: 1e-3,
        epochs: 20,
        horizon,
        ..TrainConfig::default()
    };
    for p in learning_curve(&tr, &va, &te, &config, &[0.1, 0.3, 1.0])? {
        println!("fraction {:.1} ({} samples): FS_RMSE {:.1} %", p.fraction, p.samples, 100.0 * p.fs_rmse);
    }
    Ok(())
}
