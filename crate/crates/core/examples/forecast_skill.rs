//! Error summaries and forecast skill against smart persistence, per horizon.
//!
//! Run with `cargo run --example forecast_skill`.

use irradiance_skill::metrics::{error_summary, forecast_skill, Metric};
use irradiance_skill::series::align;
use irradiance_skill::solar::{simple_persistence, smart_persistence, ClearSkyProvider, SIRTA};
use irradiance_skill::synth::{gen_kc_drift, ScenarioSpec};
use irradiance_skill::time::date_start;

fn main() -> irradiance_skill::Result<()> {
    let start = date_start(2019, 5, 1)?;
    let mut spec = ScenarioSpec::new(SIRTA, start, start + 14 * 86_400);
    spec.noise_sigma = 0.03;
    spec.seed = 42;
    let observed = gen_kc_drift(&spec, 0.7, 0.25, 5400)?;
    let clear = ClearSkyProvider::analytic(SIRTA);

    println!("{:>8}{:>12}{:>12}{:>12}{:>12}{:>12}", "horizon", "SPM rmse", "simple rmse", "FS_MSE %", "FS_RMSE %", "FS_MAE %");
    for minutes in [2, 6, 10, 20, 30] {
        let spm = smart_persistence(&observed, &clear, minutes * 60)?;
        let simple = simple_persistence(&observed, minutes * 60)?;
        // score both on the timestamps the reference covers
        let reference = error_summary(&align(&spm, &observed)?)?;
        let pair = align(&simple, &observed)?.filter_time(|t| spm.index_of(t).is_some());
        let errors = error_summary(&pair)?;
        let fs = |m: Metric| 100.0 * forecast_skill(errors.get(m), reference.get(m)).unwrap_or(f64::NAN);
        println!(
            "{:>8}{:>12.2}{:>12.2}{:>12.1}{:>12.1}{:>12.1}",
            minutes,
            reference.rmse,
            errors.rmse,
            fs(Metric::Mse),
            fs(Metric::Rmse),
            fs(Metric::Mae)
        );
    }
    Ok(())
}
