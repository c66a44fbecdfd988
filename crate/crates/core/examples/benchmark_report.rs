//! Full benchmark report for persistence baselines and a lagged forecast,
//! printed as the table CSV.
//!
//! Run with `cargo run --release --example benchmark_report`.

use irradiance_skill::report::{evaluate, EvalConfig, ForecastInput};
use irradiance_skill::solar::SIRTA;
use irradiance_skill::synth::{gen_cloud_transits, lag_forecast, periodic_events, to_records, ScenarioSpec};
use irradiance_skill::time::date_start;

fn main() -> irradiance_skill::Result<()> {
    let start = date_start(2019, 4, 1)?;
    let mut spec = ScenarioSpec::new(SIRTA, start, start + 30 * 86_400);
    spec.events = periodic_events(start, spec.end, 3000, 1200, 0.35, 240);
    spec.noise_sigma = 0.02;
    spec.seed = 3;
    let observed = gen_cloud_transits(&spec)?;
    let records = to_records(&observed, SIRTA);

    let forecasts: Vec<ForecastInput> = [3, 5]
        .into_iter()
        .map(|k| {
            lag_forecast(&observed, k).map(|f| ForecastInput {
                producer: f.producer().to_string(),
                loss: String::new(),
                forecast: f,
            })
        })
        .collect::<Result<_, _>>()?;
    let config = EvalConfig {
        horizons_min: vec![6, 10],
        ..EvalConfig::default()
    };
    let report = evaluate(&records, &forecasts, &config, "in-memory".into())?;
    report.write_csv(std::io::stdout().lock())?;
    Ok(())
}
