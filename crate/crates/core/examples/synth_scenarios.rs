//! Generate each synthetic scenario and write it in the dataset CSV schema.
//!
//! Run with `cargo run --example synth_scenarios [-- OUT_DIR]`.

use std::fs::File;
use std::path::PathBuf;

use irradiance_skill::dataset::write_csv;
use irradiance_skill::solar::SIRTA;
use irradiance_skill::synth::{
    gen_clear_day, gen_cloud_transits, gen_kc_drift, lag_forecast, periodic_events, to_records, CloudEvent,
    ScenarioSpec,
};
use irradiance_skill::time::date_start;

fn main() -> irradiance_skill::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("irradiance-skill-synth"));
    std::fs::create_dir_all(&out).map_err(|e| irradiance_skill::Error::io(&out, e))?;

    let start = date_start(2019, 6, 21)?;
    let base = ScenarioSpec::new(SIRTA, start, start + 86_400);

    let mut single = base.clone();
    single.events = vec![CloudEvent {
        start: start + 12 * 3600,
        duration: 1200,
        attenuation: 0.3,
        edge: 120,
    }];
    let mut periodic = base.clone();
    periodic.events = periodic_events(start, base.end, 1200, 600, 0.3, 0);
    let mut noisy = base.clone();
    noisy.noise_sigma = 0.05;
    noisy.seed = 7;

    let scenarios = [
        ("clear", gen_clear_day(&base)?),
        ("single_dip", gen_cloud_transits(&single)?),
        ("periodic", gen_cloud_transits(&periodic)?),
        ("noisy", gen_cloud_transits(&noisy)?),
        ("kc_drift", gen_kc_drift(&base, 0.7, 0.2, 5400)?),
    ];
    for (name, series) in &scenarios {
        let path = out.join(format!("{name}.csv"));
        let file = File::create(&path).map_err(|e| irradiance_skill::Error::io(&path, e))?;
        write_csv(&to_records(series, SIRTA), file)?;
        let peak = series.values().iter().copied().fold(0.0, f64::max);
        println!("{:<11} {:>4} points, peak {:>7.1} W/m2 -> {}", name, series.len(), peak, path.display());
    }

    let lagged = lag_forecast(&scenarios[0].1, 5)?;
    println!("lag forecast '{}' with horizon {} s", lagged.producer(), lagged.horizon());
    Ok(())
}
