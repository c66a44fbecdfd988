//! Swinging-door segmentation and the ramp score of smart persistence.
//!
//! Run with `cargo run --example ramp_score`.

use irradiance_skill::ramp::{daily_ramp_score, epsilon_for_day, swinging_door, DEFAULT_TAU_CLS};
use irradiance_skill::series::{align, DEFAULT_STEP};
use irradiance_skill::solar::{smart_persistence, ClearSkyProvider, SIRTA};
use irradiance_skill::synth::{gen_cloud_transits, periodic_events, ScenarioSpec};
use irradiance_skill::time::{date_start, format_timestamp, utc_day};

fn main() -> irradiance_skill::Result<()> {
    let start = date_start(2019, 7, 26)?;
    let mut spec = ScenarioSpec::new(SIRTA, start, start + 86_400);
    spec.events = periodic_events(start + 10 * 3600, start + 14 * 3600, 3600, 1800, 0.4, 600);
    let observed = gen_cloud_transits(&spec)?;
    let clear = ClearSkyProvider::analytic(SIRTA);

    let eps = epsilon_for_day(&clear.day_series(utc_day(start), DEFAULT_STEP)?, DEFAULT_TAU_CLS)?;
    let segments = swinging_door(&observed, eps)?;
    println!("epsilon = {eps:.2} W/m2, {} segments for {} points", segments.len(), observed.len());
    for s in segments.iter().filter(|s| s.slope.abs() > 5.0) {
        println!("  {} -> {}  {:+8.2} W/m2/min", format_timestamp(s.t_start), format_timestamp(s.t_end), s.slope);
    }

    let spm = smart_persistence(&observed, &clear, 600)?;
    let eval = daily_ramp_score(&align(&spm, &observed)?, &clear, DEFAULT_TAU_CLS, DEFAULT_STEP)?;
    println!("smart persistence ramp score at 10 min: {:.2} W/m2/min", eval.score);
    Ok(())
}
