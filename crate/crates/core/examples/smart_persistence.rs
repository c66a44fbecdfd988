//! Smart and simple persistence on a day with passing clouds.
//!
//! Run with `cargo run --example smart_persistence`.

use irradiance_skill::series::align;
use irradiance_skill::solar::{simple_persistence, smart_persistence, solar_position, ClearSkyProvider, SIRTA};
use irradiance_skill::synth::{gen_cloud_transits, periodic_events, ScenarioSpec};
use irradiance_skill::time::{date_start, format_timestamp};

fn main() -> irradiance_skill::Result<()> {
    let start = date_start(2019, 7, 26)?;
    let mut spec = ScenarioSpec::new(SIRTA, start, start + 86_400);
    spec.events = periodic_events(start + 9 * 3600, start + 16 * 3600, 2400, 1200, 0.35, 240);
    let observed = gen_cloud_transits(&spec)?;
    let clear = ClearSkyProvider::analytic(SIRTA);

    let noon = start + 12 * 3600;
    let angles = solar_position(SIRTA.lat_deg, SIRTA.lon_deg, noon);
    println!(
        "{}: SZA {:.2} deg, SAA {:.2} deg, clear-sky GHI {:.1} W/m2",
        format_timestamp(noon),
        angles.sza_deg,
        angles.saa_deg,
        clear.ghi(noon)?
    );

    let horizon = 600;
    let spm = smart_persistence(&observed, &clear, horizon)?;
    let simple = simple_persistence(&observed, horizon)?;
    println!("{:<22}{:>10}{:>10}{:>10}", "valid time", "observed", "SPM", "simple");
    for t in (noon..noon + 3600).step_by(600) {
        println!(
            "{:<22}{:>10.1}{:>10.1}{:>10.1}",
            format_timestamp(t),
            observed.value_at(t).unwrap_or(f64::NAN),
            spm.value_at(t).unwrap_or(f64::NAN),
            simple.value_at(t).unwrap_or(f64::NAN)
        );
    }

    for (name, f) in [("smart", &spm), ("simple", &simple)] {
        let pair = align(f, &observed)?;
        let rmse = (pair.test().iter().zip(pair.reference()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
            / pair.len() as f64)
            .sqrt();
        println!("{name} persistence RMSE over the day: {rmse:.2} W/m2 ({} points)", pair.len());
    }
    Ok(())
}
