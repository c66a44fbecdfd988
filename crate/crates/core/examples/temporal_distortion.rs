//! Dynamic time warping, TDI and TDM for a delayed ramp and for smart
//! persistence over random sequences.
//!
//! Run with `cargo run --example temporal_distortion`.

use irradiance_skill::distortion::{dtw_path, sequence_distortion, tdi_tdm};
use irradiance_skill::report::{candidate_windows, covered_sequences, EvalConfig, Prepared};
use irradiance_skill::series::AlignedPair;
use irradiance_skill::solar::{smart_persistence, SIRTA};
use irradiance_skill::synth::{gen_cloud_transits, periodic_events, to_records, ScenarioSpec};
use irradiance_skill::time::date_start;

fn main() -> irradiance_skill::Result<()> {
    let reference: Vec<f64> = (0..12).map(|j| ((j + 3) * (j + 3)) as f64).collect();
    let late: Vec<f64> = (0..12).map(|i| reference[i.max(2) - 2]).collect();
    let path = dtw_path(&late, &reference)?;
    println!("warp path of a 2-step delay: {:?}", path.steps);
    let r = tdi_tdm(&path);
    println!("TDI {:.2} %  (late {:.2}, advance {:.2})  TDM {:+.2}", r.tdi, r.tdi_late, r.tdi_adv, r.tdm);
    let swapped = sequence_distortion(&AlignedPair::from_values(reference, late)?)?;
    println!("roles swapped: TDM {:+.2}", swapped.tdm);

    let start = date_start(2019, 6, 1)?;
    let mut spec = ScenarioSpec::new(SIRTA, start, start + 30 * 86_400);
    spec.events = periodic_events(start, spec.end, 2400, 1200, 0.3, 240);
    let records = to_records(&gen_cloud_transits(&spec)?, SIRTA);
    let prepared = Prepared::new(&records, SIRTA)?;
    let config = EvalConfig::default();
    let spm = smart_persistence(&prepared.observed, &prepared.provider, 600)?;
    let pairs = covered_sequences(&prepared.observed, &candidate_windows(&prepared.records, &config), &spm, &config)?;
    let summary = irradiance_skill::distortion::summarize_sequences(&pairs)?;
    println!(
        "smart persistence, 10 min, {} sequences: TDI {:.1} %, TDM {:.2}",
        summary.sequences, summary.tdi_mean, summary.tdm_pooled
    );
    Ok(())
}
