//! Quality control, seeded sample selection and sequence selection on a
//! synthetic three-year record set.
//!
//! Run with `cargo run --example dataset_split`.

use irradiance_skill::dataset::{build_sequences, qc_filter, select_samples, split_stats, Role, SplitSpec};
use irradiance_skill::solar::SIRTA;
use irradiance_skill::synth::{gen_kc_drift, to_records, ScenarioSpec};
use irradiance_skill::time::{date_start, format_timestamp};

fn main() -> irradiance_skill::Result<()> {
    // the first quarter of 2017, 2018 and 2019
    let mut records = Vec::new();
    for year in [2017, 2018, 2019] {
        let start = date_start(year, 1, 1)?;
        let mut spec = ScenarioSpec::new(SIRTA, start, date_start(year, 4, 1)?);
        spec.noise_sigma = 0.05;
        spec.seed = year as u64;
        records.extend(to_records(&gen_kc_drift(&spec, 0.6, 0.3, 7200)?, SIRTA));
    }
    let flagged = qc_filter(&records, 0.1).iter().filter(|f| f.any()).count();
    println!("{} records, {} flagged by the intensity-jump check", records.len(), flagged);

    let mut spec = SplitSpec::new((2017, 3000), (2018, 800), (2019, 800), 7);
    spec.sequence_count = 20;
    let selection = select_samples(&records, &spec)?;
    for role in Role::ALL {
        let idx = &selection[&role];
        let stats = split_stats(&records, idx, spec.sza_max_deg);
        let seqs = build_sequences(&records, &spec, role)?;
        println!(
            "{:<10} {:>5} samples, months {:?}, first sequence {}",
            role.name(),
            idx.len(),
            &stats.month_counts[..3],
            format_timestamp(seqs.windows[0].t_start)
        );
    }
    Ok(())
}
