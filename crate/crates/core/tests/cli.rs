mod common;

use std::path::Path;
use std::process::Command as Process;

use clap::Parser;
use irradiance_skill::cli::{run, Cli, Command, FileConfig};
use irradiance_skill::dataset::{load_csv, Record};
use irradiance_skill::learner::TrainConfig;
use irradiance_skill::report::{load_forecasts, BenchmarkReport};
use irradiance_skill::time::date_start;

fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("irradiance-skill").chain(args.iter().copied())).unwrap()
}

fn run_args(args: &[&str]) -> Vec<std::path::PathBuf> {
    run(parse(args)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_irradiance-skill"))
}

#[test]
fn ramps_segments_step_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let t0 = date_start(2019, 6, 1).unwrap() + 12 * 3600;
    let records: Vec<Record> = [0.0, 0.0, 5.0, 10.0, 10.0]
        .iter()
        .enumerate()
        .map(|(i, &g)| Record {
            ghi_clr: Some(20.0),
            ..Record::new(t0 + 60 * i as i64, g)
        })
        .collect();
    let data = common::write_records(dir.path(), "step.csv", &records);
    let out = dir.path().join("ramps.csv");
    run_args(&["ramps", "--dataset", s(&data), "--epsilon-tau", "0.05", "--out", s(&out)]);

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let got: Vec<(String, String, f64, f64)> = rows
        .iter()
        .map(|r| (r[4].to_string(), r[5].to_string(), r[6].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    let at = |m: i64| irradiance_skill::time::format_timestamp(t0 + 60 * m);
    let expect = [(0, 1, 0.0), (1, 3, 5.0), (3, 4, 0.0)];
    assert_eq!(got.len(), expect.len(), "{got:?}");
    for ((a, b, slope, eps), (ea, eb, es)) in got.iter().zip(expect) {
        assert_eq!((a.clone(), b.clone()), (at(ea), at(eb)));
        assert!((slope - es).abs() < 1e-12, "{slope} vs {es}");
        assert!((eps - 1.0).abs() < 1e-12);
    }
}

#[test]
fn train_flags_match_library_defaults() {
    let cli = parse(&["train", "--dataset", "d.csv", "--loss", "L2", "--lr", "1e-4", "--batch", "10", "--out", "o"]);
    let Command::Train(a) = cli.command else { panic!("not train") };
    let d = TrainConfig::default();
    assert_eq!(a.lr, d.learning_rate);
    assert_eq!(a.batch, d.batch_size);
    assert_eq!(a.weight_decay, d.weight_decay);
    assert_eq!(a.epochs, d.epochs);
    let bare = parse(&["train", "--dataset", "d.csv", "--out", "o"]);
    let Command::Train(b) = bare.command else { panic!("not train") };
    assert_eq!((b.loss, b.lr, b.batch), (a.loss, a.lr, a.batch));
}

#[test]
fn evaluate_lag_fixture_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("clear.csv");
    let fc = dir.path().join("lag.csv");
    run_args(&[
        "synth", "--scenario", "clear", "--start", "2019-06-01", "--days", "3", "--lag", "5",
        "--out", s(&data), "--forecast-out", s(&fc),
    ]);
    let records = load_csv(&data).unwrap();
    let start = date_start(2019, 6, 1).unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| (start..start + 3 * 86_400).contains(&r.timestamp)));
    assert_eq!(load_forecasts(&fc).unwrap()[0].forecast.horizon(), 600);

    let out = dir.path().join("eval");
    std::fs::create_dir_all(&out).unwrap();
    run_args(&["evaluate", "--dataset", s(&data), "--forecast", s(&fc), "--sequences", "3", "--out", s(&out)]);
    let report: BenchmarkReport = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.metadata.dataset_sha256.len(), 64);

    let lag = report.rows.iter().find(|r| r.producer.starts_with("lag")).unwrap();
    assert_eq!(lag.tdm, Some(1.0));
    assert!(lag.sequences > 0);
    let spm = report.rows.iter().find(|r| r.producer == "smart_persistence").unwrap();
    assert_eq!((spm.fs_mse, spm.fs_rmse, spm.fs_mae), (Some(0.0), Some(0.0), Some(0.0)));
    for row in &report.rows {
        for (raw, pct) in [(row.fs_mse, row.fs_mse_pct), (row.fs_rmse, row.fs_rmse_pct), (row.fs_mae, row.fs_mae_pct)] {
            match (raw, pct) {
                (Some(r), Some(p)) => assert!((100.0 * r - p).abs() < 1e-9),
                (None, None) => {}
                other => panic!("{other:?}"),
            }
        }
    }
    let csv_text = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv_text.lines().count(), report.rows.len() + 1);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "seed = 9\ngamma = 0.3\ntau_cls = 0.1\nhorizon = [5, 15]\n").unwrap();
    assert_eq!(FileConfig::load(&cfg).unwrap().seed, Some(9));

    let cli = parse(&["evaluate", "--dataset", "d", "--out", "o", "--config", s(&cfg), "--gamma", "0.2"]);
    let Command::Evaluate(a) = cli.command else { panic!() };
    let st = a.shared.resolve(&a.horizon, a.sequences).unwrap();
    assert_eq!((st.seed, st.gamma, st.tau_cls), (9, 0.2, 0.1));
    assert_eq!(st.horizons, vec![5, 15]);

    let cli = parse(&["evaluate", "--dataset", "d", "--out", "o", "--config", s(&cfg), "--horizon", "30"]);
    let Command::Evaluate(a) = cli.command else { panic!() };
    assert_eq!(a.shared.resolve(&a.horizon, None).unwrap().horizons, vec![30]);

    std::fs::write(&cfg, "seeed = 1\n").unwrap();
    assert!(FileConfig::load(&cfg).is_err());
}

#[test]
fn split_writes_every_role() {
    let dir = tempfile::tempdir().unwrap();
    let mut records = common::transit_records(2017, 6, 2);
    records.extend(common::transit_records(2018, 6, 2));
    records.extend(common::transit_records(2019, 6, 2));
    let data = common::write_records(dir.path(), "d.csv", &records);
    let out = dir.path().join("split");
    std::fs::create_dir_all(&out).unwrap();
    let written = run_args(&[
        "split", "--dataset", s(&data), "--train-count", "50", "--val-count", "20", "--test-count", "20",
        "--sequences", "2", "--out", s(&out),
    ]);
    assert_eq!(written.len(), 9);
    let lines = std::fs::read_to_string(out.join("train_samples.csv")).unwrap().lines().count();
    assert_eq!(lines, 51);
}

#[test]
fn binary_reports_success_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let ok = bin()
        .args(["synth", "--scenario", "drift", "--days", "1", "--out", s(&data)])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("wrote"));

    let missing = bin()
        .args(["evaluate", "--dataset", s(&dir.path().join("nope.csv")), "--out", s(dir.path())])
        .output()
        .unwrap();
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.csv"));

    let bad = dir.path().join("bad.csv");
    let mut text = std::fs::read_to_string(&data).unwrap();
    text.push_str("2019-01-02T00:00:00Z,abc,,,,,\n");
    std::fs::write(&bad, text).unwrap();
    let lines = std::fs::read_to_string(&bad).unwrap().lines().count();
    let out = bin()
        .args(["evaluate", "--dataset", s(&bad), "--out", s(dir.path())])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv") && err.contains(&lines.to_string()), "{err}");

    let header = dir.path().join("header.csv");
    std::fs::write(&header, "time,ghi\n2019-01-01T00:00:00Z,1\n").unwrap();
    let out = bin()
        .args(["ramps", "--dataset", s(&header), "--out", s(&dir.path().join("r.csv"))])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("header"));

    let usage = bin().args(["train", "--loss", "L3"]).output().unwrap();
    assert!(!usage.status.success());
}
