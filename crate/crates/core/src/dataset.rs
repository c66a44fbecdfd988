//! Dataset ingestion, frame quality control, sample selection, sequence-set
//! construction and split statistics.
//!
//! # CSV schema
//!
//! UTF-8 with the header
//!
//! ```text
//! timestamp,ghi,sza_deg,saa_deg,ghi_clr,frame_mean_long,frame_mean_short
//! ```
//!
//! `timestamp` is ISO-8601 UTC (`2019-07-26T09:30:00Z`) and `ghi` is
//! required; every other column may be left empty.
//!
//! # Randomness
//!
//! All random draws come from a ChaCha8 stream seeded with the 64-bit seed of
//! the [`SplitSpec`] (`ChaCha8Rng::seed_from_u64`). Roles are drawn in the
//! fixed order train, validation, test from that single stream.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{format_value, TimeSeries, DEFAULT_STEP};
use crate::solar::{solar_position, ClearSkyProvider, Site};
use crate::time::{self, Timestamp};

pub const CSV_HEADER: [&str; 7] = [
    "timestamp",
    "ghi",
    "sza_deg",
    "saa_deg",
    "ghi_clr",
    "frame_mean_long",
    "frame_mean_short",
];

/// Frame-to-frame relative jump in mean intensity that flags a frame.
pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_SZA_MAX: f64 = 80.0;
pub const DEFAULT_MIN_SPACING: i64 = 240;
pub const SEQUENCE_LEN: usize = 100;
pub const SEQUENCE_GAP: i64 = 1800;
pub const SEQUENCE_COUNT: usize = 100;

/// One dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub timestamp: Timestamp,
    pub ghi: f64,
    pub sza_deg: Option<f64>,
    pub saa_deg: Option<f64>,
    pub ghi_clr: Option<f64>,
    pub frame_mean_long: Option<f64>,
    pub frame_mean_short: Option<f64>,
}

impl Record {
    pub fn new(timestamp: Timestamp, ghi: f64) -> Self {
        Self {
            timestamp,
            ghi,
            sza_deg: None,
            saa_deg: None,
            ghi_clr: None,
            frame_mean_long: None,
            frame_mean_short: None,
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.ghi.is_finite() && self.ghi >= 0.0) {
            return Err(format!("ghi must be finite and >= 0, got {}", self.ghi));
        }
        if let Some(z) = self.sza_deg {
            if !(0.0..=180.0).contains(&z) {
                return Err(format!("sza_deg out of [0, 180]: {z}"));
            }
        }
        if let Some(a) = self.saa_deg {
            if !a.is_finite() {
                return Err(format!("saa_deg not finite: {a}"));
            }
        }
        if let Some(c) = self.ghi_clr {
            if !(c.is_finite() && c >= 0.0) {
                return Err(format!("ghi_clr must be finite and >= 0, got {c}"));
            }
        }
        for (name, v) in [("frame_mean_long", self.frame_mean_long), ("frame_mean_short", self.frame_mean_short)] {
            if let Some(v) = v {
                if !(0.0..=255.0).contains(&v) {
                    return Err(format!("{name} out of [0, 255]: {v}"));
                }
            }
        }
        Ok(())
    }
}

/// Reads and validates a dataset CSV. Output is sorted by timestamp.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Vec<Record>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file), &path.display().to_string())
}

/// [`load_csv`] over any reader; `name` labels diagnostics.
pub fn read_csv<R: Read>(reader: R, name: &str) -> Result<Vec<Record>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != CSV_HEADER {
        return Err(Error::Row {
            path: name.to_string(),
            line: 1,
            reason: format!("header must be {:?}, got {:?}", CSV_HEADER.join(","), got.join(",")),
        });
    }
    let mut out: Vec<(Record, u64)> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |reason: String| Error::Row {
            path: name.to_string(),
            line,
            reason,
        };
        if row.len() != CSV_HEADER.len() {
            return Err(bad(format!("expected {} fields, got {}", CSV_HEADER.len(), row.len())));
        }
        let opt = |i: usize| -> std::result::Result<Option<f64>, String> {
            let f = row[i].trim();
            if f.is_empty() {
                Ok(None)
            } else {
                f.parse::<f64>()
                    .map(Some)
                    .map_err(|e| format!("{}: {f:?}: {e}", CSV_HEADER[i]))
            }
        };
        let timestamp = time::parse_timestamp(&row[0]).map_err(|e| bad(e.to_string()))?;
        let ghi = opt(1).map_err(bad)?.ok_or_else(|| bad("ghi is required".into()))?;
        let rec = Record {
            timestamp,
            ghi,
            sza_deg: opt(2).map_err(bad)?,
            saa_deg: opt(3).map_err(bad)?,
            ghi_clr: opt(4).map_err(bad)?,
            frame_mean_long: opt(5).map_err(bad)?,
            frame_mean_short: opt(6).map_err(bad)?,
        };
        rec.validate().map_err(bad)?;
        out.push((rec, line));
    }
    out.sort_by_key(|(r, _)| r.timestamp);
    if let Some(w) = out.windows(2).find(|w| w[0].0.timestamp == w[1].0.timestamp) {
        return Err(Error::DuplicateTimestamp {
            path: name.to_string(),
            line: w[0].1.max(w[1].1),
            timestamp: time::format_timestamp(w[1].0.timestamp),
        });
    }
    Ok(out.into_iter().map(|(r, _)| r).collect())
}

/// Writes records in the dataset schema.
pub fn write_csv<W: Write>(records: &[Record], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
    for r in records {
        w.write_record([
            time::format_timestamp(r.timestamp),
            format_value(r.ghi),
            opt(r.sza_deg),
            opt(r.saa_deg),
            opt(r.ghi_clr),
            opt(r.frame_mean_long),
            opt(r.frame_mean_short),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// Fills missing SZA / SAA from the low-accuracy solar position at `site`.
pub fn fill_solar_angles(records: &mut [Record], site: Site) {
    for r in records.iter_mut() {
        if r.sza_deg.is_none() || r.saa_deg.is_none() {
            let a = solar_position(site.lat_deg, site.lon_deg, r.timestamp);
            r.sza_deg.get_or_insert(a.sza_deg);
            r.saa_deg.get_or_insert(a.saa_deg);
        }
    }
}

/// Measured GHI as a time series.
pub fn ghi_series(records: &[Record]) -> Result<TimeSeries> {
    TimeSeries::with_step(
        records.iter().map(|r| r.timestamp).collect(),
        records.iter().map(|r| r.ghi).collect(),
        DEFAULT_STEP,
    )
}

/// Table-backed provider when every record carries `ghi_clr`, analytic at
/// `site` otherwise.
pub fn clearsky_provider(records: &[Record], site: Site) -> Result<ClearSkyProvider> {
    if !records.is_empty() && records.iter().all(|r| r.ghi_clr.is_some()) {
        ClearSkyProvider::table(
            site,
            records.iter().map(|r| r.timestamp).collect(),
            records.iter().map(|r| r.ghi_clr.unwrap()).collect(),
        )
    } else {
        Ok(ClearSkyProvider::analytic(site))
    }
}

/// Per-channel outcome of the intensity-jump test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QcFlags {
    pub long: bool,
    pub short: bool,
}

impl QcFlags {
    /// A record is excluded when either exposure is flagged.
    pub fn any(&self) -> bool {
        self.long || self.short
    }
}

/// Flags record `n` on a channel when
/// `mean(I_n) − mean(I_{n−1}) > γ · mean(I_{n−1})`.
///
/// The first record and records (or predecessors) without an intensity are
/// never flagged on that channel.
pub fn qc_filter(records: &[Record], gamma: f64) -> Vec<QcFlags> {
    let jump = |prev: Option<f64>, cur: Option<f64>| match (prev, cur) {
        (Some(p), Some(c)) => c - p > gamma * p,
        _ => false,
    };
    let mut flags = vec![QcFlags::default(); records.len()];
    for n in 1..records.len() {
        let (p, c) = (&records[n - 1], &records[n]);
        flags[n] = QcFlags {
            long: jump(p.frame_mean_long, c.frame_mean_long),
            short: jump(p.frame_mean_short, c.frame_mean_short),
        };
    }
    flags
}

/// Mean pixel intensity of a raw 8-bit grayscale frame (`P5` header:
/// magic, width, height, maxval 255, then `width × height` bytes).
pub fn read_frame_mean(path: impl AsRef<Path>) -> Result<f64> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    frame_mean(&bytes).map_err(|reason| Error::Frame {
        path: path.to_path_buf(),
        reason,
    })
}

fn frame_mean(bytes: &[u8]) -> std::result::Result<f64, String> {
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|e| e.to_string())?);
    }
    if fields[0] != "P5" {
        return Err(format!("bad magic {:?}", fields[0]));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let (w, h, maxval) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
    if maxval != 255 {
        return Err(format!("maxval must be 255, got {maxval}"));
    }
    // exactly one whitespace byte separates the header from the pixels
    let data = bytes.get(pos + 1..).unwrap_or_default();
    let n = w * h;
    if n == 0 || data.len() < n {
        return Err(format!("expected {n} pixel bytes, got {}", data.len()));
    }
    let sum: u64 = data[..n].iter().map(|&b| b as u64).sum();
    Ok(sum as f64 / n as f64)
}

/// Dataset role of a calendar year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Validation,
    Test,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Train, Role::Validation, Role::Test];

    pub fn name(self) -> &'static str {
        match self {
            Role::Train => "train",
            Role::Validation => "validation",
            Role::Test => "test",
        }
    }
}

/// Sample-selection constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub role_by_year: BTreeMap<i32, Role>,
    pub sample_counts: BTreeMap<Role, usize>,
    /// Seconds.
    pub min_spacing: i64,
    pub sza_max_deg: f64,
    pub gamma: f64,
    pub rng_seed: u64,
    pub sequence_len: usize,
    /// Seconds between chosen sequences.
    pub sequence_gap: i64,
    pub sequence_count: usize,
    /// Record cadence in seconds.
    pub cadence: i64,
}

impl SplitSpec {
    /// One year per role with the given counts and default constraints.
    pub fn new(train: (i32, usize), validation: (i32, usize), test: (i32, usize), seed: u64) -> Self {
        let mut role_by_year = BTreeMap::new();
        let mut sample_counts = BTreeMap::new();
        for (role, (year, count)) in Role::ALL.into_iter().zip([train, validation, test]) {
            role_by_year.insert(year, role);
            sample_counts.insert(role, count);
        }
        Self {
            role_by_year,
            sample_counts,
            min_spacing: DEFAULT_MIN_SPACING,
            sza_max_deg: DEFAULT_SZA_MAX,
            gamma: DEFAULT_GAMMA,
            rng_seed: seed,
            sequence_len: SEQUENCE_LEN,
            sequence_gap: SEQUENCE_GAP,
            sequence_count: SEQUENCE_COUNT,
            cadence: DEFAULT_STEP,
        }
    }

    /// 2017 / 2018 / 2019 with 35 000 / 10 000 / 10 000 samples.
    pub fn sirta(seed: u64) -> Self {
        Self::new((2017, 35_000), (2018, 10_000), (2019, 10_000), seed)
    }

    pub fn role_of(&self, t: Timestamp) -> Option<Role> {
        self.role_by_year.get(&time::utc_year(t)).copied()
    }

    fn validate(&self) -> Result<()> {
        if self.cadence <= 0 || self.min_spacing < 0 || self.min_spacing % self.cadence != 0 {
            return Err(Error::invalid(
                "split spec",
                format!("min_spacing {} s must be a multiple of cadence {} s", self.min_spacing, self.cadence),
            ));
        }
        if self.sequence_len < 2 {
            return Err(Error::invalid("split spec", "sequence_len must be >= 2"));
        }
        Ok(())
    }
}

/// Selected anchor indices per role, each list ascending.
pub type Selection = BTreeMap<Role, Vec<usize>>;

fn passes_sza(r: &Record, sza_max: f64) -> bool {
    r.sza_deg.is_some_and(|z| z < sza_max)
}

/// Anchors eligible for a role before spacing: SZA below the limit and not
/// QC-flagged.
fn role_candidates(records: &[Record], flags: &[QcFlags], spec: &SplitSpec, role: Role) -> Vec<usize> {
    (0..records.len())
        .filter(|&i| spec.role_of(records[i].timestamp) == Some(role))
        .filter(|&i| passes_sza(&records[i], spec.sza_max_deg) && !flags[i].any())
        .collect()
}

/// Greedy chronological thinning: keep a candidate when it is at least
/// `min_spacing` after the previously kept one.
fn thin(records: &[Record], candidates: &[usize], min_spacing: i64) -> Vec<usize> {
    let mut kept = Vec::new();
    let mut last: Option<Timestamp> = None;
    for &i in candidates {
        let t = records[i].timestamp;
        if last.is_none_or(|l| t - l >= min_spacing) {
            kept.push(i);
            last = Some(t);
        }
    }
    kept
}

/// Draws the per-role sample anchors.
pub fn select_samples(records: &[Record], spec: &SplitSpec) -> Result<Selection> {
    spec.validate()?;
    let flags = qc_filter(records, spec.gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut out = Selection::new();
    for role in Role::ALL {
        let Some(&count) = spec.sample_counts.get(&role) else {
            continue;
        };
        let pool = thin(records, &role_candidates(records, &flags, spec, role), spec.min_spacing);
        if pool.len() < count {
            return Err(Error::Shortfall {
                what: format!("{} samples", role.name()),
                requested: count,
                available: pool.len(),
            });
        }
        let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, pool.len(), count)
            .into_iter()
            .map(|k| pool[k])
            .collect();
        chosen.sort_unstable();
        out.insert(role, chosen);
    }
    Ok(out)
}

/// A window of consecutive records, `start_index..=end_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceWindow {
    pub start_index: usize,
    pub end_index: usize,
    pub t_start: Timestamp,
    pub t_end: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceSet {
    /// Chronological.
    pub windows: Vec<SequenceWindow>,
    pub sequence_len: usize,
    /// Seconds.
    pub inter_sequence_gap: i64,
}

/// All windows of `spec.sequence_len` consecutive records (no gap above
/// the cadence) whose last record passes the SZA filter, optionally
/// restricted to one role's years.
pub fn eligible_windows(records: &[Record], spec: &SplitSpec, role: Option<Role>) -> Vec<SequenceWindow> {
    let len = spec.sequence_len;
    let in_role = |i: usize| role.is_none_or(|r| spec.role_of(records[i].timestamp) == Some(r));
    let mut out = Vec::new();
    let mut run_start = 0;
    for i in 0..records.len() {
        let breaks = i > 0
            && (records[i].timestamp - records[i - 1].timestamp > spec.cadence || !in_role(i) || !in_role(i - 1));
        if breaks {
            run_start = i;
        }
        if !in_role(i) || i + 1 < run_start + len {
            continue;
        }
        let start = i + 1 - len;
        if passes_sza(&records[i], spec.sza_max_deg) {
            out.push(SequenceWindow {
                start_index: start,
                end_index: i,
                t_start: records[start].timestamp,
                t_end: records[i].timestamp,
            });
        }
    }
    out
}

/// Random windows, pairwise separated by at least `gap` seconds, up to
/// `count`. Candidates are visited in a seeded shuffle and accepted greedily.
pub fn choose_windows(candidates: &[SequenceWindow], count: usize, gap: i64, rng: &mut ChaCha8Rng) -> Vec<SequenceWindow> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.shuffle(rng);
    let mut accepted: BTreeMap<Timestamp, SequenceWindow> = BTreeMap::new();
    for k in order {
        if accepted.len() == count {
            break;
        }
        let w = candidates[k];
        let clashes = |o: &SequenceWindow| w.t_start - o.t_end < gap && o.t_start - w.t_end < gap;
        let before = accepted.range(..=w.t_start).next_back().map(|(_, o)| o);
        let after = accepted.range(w.t_start..).next().map(|(_, o)| o);
        if before.is_some_and(clashes) || after.is_some_and(clashes) {
            continue;
        }
        accepted.insert(w.t_start, w);
    }
    accepted.into_values().collect()
}

/// Builds the sequence set of a role. Errors if fewer than
/// `spec.sequence_count` separated windows can be found.
pub fn build_sequences(records: &[Record], spec: &SplitSpec, role: Role) -> Result<SequenceSet> {
    spec.validate()?;
    let candidates = eligible_windows(records, spec, Some(role));
    // one stream per role, offset so roles draw independently of each other
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed.wrapping_add(1 + role as u64));
    let windows = choose_windows(&candidates, spec.sequence_count, spec.sequence_gap, &mut rng);
    if windows.len() < spec.sequence_count {
        return Err(Error::Shortfall {
            what: format!("{} sequences", role.name()),
            requested: spec.sequence_count,
            available: windows.len(),
        });
    }
    Ok(SequenceSet {
        windows,
        sequence_len: spec.sequence_len,
        inter_sequence_gap: spec.sequence_gap,
    })
}

/// Month and SZA distributions of a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitStats {
    /// Index 0 is January.
    pub month_counts: [usize; 12],
    /// Ten equal-width bins over `[0, sza_max)`.
    pub sza_counts: [usize; 10],
    pub sza_max_deg: f64,
}

pub fn split_stats(records: &[Record], indices: &[usize], sza_max_deg: f64) -> SplitStats {
    let mut stats = SplitStats {
        month_counts: [0; 12],
        sza_counts: [0; 10],
        sza_max_deg,
    };
    let width = sza_max_deg / 10.0;
    for &i in indices {
        let r = &records[i];
        stats.month_counts[time::utc_month(r.timestamp) as usize - 1] += 1;
        if let Some(z) = r.sza_deg.filter(|z| *z >= 0.0 && *z < sza_max_deg) {
            stats.sza_counts[((z / width) as usize).min(9)] += 1;
        }
    }
    stats
}

impl SplitStats {
    /// CSV with columns `histogram,bin_lower,bin_upper,count`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["histogram", "bin_lower", "bin_upper", "count"])?;
        for (m, c) in self.month_counts.iter().enumerate() {
            w.write_record(["month".to_string(), (m + 1).to_string(), (m + 2).to_string(), c.to_string()])?;
        }
        let width = self.sza_max_deg / 10.0;
        for (b, c) in self.sza_counts.iter().enumerate() {
            w.write_record([
                "sza_deg".to_string(),
                format_value(b as f64 * width),
                format_value((b + 1) as f64 * width),
                c.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

/// One selected timestamp per line under a `timestamp` header.
pub fn write_selection_csv<W: Write>(records: &[Record], indices: &[usize], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["timestamp"])?;
    for &i in indices {
        w.write_record([time::format_timestamp(records[i].timestamp)])?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

pub fn write_sequences_csv<W: Write>(set: &SequenceSet, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t_start", "t_end", "start_index", "end_index"])?;
    for s in &set.windows {
        w.write_record([
            time::format_timestamp(s.t_start),
            time::format_timestamp(s.t_end),
            s.start_index.to_string(),
            s.end_index.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "timestamp,ghi,sza_deg,saa_deg,ghi_clr,frame_mean_long,frame_mean_short\n";

    fn rec(t: Timestamp, sza: f64) -> Record {
        Record {
            sza_deg: Some(sza),
            saa_deg: Some(180.0),
            ..Record::new(t, 100.0)
        }
    }

    fn with_means(means: &[f64]) -> Vec<Record> {
        means
            .iter()
            .enumerate()
            .map(|(i, &m)| Record {
                frame_mean_long: Some(m),
                ..Record::new(i as i64 * 120, 1.0)
            })
            .collect()
    }

    #[test]
    fn reads_well_formed_file() {
        let body = format!(
            "{HEADER}2019-07-26T09:30:00Z,500,40,120,800,100,50\n\
             2019-07-26T09:32:00Z,510,,,,,\n\
             2019-07-26T09:34:00Z,520,39.5,121,810,101,\n"
        );
        let recs = read_csv(body.as_bytes(), "mem").unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[1].sza_deg, None);
        assert_eq!(recs[2].frame_mean_long, Some(101.0));
        assert_eq!(recs[2].frame_mean_short, None);
    }

    #[test]
    fn negative_ghi_reports_line() {
        let body = format!("{HEADER}2019-07-26T09:30:00Z,500,,,,,\n2019-07-26T09:32:00Z,-5,,,,,\n");
        match read_csv(body.as_bytes(), "mem") {
            Err(Error::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unsorted_rows_are_sorted_and_duplicates_rejected() {
        let body = format!("{HEADER}2019-07-26T09:34:00Z,3,,,,,\n2019-07-26T09:30:00Z,1,,,,,\n2019-07-26T09:32:00Z,2,,,,,\n");
        let recs = read_csv(body.as_bytes(), "mem").unwrap();
        assert_eq!(recs.iter().map(|r| r.ghi).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);

        let dup = format!("{HEADER}2019-07-26T09:30:00Z,1,,,,,\n2019-07-26T09:30:00Z,2,,,,,\n");
        assert!(matches!(read_csv(dup.as_bytes(), "mem"), Err(Error::DuplicateTimestamp { .. })));
    }

    #[test]
    fn bad_header_and_intensity() {
        assert!(read_csv("a,b\n1,2\n".as_bytes(), "mem").is_err());
        let body = format!("{HEADER}2019-07-26T09:30:00Z,1,,,,300,\n");
        assert!(read_csv(body.as_bytes(), "mem").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let recs = vec![
            Record {
                ghi_clr: Some(812.25),
                frame_mean_short: Some(12.5),
                ..rec(1_564_133_400, 41.0)
            },
            rec(1_564_133_520, 40.5),
        ];
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice(), "mem").unwrap(), recs);
    }

    #[test]
    fn qc_examples() {
        let f = qc_filter(&with_means(&[100.0, 120.0]), 0.1);
        assert!(!f[0].any());
        assert!(f[1].long && f[1].any());
        let f = qc_filter(&with_means(&[100.0, 105.0]), 0.1);
        assert!(!f[1].any());
        // drops are never flagged
        let f = qc_filter(&with_means(&[100.0, 50.0]), 0.1);
        assert!(!f[1].any());
        // missing intensity never flags
        let mut recs = with_means(&[100.0, 200.0]);
        recs[0].frame_mean_long = None;
        assert!(!qc_filter(&recs, 0.1)[1].any());
    }

    #[test]
    fn qc_short_channel_alone_excludes() {
        let mut recs = with_means(&[100.0, 101.0]);
        recs[0].frame_mean_short = Some(10.0);
        recs[1].frame_mean_short = Some(20.0);
        let f = qc_filter(&recs, 0.1);
        assert!(!f[1].long && f[1].short && f[1].any());
    }

    #[test]
    fn frame_mean_parses_raw_grayscale() {
        let mut bytes = b"P5\n# comment\n2 2\n255\n".to_vec();
        bytes.extend([0u8, 10, 20, 30]);
        assert_eq!(frame_mean(&bytes).unwrap(), 15.0);
        assert!(frame_mean(b"P6\n1 1\n255\n\x00").is_err());
        assert!(frame_mean(b"P5\n2 2\n255\n\x00").is_err());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.pgm");
        std::fs::write(&p, &bytes).unwrap();
        assert_eq!(read_frame_mean(&p).unwrap(), 15.0);
    }

    fn year_records(year: i32, days: i64, sza: impl Fn(i64) -> f64) -> Vec<Record> {
        let t0 = time::date_start(year, 3, 1).unwrap();
        (0..days * 720).map(|k| rec(t0 + k * 120, sza(k))).collect()
    }

    #[test]
    fn high_sun_filter_leaves_nothing() {
        let recs = year_records(2019, 1, |_| 85.0);
        let spec = SplitSpec::new((2017, 0), (2018, 0), (2019, 1), 3);
        assert!(matches!(select_samples(&recs, &spec), Err(Error::Shortfall { available: 0, .. })));
    }

    #[test]
    fn spacing_and_determinism() {
        let recs = year_records(2019, 3, |k| (k % 90) as f64);
        let spec = SplitSpec::new((2017, 0), (2018, 0), (2019, 300), 7);
        let a = select_samples(&recs, &spec).unwrap();
        let b = select_samples(&recs, &spec).unwrap();
        assert_eq!(a, b);
        let test = &a[&Role::Test];
        assert_eq!(test.len(), 300);
        assert!(test.windows(2).all(|w| w[1] - w[0] >= 2));
        assert!(test.iter().all(|&i| recs[i].sza_deg.unwrap() < 80.0));
        let other = select_samples(&recs, &SplitSpec { rng_seed: 8, ..spec }).unwrap();
        assert_ne!(other, a);
    }

    #[test]
    fn roles_use_disjoint_years() {
        let mut recs = year_records(2017, 2, |_| 30.0);
        recs.extend(year_records(2018, 2, |_| 30.0));
        recs.extend(year_records(2019, 2, |_| 30.0));
        let spec = SplitSpec::new((2017, 50), (2018, 40), (2019, 30), 1);
        let sel = select_samples(&recs, &spec).unwrap();
        for (role, year) in [(Role::Train, 2017), (Role::Validation, 2018), (Role::Test, 2019)] {
            assert!(sel[&role].iter().all(|&i| time::utc_year(recs[i].timestamp) == year));
        }
    }

    #[test]
    fn sequences_are_contiguous_and_separated() {
        let spec = SplitSpec {
            sequence_count: 10,
            ..SplitSpec::new((2017, 0), (2018, 0), (2019, 0), 5)
        };
        let recs = year_records(2019, 5, |_| 30.0);
        let set = build_sequences(&recs, &spec, Role::Test).unwrap();
        assert_eq!(set.windows.len(), 10);
        for w in &set.windows {
            assert_eq!(w.end_index - w.start_index + 1, 100);
            assert_eq!(w.t_end - w.t_start, 3 * 3600 + 18 * 60);
        }
        for p in set.windows.windows(2) {
            assert!(p[1].t_start - p[0].t_end >= 1800);
        }
        assert_eq!(set, build_sequences(&recs, &spec, Role::Test).unwrap());
    }

    #[test]
    fn windows_never_span_gaps() {
        let mut recs = year_records(2019, 1, |_| 30.0);
        let later = time::date_start(2019, 3, 7).unwrap();
        recs.extend((0..720).map(|k| rec(later + k * 120, 30.0)));
        let spec = SplitSpec::new((2017, 0), (2018, 0), (2019, 0), 5);
        for w in eligible_windows(&recs, &spec, Some(Role::Test)) {
            assert_eq!(w.t_end - w.t_start, 99 * 120);
        }
        let too_many = SplitSpec {
            sequence_count: 1000,
            ..spec
        };
        assert!(matches!(build_sequences(&recs, &too_many, Role::Test), Err(Error::Shortfall { .. })));
    }

    #[test]
    fn stats_histograms() {
        let t0 = time::date_start(2019, 7, 1).unwrap();
        let recs: Vec<Record> = (0..800).map(|k| rec(t0 + k * 120, (k % 80) as f64 + 0.5)).collect();
        let all: Vec<usize> = (0..recs.len()).collect();
        let s = split_stats(&recs, &all, 80.0);
        assert_eq!(s.month_counts[6], 800);
        assert_eq!(s.month_counts.iter().sum::<usize>(), 800);
        for c in s.sza_counts {
            assert!((c as f64 - 80.0).abs() <= 16.0);
        }
        let empty = split_stats(&recs, &[], 80.0);
        assert!(empty.month_counts.iter().chain(&empty.sza_counts).all(|&c| c == 0));
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 23);
    }
}
