//! Dynamic time warping between a forecast and its reference, and the
//! temporal distortion index (TDI) / temporal distortion mix (TDM) derived
//! from the optimal warp path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{minmax_normalize, AlignedPair};

/// Monotone, continuous alignment from `(0, 0)` to `(n - 1, n - 1)`.
/// `i` indexes the test series, `j` the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpPath {
    pub steps: Vec<(usize, usize)>,
    /// Accumulated `|T_i - R_j|` along the path.
    pub cost: f64,
    pub n: usize,
}

/// Distortion statistics. TDI values are percentages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionReport {
    pub tdi: f64,
    pub tdi_adv: f64,
    pub tdi_late: f64,
    pub tdm: f64,
}

#[derive(Clone, Copy)]
enum Pred {
    Start,
    Diag,
    Up,   // from (i - 1, j)
    Left, // from (i, j - 1)
}

/// Optimal DTW path with steps (1,0), (0,1), (1,1) and cost `Σ |T_i − R_j|`.
///
/// Ties prefer the diagonal predecessor, then `(i − 1, j)`, then `(i, j − 1)`.
pub fn dtw_path(test: &[f64], reference: &[f64]) -> Result<WarpPath> {
    if test.len() != reference.len() {
        return Err(Error::LengthMismatch {
            left: test.len(),
            right: reference.len(),
        });
    }
    let n = test.len();
    if n < 2 {
        return Err(Error::TooShort {
            what: "dtw",
            needed: 2,
            got: n,
        });
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut acc = vec![0.0f64; n * n];
    let mut pred = vec![Pred::Start; n * n];
    for i in 0..n {
        for j in 0..n {
            let c = (test[i] - reference[j]).abs();
            if i == 0 && j == 0 {
                acc[0] = c;
                continue;
            }
            let mut best = (f64::INFINITY, Pred::Start);
            if i > 0 && j > 0 {
                best = (acc[idx(i - 1, j - 1)], Pred::Diag);
            }
            if i > 0 && acc[idx(i - 1, j)] < best.0 {
                best = (acc[idx(i - 1, j)], Pred::Up);
            }
            if j > 0 && acc[idx(i, j - 1)] < best.0 {
                best = (acc[idx(i, j - 1)], Pred::Left);
            }
            acc[idx(i, j)] = best.0 + c;
            pred[idx(i, j)] = best.1;
        }
    }

    let mut steps = Vec::with_capacity(2 * n);
    let (mut i, mut j) = (n - 1, n - 1);
    loop {
        steps.push((i, j));
        match pred[idx(i, j)] {
            Pred::Start => break,
            Pred::Diag => {
                i -= 1;
                j -= 1;
            }
            Pred::Up => i -= 1,
            Pred::Left => j -= 1,
        }
    }
    steps.reverse();
    Ok(WarpPath {
        steps,
        cost: acc[idx(n - 1, n - 1)],
        n,
    })
}

/// Area between the warp path and the identity path, split into the late
/// side (`i > j`: the forecast at `i` reproduces the earlier reference value
/// at `j`) and the advance side (`i < j`).
///
/// Each step contributes `|i − j|`; both areas are normalized by the area
/// under the identity path, `n(n − 1)/2`, and reported in percent.
pub fn tdi_tdm(path: &WarpPath) -> DistortionReport {
    let (late, adv) = path_areas(path);
    report_from_areas(late, adv, identity_area(path.n))
}

/// Raw (unnormalized) late and advance areas.
pub fn path_areas(path: &WarpPath) -> (u64, u64) {
    let mut late = 0u64;
    let mut adv = 0u64;
    for &(i, j) in &path.steps {
        if i > j {
            late += (i - j) as u64;
        } else {
            adv += (j - i) as u64;
        }
    }
    (late, adv)
}

fn identity_area(n: usize) -> f64 {
    (n * (n - 1)) as f64 / 2.0
}

fn report_from_areas(late: u64, adv: u64, norm: f64) -> DistortionReport {
    let tdi_late = 100.0 * late as f64 / norm;
    let tdi_adv = 100.0 * adv as f64 / norm;
    let total = late + adv;
    let tdm = if total == 0 {
        0.0
    } else {
        (late as i64 - adv as i64) as f64 / total as f64
    };
    DistortionReport {
        tdi: tdi_late + tdi_adv,
        tdi_adv,
        tdi_late,
        tdm,
    }
}

/// Min-max normalizes each side independently, then runs DTW and the area count.
pub fn sequence_distortion(pair: &AlignedPair) -> Result<DistortionReport> {
    Ok(tdi_tdm(&sequence_path(pair)?))
}

/// Warp path of the normalized pair.
pub fn sequence_path(pair: &AlignedPair) -> Result<WarpPath> {
    if pair.len() < 2 {
        return Err(Error::TooShort {
            what: "sequence distortion",
            needed: 2,
            got: pair.len(),
        });
    }
    let test = minmax_normalize(pair.test())?;
    let reference = minmax_normalize(pair.reference())?;
    dtw_path(&test, &reference)
}

/// Aggregate over a set of sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionSummary {
    /// Mean of per-sequence TDI, percent.
    pub tdi_mean: f64,
    /// TDI of the pooled areas, percent.
    pub tdi_pooled: f64,
    /// TDM of the pooled late / advance areas.
    pub tdm_pooled: f64,
    pub sequences: usize,
}

/// Runs [`sequence_distortion`] on every pair, in order, and aggregates.
pub fn summarize_sequences<'a>(
    pairs: impl IntoIterator<Item = &'a AlignedPair>,
) -> Result<DistortionSummary> {
    let mut late = 0u64;
    let mut adv = 0u64;
    let mut norm = 0.0;
    let mut tdi_sum = 0.0;
    let mut count = 0usize;
    for pair in pairs {
        let path = sequence_path(pair)?;
        let (l, a) = path_areas(&path);
        let area = identity_area(path.n);
        tdi_sum += report_from_areas(l, a, area).tdi;
        late += l;
        adv += a;
        norm += area;
        count += 1;
    }
    if count == 0 {
        return Err(Error::Empty("distortion sequences"));
    }
    let pooled = report_from_areas(late, adv, norm);
    Ok(DistortionSummary {
        tdi_mean: tdi_sum / count as f64,
        tdi_pooled: pooled.tdi,
        tdm_pooled: pooled.tdm,
        sequences: count,
    })
}
