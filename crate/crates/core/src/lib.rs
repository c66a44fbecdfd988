// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dataset;
pub mod distortion;
pub mod error;
pub mod learner;
pub mod metrics;
pub mod ramp;
pub mod report;
pub mod series;
pub mod solar;
pub mod synth;
pub mod time;

pub use error::{Error, Result};
