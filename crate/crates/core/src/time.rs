//! UTC epoch-second helpers.
//!
//! Every instant in this crate is an `i64` count of seconds since the Unix
//! epoch, UTC. Calendar days are UTC days.

use chrono::{DateTime, Datelike, NaiveDate, SecondsFormat, Utc};

use crate::error::{Error, Result};

/// Seconds since 1970-01-01T00:00:00Z.
pub type Timestamp = i64;

pub const SECONDS_PER_DAY: i64 = 86_400;

/// Parses an ISO-8601 / RFC 3339 instant such as `2019-07-26T09:30:00Z`.
pub fn parse_timestamp(s: &str) -> Result<Timestamp> {
    let dt = DateTime::parse_from_rfc3339(s.trim())
        .map_err(|e| Error::invalid("timestamp", format!("{s:?}: {e}")))?;
    Ok(dt.timestamp())
}

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
pub fn format_timestamp(t: Timestamp) -> String {
    match DateTime::<Utc>::from_timestamp(t, 0) {
        Some(dt) => dt.to_rfc3339_opts(SecondsFormat::Secs, true),
        None => t.to_string(),
    }
}

/// UTC day number (days since the epoch).
pub fn utc_day(t: Timestamp) -> i64 {
    t.div_euclid(SECONDS_PER_DAY)
}

pub fn utc_year(t: Timestamp) -> i32 {
    datetime(t).year()
}

/// Month 1..=12.
pub fn utc_month(t: Timestamp) -> u32 {
    datetime(t).month()
}

/// Day of year, 1-based.
pub fn utc_ordinal(t: Timestamp) -> u32 {
    datetime(t).ordinal()
}

/// Seconds elapsed since UTC midnight.
pub fn seconds_of_day(t: Timestamp) -> i64 {
    t.rem_euclid(SECONDS_PER_DAY)
}

/// Midnight UTC of a calendar date.
pub fn date_start(year: i32, month: u32, day: u32) -> Result<Timestamp> {
    NaiveDate::from_ymd_opt(year, month, day)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc().timestamp())
        .ok_or_else(|| Error::invalid("date", format!("{year}-{month}-{day}")))
}

fn datetime(t: Timestamp) -> DateTime<Utc> {
    DateTime::<Utc>::from_timestamp(t, 0).unwrap_or_default()
}
