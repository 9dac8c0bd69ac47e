//! Exact decimal formatting, parsing, and rounding for rationals.
//!
//! All pipeline statistics are kept as exact rationals and only rounded at
//! the reporting boundary. Rounding is half-to-even.

use num::rational::Ratio;
use num::Zero;

use crate::error::Error;

/// Round `value * 10^places` to the nearest integer, half to even.
fn scaled_round(value: Ratio<i64>, places: u32) -> i64 {
    let scale = 10i64.pow(places);
    let scaled = value * Ratio::from_integer(scale);
    let (num, den) = (*scaled.numer(), *scaled.denom()); // den > 0
    let q = num.div_euclid(den);
    let rem = num.rem_euclid(den);
    match (2 * rem).cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q % 2 == 0 {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Round to `places` fractional digits, returning an exact rational.
pub fn round_to_places(value: Ratio<i64>, places: u32) -> Ratio<i64> {
    Ratio::new(scaled_round(value, places), 10i64.pow(places))
}

/// Format with exactly `places` fractional digits.
pub fn decimal(value: Ratio<i64>, places: u32) -> String {
    let scale = 10i64.pow(places);
    let r = scaled_round(value, places);
    let sign = if r < 0 { "-" } else { "" };
    let abs = r.abs();
    if places == 0 {
        return format!("{sign}{abs}");
    }
    format!(
        "{sign}{}.{:0width$}",
        abs / scale,
        abs % scale,
        width = places as usize
    )
}

/// Format with exactly four fractional digits (confidence scores, strengths).
pub fn decimal4(value: Ratio<i64>) -> String {
    decimal(value, 4)
}

/// Format with one fractional digit (table percentages).
pub fn decimal1(value: Ratio<i64>) -> String {
    decimal(value, 1)
}

/// Parse a plain decimal literal (e.g. "0.6000" or "0.25") to an exact rational.
pub fn parse_decimal(text: &str) -> Result<Ratio<i64>, Error> {
    let bad = || Error::InvalidArgument(format!("invalid decimal '{text}'"));
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 12
    {
        return Err(bad());
    }
    let int: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let scale = 10i64.pow(frac_part.len() as u32);
    let frac: i64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    Ok(Ratio::new(sign * (int * scale + frac), scale))
}

/// Exact rational as f64, for JSON reporting.
pub fn to_f64(value: Ratio<i64>) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    *value.numer() as f64 / *value.denom() as f64
}
