//! Exact rational arithmetic and display rounding.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational used for every indicator value, fraction and mean.
pub type Exact = Ratio<i128>;

pub fn int(n: impl Into<i128>) -> Exact {
    Exact::from_integer(n.into())
}

/// Renders `value` with `decimals` digits, rounding half away from zero.
///
/// Rounding happens once, on the exact value, so 1.25 renders as "1.3" and
/// 56.25 as "56.3".
pub fn display(value: &Exact, decimals: u32) -> String {
    let scale = 10i128.pow(decimals);
    // Ratio::round rounds half-way cases away from zero.
    let scaled = (value * int(scale)).round().to_integer();
    let negative = scaled < 0;
    let magnitude = scaled.unsigned_abs();
    let whole = magnitude / scale as u128;
    let frac = magnitude % scale as u128;
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac:0width$}", width = decimals as usize)
    }
}

pub fn to_f64(value: &Exact) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid fraction {0:?}: expected a decimal like 0.10 or a ratio like 1/10")]
pub struct FractionParseError(pub String);

/// Parses "0.10", "10%", ".1" or "1/10" into an exact rational.
pub fn parse_exact(text: &str) -> Result<Exact, FractionParseError> {
    let err = || FractionParseError(text.to_string());
    let trimmed = text.trim();
    if let Some(pct) = trimmed.strip_suffix('%') {
        return parse_exact(pct).map(|v| v / int(100));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| err())?;
        let den: i128 = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Exact::new(num, den));
    }
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let numerator: i128 = digits.parse().map_err(|_| err())?;
    let value = Exact::new(numerator, 10i128.pow(frac.len() as u32));
    Ok(if negative { -value } else { value })
}

/// Relative change in percent, `None` when the baseline is zero.
pub fn relative_percent(before: &Exact, after: &Exact) -> Option<Exact> {
    if before.is_zero() {
        None
    } else {
        Some((after - before) / before.abs() * int(100))
    }
}
