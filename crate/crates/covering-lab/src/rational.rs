//! Exact rational scalars and the comparison policy used throughout the crate.
//!
//! All measures, weights and builder distances are `Q = BigRational`, so set
//! measures, ratios and density sums are computed without rounding. Distances
//! that originate from floating point (chordal polygons, `l2` point files) are
//! still stored as the exact rational value of the `f64`, but comparisons on
//! such spaces go through [`CmpMode::Approx`], which treats values within a
//! relative tolerance of 1e-9 as equal.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use std::fmt::Write as _;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseQError(pub String);

/// Parses `"12"`, `"-3.25"`, or `"7/4"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    let s = s.trim();
    let err = || ParseQError(s.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| err())?;
        let den: BigInt = d.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.is_empty() && !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let joined = format!(
            "{}{}",
            if int_digits.is_empty() {
                "0"
            } else {
                int_digits
            },
            frac_part
        );
        let num: BigInt = joined.parse().map_err(|_| err())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let q = Q::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    let num: BigInt = s.parse().map_err(|_| err())?;
    Ok(Q::from_integer(num))
}

/// Renders a rational as a decimal string when the expansion terminates
/// (denominator of the form 2^a 5^b) and as `p/q` otherwise. Round-trips
/// through [`parse_q`] bit-exactly.
pub fn format_q(x: &Q) -> String {
    let x = x.reduced();
    let den = x.denom();
    if den == &BigInt::from(1) {
        return x.numer().to_string();
    }
    // Count factors of 2 and 5 in the denominator.
    let mut rest = den.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if rest != BigInt::from(1) {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let shift = twos.max(fives);
    let scale = BigInt::from(10u32).pow(shift);
    let scaled = (x.numer() * &scale / den).abs();
    let digits = scaled.to_string();
    let mut out = String::new();
    if x.numer().is_negative() {
        out.push('-');
    }
    let shift = shift as usize;
    if digits.len() > shift {
        let (int_part, frac_part) = digits.split_at(digits.len() - shift);
        let _ = write!(out, "{int_part}.{frac_part}");
    } else {
        let _ = write!(out, "0.{}{}", "0".repeat(shift - digits.len()), digits);
    }
    // Trim trailing zeros but keep at least one fractional digit.
    while out.ends_with('0') && !out.ends_with(".0") {
        out.pop();
    }
    out
}

/// Comparison policy of a space. Exact spaces compare rationals strictly;
/// approximate spaces (floating-point distances) first collapse values whose
/// relative difference is below the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum CmpMode {
    Exact,
    Approx { rel_tol: Q },
}

impl CmpMode {
    pub fn approx_default() -> Self {
        CmpMode::Approx {
            rel_tol: qr(1, 1_000_000_000),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CmpMode::Exact)
    }

    /// True when the two values are indistinguishable under this mode.
    pub fn eq(&self, a: &Q, b: &Q) -> bool {
        match self {
            CmpMode::Exact => a == b,
            CmpMode::Approx { rel_tol } => {
                if a == b {
                    return true;
                }
                let diff = (a - b).abs();
                let scale = a.abs().max(b.abs());
                diff <= rel_tol * scale
            }
        }
    }

    /// Strict `a < b` modulo the tolerance.
    pub fn lt(&self, a: &Q, b: &Q) -> bool {
        !self.eq(a, b) && a < b
    }

    /// Non-strict `a <= b` modulo the tolerance.
    pub fn le(&self, a: &Q, b: &Q) -> bool {
        self.eq(a, b) || a < b
    }
}
