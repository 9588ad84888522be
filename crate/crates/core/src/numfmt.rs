//! Locale-free number formatting with a fixed number of significant digits,
//! so that output is byte-identical across runs and platforms.

use num_bigint::BigInt;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with 12 significant digits, trailing zeros trimmed; fixed notation for
/// moderate exponents, otherwise `1.5e-7` style. Never prints `-0`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    };
    if out.chars().all(|c| c == '-' || c == '0' || c == '.') {
        "0".into()
    } else {
        out
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Float rounded to the same 12 significant digits; non-finite values
/// become strings.
pub fn json_float(x: f64) -> Value {
    let s = format_float(x);
    match s.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => Value::Number(n),
        None => Value::String(s),
    }
}

/// Integers beyond `2^53` become strings so no JSON reader rounds them.
pub fn json_int(x: &BigInt) -> Value {
    let limit = BigInt::from(1u64 << 53);
    if x.magnitude() <= limit.magnitude() {
        let v: i64 = x.try_into().expect("fits in i64");
        Value::from(v)
    } else {
        Value::String(x.to_string())
    }
}
