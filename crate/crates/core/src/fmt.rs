//! Number formatting shared by all CSV writers.

use std::fmt::Write;

/// Formats `x` with nine significant digits, in the style of C's `%.9g`.
pub fn sig9(x: f64) -> String {
    sig(x, 9)
}

/// Formats `x` with `digits` significant digits, in the style of C's `%.*g`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    // Rounding happens here; the exponent of the rounded value decides the layout.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let mut out = String::with_capacity(mantissa.len() + 5);
        let _ = write!(out, "{}e{}{:02}", mantissa, if exp < 0 { '-' } else { '+' }, exp.abs());
        out
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(0.04), "0.04");
        assert_eq!(sig9(-2.5), "-2.5");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(1234567890.0), "1.23456789e+09");
        assert_eq!(sig9(1.0e-5), "1e-05");
        assert_eq!(sig9(0.00012345), "0.00012345");
        assert_eq!(sig9(9.9999999996), "10");
        assert_eq!(sig(2.0f64.sqrt(), 3), "1.41");
    }

    #[test]
    fn parses_back_within_nine_digits() {
        for &x in &[1.0e-9, 0.28435134907654047, 2132.984197134298, -7.123456789e12] {
            let y: f64 = sig9(x).parse().unwrap();
            assert!(((y - x) / x).abs() < 1e-8, "{x} -> {y}");
        }
    }
}
