//! Deterministic decimal formatting shared by the text exporters.

/// Formats `x` with at most `digits` significant digits, `%g` style: fixed
/// notation for moderate exponents, otherwise `<mantissa>e<exp>`. Trailing
/// zeros are trimmed.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp >= -5 && exp < digits as i32 {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Rounds to `decimals` places after the point.
pub fn round_decimals(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.5, 9), "0.5");
        assert_eq!(sig(1.35e11, 9), "1.35e11");
        assert_eq!(sig(135.0, 9), "135");
        assert_eq!(sig(-2.5e-7, 9), "-2.5e-7");
        assert_eq!(sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(sig(123456789.4, 9), "123456789");
        assert_eq!(sig(1234567890.0, 9), "1.23456789e9");
        assert_eq!(sig(9.999999999, 9), "10");
        assert_eq!(sig(-1e-20, 9), "-1e-20");
        assert_eq!(sig(0.0, 9), "0");
    }

    #[test]
    fn sig_round_trips_to_precision() {
        for &x in &[0.123456789123, 987.654321987, -3.14159265358979, 1e-4 + 1e-13] {
            let back: f64 = sig(x, 9).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-8, "{x} -> {back}");
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(round_decimals(0.1234567894, 9), 0.123456789);
        assert_eq!(round_decimals(-1e-12, 9), 0.0);
        assert!(round_decimals(-1e-12, 9).is_sign_positive());
    }
}
