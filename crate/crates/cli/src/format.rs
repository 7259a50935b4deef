//! Locale-free number formatting shared by every output path.

/// Significant digits used in all reports.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering: shortest of fixed/scientific, trailing zeros trimmed.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Rounds to the value that [`sig`] prints, so flags derived from it stay consistent.
pub fn round_sig(x: f64) -> f64 {
    sig(x).parse().expect("formatted number parses")
}

/// Drops values that are negative only through rounding noise, and negative zero.
pub fn clean(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

fn trim_zeros(s: &str) -> &str {
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
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.25), "0.25");
        assert_eq!(sig(8.0 / 9.0), "0.888888888889");
        assert_eq!(sig(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(sig(123456.789), "123456.789");
        assert_eq!(sig(1.5e-7), "1.5e-07");
        assert_eq!(sig(2.0e13), "2e+13");
        assert_eq!(sig(0.0001), "0.0001");
        assert_eq!(sig(1e-5), "1e-05");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1 + 0.2, 1.0 / 7.0, 2.0f64.sqrt(), 1e-9 / 3.0] {
            let r = round_sig(x);
            assert_eq!(round_sig(r), r);
            assert_eq!(sig(r), sig(x));
        }
    }

    #[test]
    fn cleans_noise() {
        assert_eq!(clean(-1e-17), 0.0);
        assert_eq!(sig(clean(-0.0)), "0");
        assert_eq!(clean(-0.5), -0.5);
    }
}
