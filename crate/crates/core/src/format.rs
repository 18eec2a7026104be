//! Locale-independent number formatting for reports and CSV output.

/// Formats `value` in positional notation with `digits` significant digits.
/// Zero prints as `0`; values with more integer digits than `digits` print
/// as rounded integers.
pub fn significant(value: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    // the exponent after rounding to `digits` significant digits
    let sci = format!("{:.*e}", digits - 1, value);
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("LowerExp always prints an exponent");
    let decimals = digits as i32 - 1 - exponent;
    if decimals > 0 {
        format!("{:.*}", decimals as usize, value)
    } else {
        format!("{value:.0}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(significant(1.0 / 12.0, 12), "0.0833333333333");
        assert_eq!(significant(3.0 / 28.0, 12), "0.107142857143");
        assert_eq!(significant(0.12, 12), "0.120000000000");
        assert_eq!(significant(0.0, 12), "0");
        assert_eq!(significant(1.5, 12), "1.50000000000");
        assert_eq!(significant(-0.25, 3), "-0.250");
    }

    #[test]
    fn rounding_that_bumps_the_exponent() {
        assert_eq!(significant(0.099999999999999, 12), "0.100000000000");
        assert_eq!(significant(123456.7, 3), "123457");
    }
}
