//! Decimal text conventions shared by every CSV artifact.

/// Formats a float with 17 significant digits so `parse(fmt(x))` returns
/// the identical bit pattern. Infinities use the `inf` sentinel expected
/// by the ranked-score files.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{:.16e}", v)
}

/// Parses text produced by [`fmt_f64`], plus ordinary decimal literals.
pub fn parse_f64(text: &str) -> Option<f64> {
    match text {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_edge_values() {
        let cases = [
            0.0,
            -0.0,
            0.1,
            1.0 / 3.0,
            -123456.789e-21,
            f64::MAX,
            f64::MIN_POSITIVE,
            2.0_f64.sqrt(),
        ];
        for v in cases {
            let back = parse_f64(&fmt_f64(v)).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "value {v:?}");
        }
    }

    #[test]
    fn infinity_uses_sentinel() {
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(parse_f64("inf"), Some(f64::INFINITY));
    }
}
