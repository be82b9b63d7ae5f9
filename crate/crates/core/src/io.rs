//! Number formatting shared by the CSV and JSON writers.

/// Shortest representation that parses back to the same `f64`.
/// Non-finite values print as `NaN`, `inf`, `-inf`.
pub fn format_shortest(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Debug formatting is shortest round-trip and switches to exponent form
    // for very small or large magnitudes.
    format!("{x:?}")
}

/// Optional value: empty field when missing.
pub fn format_optional(x: Option<f64>) -> String {
    x.map(format_shortest).unwrap_or_default()
}

/// C `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
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
    fn g17_matches_printf() {
        // reference strings from C printf("%.17g")
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (1.7320508075688772, "1.7320508075688772"),
            (123456789012345680.0, "1.2345678901234568e+17"),
            (0.0001, "0.0001"),
            (1e22, "1e+22"),
            (0.30077, "0.30076999999999998"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g17(x), want, "{x}");
        }
    }

    #[test]
    fn shortest_round_trips() {
        for x in [0.1, 1.0 / 3.0, -1e-300, 6.02e23, 2.0f64.sqrt()] {
            assert_eq!(format_shortest(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_optional(None), "");
    }
}
