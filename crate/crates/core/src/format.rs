//! Number and list formatting shared by axis labels, alt text and reports.

/// Shortest round-trip decimal without trailing zeros: `150`, `0.6`, `-2.5`.
pub fn number(v: f64) -> String {
    if v == 0.0 {
        // Also folds -0.
        return "0".to_string();
    }
    format!("{v}")
}

/// Rounds to `digits` significant figures, then formats like [`number`].
pub fn significant(v: f64, digits: u32) -> String {
    number(round_significant(v, digits))
}

pub fn round_significant(v: f64, digits: u32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let digits = digits.max(1) as i32;
    let exp = v.abs().log10().floor() as i32;
    let shift = exp - digits + 1;
    // Multiplying or dividing by an exact integer power of ten keeps the
    // result the closest double to the decimal value.
    if shift >= 0 {
        let p = 10f64.powi(shift);
        (v / p).round() * p
    } else {
        let q = 10f64.powi(-shift);
        (v * q).round() / q
    }
}

/// Joins items with commas and a final ` and `, without an Oxford comma.
pub fn join_and<S: AsRef<str>>(items: &[S]) -> String {
    match items {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(|s| s.as_ref()).collect();
            format!("{} and {}", head.join(", "), last.as_ref())
        }
    }
}

/// Fixed-point formatting with trailing zeros trimmed, used for coordinates
/// in vector output so files stay byte-stable.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, v);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}
