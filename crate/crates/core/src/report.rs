//! Numeric conventions for reports.

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Natural-log value in the requested unit, rounded to 12 significant digits.
pub fn scaled(x: f64, bits: bool) -> f64 {
    round12(if bits { x / std::f64::consts::LN_2 } else { x })
}
