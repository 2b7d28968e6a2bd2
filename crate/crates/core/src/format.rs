//! Number formatting shared by the CSV writers.

/// Formats `x` with 15 significant digits.
///
/// Plain decimal notation is used for magnitudes in `[1e-4, 1e15)`,
/// scientific notation otherwise.
pub(crate) fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs();
    if (1e-4..1e15).contains(&mag) {
        // the exponent after rounding to 15 digits, so carries are accounted for
        let sci = format!("{x:.14e}");
        let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
        let decimals = (14 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}
