//! Numeric output formatting.
//!
//! Every number this crate writes to a report file or table cell goes
//! through [`sig9`], which prints exactly nine significant digits in
//! scientific notation. The fixed width keeps golden-file comparisons
//! stable across runs and platforms.

/// Format a float with nine significant digits (`{:.8e}`).
/// Negative zero prints as zero.
pub fn sig9(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.811), "8.11000000e-1");
        assert_eq!(sig9(3.4594316186372973), "3.45943162e0");
        assert_eq!(sig9(0.0), "0.00000000e0");
        assert_eq!(sig9(-0.0), "0.00000000e0");
        assert_eq!(sig9(-1.0), "-1.00000000e0");
    }
}
