//! Number formatting shared by every CSV writer.

/// Twelve significant digits in scientific notation; round-trips through
/// `str::parse` to the same rounded value on every platform.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0.00000000000e0".
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}
