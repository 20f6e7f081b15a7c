//! CSV field formatting shared by all exporters: locale-independent decimal
//! with 17 significant digits, enough to round-trip any f64.

/// Format one CSV field.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrips_f64_exactly() {
        for &x in &[
            0.0,
            1.0,
            -1.5,
            std::f64::consts::PI,
            1e-300,
            f64::MAX / 2.0,
            0.1 + 0.2,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
