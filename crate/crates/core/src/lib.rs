//! Robust scale estimation for univariate samples.
//!
//! Provides the MAD, Sn and Qn estimators with finite-sample correction
//! factors, a reproducible Monte-Carlo engine for calibrating those factors
//! and measuring efficiency, and least-squares fitting of the large-n
//! prediction equations.

pub mod correction;
pub mod error;
pub mod estimators;
pub mod fitting;
pub mod montecarlo;
pub mod order_stats;

pub use correction::{factor, CorrectionModel};
pub use error::{Error, Result};
pub use estimators::{estimate, EstimatorKind, RawScaleEstimate, Sample};

/// Formats `x` with six significant digits, keeping trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding can carry into a new digit, e.g. 9.999995 -> 10.00000
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        if digits.trim_start_matches('0').len() > 6 && decimals > 0 {
            let decimals = decimals - 1;
            return format!("{x:.decimals$}");
        }
        s
    } else {
        format!("{x:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::format_sig;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig(0.3995), "0.399500");
        assert_eq!(format_sig(1.0), "1.00000");
        assert_eq!(format_sig(1.1955), "1.19550");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.000123456789), "0.000123457");
        assert_eq!(format_sig(123456.7), "123457");
        assert_eq!(format_sig(1234567.0), "1.23457e6");
        assert_eq!(format_sig(9.999996), "10.0000");
        assert_eq!(format_sig(-2.5), "-2.50000");
        assert_eq!(format_sig(1.5e-7), "1.50000e-7");
    }
}
