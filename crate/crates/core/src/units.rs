//! Frequency unit conversions. Internally every frequency is an angular
//! frequency in rad/s; inputs and outputs use ordinary frequency f = ω/2π.

use std::f64::consts::TAU;

pub fn ghz(f: f64) -> f64 {
    TAU * f * 1e9
}

pub fn mhz(f: f64) -> f64 {
    TAU * f * 1e6
}

pub fn khz(f: f64) -> f64 {
    TAU * f * 1e3
}

pub fn to_ghz(w: f64) -> f64 {
    w / TAU / 1e9
}

pub fn to_mhz(w: f64) -> f64 {
    w / TAU / 1e6
}

pub fn to_khz(w: f64) -> f64 {
    w / TAU / 1e3
}

/// Folds `x` into `[-w/2, w/2)`.
pub fn fold(x: f64, w: f64) -> f64 {
    x - w * ((x + 0.5 * w) / w).floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        assert!((to_mhz(mhz(123.4)) - 123.4).abs() < 1e-12);
        assert!((to_ghz(ghz(5.0)) - 5.0).abs() < 1e-15);
        assert!((to_khz(khz(7.0)) - 7.0).abs() < 1e-12);
    }

    #[test]
    fn fold_range() {
        let w = 3.0;
        for k in -20..20 {
            let x = 0.37 * k as f64;
            let f = fold(x, w);
            assert!(f >= -1.5 && f < 1.5);
            let m = (x - f) / w;
            assert!((m - m.round()).abs() < 1e-12);
        }
        assert_eq!(fold(1.5, 3.0), -1.5);
    }
}
