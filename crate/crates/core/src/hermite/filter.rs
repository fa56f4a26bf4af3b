//! Hou–Li exponential filter over the Hermite index.

use crate::field::Field;

/// Exponent and strength `β` of the filter `e^{−β|s|^β}`.
pub const HOU_LI_ORDER: f64 = 36.0;

/// `σ(s) = 1` for `|s| ≤ 2/3`, `e^{−36 |s|^{36}}` beyond.
pub fn houli_sigma(s: f64) -> f64 {
    let a = s.abs();
    if a <= 2.0 / 3.0 {
        1.0
    } else {
        (-HOU_LI_ORDER * a.powf(HOU_LI_ORDER)).exp()
    }
}

/// Multiplies `C_n` by `σ(n/N_H)`. The identity when `N_H < 4`; modes with
/// `3n ≤ 2N_H` are left untouched bit for bit.
pub fn houli_filter<F: Field>(coeffs: &mut [F]) {
    let n_modes = coeffs.len();
    if n_modes < 4 {
        return;
    }
    for (n, c) in coeffs.iter_mut().enumerate() {
        if 3 * n <= 2 * n_modes {
            continue;
        }
        c.scale(houli_sigma(n as f64 / n_modes as f64));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        assert_eq!(houli_sigma(0.5), 1.0);
        assert_eq!(houli_sigma(2.0 / 3.0), 1.0);
        let at_one = houli_sigma(1.0);
        assert!(((at_one - (-36f64).exp()) / (-36f64).exp()).abs() < 1e-15);
        assert!((at_one - 2.319_522_830_243_569e-16).abs() < 1e-28);
        let expected = (-36.0 * 0.8f64.powi(36)).exp();
        assert!((houli_sigma(0.8) - expected).abs() < 1e-15);
        assert!((houli_sigma(0.8) - 0.988_385_309_456_694_8).abs() < 1e-12);
    }
}
