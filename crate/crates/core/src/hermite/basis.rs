//! Normalized Hermite polynomials and the scaled asymmetric Hermite functions.

use std::f64::consts::PI;

/// `H_n(ξ)` through the normalized recurrence
/// `√n H_n = ξ H_{n-1} − √(n−1) H_{n−2}`, `H_{-1} = 0`, `H_0 = 1`.
pub fn hermite_eval(n: usize, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 1..=n {
        let jf = j as f64;
        let next = (xi * cur - (jf - 1.0).sqrt() * prev) / jf.sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(ξ) .. H_{n_modes-1}(ξ)` written into `out`.
pub fn hermite_all(xi: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = xi;
    }
    for j in 2..out.len() {
        let jf = j as f64;
        out[j] = (xi * out[j - 1] - (jf - 1.0).sqrt() * out[j - 2]) / jf.sqrt();
    }
}

/// Scaled Hermite function `Ψ_n(v) = α H_n(αv) e^{−(αv)²/2} / √(2π)`.
pub fn basis_eval(n: usize, alpha: f64, v: f64) -> f64 {
    let xi = alpha * v;
    alpha * hermite_eval(n, xi) * gaussian(xi)
}

/// `Ψ_0 .. Ψ_{N-1}` at `v`, written into `out`.
pub fn basis_all(alpha: f64, v: f64, out: &mut [f64]) {
    let xi = alpha * v;
    hermite_all(xi, out);
    let g = alpha * gaussian(xi);
    for value in out.iter_mut() {
        *value *= g;
    }
}

#[inline]
fn gaussian(xi: f64) -> f64 {
    (-0.5 * xi * xi).exp() / (2.0 * PI).sqrt()
}
