//! Gauss–Legendre and Gauss–Hermite rules computed by Newton iteration on the
//! three-term recurrences.

use std::f64::consts::PI;

const NEWTON_TOL: f64 = 1e-15;
const MAX_NEWTON: usize = 100;

/// Gauss–Legendre rule on `[-1, 1]` with `n` points, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..MAX_NEWTON {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Classical Legendre `P_n(z)` and its derivative.
fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 0.0;
    for j in 1..=n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p2) / j as f64;
    }
    let d = n as f64 * (z * p0 - p1) / (z * z - 1.0);
    (p0, d)
}

/// Gauss–Hermite rule for the weight `e^{-x²}`.
///
/// Returns ascending nodes, the standard weights `w_i`, and the scaled weights
/// `w_i e^{x_i²}` evaluated in log space so that they stay accurate far out in
/// the tails.
pub fn gauss_hermite(n: usize) -> GaussHermite {
    assert!(n > 0, "Gauss-Hermite rule needs at least one point");
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    // Roots are separated by at least π/√(2n+1); bracket the nonnegative ones
    // by a sign scan finer than that and polish each with safeguarded Newton.
    let edge = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let step = 0.1 * PI / (2.0 * n as f64 + 1.0).sqrt();
    let mut brackets = Vec::with_capacity(n / 2 + 1);
    let mut a = if n % 2 == 1 { step * 0.5 } else { 0.0 };
    let mut fa = hermite_function_with_derivative(n, a, pim4).0;
    while a < edge {
        let b = a + step;
        let fb = hermite_function_with_derivative(n, b, pim4).0;
        if fa == 0.0 || fa * fb < 0.0 {
            brackets.push((a, b));
        }
        a = b;
        fa = fb;
    }
    let m = n / 2;
    assert_eq!(brackets.len(), m, "Gauss-Hermite root scan missed roots");
    for (i, (lo, hi)) in brackets.into_iter().rev().enumerate() {
        let (mut lo, mut hi) = (lo, hi);
        let f_lo = hermite_function_with_derivative(n, lo, pim4).0;
        let mut z = 0.5 * (lo + hi);
        let mut pp = 0.0;
        for _ in 0..MAX_NEWTON {
            let (p, d) = hermite_function_with_derivative(n, z, pim4);
            pp = d;
            if p == 0.0 {
                break;
            }
            if (p > 0.0) == (f_lo > 0.0) {
                lo = z;
            } else {
                hi = z;
            }
            let mut next = z - p / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let dz = next - z;
            z = next;
            if dz.abs() <= NEWTON_TOL * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = hermite_function_with_derivative(n, z, pim4);
        if d != 0.0 {
            pp = d;
        }
        // With Hermite functions ψ = p e^{-z²/2}: w = 2 e^{-z²}/ψ'², so the
        // scaled weight w e^{z²} = 2/ψ'² needs no exponential at all.
        let log_ws = 2f64.ln() - 2.0 * pp.abs().ln();
        let ws = log_ws.exp();
        let w = (log_ws - z * z).exp();
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
        scaled[n - 1 - i] = ws;
        scaled[i] = ws;
    }
    if n % 2 == 1 {
        let (_, d) = hermite_function_with_derivative(n, 0.0, pim4);
        let ws = 2.0 / (d * d);
        nodes[n / 2] = 0.0;
        weights[n / 2] = ws;
        scaled[n / 2] = ws;
    }
    GaussHermite {
        nodes,
        weights,
        scaled_weights: scaled,
    }
}

/// Nodes and weights of a Gauss–Hermite rule.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `w_i e^{x_i²}`: weights for integrating `g(x)` directly rather than
    /// `g(x) e^{-x²}`.
    pub scaled_weights: Vec<f64>,
}

/// Orthonormal Hermite functions `p_j(z) e^{-z²/2}` at `j = n` together with
/// `√(2n) p_{n−1}(z) e^{-z²/2}`, the derivative of `p_n` times the same
/// factor. Carrying the Gaussian keeps the recurrence in range for large `n`.
fn hermite_function_with_derivative(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4 * (-0.5 * z * z).exp();
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}
