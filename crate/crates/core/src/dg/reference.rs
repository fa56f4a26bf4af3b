//! Orthonormal Legendre basis on the reference cell `[-1, 1]` and the exact
//! reference integrals built from it.

use crate::quadrature::gauss_legendre;

/// `φ_p(ξ) = √((2p+1)/2) P_p(ξ)` for `p = 0..out.len()`.
pub fn legendre_values(xi: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for j in 0..n {
        out[j] = p * ((2 * j + 1) as f64 / 2.0).sqrt();
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * xi * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
}

/// `dφ_p/dξ` for `p = 0..out.len()`, using `P'_{p+1} = P'_{p-1} + (2p+1) P_p`.
pub fn legendre_derivatives(xi: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let mut plain = vec![0.0; n];
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for (j, slot) in plain.iter_mut().enumerate() {
        *slot = p;
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * xi * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    let mut dplain = vec![0.0; n];
    for j in 1..n {
        let before = if j >= 2 { dplain[j - 2] } else { 0.0 };
        dplain[j] = before + (2 * j - 1) as f64 * plain[j - 1];
    }
    for j in 0..n {
        out[j] = dplain[j] * ((2 * j + 1) as f64 / 2.0).sqrt();
    }
}

/// `φ_p(−1)`.
pub fn left_value(p: usize) -> f64 {
    let s = ((2 * p + 1) as f64 / 2.0).sqrt();
    if p.is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// `φ_p(1)`.
pub fn right_value(p: usize) -> f64 {
    ((2 * p + 1) as f64 / 2.0).sqrt()
}

/// `D[q][p] = ∫ φ_p φ_q' dξ` for `p ≤ trial_degree`, `q ≤ test_degree`,
/// stored row-major with `trial_degree + 1` columns.
pub fn stiffness(trial_degree: usize, test_degree: usize) -> Vec<f64> {
    let nt = trial_degree + 1;
    let nq = test_degree + 1;
    let (xs, ws) = gauss_legendre((trial_degree + test_degree) / 2 + 2);
    let mut phi = vec![0.0; nt];
    let mut dphi = vec![0.0; nq];
    let mut out = vec![0.0; nq * nt];
    for (x, w) in xs.iter().zip(&ws) {
        legendre_values(*x, &mut phi);
        legendre_derivatives(*x, &mut dphi);
        for q in 0..nq {
            for p in 0..nt {
                out[q * nt + p] += w * phi[p] * dphi[q];
            }
        }
    }
    out
}

/// `T[a][q][r] = ∫ φ_a φ_q φ_r dξ` with `a ≤ deg_a`, `q, r ≤ deg`, flattened
/// as `(a * (deg+1) + q) * (deg+1) + r`.
pub fn triple_products(deg_a: usize, deg: usize) -> Vec<f64> {
    let na = deg_a + 1;
    let n = deg + 1;
    let (xs, ws) = gauss_legendre((deg_a + 2 * deg) / 2 + 2);
    let mut pa = vec![0.0; na];
    let mut pb = vec![0.0; n];
    let mut out = vec![0.0; na * n * n];
    for (x, w) in xs.iter().zip(&ws) {
        legendre_values(*x, &mut pa);
        legendre_values(*x, &mut pb);
        for a in 0..na {
            for q in 0..n {
                let wq = w * pa[a] * pb[q];
                for r in 0..n {
                    out[(a * n + q) * n + r] += wq * pb[r];
                }
            }
        }
    }
    for v in out.iter_mut() {
        if v.abs() < 1e-15 {
            *v = 0.0;
        }
    }
    out
}
