//! Mixed finite elements: continuous piecewise `P_{k+1}` electric field paired
//! with a discontinuous `P_k` potential.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{check_compatibility, fluctuation, DenseFactor, ElectroState};
use crate::dg::reference::{legendre_values, stiffness};
use crate::dg::{DGField, Mesh};
use crate::error::Result;
use crate::quadrature::gauss_legendre;

/// Factorized mixed system. The continuous space is spanned by periodic hat
/// functions at the edges plus `k` interior bubbles per cell; each local shape
/// is stored through its Legendre coefficients up to degree `k+1`.
#[derive(Debug, Clone)]
pub struct MixedSolver {
    mesh: Arc<Mesh>,
    /// Local shape functions (hat left, hat right, bubbles) as rows of
    /// `k+2` Legendre coefficients.
    shapes: Vec<Vec<f64>>,
    factor: DenseFactor,
}

impl MixedSolver {
    pub fn new(mesh: &Arc<Mesh>) -> Result<Self> {
        let k = mesh.degree;
        let nb = k + 1;
        let ne = k + 2;
        let n = mesh.n_cells;
        let n_w = n * (k + 1);
        let n_v = n * nb;
        let size = n_w + n_v + 1;
        let shapes = local_shapes(k);
        // D[r][p] = ∫ φ_p φ_r' with p ≤ k, r ≤ k+1
        let d = stiffness(k, k + 1);

        let mut a = DMatrix::<f64>::zeros(size, size);
        let phi = |i: usize, p: usize| n_w + i * nb + p;
        for i in 0..n {
            let h = mesh.width(i);
            let globals = global_indices(i, n, k);
            for (s, gs) in globals.iter().enumerate() {
                // ∫Φ η_s' − ∫E η_s = 0
                for p in 0..nb {
                    let v: f64 = (0..ne).map(|r| shapes[s][r] * d[r * nb + p]).sum();
                    a[(*gs, phi(i, p))] += v;
                }
                for (s2, gs2) in globals.iter().enumerate() {
                    let m: f64 = (0..ne).map(|r| shapes[s][r] * shapes[s2][r]).sum();
                    a[(*gs, *gs2)] -= 0.5 * h * m;
                }
            }
            // ∫E' φ_q + λ∫φ_q = ∫(C₀−ρ₀)φ_q
            for q in 0..nb {
                let row = phi(i, q);
                for (s2, gs2) in globals.iter().enumerate() {
                    let v: f64 = (0..ne).map(|r| shapes[s2][r] * d[r * nb + q]).sum();
                    a[(row, *gs2)] += v;
                }
            }
            let mean_weight = h / 2f64.sqrt();
            a[(size - 1, phi(i, 0))] = mean_weight;
            a[(phi(i, 0), size - 1)] = mean_weight;
        }
        let factor = DenseFactor::new(a)?;
        Ok(MixedSolver {
            mesh: Arc::clone(mesh),
            shapes,
            factor,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    /// Solves for `E ∈ W_h^{k+1}` (returned as a degree `k+1` DG field) and
    /// `Φ ∈ V_h^k`.
    pub fn solve(&self, source: &DGField, scale: f64) -> Result<ElectroState<DGField>> {
        check_compatibility(source, scale)?;
        let k = self.mesh.degree;
        let nb = k + 1;
        let n = self.mesh.n_cells;
        let n_w = n * (k + 1);
        let mut rhs = DVector::<f64>::zeros(n_w + n * nb + 1);
        for i in 0..n {
            let h = self.mesh.width(i);
            for (q, c) in source.cell(i).iter().take(nb).enumerate() {
                rhs[n_w + i * nb + q] = 0.5 * h * c;
            }
        }
        let sol = self.factor.solve(&rhs)?;
        let potential = DGField::from_coeffs(&self.mesh, k, sol.as_slice()[n_w..n_w + n * nb].to_vec())?;
        let mut e_field = DGField::zeros(&self.mesh, k + 1);
        for i in 0..n {
            let globals = global_indices(i, n, k);
            let dst = e_field.cell_mut(i);
            for (s, g) in globals.iter().enumerate() {
                for (d, sh) in dst.iter_mut().zip(&self.shapes[s]) {
                    *d += sol[*g] * sh;
                }
            }
        }
        Ok(ElectroState {
            e_field,
            potential,
            energy_jump_term: 0.0,
        })
    }
}

/// Global indices of the local shapes of `cell`: left hat, right hat, bubbles.
fn global_indices(cell: usize, n_cells: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k + 2);
    out.push(cell);
    out.push((cell + 1) % n_cells);
    for m in 0..k {
        out.push(n_cells + cell * k + m);
    }
    out
}

/// Legendre coefficients (degree `k+1`) of `(1−ξ)/2`, `(1+ξ)/2` and the
/// bubbles `P_{m+2} − P_m`, `m < k`.
fn local_shapes(k: usize) -> Vec<Vec<f64>> {
    let ne = k + 2;
    let (xs, ws) = gauss_legendre(k + 3);
    let mut phi = vec![0.0; ne];
    let project = |f: &dyn Fn(f64) -> f64, phi: &mut Vec<f64>| -> Vec<f64> {
        let mut out = vec![0.0; ne];
        for (x, w) in xs.iter().zip(&ws) {
            legendre_values(*x, phi);
            let fx = f(*x);
            for (o, p) in out.iter_mut().zip(phi.iter()) {
                *o += w * fx * p;
            }
        }
        out
    };
    let mut shapes = vec![
        project(&|x| 0.5 * (1.0 - x), &mut phi),
        project(&|x| 0.5 * (1.0 + x), &mut phi),
    ];
    for m in 0..k {
        let bubble = move |x: f64| classical_legendre(m + 2, x) - classical_legendre(m, x);
        shapes.push(project(&bubble, &mut phi));
    }
    shapes
}

fn classical_legendre(n: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = 0.0;
    for j in 1..=n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p2) / j as f64;
    }
    p0
}

/// One-shot mixed solve of `∂ₓE = C₀ − ρ₀`.
pub fn solve_mixed(c0: &DGField, rho0: f64) -> Result<ElectroState<DGField>> {
    let solver = MixedSolver::new(c0.mesh())?;
    let scale = c0.l2_inner(c0)?.sqrt() * c0.mesh().length.sqrt() + rho0.abs() * c0.mesh().length;
    solver.solve(&fluctuation(c0, rho0), scale)
}
