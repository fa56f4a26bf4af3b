//! Local DG discretization with fluxes `Φ̂ = {Φ}` and `Ê = {E} − β[Φ]`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::{check_compatibility, fluctuation, DenseFactor, ElectroState, LdgOptions};
use crate::dg::reference::{left_value, right_value, stiffness};
use crate::dg::{DGField, Mesh};
use crate::error::Result;

/// Factorized LDG system for one mesh. Unknowns are ordered
/// `[Φ (cell-major), E (cell-major), λ]`; the multiplier `λ` enforces
/// `∫Φ = 0` and absorbs the mean of the source.
#[derive(Debug, Clone)]
pub struct LdgSolver {
    mesh: Arc<Mesh>,
    opts: LdgOptions,
    factor: DenseFactor,
}

impl LdgSolver {
    pub fn new(mesh: &Arc<Mesh>, opts: LdgOptions) -> Result<Self> {
        Self::assemble(mesh, opts, true)
    }

    /// Assembles the system, optionally without the zero-mean constraint on
    /// `Φ`; the ungauged system is singular and fails to factor.
    pub fn assemble(mesh: &Arc<Mesh>, opts: LdgOptions, gauge: bool) -> Result<Self> {
        opts.validate()?;
        let k = mesh.degree;
        let nb = k + 1;
        let n = mesh.n_cells;
        let block = n * nb;
        let size = 2 * block + usize::from(gauge);
        let s = stiffness(k, k);
        let lv: Vec<f64> = (0..nb).map(left_value).collect();
        let rv: Vec<f64> = (0..nb).map(right_value).collect();
        let phi = |i: usize, p: usize| i * nb + p;
        let e = |i: usize, p: usize| block + i * nb + p;

        let mut a = DMatrix::<f64>::zeros(size, size);
        for i in 0..n {
            let h = mesh.width(i);
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            let beta_r = opts.beta_at(h, mesh.width(ip));
            let beta_l = opts.beta_at(mesh.width(im), h);
            for q in 0..nb {
                // ∫Φφ_q' − Φ̂_R φ_q(1) + Φ̂_L φ_q(−1) − ∫Eφ_q = 0
                let row = phi(i, q);
                for p in 0..nb {
                    a[(row, phi(i, p))] += s[q * nb + p];
                    a[(row, phi(i, p))] -= 0.5 * rv[p] * rv[q];
                    a[(row, phi(ip, p))] -= 0.5 * lv[p] * rv[q];
                    a[(row, phi(im, p))] += 0.5 * rv[p] * lv[q];
                    a[(row, phi(i, p))] += 0.5 * lv[p] * lv[q];
                }
                a[(row, e(i, q))] -= 0.5 * h;

                // −∫Eφ_q' + Ê_R φ_q(1) − Ê_L φ_q(−1) = ∫(C₀−ρ₀)φ_q
                let row = e(i, q);
                for p in 0..nb {
                    a[(row, e(i, p))] -= s[q * nb + p];
                    // Ê_R = ½(E_i(1) + E_{i+1}(−1)) − β_R(Φ_{i+1}(−1) − Φ_i(1))
                    a[(row, e(i, p))] += 0.5 * rv[p] * rv[q];
                    a[(row, e(ip, p))] += 0.5 * lv[p] * rv[q];
                    a[(row, phi(ip, p))] -= beta_r * lv[p] * rv[q];
                    a[(row, phi(i, p))] += beta_r * rv[p] * rv[q];
                    // Ê_L = ½(E_{i−1}(1) + E_i(−1)) − β_L(Φ_i(−1) − Φ_{i−1}(1))
                    a[(row, e(im, p))] -= 0.5 * rv[p] * lv[q];
                    a[(row, e(i, p))] -= 0.5 * lv[p] * lv[q];
                    a[(row, phi(i, p))] += beta_l * lv[p] * lv[q];
                    a[(row, phi(im, p))] -= beta_l * rv[p] * lv[q];
                }
            }
            if gauge {
                let mean_weight = h / 2f64.sqrt();
                a[(2 * block, phi(i, 0))] = mean_weight;
                a[(e(i, 0), 2 * block)] = mean_weight;
            }
        }
        let factor = DenseFactor::new(a)?;
        Ok(LdgSolver {
            mesh: Arc::clone(mesh),
            opts,
            factor,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn options(&self) -> &LdgOptions {
        &self.opts
    }

    /// Solves for `(E, Φ)` given the mean-free source `C₀ − ρ₀`.
    pub fn solve(&self, source: &DGField, scale: f64) -> Result<ElectroState<DGField>> {
        check_compatibility(source, scale)?;
        let k = self.mesh.degree;
        let nb = k + 1;
        let block = self.mesh.n_cells * nb;
        let mut rhs = DVector::<f64>::zeros(2 * block + 1);
        for i in 0..self.mesh.n_cells {
            let h = self.mesh.width(i);
            for (q, c) in source.cell(i).iter().take(nb).enumerate() {
                rhs[block + i * nb + q] = 0.5 * h * c;
            }
        }
        let sol = self.factor.solve(&rhs)?;
        let potential = DGField::from_coeffs(&self.mesh, k, sol.as_slice()[..block].to_vec())?;
        let e_field = DGField::from_coeffs(&self.mesh, k, sol.as_slice()[block..2 * block].to_vec())?;
        let energy_jump_term = self.jump_term(&potential);
        Ok(ElectroState {
            e_field,
            potential,
            energy_jump_term,
        })
    }

    /// `Σ_edges β [Φ]²`.
    pub fn jump_term(&self, potential: &DGField) -> f64 {
        let n = self.mesh.n_cells;
        (0..n)
            .map(|edge| {
                let left = (edge + n - 1) % n;
                let beta = self.opts.beta_at(self.mesh.width(left), self.mesh.width(edge));
                let jump = potential.traces(edge).jump;
                beta * jump * jump
            })
            .sum()
    }
}

/// One-shot LDG solve of `∂ₓE = C₀ − ρ₀`.
pub fn solve_ldg(c0: &DGField, rho0: f64, opts: LdgOptions) -> Result<ElectroState<DGField>> {
    let solver = LdgSolver::new(c0.mesh(), opts)?;
    let scale = c0.l2_inner(c0)?.sqrt() * c0.mesh().length.sqrt() + rho0.abs() * c0.mesh().length;
    solver.solve(&fluctuation(c0, rho0), scale)
}
