//! Semi-discrete DG operators of the Hermite mode system: the fluxed transport
//! `a_n(g_n, ·)` and the source `b_n`, both returned mass-inverted.

use std::sync::Arc;

use super::reference::{left_value, right_value, stiffness, triple_products};
use super::{DGField, Mesh};
use crate::error::{Error, Result};
use crate::hermite::{alpha_rhs, HermiteState};

/// Per-mode numerical viscosity of the Lax–Friedrichs flux: `δ_0 = 0`
/// (centered), `δ_n = √N_H / α` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSpec {
    pub delta: Vec<f64>,
}

impl FluxSpec {
    pub fn lax_friedrichs(n_modes: usize, alpha: f64) -> Self {
        let mut spec = FluxSpec {
            delta: vec![0.0; n_modes],
        };
        spec.refresh(alpha);
        spec
    }

    pub fn refresh(&mut self, alpha: f64) {
        let d = (self.delta.len() as f64).sqrt() / alpha;
        for (n, slot) in self.delta.iter_mut().enumerate() {
            *slot = if n == 0 { 0.0 } else { d };
        }
    }
}

/// Precomputed reference-cell integrals for one mesh and degree.
#[derive(Debug, Clone)]
pub struct DgOperator {
    mesh: Arc<Mesh>,
    degree: usize,
    /// `∫ φ_p φ_q'` indexed `[q][p]`.
    stiffness: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    /// Triple products for a field of degree `k` and of degree `k+1`.
    triple_same: Vec<f64>,
    triple_raised: Vec<f64>,
}

impl DgOperator {
    pub fn new(mesh: &Arc<Mesh>) -> Self {
        let k = mesh.degree;
        DgOperator {
            mesh: Arc::clone(mesh),
            degree: k,
            stiffness: stiffness(k, k),
            left: (0..=k).map(left_value).collect(),
            right: (0..=k).map(right_value).collect(),
            triple_same: triple_products(k, k),
            triple_raised: triple_products(k + 1, k),
        }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Mass-inverted `−a_n(g_n, ·)` with
    /// `g_n = (√(n+1) C_{n+1} + √n C_{n−1})/α` and flux
    /// `ĝ_n = ½[g⁻ + g⁺ − δ_n (C_n⁺ − C_n⁻)]`.
    pub fn transport(&self, state: &HermiteState<DGField>, flux: &FluxSpec, n: usize) -> Result<DGField> {
        self.transport_raw(&state.coeffs, state.alpha(), flux, n)
    }

    pub(crate) fn transport_raw(&self, coeffs: &[DGField], alpha: f64, flux: &FluxSpec, n: usize) -> Result<DGField> {
        let n_modes = coeffs.len();
        if n >= n_modes {
            return Err(Error::ModeOutOfRange { n, n_modes });
        }
        let nb = self.degree + 1;
        let n_cells = self.mesh.n_cells;

        let mut g = vec![0.0; n_cells * nb];
        if n + 1 < n_modes {
            let s = ((n + 1) as f64).sqrt() / alpha;
            for (gi, c) in g.iter_mut().zip(coeffs[n + 1].coeffs()) {
                *gi += s * c;
            }
        }
        if n >= 1 {
            let s = (n as f64).sqrt() / alpha;
            for (gi, c) in g.iter_mut().zip(coeffs[n - 1].coeffs()) {
                *gi += s * c;
            }
        }
        let cn = coeffs[n].coeffs();
        let delta = flux.delta.get(n).copied().unwrap_or(0.0);

        let trace = |data: &[f64], cell: usize, side: &[f64]| -> f64 {
            data[cell * nb..(cell + 1) * nb]
                .iter()
                .zip(side)
                .map(|(a, b)| a * b)
                .sum::<f64>()
        };

        // flux[e] lives at the left edge of cell e.
        let mut fluxes = vec![0.0; n_cells];
        for (e, slot) in fluxes.iter_mut().enumerate() {
            let l = (e + n_cells - 1) % n_cells;
            let g_minus = trace(&g, l, &self.right);
            let g_plus = trace(&g, e, &self.left);
            let c_minus = trace(cn, l, &self.right);
            let c_plus = trace(cn, e, &self.left);
            *slot = 0.5 * (g_minus + g_plus - delta * (c_plus - c_minus));
        }

        let mut out = DGField::zeros(&self.mesh, self.degree);
        for cell in 0..n_cells {
            let scale = 2.0 / self.mesh.width(cell);
            let gc = &g[cell * nb..(cell + 1) * nb];
            let f_left = fluxes[cell];
            let f_right = fluxes[(cell + 1) % n_cells];
            let dst = out.cell_mut(cell);
            for q in 0..nb {
                let vol: f64 = (0..nb).map(|p| self.stiffness[q * nb + p] * gc[p]).sum();
                dst[q] = scale * (vol - f_right * self.right[q] + f_left * self.left[q]);
            }
        }
        Ok(out)
    }

    /// Mass-inverted `−b_n`:
    /// `(I/α)(n C_n + √((n−1)n) C_{n−2}) + (q/m) α √n Π(E C_{n−1})`, where
    /// `I = I(α, e_inf)` and `Π` is the exact L² projection onto `V_h^k`.
    pub fn source(&self, state: &HermiteState<DGField>, e_field: &DGField, e_inf: f64, n: usize) -> Result<DGField> {
        let rate = alpha_rhs(state.alpha(), e_inf, &state.params);
        self.source_raw(&state.coeffs, state.alpha(), rate, state.params.charge_mass_ratio, e_field, n)
    }

    pub(crate) fn source_raw(
        &self,
        coeffs: &[DGField],
        alpha: f64,
        alpha_rate: f64,
        charge_mass_ratio: f64,
        e_field: &DGField,
        n: usize,
    ) -> Result<DGField> {
        let n_modes = coeffs.len();
        if n >= n_modes {
            return Err(Error::ModeOutOfRange { n, n_modes });
        }
        let mut out = DGField::zeros(&self.mesh, self.degree);
        if n == 0 {
            return Ok(out);
        }
        let nf = n as f64;
        if alpha_rate != 0.0 {
            let r = alpha_rate / alpha;
            out.add_scaled_coeffs(r * nf, &coeffs[n]);
            if n >= 2 {
                out.add_scaled_coeffs(r * ((nf - 1.0) * nf).sqrt(), &coeffs[n - 2]);
            }
        }
        let coupling = charge_mass_ratio * alpha * nf.sqrt();
        if coupling != 0.0 {
            self.add_product(&mut out, coupling, e_field, &coeffs[n - 1])?;
        }
        Ok(out)
    }

    /// `out += a Π(E u)`.
    fn add_product(&self, out: &mut DGField, a: f64, e_field: &DGField, u: &DGField) -> Result<()> {
        if !e_field.same_mesh(u) {
            return Err(Error::MeshMismatch);
        }
        let k = self.degree;
        let nb = k + 1;
        let (tensor, ne) = match e_field.degree() {
            d if d == k => (&self.triple_same, k + 1),
            d if d == k + 1 => (&self.triple_raised, k + 2),
            d => {
                return Err(Error::InvalidParameter(format!(
                    "electric field degree {d} incompatible with solution degree {k}"
                )))
            }
        };
        for cell in 0..self.mesh.n_cells {
            let ec = e_field.cell(cell);
            let uc = u.cell(cell);
            let dst = out.cell_mut(cell);
            for (ai, e) in ec.iter().enumerate().take(ne) {
                if *e == 0.0 {
                    continue;
                }
                for (q, uq) in uc.iter().enumerate() {
                    let w = a * e * uq;
                    if w == 0.0 {
                        continue;
                    }
                    let row = &tensor[(ai * nb + q) * nb..(ai * nb + q + 1) * nb];
                    for (d, t) in dst.iter_mut().zip(row) {
                        *d += w * t;
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of Gauss points per cell used for sup norms.
    pub fn sup_norm_points(&self) -> usize {
        self.degree + 2
    }
}

impl DGField {
    fn add_scaled_coeffs(&mut self, a: f64, other: &DGField) {
        for (x, y) in self.coeffs_mut().iter_mut().zip(other.coeffs()) {
            *x += a * y;
        }
    }
}
