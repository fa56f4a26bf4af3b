//! Periodic 1D Poisson problem `∂ₓE = C₀ − ρ₀`, `E = −∂ₓΦ`, discretized by a
//! local DG method or by mixed finite elements, with a zero-mean potential.

mod ldg;
mod mixed;

pub use ldg::{solve_ldg, LdgSolver};
pub use mixed::{solve_mixed, MixedSolver};

use std::sync::Arc;

use crate::dg::{DGField, Mesh};
use crate::error::{Error, Result};
use crate::field::Field;

/// Electric field and potential in the active spatial representation.
#[derive(Debug, Clone)]
pub struct ElectroState<F> {
    pub e_field: F,
    pub potential: F,
    /// `β Σ_j [Φ]²` for LDG; zero for conforming or spectral fields.
    pub energy_jump_term: f64,
}

/// Penalty scaling of the LDG flux `Ê = {E} − β[Φ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMode {
    Constant,
    OverH,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdgOptions {
    pub beta_mode: BetaMode,
    pub beta_value: f64,
}

impl Default for LdgOptions {
    fn default() -> Self {
        LdgOptions {
            beta_mode: BetaMode::Constant,
            beta_value: 1.0,
        }
    }
}

impl LdgOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_value > 0.0 && self.beta_value.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta_value
            )));
        }
        Ok(())
    }

    /// Penalty at the edge whose adjacent cells have widths `h_left`, `h_right`.
    pub fn beta_at(&self, h_left: f64, h_right: f64) -> f64 {
        match self.beta_mode {
            BetaMode::Constant => self.beta_value,
            BetaMode::OverH => self.beta_value / (0.5 * (h_left + h_right)),
        }
    }
}

/// `ρ₀ = (1/L) ∫ C₀ dx`.
pub fn compute_rho0(c0: &DGField, mesh: &Mesh) -> f64 {
    c0.integral() / mesh.length
}

/// `max |E|` over Gauss points and traces of every cell.
pub fn e_infinity_norm(es: &ElectroState<DGField>, _mesh: &Mesh) -> f64 {
    es.e_field.sup_norm(es.e_field.degree() + 2)
}

/// Rejects sources whose mean is not zero relative to `scale`.
pub(crate) fn check_compatibility(source: &DGField, scale: f64) -> Result<()> {
    let residual = source.integral();
    if residual.abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::Compatibility { residual });
    }
    Ok(())
}

/// `C₀ − ρ₀` as a DG field.
pub(crate) fn fluctuation(c0: &DGField, rho0: f64) -> DGField {
    let mut src = c0.clone();
    src.add_scaled(-1.0, &DGField::constant(c0.mesh(), c0.degree(), rho0));
    src
}

/// Either discrete Poisson solver for the DG discretization.
#[derive(Debug, Clone)]
pub enum DgPoisson {
    Ldg(LdgSolver),
    Mixed(MixedSolver),
}

impl DgPoisson {
    pub fn mesh(&self) -> &Arc<Mesh> {
        match self {
            DgPoisson::Ldg(s) => s.mesh(),
            DgPoisson::Mixed(s) => s.mesh(),
        }
    }

    /// Solves with a mean-free source; `scale` sets the compatibility tolerance.
    pub fn solve(&self, source: &DGField, scale: f64) -> Result<ElectroState<DGField>> {
        match self {
            DgPoisson::Ldg(s) => s.solve(source, scale),
            DgPoisson::Mixed(s) => s.solve(source, scale),
        }
    }

    /// Contribution of the potential jumps to the conserved energy, `β Σ [Φ]²`.
    pub fn jump_term(&self, potential: &DGField) -> f64 {
        match self {
            DgPoisson::Ldg(s) => s.jump_term(potential),
            DgPoisson::Mixed(_) => 0.0,
        }
    }

    pub fn electric_degree(&self) -> usize {
        match self {
            DgPoisson::Ldg(s) => s.mesh().degree,
            DgPoisson::Mixed(s) => s.mesh().degree + 1,
        }
    }
}

/// Dense LU of a bordered system, solved by nalgebra.
#[derive(Debug, Clone)]
pub(crate) struct DenseFactor {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl DenseFactor {
    pub(crate) fn new(matrix: nalgebra::DMatrix<f64>) -> Result<Self> {
        let lu = matrix.lu();
        let u = lu.u();
        let max_diag = u.diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let min_diag = u.diagonal().iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
        if !(min_diag > 1e-13 * max_diag) {
            return Err(Error::SingularSystem);
        }
        Ok(DenseFactor { lu })
    }

    pub(crate) fn solve(&self, rhs: &nalgebra::DVector<f64>) -> Result<nalgebra::DVector<f64>> {
        self.lu.solve(rhs).ok_or(Error::SingularSystem)
    }
}
