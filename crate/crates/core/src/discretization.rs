//! Spatial discretizations seen by the time stepper.

use std::sync::Arc;

use crate::dg::reference::legendre_values;
use crate::dg::{DGField, DgOperator, FluxSpec, Mesh};
use crate::error::Result;
use crate::field::Field;
use crate::fourier::{solve_spectral, spectral_e_inf, FourierOperator, SpectralField};
use crate::quadrature::gauss_legendre;
use crate::poisson::{DgPoisson, ElectroState, LdgOptions, LdgSolver, MixedSolver};

/// Operators of the semi-discrete Hermite system for one spatial
/// representation.
pub trait Discretization: Send + Sync {
    type Field: Field;

    /// Fluxed transport of mode `n`, `−∂ₓg_n` in weak form.
    fn transport(&self, coeffs: &[Self::Field], alpha: f64, flux: &FluxSpec, n: usize) -> Result<Self::Field>;

    /// Source of mode `n` for the scaling rate `alpha_rate = α'`.
    fn source(
        &self,
        coeffs: &[Self::Field],
        alpha: f64,
        alpha_rate: f64,
        charge_mass_ratio: f64,
        e_field: &Self::Field,
        n: usize,
    ) -> Result<Self::Field>;

    /// Solves `∂ₓE = source` for a mean-free source.
    fn solve_poisson(&self, source: &Self::Field, scale: f64) -> Result<ElectroState<Self::Field>>;

    /// Discrete `‖E‖∞`.
    fn e_inf(&self, e_field: &Self::Field) -> f64;

    /// Constant function in the solution space.
    fn constant(&self, value: f64) -> Self::Field;

    /// Points at which initial data is sampled before [`Self::fit`].
    fn sample_points(&self) -> Vec<f64>;

    /// Field from values at [`Self::sample_points`]: L² projection for DG,
    /// discrete Fourier coefficients for the spectral method.
    fn fit(&self, values: &[f64]) -> Self::Field;

    fn project(&self, f: &dyn Fn(f64) -> f64) -> Self::Field {
        let values: Vec<f64> = self.sample_points().into_iter().map(f).collect();
        self.fit(&values)
    }

    /// Resolution length `ℓ` entering the CFL bound `Δt ≤ cfl·ℓ·α/√(2N_H)`.
    fn cfl_length(&self) -> f64;

    fn length(&self) -> f64;

    /// Short label for logs and manifests.
    fn describe(&self) -> String;
}

/// Modal DG in space with an LDG or mixed finite element Poisson solver.
#[derive(Debug, Clone)]
pub struct DgDiscretization {
    pub op: DgOperator,
    pub poisson: DgPoisson,
}

impl DgDiscretization {
    pub fn ldg(mesh: &Arc<Mesh>, opts: LdgOptions) -> Result<Self> {
        Ok(DgDiscretization {
            op: DgOperator::new(mesh),
            poisson: DgPoisson::Ldg(LdgSolver::new(mesh, opts)?),
        })
    }

    pub fn mixed(mesh: &Arc<Mesh>) -> Result<Self> {
        Ok(DgDiscretization {
            op: DgOperator::new(mesh),
            poisson: DgPoisson::Mixed(MixedSolver::new(mesh)?),
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        self.op.mesh()
    }

    /// Gauss points per cell for projecting initial data.
    fn init_points(&self) -> usize {
        (self.op.degree() + 1).max(12)
    }
}

impl Discretization for DgDiscretization {
    type Field = DGField;

    fn transport(&self, coeffs: &[DGField], alpha: f64, flux: &FluxSpec, n: usize) -> Result<DGField> {
        self.op.transport_raw(coeffs, alpha, flux, n)
    }

    fn source(
        &self,
        coeffs: &[DGField],
        alpha: f64,
        alpha_rate: f64,
        charge_mass_ratio: f64,
        e_field: &DGField,
        n: usize,
    ) -> Result<DGField> {
        self.op.source_raw(coeffs, alpha, alpha_rate, charge_mass_ratio, e_field, n)
    }

    fn solve_poisson(&self, source: &DGField, scale: f64) -> Result<ElectroState<DGField>> {
        self.poisson.solve(source, scale)
    }

    fn e_inf(&self, e_field: &DGField) -> f64 {
        e_field.sup_norm(e_field.degree() + 2)
    }

    fn constant(&self, value: f64) -> DGField {
        DGField::constant(self.mesh(), self.op.degree(), value)
    }

    fn sample_points(&self) -> Vec<f64> {
        let (xs, _) = gauss_legendre(self.init_points());
        let mesh = self.mesh();
        (0..mesh.n_cells)
            .flat_map(|cell| xs.iter().map(move |xi| mesh.map_to_physical(cell, *xi)))
            .collect()
    }

    fn fit(&self, values: &[f64]) -> DGField {
        let nq = self.init_points();
        let (xs, ws) = gauss_legendre(nq);
        let k = self.op.degree();
        let mut phi = vec![0.0; k + 1];
        let mut out = DGField::zeros(self.mesh(), k);
        for cell in 0..self.mesh().n_cells {
            let dst = out.cell_mut(cell);
            for (q, (xi, w)) in xs.iter().zip(&ws).enumerate() {
                legendre_values(*xi, &mut phi);
                let f = values[cell * nq + q];
                for (d, p) in dst.iter_mut().zip(&phi) {
                    *d += w * f * p;
                }
            }
        }
        out
    }

    fn cfl_length(&self) -> f64 {
        self.mesh().h_min() / (2 * self.op.degree() + 1) as f64
    }

    fn length(&self) -> f64 {
        self.mesh().length
    }

    fn describe(&self) -> String {
        let solver = match self.poisson {
            DgPoisson::Ldg(_) => "ldg",
            DgPoisson::Mixed(_) => "mixed",
        };
        format!(
            "dg(N_x={}, k={}, poisson={solver})",
            self.mesh().n_cells,
            self.op.degree()
        )
    }
}

/// Fourier Galerkin in space; the numerical flux is not used.
#[derive(Debug, Clone)]
pub struct FourierDiscretization {
    pub op: FourierOperator,
    /// Oversampling factor for `‖E‖∞`.
    pub oversample: usize,
}

impl FourierDiscretization {
    pub fn new(n_max: usize, length: f64) -> Result<Self> {
        Ok(FourierDiscretization {
            op: FourierOperator::new(n_max, length)?,
            oversample: 8,
        })
    }

    fn init_points(&self) -> usize {
        8 * (2 * self.op.n_max() + 1)
    }
}

impl Discretization for FourierDiscretization {
    type Field = SpectralField;

    fn transport(&self, coeffs: &[SpectralField], alpha: f64, _flux: &FluxSpec, n: usize) -> Result<SpectralField> {
        self.op.transport(coeffs, alpha, n)
    }

    fn source(
        &self,
        coeffs: &[SpectralField],
        alpha: f64,
        alpha_rate: f64,
        charge_mass_ratio: f64,
        e_field: &SpectralField,
        n: usize,
    ) -> Result<SpectralField> {
        self.op.source(coeffs, alpha, alpha_rate, charge_mass_ratio, e_field, n)
    }

    fn solve_poisson(&self, source: &SpectralField, scale: f64) -> Result<ElectroState<SpectralField>> {
        solve_spectral(source, scale)
    }

    fn e_inf(&self, e_field: &SpectralField) -> f64 {
        spectral_e_inf(e_field, self.oversample)
    }

    fn constant(&self, value: f64) -> SpectralField {
        SpectralField::constant(self.op.n_max(), self.op.length(), value)
    }

    fn sample_points(&self) -> Vec<f64> {
        let m = self.init_points();
        (0..m).map(|i| self.op.length() * i as f64 / m as f64).collect()
    }

    fn fit(&self, values: &[f64]) -> SpectralField {
        SpectralField::from_samples(values, self.op.n_max(), self.op.length())
    }

    fn cfl_length(&self) -> f64 {
        self.op.length() / (2.0 * std::f64::consts::PI * self.op.n_max() as f64)
    }

    fn length(&self) -> f64 {
        self.op.length()
    }

    fn describe(&self) -> String {
        format!("fourier(N_x={})", self.op.n_max())
    }
}
