//! Velocity discretization: the time-rescaled, asymmetrically weighted Hermite
//! basis, projection of distributions onto it, velocity moments, the weighted
//! L² norm and the dynamics of the scaling factor α.

mod basis;
mod filter;

pub use basis::{basis_all, basis_eval, hermite_all, hermite_eval};
pub use filter::{houli_filter, houli_sigma, HOU_LI_ORDER};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quadrature::gauss_hermite;

/// Physical and truncation parameters of one species' Hermite expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteParams {
    /// Number of Hermite modes `N_H`.
    pub n_modes: usize,
    /// Initial scaling `α₀` (inverse velocity).
    pub alpha0: f64,
    /// Free stability parameter `γ` of the α dynamics.
    pub gamma: f64,
    /// `q/m` of the species in normalized units.
    pub charge_mass_ratio: f64,
}

impl HermiteParams {
    pub fn new(n_modes: usize, alpha0: f64, gamma: f64, charge_mass_ratio: f64) -> Result<Self> {
        let p = HermiteParams {
            n_modes,
            alpha0,
            gamma,
            charge_mass_ratio,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidParameter("n_modes must be at least 1".into()));
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha0 must be positive, got {}",
                self.alpha0
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !self.charge_mass_ratio.is_finite() {
            return Err(Error::InvalidParameter("charge_mass_ratio must be finite".into()));
        }
        Ok(())
    }
}

/// Current value of α together with `∫₀ᵗ ‖E(s)‖∞² ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFactor {
    pub alpha: f64,
    pub accumulated_integral: f64,
}

impl ScalingFactor {
    pub fn new(alpha0: f64) -> Self {
        ScalingFactor {
            alpha: alpha0,
            accumulated_integral: 0.0,
        }
    }

    /// Explicit update from `self`: `α ← α + dt·rate`, and the running
    /// integral gains `dt·e_inf²`.
    pub fn advanced(&self, dt: f64, rate: f64, e_inf: f64) -> Self {
        ScalingFactor {
            alpha: self.alpha + dt * rate,
            accumulated_integral: self.accumulated_integral + dt * e_inf * e_inf,
        }
    }

    /// `α₀ (1 + γ (q/m)² ∫‖E‖∞²)^{-1/2}`, the exact solution of the α ODE for
    /// the recorded integral.
    pub fn closed_form(&self, params: &HermiteParams) -> f64 {
        let qm = params.charge_mass_ratio;
        params.alpha0 / (1.0 + params.gamma * qm * qm * self.accumulated_integral).sqrt()
    }
}

/// `I(α, E) = −(γ/2)(q/m)² ‖E‖∞² α³`, the right-hand side of the α ODE.
pub fn alpha_rhs(alpha: f64, e_inf: f64, params: &HermiteParams) -> f64 {
    let qm = params.charge_mass_ratio;
    -0.5 * params.gamma * qm * qm * e_inf * e_inf * alpha * alpha * alpha
}

/// Hermite coefficient fields `C_0 .. C_{N_H-1}` of one species.
#[derive(Debug, Clone)]
pub struct HermiteState<F> {
    pub coeffs: Vec<F>,
    pub scaling: ScalingFactor,
    pub params: HermiteParams,
}

impl<F: Field> HermiteState<F> {
    pub fn new(coeffs: Vec<F>, params: HermiteParams) -> Result<Self> {
        params.validate()?;
        if coeffs.len() != params.n_modes {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficient fields, got {}",
                params.n_modes,
                coeffs.len()
            )));
        }
        Ok(HermiteState {
            coeffs,
            scaling: ScalingFactor::new(params.alpha0),
            params,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.scaling.alpha
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_n C_n(x) Ψ_n(α, v)`.
    pub fn reconstruct(&self, x: f64, v: f64) -> f64 {
        let mut psi = vec![0.0; self.coeffs.len()];
        basis_all(self.alpha(), v, &mut psi);
        self.coeffs
            .iter()
            .zip(&psi)
            .filter(|(_, p)| **p != 0.0)
            .map(|(c, p)| c.eval(x) * p)
            .sum()
    }

    /// Density `C_0`, momentum density `C_1/α` and kinetic energy density
    /// `(√2 C_2 + C_0)/(2α²)`.
    pub fn moments(&self) -> Result<Moments<F>> {
        if self.coeffs.len() < 3 {
            return Err(Error::TooFewModes {
                needed: 3,
                have: self.coeffs.len(),
            });
        }
        let alpha = self.alpha();
        let density = self.coeffs[0].clone();
        let mut momentum = self.coeffs[1].clone();
        momentum.scale(1.0 / alpha);
        let kinetic = self.coeffs[2].combine(
            2f64.sqrt() / (2.0 * alpha * alpha),
            &self.coeffs[0],
            1.0 / (2.0 * alpha * alpha),
        );
        Ok(Moments {
            density,
            momentum,
            kinetic,
        })
    }

    /// `‖f‖_ω = (α Σ_n ‖C_n‖²)^{1/2}`.
    pub fn weighted_l2_norm(&self) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sq()).sum();
        (self.alpha() * sum).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.scaling.alpha.is_finite() && self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Velocity moments as spatial fields.
#[derive(Debug, Clone)]
pub struct Moments<F> {
    pub density: F,
    pub momentum: F,
    pub kinetic: F,
}

/// Velocity nodes and weights such that `∫ g(v) dv ≈ Σ w_i g(v_i)` for
/// integrands of the form polynomial × Gaussian at scale `α`.
#[derive(Debug, Clone)]
pub struct VelocityGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    alpha: f64,
}

impl VelocityGrid {
    /// Gauss–Hermite rule with `n_nodes` points mapped through `ξ = αv/√2`.
    pub fn gauss_hermite(n_nodes: usize, alpha: f64) -> Self {
        let gh = gauss_hermite(n_nodes);
        let jac = 2f64.sqrt() / alpha;
        VelocityGrid {
            nodes: gh.nodes.iter().map(|xi| xi * jac).collect(),
            weights: gh.scaled_weights.iter().map(|w| w * jac).collect(),
            alpha,
        }
    }

    /// Default rule for a species: `max(2 N_H, 64)` nodes at scale `α₀`.
    pub fn for_params(params: &HermiteParams) -> Self {
        Self::gauss_hermite((2 * params.n_modes).max(64), params.alpha0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `H_n(α v_i)` for every node (rows) and mode (columns), flattened row-major.
    fn hermite_table(&self, alpha: f64, n_modes: usize) -> Vec<f64> {
        let mut table = vec![0.0; self.nodes.len() * n_modes];
        for (i, v) in self.nodes.iter().enumerate() {
            hermite_all(alpha * v, &mut table[i * n_modes..(i + 1) * n_modes]);
        }
        table
    }
}

/// Projects velocity distributions on the Hermite basis of one species.
///
/// Holds the table `w_i H_n(α v_i)` so that projecting many spatial slices
/// costs one matrix–vector product each.
#[derive(Debug, Clone)]
pub struct VelocityProjector {
    nodes: Vec<f64>,
    weighted_table: Vec<f64>,
    n_modes: usize,
}

impl VelocityProjector {
    pub fn new(params: &HermiteParams, grid: &VelocityGrid) -> Self {
        let n_modes = params.n_modes;
        let mut table = grid.hermite_table(params.alpha0, n_modes);
        for (i, w) in grid.weights.iter().enumerate() {
            for h in &mut table[i * n_modes..(i + 1) * n_modes] {
                *h *= w;
            }
        }
        VelocityProjector {
            nodes: grid.nodes.clone(),
            weighted_table: table,
            n_modes,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `C_n = ∫ f(v) H_n(α₀ v) dv` for a slice already sampled at
    /// [`Self::nodes`].
    pub fn project_samples(&self, samples: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(samples.len(), self.nodes.len());
        let n = self.n_modes;
        let mut out = vec![0.0; n];
        for (i, f) in samples.iter().enumerate() {
            if *f == 0.0 {
                continue;
            }
            for (c, h) in out.iter_mut().zip(&self.weighted_table[i * n..(i + 1) * n]) {
                *c += f * h;
            }
        }
        if let Some(mode) = out.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteQuadrature { mode });
        }
        Ok(out)
    }

    pub fn project<G: Fn(f64) -> f64>(&self, f: G) -> Result<Vec<f64>> {
        let samples: Vec<f64> = self.nodes.iter().map(|&v| f(v)).collect();
        self.project_samples(&samples)
    }
}

/// `C_n = ∫ f(v) H_n(α₀ v) dv`, `n < N_H`, by quadrature on `grid`.
pub fn project_velocity<G: Fn(f64) -> f64>(
    f0_slice: G,
    params: &HermiteParams,
    grid: &VelocityGrid,
) -> Result<Vec<f64>> {
    VelocityProjector::new(params, grid).project(f0_slice)
}
