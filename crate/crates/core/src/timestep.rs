//! Two-stage second-order time integration with staged Poisson solves and a
//! coupled update of the scaling factors.

use rayon::prelude::*;

use crate::dg::FluxSpec;
use crate::discretization::Discretization;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermite::{alpha_rhs, houli_filter, HermiteState, ScalingFactor};
use crate::poisson::ElectroState;

/// A particle species: charge enters the Poisson source, charge/mass the
/// Vlasov equation, mass the momentum and energy totals.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Species {
    pub name: String,
    pub charge: f64,
    pub mass: f64,
}

impl Species {
    pub fn new(name: impl Into<String>, charge: f64, mass: f64) -> Result<Self> {
        let s = Species {
            name: name.into(),
            charge,
            mass,
        };
        if !(mass > 0.0 && mass.is_finite() && charge.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "species `{}` needs a finite charge and a positive mass",
                s.name
            )));
        }
        Ok(s)
    }

    pub fn charge_mass_ratio(&self) -> f64 {
        self.charge / self.mass
    }
}

/// All species with the shared self-consistent field.
#[derive(Debug, Clone)]
pub struct PlasmaState<F> {
    pub time: f64,
    pub species: Vec<Species>,
    pub states: Vec<HermiteState<F>>,
    /// Neutralizing background charge density `Σ q_s ρ₀_s`, fixed from the
    /// initial data.
    pub background: f64,
    pub electro: ElectroState<F>,
}

impl<F: Field> PlasmaState<F> {
    /// Sets the background from the initial densities and solves Poisson.
    pub fn new<D: Discretization<Field = F>>(
        disc: &D,
        species: Vec<Species>,
        states: Vec<HermiteState<F>>,
    ) -> Result<Self> {
        if species.len() != states.len() || species.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{} species descriptions for {} states",
                species.len(),
                states.len()
            )));
        }
        for (sp, st) in species.iter().zip(&states) {
            let qm = sp.charge_mass_ratio();
            if (st.params.charge_mass_ratio - qm).abs() > 1e-14 * qm.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "species `{}`: q/m = {} in the Hermite parameters but charge/mass = {qm}",
                    sp.name, st.params.charge_mass_ratio
                )));
            }
        }
        let length = disc.length();
        let background = species
            .iter()
            .zip(&states)
            .map(|(sp, st)| sp.charge * st.coeffs[0].integral() / length)
            .sum();
        let electro = solve_field(disc, &species, &states, background)?;
        Ok(PlasmaState {
            time: 0.0,
            species,
            states,
            background,
            electro,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.states.iter().all(|s| s.is_finite()) && self.electro.e_field.is_finite()
    }
}

/// `Σ_s q_s C₀_s − background` and the magnitude used for its compatibility
/// tolerance.
pub fn charge_source<D: Discretization>(
    disc: &D,
    species: &[Species],
    c0: &[&D::Field],
    background: f64,
) -> (D::Field, f64) {
    let length = disc.length();
    let mut src = disc.constant(-background);
    let mut scale = background.abs() * length;
    for (sp, c) in species.iter().zip(c0) {
        src.add_scaled(sp.charge, c);
        scale += sp.charge.abs() * c.norm_sq().sqrt() * length.sqrt();
    }
    (src, scale)
}

fn solve_field<D: Discretization>(
    disc: &D,
    species: &[Species],
    states: &[HermiteState<D::Field>],
    background: f64,
) -> Result<ElectroState<D::Field>> {
    let c0: Vec<&D::Field> = states.iter().map(|s| &s.coeffs[0]).collect();
    let (src, scale) = charge_source(disc, species, &c0, background);
    disc.solve_poisson(&src, scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepConfig {
    pub dt: f64,
    /// Target Courant number when the step is derived from the CFL bound.
    pub cfl: f64,
    /// Largest Courant number accepted by [`step`].
    pub max_courant: f64,
    pub filter_enabled: bool,
    /// Drop the field: `E ≡ 0`, no Poisson solves, no sources.
    pub free_streaming: bool,
}

impl Default for StepConfig {
    fn default() -> Self {
        StepConfig {
            dt: 1e-3,
            cfl: 0.5,
            max_courant: 1.0,
            filter_enabled: true,
            free_streaming: false,
        }
    }
}

impl StepConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("dt", self.dt), ("cfl", self.cfl), ("max_courant", self.max_courant)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// `cfl · ℓ · α / √(2 N_H)`, with `ℓ = h_min/(2k+1)` for DG.
pub fn suggest_dt(cfl_length: f64, alpha: f64, n_modes: usize, cfl: f64) -> f64 {
    cfl * cfl_length * alpha / (2.0 * n_modes as f64).sqrt()
}

/// Smallest [`suggest_dt`] over the species of `plasma`.
pub fn suggest_plasma_dt<D: Discretization>(disc: &D, plasma: &PlasmaState<D::Field>, cfl: f64) -> f64 {
    plasma
        .states
        .iter()
        .map(|s| suggest_dt(disc.cfl_length(), s.alpha(), s.n_modes(), cfl))
        .fold(f64::INFINITY, f64::min)
}

/// Largest Courant number `dt √(2N_H) / (α ℓ)` over the species.
pub fn courant_number<D: Discretization>(disc: &D, plasma: &PlasmaState<D::Field>, dt: f64) -> f64 {
    plasma
        .states
        .iter()
        .map(|s| dt * (2.0 * s.n_modes() as f64).sqrt() / (s.alpha() * disc.cfl_length()))
        .fold(0.0, f64::max)
}

/// Time derivative of every mode of one species at `(coeffs, α)` with the
/// field `e` and scaling rate `rate`. Mode 0 never sees the field.
pub fn hermite_rhs<D: Discretization>(
    disc: &D,
    coeffs: &[D::Field],
    alpha: f64,
    rate: f64,
    charge_mass_ratio: f64,
    e: &D::Field,
    modes: std::ops::Range<usize>,
) -> Result<Vec<D::Field>> {
    let flux = FluxSpec::lax_friedrichs(coeffs.len(), alpha);
    modes
        .into_par_iter()
        .map(|n| {
            let mut d = disc.transport(coeffs, alpha, &flux, n)?;
            if n > 0 {
                d.add_scaled(1.0, &disc.source(coeffs, alpha, rate, charge_mass_ratio, e, n)?);
            }
            Ok(d)
        })
        .collect()
}

/// `base + h·slope` mode by mode into `out`, starting at mode `first`.
fn axpy_modes<F: Field>(out: &mut [F], base: &[F], h: f64, slope: Vec<F>, first: usize) {
    for (i, s) in slope.into_iter().enumerate() {
        let n = first + i;
        out[n] = base[n].clone();
        out[n].add_scaled(h, &s);
    }
}

/// One stage: `C₀ ← C₀^m + h T₀(eval)`, then the field at the new `C₀`, its
/// average with `E^m`, and `Cₙ ← Cₙ^m + h [Tₙ + Sₙ](eval, averaged field)`.
/// Returns the new states and the field solved from the new `C₀`.
fn stage<D: Discretization>(
    disc: &D,
    plasma: &PlasmaState<D::Field>,
    eval: &[HermiteState<D::Field>],
    h: f64,
    cfg: &StepConfig,
) -> Result<(Vec<HermiteState<D::Field>>, ElectroState<D::Field>)> {
    let mut next: Vec<HermiteState<D::Field>> = plasma.states.clone();
    for ((out, base), ev) in next.iter_mut().zip(&plasma.states).zip(eval) {
        let slope = hermite_rhs(disc, &ev.coeffs, ev.alpha(), 0.0, 0.0, &ev.coeffs[0], 0..1)?;
        axpy_modes(&mut out.coeffs, &base.coeffs, h, slope, 0);
    }

    let (electro, e_avg) = if cfg.free_streaming {
        let zero = plasma.electro.e_field.zeros_like();
        let es = ElectroState {
            e_field: zero.clone(),
            potential: zero.clone(),
            energy_jump_term: 0.0,
        };
        (es, zero)
    } else {
        let es = solve_field(disc, &plasma.species, &next, plasma.background)?;
        let avg = plasma.electro.e_field.combine(0.5, &es.e_field, 0.5);
        (es, avg)
    };
    let e_inf = if cfg.free_streaming { 0.0 } else { disc.e_inf(&e_avg) };

    for ((out, base), ev) in next.iter_mut().zip(&plasma.states).zip(eval) {
        let n_modes = ev.n_modes();
        let qm = if cfg.free_streaming { 0.0 } else { ev.params.charge_mass_ratio };
        let rate = alpha_rhs(ev.alpha(), e_inf, &ev.params);
        let slope = hermite_rhs(disc, &ev.coeffs, ev.alpha(), rate, qm, &e_avg, 1..n_modes)?;
        axpy_modes(&mut out.coeffs, &base.coeffs, h, slope, 1);
        out.scaling = ScalingFactor {
            alpha: base.scaling.alpha + h * rate,
            accumulated_integral: base.scaling.accumulated_integral + h * e_inf * e_inf,
        };
    }
    Ok((next, electro))
}

/// Advances `plasma` by `cfg.dt`: a half step from `tⁿ`, then a full step
/// from `tⁿ` with every slope evaluated at the half-step data, then the
/// Hou–Li filter.
pub fn step<D: Discretization>(
    disc: &D,
    plasma: &PlasmaState<D::Field>,
    cfg: &StepConfig,
) -> Result<PlasmaState<D::Field>> {
    cfg.validate()?;
    let dt = cfg.dt;
    let courant = courant_number(disc, plasma, dt);
    if courant > cfg.max_courant {
        return Err(Error::CflViolation {
            dt,
            courant,
            limit: cfg.max_courant,
            time: plasma.time,
        });
    }

    let (half, _) = stage(disc, plasma, &plasma.states, 0.5 * dt, cfg)?;
    let (mut states, electro) = stage(disc, plasma, &half, dt, cfg)?;

    if cfg.filter_enabled {
        for s in &mut states {
            houli_filter(&mut s.coeffs);
        }
    }
    let time = plasma.time + dt;
    let out = PlasmaState {
        time,
        species: plasma.species.clone(),
        states,
        background: plasma.background,
        electro,
    };
    if !out.is_finite() {
        return Err(Error::NonFinite { time });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::Mesh;
    use crate::discretization::DgDiscretization;
    use crate::hermite::HermiteParams;
    use crate::poisson::LdgOptions;
    use std::f64::consts::PI;

    fn uniform_plasma(disc: &DgDiscretization) -> PlasmaState<crate::dg::DGField> {
        let params = HermiteParams::new(6, 1.0, 0.01, 1.0).unwrap();
        let mut coeffs: Vec<_> = (0..6).map(|_| disc.constant(0.0)).collect();
        coeffs[0] = disc.constant(12.0 / 7.0);
        coeffs[2] = disc.constant(10.0 * 2f64.sqrt() / 7.0);
        let st = HermiteState::new(coeffs, params).unwrap();
        PlasmaState::new(disc, vec![Species::new("e", 1.0, 1.0).unwrap()], vec![st]).unwrap()
    }

    #[test]
    fn suggested_step_matches_formula() {
        let dt = suggest_dt(4.0 * PI / 64.0 / 5.0, 1.0, 128, 0.5);
        assert!((dt - 0.5 * (4.0 * PI / 64.0) / (5.0 * 16.0)).abs() < 1e-15);
        assert!((dt - 1.227e-3).abs() < 1e-6);
        let dt2 = suggest_dt(4.0 * PI / 64.0 / 5.0, 1.0, 256, 0.5);
        assert!((dt / dt2 - 2f64.sqrt()).abs() < 1e-14);
        let dt3 = suggest_dt(4.0 * PI / 64.0 / 5.0, 0.5, 128, 0.5);
        assert!((dt / dt3 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_state_is_stationary() {
        let mesh = Mesh::uniform(4.0 * PI, 8, 2).unwrap();
        let disc = DgDiscretization::ldg(&mesh, LdgOptions::default()).unwrap();
        let p0 = uniform_plasma(&disc);
        let cfg = StepConfig {
            dt: 0.01,
            ..StepConfig::default()
        };
        let p1 = step(&disc, &p0, &cfg).unwrap();
        assert_eq!(p1.states[0].alpha(), 1.0);
        for (a, b) in p0.states[0].coeffs.iter().zip(&p1.states[0].coeffs) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cfl_violation_is_reported() {
        let mesh = Mesh::uniform(4.0 * PI, 8, 2).unwrap();
        let disc = DgDiscretization::ldg(&mesh, LdgOptions::default()).unwrap();
        let p0 = uniform_plasma(&disc);
        let cfg = StepConfig {
            dt: 10.0,
            ..StepConfig::default()
        };
        assert!(matches!(step(&disc, &p0, &cfg), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn species_charge_mass_must_match_parameters() {
        let mesh = Mesh::uniform(1.0, 4, 1).unwrap();
        let disc = DgDiscretization::ldg(&mesh, LdgOptions::default()).unwrap();
        let params = HermiteParams::new(3, 1.0, 0.01, 1.0).unwrap();
        let coeffs: Vec<_> = (0..3).map(|_| disc.constant(1.0)).collect();
        let st = HermiteState::new(coeffs, params).unwrap();
        let sp = Species::new("i", 1.0, 25.0).unwrap();
        assert!(PlasmaState::new(&disc, vec![sp], vec![st]).is_err());
    }
}
