//! Conservation identities of the semi-discrete system on random states.

mod common;

use hermite_vlasov::dg::{DGField, FluxSpec};
use hermite_vlasov::diagnostics::semi_discrete_rates;
use hermite_vlasov::discretization::{DgDiscretization, Discretization};
use hermite_vlasov::Field;

use common::*;

fn ldg_jump(disc: &DgDiscretization) -> impl Fn(&DGField) -> f64 + '_ {
    move |phi: &DGField| disc.poisson.jump_term(phi)
}

/// `Σ_edges [u]²`.
fn jump_sq(u: &DGField) -> f64 {
    (0..u.mesh().n_cells).map(|e| u.traces(e).jump.powi(2)).sum()
}

#[test]
fn transport_dissipation_identity() {
    let mut r = rng(21);
    for case in 0..24 {
        let n_cells = 1 + case % 8;
        let degree = case % 3;
        let n_modes = 1 + case % 6;
        let (disc, plasma) = random_dg_plasma(&mut r, n_cells, degree, n_modes.max(1), false, false);
        let st = &plasma.states[0];
        let alpha = st.alpha();
        let flux = FluxSpec::lax_friedrichs(n_modes, alpha);
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for n in 0..n_modes {
            let t = disc.transport(&st.coeffs, alpha, &flux, n).unwrap();
            lhs += alpha * t.inner(&st.coeffs[n]);
            rhs -= 0.5 * alpha * flux.delta[n] * jump_sq(&st.coeffs[n]);
        }
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()), "case {case}: {lhs} vs {rhs}");
        assert!(lhs <= 1e-12);
    }
}

#[test]
fn ldg_energy_momentum_and_mass_rates() {
    let mut r = rng(22);
    for case in 0..30 {
        let n_cells = 1 + case % 8;
        let degree = case % 3;
        let n_modes = 3 + case % 4;
        let two = case % 2 == 1;
        let (disc, plasma) = random_dg_plasma(&mut r, n_cells, degree, n_modes, false, two);
        let rates = semi_discrete_rates(&disc, &plasma, &ldg_jump(&disc)).unwrap();
        let scale = 1.0 + rates.kinetic_energy.abs() + rates.electric_energy.abs() + rates.jump_energy.abs();
        assert!(rates.total_energy.abs() < 1e-11 * scale, "case {case}: dE/dt = {}", rates.total_energy);
        assert!(
            (rates.momentum - rates.jump_coupling).abs() < 1e-11 * (1.0 + rates.jump_coupling.abs()),
            "case {case}: dP/dt = {} vs β Σ[Φ][E] = {}",
            rates.momentum,
            rates.jump_coupling
        );
        assert!(rates.mass.abs() < 1e-13, "case {case}: dM/dt = {}", rates.mass);
        assert!(
            (rates.kinetic_energy - rates.field_work).abs() < 1e-11 * (1.0 + rates.field_work.abs()),
            "case {case}: {} vs {}",
            rates.kinetic_energy,
            rates.field_work
        );
    }
}

#[test]
fn ldg_momentum_rate_is_nonzero_in_general() {
    // The jump coupling is what separates LDG from exact momentum conservation.
    let mut r = rng(23);
    let (disc, plasma) = random_dg_plasma(&mut r, 6, 1, 4, false, false);
    let rates = semi_discrete_rates(&disc, &plasma, &ldg_jump(&disc)).unwrap();
    assert!(rates.jump_coupling.abs() > 1e-6);
}

#[test]
fn mixed_poisson_conserves_mass_and_momentum_but_not_energy() {
    let mut r = rng(24);
    let mut worst_energy: f64 = 0.0;
    for case in 0..20 {
        let (disc, plasma) = random_dg_plasma(&mut r, 2 + case % 7, case % 3, 3 + case % 4, true, case % 2 == 0);
        let rates = semi_discrete_rates(&disc, &plasma, &|_: &DGField| 0.0).unwrap();
        assert!(rates.momentum.abs() < 1e-11, "case {case}: {}", rates.momentum);
        assert!(rates.mass.abs() < 1e-13);
        assert!((rates.kinetic_energy - rates.field_work).abs() < 1e-11 * (1.0 + rates.field_work.abs()));
        worst_energy = worst_energy.max(rates.total_energy.abs());
    }
    // The conforming field is not the weak gradient of a DG potential, so the
    // field energy does not balance the kinetic exchange.
    assert!(worst_energy > 1e-6);
}

#[test]
fn fourier_mass_momentum_energy_rates() {
    let mut r = rng(25);
    for case in 0..20 {
        let (disc, plasma) = random_fourier_plasma(&mut r, 1 + case % 8, 3 + case % 4, case % 2 == 1);
        let rates = semi_discrete_rates(&disc, &plasma, &|_| 0.0).unwrap();
        assert!(rates.mass.abs() < 1e-12, "case {case}: {}", rates.mass);
        assert!(rates.momentum.abs() < 1e-12, "case {case}: {}", rates.momentum);
        let scale = 1.0 + rates.kinetic_energy.abs();
        assert!(rates.total_energy.abs() < 1e-11 * scale, "case {case}: {}", rates.total_energy);
        assert!((rates.kinetic_energy - rates.field_work).abs() < 1e-11 * scale);
    }
}

#[test]
fn initial_deviations_are_zero() {
    use hermite_vlasov::diagnostics::{record, DeviationSeries};
    let mut r = rng(26);
    let (disc, plasma) = random_dg_plasma(&mut r, 5, 2, 4, false, true);
    let rec = record(&disc, &plasma).unwrap();
    let dev = DeviationSeries::from_records(&[rec]);
    assert_eq!(dev.max_mass(), 0.0);
    assert_eq!(dev.max_momentum_abs(), 0.0);
    assert_eq!(dev.max_energy(), 0.0);
}

