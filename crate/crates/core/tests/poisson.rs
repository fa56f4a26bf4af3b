mod common;

use std::f64::consts::PI;

use hermite_vlasov::dg::{DGField, Mesh};
use hermite_vlasov::poisson::{solve_ldg, solve_mixed, BetaMode, LdgOptions, LdgSolver, MixedSolver};
use hermite_vlasov::quadrature::gauss_legendre;
use hermite_vlasov::{Error, Field};

use common::*;

/// `‖u − f‖_{L²}` by 10-point Gauss quadrature per cell.
fn l2_error(u: &DGField, f: &dyn Fn(f64) -> f64) -> f64 {
    let mesh = u.mesh();
    let (xs, ws) = gauss_legendre(10);
    let mut s = 0.0;
    for cell in 0..mesh.n_cells {
        for (xi, w) in xs.iter().zip(&ws) {
            let x = mesh.map_to_physical(cell, *xi);
            s += w * 0.5 * mesh.width(cell) * (u.eval_in_cell(cell, *xi) - f(x)).powi(2);
        }
    }
    s.sqrt()
}

fn max_error(u: &DGField, f: &dyn Fn(f64) -> f64) -> f64 {
    let mesh = u.mesh();
    let mut m: f64 = 0.0;
    for cell in 0..mesh.n_cells {
        for j in 0..=20 {
            let xi = -1.0 + 0.1 * j as f64;
            m = m.max((u.eval_in_cell(cell, xi) - f(mesh.map_to_physical(cell, xi))).abs());
        }
    }
    m
}

fn manufactured(n_cells: usize, mode: BetaMode) -> (f64, f64) {
    let mesh = Mesh::uniform(4.0 * PI, n_cells, 2).unwrap();
    let src = DGField::project(&mesh, 2, 10, |x| 0.01 * (x / 2.0).cos());
    let opts = LdgOptions {
        beta_mode: mode,
        beta_value: 1.0,
    };
    let es = LdgSolver::new(&mesh, opts).unwrap().solve(&src, 0.01).unwrap();
    let exact = |x: f64| 0.02 * (x / 2.0).sin();
    (l2_error(&es.e_field, &exact), max_error(&es.e_field, &exact))
}

#[test]
fn ldg_converges_on_manufactured_source() {
    let errs: Vec<(f64, f64)> = [16, 32, 64].iter().map(|n| manufactured(*n, BetaMode::Constant)).collect();
    for w in errs.windows(2) {
        let order = (w[0].0 / w[1].0).log2();
        assert!(order >= 2.5, "order {order}, errors {errs:?}");
    }
    assert!(errs[2].1 < 1e-6, "{errs:?}");
    // An h⁻¹ penalty with centered potential flux loses one order.
    let errs: Vec<(f64, f64)> = [16, 32, 64].iter().map(|n| manufactured(*n, BetaMode::OverH)).collect();
    for w in errs.windows(2) {
        assert!((w[0].0 / w[1].0).log2() >= 1.9, "{errs:?}");
    }
}

#[test]
fn ldg_potential_is_mean_free_and_matches() {
    let mesh = Mesh::uniform(2.0 * PI, 24, 2).unwrap();
    let c0 = DGField::project(&mesh, 2, 10, |x| 1.0 + 0.3 * (2.0 * x).cos());
    let es = solve_ldg(&c0, 1.0, LdgOptions::default()).unwrap();
    assert!(es.potential.integral().abs() < 1e-13);
    // −Φ'' = 0.3 cos 2x → Φ = 0.075 cos 2x, E = 0.15 sin 2x
    assert!(l2_error(&es.potential, &|x| 0.075 * (2.0 * x).cos()) < 2e-4);
    assert!(l2_error(&es.e_field, &|x| 0.15 * (2.0 * x).sin()) < 2e-4);
    assert!(es.energy_jump_term >= 0.0 && es.energy_jump_term < 1e-6);
}

#[test]
fn ldg_rejects_incompatible_source() {
    let mesh = Mesh::uniform(1.0, 4, 1).unwrap();
    let c0 = DGField::constant(&mesh, 1, 2.0);
    assert!(matches!(solve_ldg(&c0, 1.0, LdgOptions::default()), Err(Error::Compatibility { .. })));
    let ungauged = LdgSolver::assemble(&mesh, LdgOptions::default(), false);
    assert!(matches!(ungauged, Err(Error::SingularSystem)));
}

#[test]
fn ldg_uniform_density_gives_zero_field() {
    let mesh = Mesh::uniform(3.0, 5, 2).unwrap();
    let c0 = DGField::constant(&mesh, 2, 0.7);
    let es = solve_ldg(&c0, 0.7, LdgOptions::default()).unwrap();
    assert!(es.e_field.coeffs().iter().all(|c| c.abs() < 1e-14));
}

#[test]
fn mixed_field_is_continuous_and_bounded() {
    let mut r = rng(31);
    for case in 0..12 {
        let degree = case % 3;
        let mesh = jittered_mesh(&mut r, 2.0 + case as f64, 3 + case, degree);
        let c0 = random_dg_field(&mut r, &mesh, degree, 1.0);
        let rho0 = c0.integral() / mesh.length;
        let es = solve_mixed(&c0, rho0).unwrap();
        let e = &es.e_field;
        assert_eq!(e.degree(), degree + 1);
        for edge in 0..mesh.n_cells {
            assert!(e.traces(edge).jump.abs() < 1e-12, "case {case} edge {edge}");
        }
        assert!(e.integral().abs() < 1e-12);
        // ∂ₓE equals C₀ − ρ₀ in every cell
        let h0 = mesh.width(0);
        for xi in [-0.6, 0.1, 0.8] {
            let d = (e.eval_in_cell(0, xi + 1e-4) - e.eval_in_cell(0, xi - 1e-4)) / 2e-4 * 2.0 / h0;
            assert!((d - (c0.eval_in_cell(0, xi) - rho0)).abs() < 1e-6);
        }
        let fluct = c0.combine(1.0, &DGField::constant(&mesh, degree, rho0), -1.0);
        let dx_norm = fluct.norm_sq().sqrt();
        assert!(dx_norm <= c0.norm_sq().sqrt() + 1e-12);
        let sup = e.sup_norm(degree + 3);
        assert!(sup <= 0.5 * mesh.length.sqrt() * dx_norm + 1e-12, "case {case}");
        assert_eq!(es.energy_jump_term, 0.0);
    }
}

#[test]
fn mixed_converges_on_manufactured_source() {
    let mut errs = Vec::new();
    for n in [8, 16, 32] {
        let mesh = Mesh::uniform(4.0 * PI, n, 1).unwrap();
        let src = DGField::project(&mesh, 1, 10, |x| 0.01 * (x / 2.0).cos());
        let es = MixedSolver::new(&mesh).unwrap().solve(&src, 0.01).unwrap();
        errs.push(l2_error(&es.e_field, &|x| 0.02 * (x / 2.0).sin()));
    }
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() > 2.5, "{errs:?}");
    }
}

#[test]
fn spectral_poisson_is_exact_for_trigonometric_data() {
    use hermite_vlasov::fourier::{spectral_poisson, SpectralField};
    let l = 4.0 * PI;
    let c0 = SpectralField::project(8, l, 64, |x| 1.0 + 0.01 * (x / 2.0).cos());
    let e = spectral_poisson(&c0, 1.0).unwrap();
    for j in 0..50 {
        let x = l * j as f64 / 50.0;
        assert!((e.eval(x) - 0.02 * (x / 2.0).sin()).abs() < 1e-15);
    }
}
