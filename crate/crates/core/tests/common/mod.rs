#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hermite_vlasov::dg::reference::legendre_values;
use hermite_vlasov::dg::{DGField, Mesh};
use hermite_vlasov::discretization::{DgDiscretization, Discretization, FourierDiscretization};
use hermite_vlasov::fourier::SpectralField;
use hermite_vlasov::hermite::{HermiteParams, HermiteState};
use hermite_vlasov::poisson::LdgOptions;
use hermite_vlasov::quadrature::gauss_legendre;
use hermite_vlasov::timestep::{PlasmaState, Species};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Periodic mesh on `[0, L)` with cell widths perturbed by up to ±30%.
pub fn jittered_mesh(rng: &mut StdRng, length: f64, n_cells: usize, degree: usize) -> Arc<Mesh> {
    let widths: Vec<f64> = (0..n_cells).map(|_| rng.gen_range(0.7..1.3)).collect();
    let total: f64 = widths.iter().sum();
    let mut edges = vec![0.0];
    for w in &widths {
        edges.push(edges.last().unwrap() + w * length / total);
    }
    edges[n_cells] = length;
    Mesh::from_edges(edges, degree).unwrap()
}

pub fn random_dg_field(rng: &mut StdRng, mesh: &Arc<Mesh>, degree: usize, scale: f64) -> DGField {
    let coeffs = (0..mesh.n_cells * (degree + 1))
        .map(|_| scale * rng.gen_range(-1.0..1.0))
        .collect();
    DGField::from_coeffs(mesh, degree, coeffs).unwrap()
}

pub fn random_spectral_field(rng: &mut StdRng, n_max: usize, length: f64, scale: f64) -> SpectralField {
    let mut f = SpectralField::zeros(n_max, length);
    f.set_mode(0, Complex64::new(scale * rng.gen_range(-1.0..1.0), 0.0));
    for j in 1..=n_max as i64 {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        f.set_mode(j, c);
        f.set_mode(-j, c.conj());
    }
    f
}

/// Random species: `(name, charge, mass)`. One electron-like species, or an
/// electron/ion pair.
pub fn random_species(rng: &mut StdRng, two: bool) -> Vec<Species> {
    let mut out = vec![Species::new("e", rng.gen_range(-1.5..-0.5), rng.gen_range(0.5..2.0)).unwrap()];
    if two {
        out.push(Species::new("i", rng.gen_range(0.5..1.5), rng.gen_range(5.0..30.0)).unwrap());
    }
    out
}

/// Random plasma whose modes come from `make`.
pub fn random_plasma<D: Discretization>(
    rng: &mut StdRng,
    disc: &D,
    species: Vec<Species>,
    n_modes: usize,
    make: &mut dyn FnMut(&mut StdRng, usize) -> D::Field,
) -> PlasmaState<D::Field> {
    let states = species
        .iter()
        .map(|sp| {
            let params = HermiteParams::new(
                n_modes,
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.01..0.5),
                sp.charge_mass_ratio(),
            )
            .unwrap();
            let coeffs = (0..n_modes).map(|n| make(rng, n)).collect();
            HermiteState::new(coeffs, params).unwrap()
        })
        .collect();
    PlasmaState::new(disc, species, states).unwrap()
}

pub fn random_dg_plasma(
    rng: &mut StdRng,
    n_cells: usize,
    degree: usize,
    n_modes: usize,
    mixed: bool,
    two_species: bool,
) -> (DgDiscretization, PlasmaState<DGField>) {
    let length = rng.gen_range(2.0..8.0);
    let mesh = jittered_mesh(rng, length, n_cells, degree);
    let disc = if mixed {
        DgDiscretization::mixed(&mesh).unwrap()
    } else {
        let opts = LdgOptions {
            beta_value: rng.gen_range(0.2..2.0),
            ..LdgOptions::default()
        };
        DgDiscretization::ldg(&mesh, opts).unwrap()
    };
    let species = random_species(rng, two_species);
    let plasma = random_plasma(rng, &disc, species, n_modes, &mut |r, n| {
        let mut f = random_dg_field(r, &mesh, degree, 1.0 / (1.0 + n as f64));
        if n == 0 {
            f.add_scaled_const(2.0);
        }
        f
    });
    (disc, plasma)
}

pub fn random_fourier_plasma(
    rng: &mut StdRng,
    n_max: usize,
    n_modes: usize,
    two_species: bool,
) -> (FourierDiscretization, PlasmaState<SpectralField>) {
    let length = rng.gen_range(2.0..8.0);
    let disc = FourierDiscretization::new(n_max, length).unwrap();
    let species = random_species(rng, two_species);
    let plasma = random_plasma(rng, &disc, species, n_modes, &mut |r, n| {
        let mut f = random_spectral_field(r, n_max, length, 1.0 / (1.0 + n as f64));
        if n == 0 {
            let c = f.mode(0) + Complex64::new(2.0 * length.sqrt(), 0.0);
            f.set_mode(0, c);
        }
        f
    });
    (disc, plasma)
}

trait AddConst {
    fn add_scaled_const(&mut self, value: f64);
}

impl AddConst for DGField {
    fn add_scaled_const(&mut self, value: f64) {
        let nb = self.degree() + 1;
        let c0 = value * 2f64.sqrt();
        for cell in 0..self.mesh().n_cells {
            self.coeffs_mut()[cell * nb] += c0;
        }
    }
}

/// `∫_cell u φ_q dx` for the orthonormal Legendre test function `φ_q`,
/// computed by brute-force Gauss quadrature of point values.
pub fn cell_moment(u: &dyn Fn(f64) -> f64, mesh: &Mesh, cell: usize, q: usize) -> f64 {
    let (xs, ws) = gauss_legendre(12);
    let mut phi = vec![0.0; q + 1];
    let h = mesh.width(cell);
    xs.iter()
        .zip(&ws)
        .map(|(xi, w)| {
            legendre_values(*xi, &mut phi);
            w * u(*xi) * phi[q] * 0.5 * h
        })
        .sum()
}

/// `φ_q'(ξ)` in physical units by a five-point stencil, exact for the
/// polynomial degrees used here.
pub fn test_derivative(q: usize, xi: f64, h: f64) -> f64 {
    let mut buf = vec![0.0; q + 1];
    let mut at = |x: f64| {
        legendre_values(x, &mut buf);
        buf[q]
    };
    let s = 0.25;
    let d = (-at(xi + 2.0 * s) + 8.0 * at(xi + s) - 8.0 * at(xi - s) + at(xi - 2.0 * s)) / (12.0 * s);
    d * 2.0 / h
}

/// Plasma dispersion function `Z(ζ)` for `Im ζ > 0` by its continued
/// fraction, and for other arguments by the power series.
pub fn plasma_z(zeta: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if zeta.norm() < 6.0 {
        // Z(ζ) = i√π e^{−ζ²} − 2ζ Σ (−2ζ²)^n / (2n+1)!!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let z2 = zeta * zeta;
        for n in 1..400 {
            term *= -2.0 * z2 / (2 * n + 1) as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        i * std::f64::consts::PI.sqrt() * (-z2).exp() - 2.0 * zeta * sum
    } else {
        // asymptotic expansion plus the residue term below the real axis
        let z2 = zeta * zeta;
        let mut term = -1.0 / zeta;
        let mut sum = term;
        for n in 1..30 {
            term *= (2 * n - 1) as f64 / (2.0 * z2);
            sum += term;
        }
        let sigma = if zeta.im > 0.0 { 0.0 } else if zeta.im == 0.0 { 1.0 } else { 2.0 };
        sum + sigma * i * std::f64::consts::PI.sqrt() * (-z2).exp()
    }
}

/// Least damped root `ω` of `1 + (1 + ζ Z(ζ))/k² = 0`, `ζ = ω/(√2 k)`, for a
/// unit Maxwellian, by complex Newton from the Bohm–Gross estimate.
pub fn landau_root(k: f64) -> Complex64 {
    let eps = |w: Complex64| {
        let zeta = w / (2f64.sqrt() * k);
        1.0 + (1.0 + zeta * plasma_z(zeta)) / (k * k)
    };
    let mut w = Complex64::new((1.0 + 3.0 * k * k).sqrt(), -0.1);
    for _ in 0..100 {
        let h = 1e-7;
        let d = (eps(w + h) - eps(w - h)) / (2.0 * h);
        let step = eps(w) / d;
        w -= step;
        if step.norm() < 1e-14 {
            break;
        }
    }
    w
}
