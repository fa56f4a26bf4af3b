//! Fourier Galerkin discretization in space: each Hermite coefficient and the
//! electric field carry `2N_x+1` complex modes in the orthonormal basis
//! `e_j(x) = e^{2πijx/L}/√L`, `j = −N_x..N_x`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermite::HermiteState;
use crate::poisson::ElectroState;

pub type SpectralState = HermiteState<SpectralField>;

/// Real field stored by its Fourier coefficients; index `j + N_x` holds `c^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    modes: Vec<Complex64>,
    length: f64,
}

impl SpectralField {
    pub fn zeros(n_max: usize, length: f64) -> Self {
        SpectralField {
            modes: vec![Complex64::new(0.0, 0.0); 2 * n_max + 1],
            length,
        }
    }

    pub fn from_modes(modes: Vec<Complex64>, length: f64) -> Result<Self> {
        if modes.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a spectral field needs an odd number of modes, got {}",
                modes.len()
            )));
        }
        Ok(SpectralField { modes, length })
    }

    /// Constant function.
    pub fn constant(n_max: usize, length: f64, value: f64) -> Self {
        let mut f = Self::zeros(n_max, length);
        f.modes[n_max] = Complex64::new(value * length.sqrt(), 0.0);
        f
    }

    pub fn n_max(&self) -> usize {
        self.modes.len() / 2
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Complex64] {
        &mut self.modes
    }

    /// Coefficient `c^j`, zero outside the stored range.
    pub fn mode(&self, j: i64) -> Complex64 {
        let n = self.n_max() as i64;
        if j.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.modes[(j + n) as usize]
        }
    }

    pub fn set_mode(&mut self, j: i64, value: Complex64) {
        let n = self.n_max() as i64;
        self.modes[(j + n) as usize] = value;
    }

    /// Wavenumber `2πj/L`.
    pub fn wavenumber(&self, j: i64) -> f64 {
        2.0 * PI * j as f64 / self.length
    }

    /// `∂ₓu`, exact on the stored modes.
    pub fn derivative(&self) -> SpectralField {
        let n = self.n_max() as i64;
        let mut out = self.clone();
        for (idx, c) in out.modes.iter_mut().enumerate() {
            let k = self.wavenumber(idx as i64 - n);
            *c *= Complex64::new(0.0, k);
        }
        out
    }

    /// `max_j |c^j − conj(c^{−j})|`; zero for a real field.
    pub fn reality_defect(&self) -> f64 {
        let n = self.n_max() as i64;
        (-n..=n)
            .map(|j| (self.mode(j) - self.mode(-j).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Galerkin projection of `f` by sampling on `samples` uniform points
    /// (at least `2N_x+1`, more for accuracy).
    pub fn project<G: Fn(f64) -> f64>(n_max: usize, length: f64, samples: usize, f: G) -> Self {
        let m = samples.max(2 * n_max + 1);
        let values: Vec<f64> = (0..m).map(|i| f(length * i as f64 / m as f64)).collect();
        Self::from_samples(&values, n_max, length)
    }

    /// Coefficients from values on the uniform grid `x_i = iL/M`, `M ≥ 2N_x+1`.
    pub fn from_samples(values: &[f64], n_max: usize, length: f64) -> Self {
        Transforms::new(values.len()).analyze(values, n_max, length)
    }
}

impl Field for SpectralField {
    fn zeros_like(&self) -> Self {
        SpectralField::zeros(self.n_max(), self.length)
    }

    fn scale(&mut self, factor: f64) {
        self.modes.iter_mut().for_each(|c| *c *= factor);
    }

    fn add_scaled(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.modes.len(), other.modes.len());
        for (x, y) in self.modes.iter_mut().zip(&other.modes) {
            *x += y * a;
        }
    }

    fn integral(&self) -> f64 {
        self.modes[self.n_max()].re * self.length.sqrt()
    }

    fn inner(&self, other: &Self) -> f64 {
        self.modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.n_max() as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in -n..=n {
            sum += self.mode(j) * Complex64::from_polar(1.0, self.wavenumber(j) * x);
        }
        sum.re / self.length.sqrt()
    }

    fn is_finite(&self) -> bool {
        self.modes.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn length(&self) -> f64 {
        self.length
    }
}

/// FFT plans for one grid size.
#[derive(Clone)]
struct Transforms {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Transforms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transforms").field("size", &self.size).finish()
    }
}

impl Transforms {
    fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transforms {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    /// Point values on `x_m = mL/M`.
    fn synthesize(&self, u: &SpectralField) -> Vec<f64> {
        let m = self.size;
        let n = u.n_max() as i64;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for j in -n..=n {
            buf[j.rem_euclid(m as i64) as usize] += u.mode(j);
        }
        self.inverse.process(&mut buf);
        let s = 1.0 / u.length.sqrt();
        buf.iter().map(|c| c.re * s).collect()
    }

    /// Discrete coefficients of grid values, truncated to `|j| ≤ n_max`.
    fn analyze(&self, values: &[f64], n_max: usize, length: f64) -> SpectralField {
        let m = self.size;
        let mut buf: Vec<Complex64> = values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.forward.process(&mut buf);
        let s = length.sqrt() / m as f64;
        let mut out = SpectralField::zeros(n_max, length);
        let n = n_max as i64;
        for j in -n..=n {
            out.set_mode(j, buf[j.rem_euclid(m as i64) as usize] * s);
        }
        // Real input: enforce exact conjugate symmetry.
        out.set_mode(0, Complex64::new(out.mode(0).re, 0.0));
        for j in 1..=n {
            let c = 0.5 * (out.mode(j) + out.mode(-j).conj());
            out.set_mode(j, c);
            out.set_mode(-j, c.conj());
        }
        out
    }
}

/// Spectral operators for `N_x` modes on a period `L`.
#[derive(Debug, Clone)]
pub struct FourierOperator {
    n_max: usize,
    length: f64,
    /// Grid of `2(2N_x+1)` points: quadratic products are alias-free.
    product: Transforms,
}

impl FourierOperator {
    pub fn new(n_max: usize, length: f64) -> Result<Self> {
        if n_max == 0 || !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Fourier discretization needs N_x ≥ 1 and L > 0, got N_x = {n_max}, L = {length}"
            )));
        }
        Ok(FourierOperator {
            n_max,
            length,
            product: Transforms::new(2 * (2 * n_max + 1)),
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn zeros(&self) -> SpectralField {
        SpectralField::zeros(self.n_max, self.length)
    }

    /// Galerkin-truncated product `Π(u w)`.
    pub fn product(&self, u: &SpectralField, w: &SpectralField) -> SpectralField {
        let a = self.product.synthesize(u);
        let b = self.product.synthesize(w);
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        self.product.analyze(&prod, self.n_max, self.length)
    }

    /// `−(1/α)(√n ∂ₓc_{n−1} + √(n+1) ∂ₓc_{n+1})`.
    pub fn transport(&self, coeffs: &[SpectralField], alpha: f64, n: usize) -> Result<SpectralField> {
        let n_modes = coeffs.len();
        if n >= n_modes {
            return Err(Error::ModeOutOfRange { n, n_modes });
        }
        let mut g = self.zeros();
        if n + 1 < n_modes {
            g.add_scaled(((n + 1) as f64).sqrt() / alpha, &coeffs[n + 1]);
        }
        if n >= 1 {
            g.add_scaled((n as f64).sqrt() / alpha, &coeffs[n - 1]);
        }
        let mut out = g.derivative();
        out.scale(-1.0);
        Ok(out)
    }

    /// `(α'/α)(n c_n + √((n−1)n) c_{n−2}) + (q/m) α √n Π(E c_{n−1})`.
    pub fn source(
        &self,
        coeffs: &[SpectralField],
        alpha: f64,
        alpha_rate: f64,
        charge_mass_ratio: f64,
        e_field: &SpectralField,
        n: usize,
    ) -> Result<SpectralField> {
        let n_modes = coeffs.len();
        if n >= n_modes {
            return Err(Error::ModeOutOfRange { n, n_modes });
        }
        let mut out = self.zeros();
        if n == 0 {
            return Ok(out);
        }
        let nf = n as f64;
        if alpha_rate != 0.0 {
            let r = alpha_rate / alpha;
            out.add_scaled(r * nf, &coeffs[n]);
            if n >= 2 {
                out.add_scaled(r * ((nf - 1.0) * nf).sqrt(), &coeffs[n - 2]);
            }
        }
        let coupling = charge_mass_ratio * alpha * nf.sqrt();
        if coupling != 0.0 {
            out.add_scaled(coupling, &self.product(e_field, &coeffs[n - 1]));
        }
        Ok(out)
    }

    /// Time derivatives of every mode of `state` under the field `e`.
    pub fn spectral_rhs(&self, state: &SpectralState, e: &SpectralField, e_inf: f64) -> Result<Vec<SpectralField>> {
        let alpha = state.alpha();
        let rate = crate::hermite::alpha_rhs(alpha, e_inf, &state.params);
        let qm = state.params.charge_mass_ratio;
        (0..state.n_modes())
            .map(|n| {
                let mut d = self.transport(&state.coeffs, alpha, n)?;
                d.add_scaled(1.0, &self.source(&state.coeffs, alpha, rate, qm, e, n)?);
                Ok(d)
            })
            .collect()
    }
}

/// `E^j = s^j / (2πij/L)` for a mean-free source `s`, with `E^0 = 0` and the
/// zero-mean potential `Φ^j = −E^j/(2πij/L)`.
pub fn solve_spectral(source: &SpectralField, scale: f64) -> Result<ElectroState<SpectralField>> {
    let residual = source.integral();
    if residual.abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::Compatibility { residual });
    }
    let n = source.n_max() as i64;
    let mut e = source.zeros_like();
    let mut phi = source.zeros_like();
    for j in (-n..=n).filter(|j| *j != 0) {
        let ik = Complex64::new(0.0, source.wavenumber(j));
        let ej = source.mode(j) / ik;
        e.set_mode(j, ej);
        phi.set_mode(j, -ej / ik);
    }
    Ok(ElectroState {
        e_field: e,
        potential: phi,
        energy_jump_term: 0.0,
    })
}

/// Spectral Poisson solve of `∂ₓE = C₀ − ρ₀`.
pub fn spectral_poisson(c0: &SpectralField, rho0: f64) -> Result<SpectralField> {
    let mut src = c0.clone();
    src.add_scaled(-1.0, &SpectralField::constant(c0.n_max(), c0.length, rho0));
    let scale = c0.norm_sq().sqrt() * c0.length.sqrt() + rho0.abs() * c0.length;
    Ok(solve_spectral(&src, scale)?.e_field)
}

/// `max |E|` over `oversample·(2N_x+1)` uniform points.
pub fn spectral_e_inf(e: &SpectralField, oversample: usize) -> f64 {
    let m = oversample.max(2) * (2 * e.n_max() + 1);
    Transforms::new(m)
        .synthesize(e)
        .iter()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}
