//! Conserved and monitored quantities: mass, momentum, energy with the LDG
//! jump term, field norms, weighted L² norms and scaling factors.

use std::io::Write;
use std::path::Path;

use crate::discretization::Discretization;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermite::alpha_rhs;
use crate::timestep::{charge_source, hermite_rhs, PlasmaState};

/// Guard against division by zero in relative deviations.
pub const DEVIATION_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRecord {
    pub name: String,
    /// `∫C₀ dx`.
    pub mass: f64,
    /// `m_s ∫C₁/α dx`.
    pub momentum: f64,
    /// `m_s ∫(√2 C₂ + C₀)/(2α²) dx`.
    pub kinetic_energy: f64,
    pub weighted_l2: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub species: Vec<SpeciesRecord>,
    /// `Σ_s m_s ∫C₀_s`.
    pub mass: f64,
    pub momentum: f64,
    pub kinetic_energy: f64,
    /// `½∫E²`.
    pub electric_energy: f64,
    /// `½ β Σ[Φ]²`; zero without LDG.
    pub jump_energy: f64,
    pub total_energy: f64,
    pub e_l2: f64,
    pub e_inf: f64,
    /// `(Σ_s ‖f_s‖²_ω)^{1/2}`.
    pub weighted_l2: f64,
}

/// Fills a record from the current state and its field.
pub fn record<D: Discretization>(disc: &D, plasma: &PlasmaState<D::Field>) -> Result<DiagnosticsRecord> {
    let mut species = Vec::with_capacity(plasma.states.len());
    for (sp, st) in plasma.species.iter().zip(&plasma.states) {
        let m = st.moments()?;
        species.push(SpeciesRecord {
            name: sp.name.clone(),
            mass: m.density.integral(),
            momentum: sp.mass * m.momentum.integral(),
            kinetic_energy: sp.mass * m.kinetic.integral(),
            weighted_l2: st.weighted_l2_norm(),
            alpha: st.alpha(),
        });
    }
    let e = &plasma.electro.e_field;
    let e_sq = e.norm_sq();
    let electric_energy = 0.5 * e_sq;
    let jump_energy = 0.5 * plasma.electro.energy_jump_term;
    let mass = plasma
        .species
        .iter()
        .zip(&species)
        .map(|(sp, r)| sp.mass * r.mass)
        .sum();
    let momentum = species.iter().map(|r| r.momentum).sum();
    let kinetic_energy: f64 = species.iter().map(|r| r.kinetic_energy).sum();
    let weighted_l2 = species.iter().map(|r| r.weighted_l2 * r.weighted_l2).sum::<f64>().sqrt();
    Ok(DiagnosticsRecord {
        time: plasma.time,
        species,
        mass,
        momentum,
        kinetic_energy,
        electric_energy,
        jump_energy,
        total_energy: kinetic_energy + electric_energy + jump_energy,
        e_l2: e_sq.sqrt(),
        e_inf: disc.e_inf(e),
        weighted_l2,
    })
}

/// Deviations from the first record.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeviationSeries {
    pub mass: Vec<f64>,
    pub momentum_abs: Vec<f64>,
    pub momentum_rel: Vec<f64>,
    pub energy: Vec<f64>,
}

pub fn relative_deviation(value: f64, initial: f64) -> f64 {
    (value - initial).abs() / initial.abs().max(DEVIATION_FLOOR)
}

impl DeviationSeries {
    pub fn from_records(records: &[DiagnosticsRecord]) -> Self {
        let Some(first) = records.first() else {
            return Self::default();
        };
        let mut out = Self::default();
        for r in records {
            out.mass.push(relative_deviation(r.mass, first.mass));
            out.momentum_abs.push((r.momentum - first.momentum).abs());
            out.momentum_rel.push(relative_deviation(r.momentum, first.momentum));
            out.energy.push(relative_deviation(r.total_energy, first.total_energy));
        }
        out
    }

    pub fn max_mass(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_momentum_abs(&self) -> f64 {
        self.momentum_abs.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_energy(&self) -> f64 {
        self.energy.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityCheck {
    pub holds: bool,
    /// `min_t (bound(t) − value(t))`.
    pub margin: f64,
}

/// Checks `‖f(t)‖_ω ≤ ‖f(0)‖_ω e^{t/(4γ)} (1 + 1e−10)` at every sample of a
/// time-sorted series.
pub fn check_stability_bound(samples: &[(f64, f64)], gamma: f64) -> StabilityCheck {
    let Some(&(t0, n0)) = samples.first() else {
        return StabilityCheck {
            holds: true,
            margin: f64::INFINITY,
        };
    };
    let mut holds = true;
    let mut margin = f64::INFINITY;
    for &(t, v) in samples {
        let bound = n0 * ((t - t0) / (4.0 * gamma)).exp();
        holds &= v <= bound * (1.0 + 1e-10);
        margin = margin.min(bound - v);
    }
    StabilityCheck { holds, margin }
}

/// Time derivatives of the monitored totals assembled from the semi-discrete
/// right-hand side at the current state, with `α' = I(α, ‖E‖∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiDiscreteRates {
    pub mass: f64,
    pub momentum: f64,
    pub kinetic_energy: f64,
    pub electric_energy: f64,
    pub jump_energy: f64,
    pub total_energy: f64,
    /// `Σ_s (q_s/α_s) ∫E C₁_s dx`.
    pub field_work: f64,
    /// `β Σ[Φ][E] = (J(Φ+E) − J(Φ−E))/4` through the jump form `J`.
    pub jump_coupling: f64,
}

/// Assembles [`SemiDiscreteRates`]. `jump_term` is the quadratic form
/// `J(Φ) = β Σ[Φ]²` of the Poisson discretization (zero for conforming or
/// spectral fields); its bilinear form is recovered by polarization.
pub fn semi_discrete_rates<D: Discretization>(
    disc: &D,
    plasma: &PlasmaState<D::Field>,
    jump_term: &dyn Fn(&D::Field) -> f64,
) -> Result<SemiDiscreteRates> {
    let e = &plasma.electro.e_field;
    let phi = &plasma.electro.potential;
    let e_inf = disc.e_inf(e);
    let mut d_c0 = Vec::new();
    let (mut mass, mut momentum, mut kinetic, mut work) = (0.0, 0.0, 0.0, 0.0);
    for (sp, st) in plasma.species.iter().zip(&plasma.states) {
        if st.n_modes() < 3 {
            return Err(Error::TooFewModes {
                needed: 3,
                have: st.n_modes(),
            });
        }
        let alpha = st.alpha();
        let rate = alpha_rhs(alpha, e_inf, &st.params);
        let d = hermite_rhs(disc, &st.coeffs, alpha, rate, st.params.charge_mass_ratio, e, 0..3)?;
        mass += sp.mass * d[0].integral();
        momentum += sp.mass * (d[1].integral() / alpha - rate * st.coeffs[1].integral() / (alpha * alpha));
        let ke = (2f64.sqrt() * st.coeffs[2].integral() + st.coeffs[0].integral()) / (2.0 * alpha * alpha);
        let d_ke = (2f64.sqrt() * d[2].integral() + d[0].integral()) / (2.0 * alpha * alpha) - 2.0 * rate / alpha * ke;
        kinetic += sp.mass * d_ke;
        work += sp.charge / alpha * e.inner(&st.coeffs[1]);
        d_c0.push(d.into_iter().next().expect("mode 0"));
    }
    let refs: Vec<&D::Field> = d_c0.iter().collect();
    let (src, scale) = charge_source(disc, &plasma.species, &refs, 0.0);
    let d_es = disc.solve_poisson(&src, scale)?;
    let electric = e.inner(&d_es.e_field);
    let polar = |a: &D::Field, b: &D::Field| {
        (jump_term(&a.combine(1.0, b, 1.0)) - jump_term(&a.combine(1.0, b, -1.0))) / 4.0
    };
    let jump = polar(phi, &d_es.potential);
    let jump_coupling = polar(phi, e);
    Ok(SemiDiscreteRates {
        mass,
        momentum,
        kinetic_energy: kinetic,
        electric_energy: electric,
        jump_energy: jump,
        total_energy: kinetic + electric + jump,
        field_work: work,
        jump_coupling,
    })
}

/// CSV column names in output order.
pub fn csv_header(species: &[SpeciesRecord]) -> Vec<String> {
    let mut cols: Vec<String> = [
        "time",
        "mass",
        "momentum",
        "kinetic_energy",
        "electric_energy",
        "jump_energy",
        "total_energy",
        "e_l2",
        "e_inf",
        "weighted_l2",
        "mass_rel_dev",
        "momentum_abs_dev",
        "momentum_rel_dev",
        "energy_rel_dev",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for s in species {
        for q in ["mass", "momentum", "kinetic_energy", "weighted_l2", "alpha"] {
            cols.push(format!("{}_{q}", s.name));
        }
    }
    cols
}

/// Streams records as CSV; deviations are taken against the first row.
pub struct CsvWriter<W: Write> {
    inner: csv::Writer<W>,
    first: Option<DiagnosticsRecord>,
}

fn output_error(e: csv::Error) -> Error {
    Error::Output(format!("diagnostics CSV: {e}"))
}

impl CsvWriter<std::fs::File> {
    pub fn create(path: &Path) -> Result<Self> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(file))
    }
}

impl<W: Write> CsvWriter<W> {
    pub fn new(writer: W) -> Self {
        CsvWriter {
            inner: csv::Writer::from_writer(writer),
            first: None,
        }
    }

    pub fn write(&mut self, r: &DiagnosticsRecord) -> Result<()> {
        if self.first.is_none() {
            self.inner.write_record(csv_header(&r.species)).map_err(output_error)?;
            self.first = Some(r.clone());
        }
        let first = self.first.as_ref().expect("first record");
        let mut row = vec![
            r.time,
            r.mass,
            r.momentum,
            r.kinetic_energy,
            r.electric_energy,
            r.jump_energy,
            r.total_energy,
            r.e_l2,
            r.e_inf,
            r.weighted_l2,
            relative_deviation(r.mass, first.mass),
            (r.momentum - first.momentum).abs(),
            relative_deviation(r.momentum, first.momentum),
            relative_deviation(r.total_energy, first.total_energy),
        ];
        for s in &r.species {
            row.extend([s.mass, s.momentum, s.kinetic_energy, s.weighted_l2, s.alpha]);
        }
        self.inner
            .write_record(row.iter().map(|v| format!("{v:e}")))
            .map_err(output_error)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner
            .flush()
            .map_err(|e| Error::Output(format!("diagnostics CSV: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_bound_cases() {
        let flat: Vec<_> = (0..10).map(|i| (i as f64, 3.0)).collect();
        let c = check_stability_bound(&flat, 0.01);
        assert!(c.holds && c.margin == 0.0);
        let gamma = 0.5;
        let fast: Vec<_> = (0..10)
            .map(|i| (i as f64, (i as f64 / (2.0 * gamma)).exp()))
            .collect();
        let c = check_stability_bound(&fast, gamma);
        assert!(!c.holds && c.margin < 0.0);
    }

    #[test]
    fn deviations_start_at_zero() {
        let r = DiagnosticsRecord {
            time: 0.0,
            species: vec![],
            mass: 2.0,
            momentum: 0.0,
            kinetic_energy: 1.0,
            electric_energy: 0.5,
            jump_energy: 0.0,
            total_energy: 1.5,
            e_l2: 1.0,
            e_inf: 1.0,
            weighted_l2: 1.0,
        };
        let mut r2 = r.clone();
        r2.time = 1.0;
        r2.mass = 2.0 + 2e-12;
        r2.momentum = 1e-9;
        let d = DeviationSeries::from_records(&[r, r2]);
        assert_eq!((d.mass[0], d.momentum_abs[0], d.energy[0]), (0.0, 0.0, 0.0));
        assert!((d.mass[1] - 1e-12).abs() < 1e-15);
        assert_eq!(d.momentum_abs[1], 1e-9);
        assert!(d.momentum_rel[1] > 1e290);
    }
}
