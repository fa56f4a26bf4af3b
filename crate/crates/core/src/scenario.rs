//! Benchmark initial data: Landau damping, two-stream, bump-on-tail and
//! ion-acoustic instabilities.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const SCENARIO_NAMES: [&str; 4] = ["landau", "two_stream", "bump_on_tail", "ion_acoustic"];

/// Initial distribution `f(0, x, v)` of one species.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// `(1 + κ cos(kx)) e^{−v²/2}/√(2π)`.
    Landau { kappa: f64, k: f64 },
    /// `(2/7)(1 + 5v²)(1 + κ((cos 2kx + cos 3kx)/1.2 + cos kx)) e^{−v²/2}/√(2π)`.
    TwoStream { kappa: f64, k: f64 },
    /// `f_b(v)(1 + κ cos(k n x))` with a bulk and a drifting beam.
    BumpOnTail {
        kappa: f64,
        k: f64,
        mode: f64,
        n_p: f64,
        n_b: f64,
        v_d: f64,
        v_p: f64,
        v_b: f64,
    },
    /// `(1 + κ cos(kx)) e^{−(v−v_d)²/2}/√(2π)`.
    DriftedMaxwellian { kappa: f64, k: f64, v_d: f64 },
    /// `e^{−v²/(2v_th²)}/√(2π v_th²)`.
    Maxwellian { v_th: f64 },
}

impl Distribution {
    pub fn eval(&self, x: f64, v: f64) -> f64 {
        let gauss = |v: f64| (-0.5 * v * v).exp() / (2.0 * PI).sqrt();
        match *self {
            Distribution::Landau { kappa, k } => (1.0 + kappa * (k * x).cos()) * gauss(v),
            Distribution::TwoStream { kappa, k } => {
                let pert = ((2.0 * k * x).cos() + (3.0 * k * x).cos()) / 1.2 + (k * x).cos();
                2.0 / 7.0 * (1.0 + 5.0 * v * v) * (1.0 + kappa * pert) * gauss(v)
            }
            Distribution::BumpOnTail {
                kappa,
                k,
                mode,
                n_p,
                n_b,
                v_d,
                v_p,
                v_b,
            } => {
                let bulk = n_p / (PI.sqrt() * v_p) * (-(v * v) / (v_p * v_p)).exp();
                let beam = n_b / (PI.sqrt() * v_b) * (-(v - v_d) * (v - v_d) / (v_b * v_b)).exp();
                (bulk + beam) * (1.0 + kappa * (k * mode * x).cos())
            }
            Distribution::DriftedMaxwellian { kappa, k, v_d } => (1.0 + kappa * (k * x).cos()) * gauss(v - v_d),
            Distribution::Maxwellian { v_th } => gauss(v / v_th) / v_th,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesSpec {
    pub name: String,
    pub charge: f64,
    pub mass: f64,
    pub alpha0: f64,
    pub distribution: Distribution,
    /// Velocity range for snapshots.
    pub v_window: (f64, f64),
}

impl SpeciesSpec {
    pub fn charge_mass_ratio(&self) -> f64 {
        self.charge / self.mass
    }
}

/// Resolution and duration used when a run does not override them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub n_x: usize,
    pub n_h: usize,
    pub degree: usize,
    pub t_final: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Left end of the physical domain; the solver works on `[0, L)`.
    pub x_min: f64,
    pub length: f64,
    pub species: Vec<SpeciesSpec>,
    pub defaults: Defaults,
    pub snapshot_times: Vec<f64>,
    /// Parameters chosen here rather than taken from a published run.
    pub qualitative: bool,
}

pub fn build_scenario(name: &str) -> Result<Scenario> {
    let single = |distribution, alpha0, v_window| {
        vec![SpeciesSpec {
            name: "electrons".into(),
            charge: 1.0,
            mass: 1.0,
            alpha0,
            distribution,
            v_window,
        }]
    };
    let scenario = match name {
        "landau" => Scenario {
            name: name.into(),
            x_min: 0.0,
            length: 4.0 * PI,
            species: single(Distribution::Landau { kappa: 0.01, k: 0.5 }, 1.0, (-6.0, 6.0)),
            defaults: Defaults {
                n_x: 64,
                n_h: 128,
                degree: 2,
                t_final: 50.0,
                gamma: 0.01,
            },
            snapshot_times: vec![10.0, 20.0, 30.0],
            qualitative: true,
        },
        "two_stream" => Scenario {
            name: name.into(),
            x_min: 0.0,
            length: 4.0 * PI,
            species: single(Distribution::TwoStream { kappa: 0.01, k: 0.5 }, 1.0, (-8.0, 8.0)),
            defaults: Defaults {
                n_x: 64,
                n_h: 128,
                degree: 2,
                t_final: 50.0,
                gamma: 0.01,
            },
            snapshot_times: vec![20.0, 30.0, 40.0],
            qualitative: false,
        },
        "bump_on_tail" => Scenario {
            name: name.into(),
            x_min: 0.0,
            length: 20.0 * PI,
            species: single(
                Distribution::BumpOnTail {
                    kappa: 0.04,
                    k: 0.1,
                    mode: 3.0,
                    n_p: 0.9,
                    n_b: 0.1,
                    v_d: 4.5,
                    v_p: 2f64.sqrt(),
                    v_b: 2f64.sqrt() / 2.0,
                },
                5.0 / 7.0,
                (-8.0, 8.0),
            ),
            defaults: Defaults {
                n_x: 64,
                n_h: 128,
                degree: 2,
                t_final: 50.0,
                gamma: 0.01,
            },
            snapshot_times: vec![12.5, 25.0, 50.0],
            qualitative: false,
        },
        "ion_acoustic" => {
            let v_th = 1.0 / 50.0;
            Scenario {
                name: name.into(),
                x_min: -5.0,
                length: 10.0,
                species: vec![
                    SpeciesSpec {
                        name: "electrons".into(),
                        charge: -1.0,
                        mass: 1.0,
                        alpha0: 1.0,
                        distribution: Distribution::DriftedMaxwellian {
                            kappa: 1e-4,
                            k: 2.0 * PI / 10.0,
                            v_d: 2.0,
                        },
                        v_window: (-4.0, 8.0),
                    },
                    SpeciesSpec {
                        name: "ions".into(),
                        charge: 1.0,
                        mass: 25.0,
                        alpha0: 1.0 / v_th,
                        distribution: Distribution::Maxwellian { v_th },
                        v_window: (-0.2, 0.2),
                    },
                ],
                defaults: Defaults {
                    n_x: 128,
                    n_h: 128,
                    degree: 2,
                    t_final: 250.0,
                    gamma: 0.01,
                },
                snapshot_times: vec![175.0, 200.0, 250.0],
                qualitative: false,
            }
        }
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(scenario)
}
