//! Run configuration: a TOML file of top-level keys plus optional
//! `[species.<name>]` sections, overridable from the command line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poisson::{BetaMode, LdgOptions};
use crate::scenario::{build_scenario, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialMethod {
    Dg,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonMethod {
    Ldg,
    Mixed,
    Spectral,
}

/// Per-species overrides of the scenario values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub alpha0: Option<f64>,
    pub n_h: Option<usize>,
}

/// Run parameters as read from a file; `None` means the scenario default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scenario: String,
    pub n_x: Option<usize>,
    pub n_h: Option<usize>,
    pub degree: Option<usize>,
    /// Fixed step; when absent the step follows from `cfl`.
    pub dt: Option<f64>,
    pub cfl: f64,
    pub max_courant: f64,
    pub t_final: Option<f64>,
    pub method: SpatialMethod,
    /// Defaults to `ldg` for DG and `spectral` for Fourier.
    pub poisson: Option<PoissonMethod>,
    pub beta_mode: BetaMode,
    pub beta: f64,
    pub filter: bool,
    pub gamma: Option<f64>,
    pub out_dir: PathBuf,
    /// Write diagnostics every this many steps.
    pub diag_every: usize,
    pub snapshot_times: Option<Vec<f64>>,
    pub snapshot_nx: usize,
    pub snapshot_nv: usize,
    /// Reserved; the physics is deterministic.
    pub seed: u64,
    pub species: BTreeMap<String, SpeciesConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "two_stream".into(),
            n_x: None,
            n_h: None,
            degree: None,
            dt: None,
            cfl: 0.5,
            max_courant: 1.0,
            t_final: None,
            method: SpatialMethod::Dg,
            poisson: None,
            beta_mode: BetaMode::Constant,
            beta: 1.0,
            filter: true,
            gamma: None,
            out_dir: PathBuf::from("out"),
            diag_every: 1,
            snapshot_times: None,
            snapshot_nx: 128,
            snapshot_nv: 128,
            seed: 0,
            species: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }

    /// This configuration with every scenario default written out; loading
    /// the result resolves to the same run.
    pub fn explicit(&self) -> Result<Self> {
        let r = self.resolve()?;
        let mut c = self.clone();
        c.n_x = Some(r.n_x);
        c.degree = Some(r.degree);
        c.t_final = Some(r.t_final);
        c.poisson = Some(r.poisson);
        c.gamma = Some(r.gamma);
        c.snapshot_times = Some(r.snapshot_times.clone());
        c.n_h = None;
        c.species = r
            .species
            .iter()
            .map(|s| {
                let o = SpeciesConfig {
                    alpha0: Some(s.alpha0),
                    n_h: Some(s.n_h),
                };
                (s.name.clone(), o)
            })
            .collect();
        Ok(c)
    }

    /// Fills every default from the scenario and checks consistency.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let scenario = build_scenario(&self.scenario)?;
        let d = scenario.defaults;
        let poisson = match (self.method, self.poisson) {
            (SpatialMethod::Dg, None) => PoissonMethod::Ldg,
            (SpatialMethod::Dg, Some(PoissonMethod::Spectral)) => {
                return Err(Error::Config("the DG method needs `ldg` or `mixed` Poisson".into()))
            }
            (SpatialMethod::Dg, Some(p)) => p,
            (SpatialMethod::Fourier, None | Some(PoissonMethod::Spectral)) => PoissonMethod::Spectral,
            (SpatialMethod::Fourier, Some(p)) => {
                return Err(Error::Config(format!(
                    "the Fourier method uses the spectral Poisson solver, not `{p:?}`"
                )))
            }
        };
        for name in self.species.keys() {
            if !scenario.species.iter().any(|s| &s.name == name) {
                return Err(Error::Config(format!(
                    "scenario `{}` has no species `{name}`",
                    scenario.name
                )));
            }
        }
        let n_h_default = self.n_h.unwrap_or(d.n_h);
        let species = scenario
            .species
            .iter()
            .map(|s| {
                let o = self.species.get(&s.name).cloned().unwrap_or_default();
                ResolvedSpecies {
                    name: s.name.clone(),
                    charge: s.charge,
                    mass: s.mass,
                    alpha0: o.alpha0.unwrap_or(s.alpha0),
                    n_h: o.n_h.unwrap_or(n_h_default),
                }
            })
            .collect();
        let run = ResolvedRun {
            n_x: self.n_x.unwrap_or(d.n_x),
            degree: self.degree.unwrap_or(d.degree),
            dt: self.dt,
            cfl: self.cfl,
            max_courant: self.max_courant,
            t_final: self.t_final.unwrap_or(d.t_final),
            method: self.method,
            poisson,
            ldg: LdgOptions {
                beta_mode: self.beta_mode,
                beta_value: self.beta,
            },
            filter: self.filter,
            gamma: self.gamma.unwrap_or(d.gamma),
            diag_every: self.diag_every,
            snapshot_times: self
                .snapshot_times
                .clone()
                .unwrap_or_else(|| scenario.snapshot_times.clone()),
            snapshot_nx: self.snapshot_nx,
            snapshot_nv: self.snapshot_nv,
            seed: self.seed,
            species,
            scenario,
        };
        run.validate()?;
        Ok(run)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedSpecies {
    pub name: String,
    pub charge: f64,
    pub mass: f64,
    pub alpha0: f64,
    pub n_h: usize,
}

/// Every parameter a run consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub scenario: Scenario,
    pub n_x: usize,
    pub degree: usize,
    pub dt: Option<f64>,
    pub cfl: f64,
    pub max_courant: f64,
    pub t_final: f64,
    pub method: SpatialMethod,
    pub poisson: PoissonMethod,
    pub ldg: LdgOptions,
    pub filter: bool,
    pub gamma: f64,
    pub diag_every: usize,
    pub snapshot_times: Vec<f64>,
    pub snapshot_nx: usize,
    pub snapshot_nv: usize,
    pub seed: u64,
    pub species: Vec<ResolvedSpecies>,
}

impl ResolvedRun {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_x == 0 {
            return bad("n_x must be positive".into());
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        for (name, v) in [("cfl", self.cfl), ("max_courant", self.max_courant), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final must be nonnegative, got {}", self.t_final));
        }
        if !(self.ldg.beta_value > 0.0 && self.ldg.beta_value.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.ldg.beta_value));
        }
        if self.diag_every == 0 {
            return bad("diag_every must be at least 1".into());
        }
        if self.snapshot_nx == 0 || self.snapshot_nv < 2 {
            return bad("snapshot grids need snapshot_nx ≥ 1 and snapshot_nv ≥ 2".into());
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return bad(format!("invalid snapshot time {t}"));
        }
        for s in &self.species {
            if s.n_h < 3 {
                return bad(format!("species `{}` needs n_h ≥ 3, got {}", s.name, s.n_h));
            }
            if !(s.alpha0 > 0.0 && s.alpha0.is_finite()) {
                return bad(format!("species `{}` needs alpha0 > 0", s.name));
            }
        }
        Ok(())
    }

    /// Flat description for the run manifest.
    pub fn manifest(&self) -> toml::Table {
        let mut t = toml::Table::new();
        let mut put = |k: &str, v: toml::Value| {
            t.insert(k.to_string(), v);
        };
        put("scenario", self.scenario.name.clone().into());
        put("qualitative_scenario", self.scenario.qualitative.into());
        put("x_min", self.scenario.x_min.into());
        put("length", self.scenario.length.into());
        put("n_x", (self.n_x as i64).into());
        put("degree", (self.degree as i64).into());
        if let Some(dt) = self.dt {
            put("dt", dt.into());
        }
        put("cfl", self.cfl.into());
        put("max_courant", self.max_courant.into());
        put("t_final", self.t_final.into());
        put("method", format!("{:?}", self.method).to_lowercase().into());
        put("poisson", format!("{:?}", self.poisson).to_lowercase().into());
        put(
            "beta_mode",
            match self.ldg.beta_mode {
                BetaMode::Constant => "constant",
                BetaMode::OverH => "over_h",
            }
            .into(),
        );
        put("beta", self.ldg.beta_value.into());
        put("filter", self.filter.into());
        put("gamma", self.gamma.into());
        put("diag_every", (self.diag_every as i64).into());
        put(
            "snapshot_times",
            toml::Value::Array(self.snapshot_times.iter().map(|t| (*t).into()).collect()),
        );
        put("snapshot_nx", (self.snapshot_nx as i64).into());
        put("snapshot_nv", (self.snapshot_nv as i64).into());
        put("seed", (self.seed as i64).into());
        let mut sp = toml::Table::new();
        for s in &self.species {
            let mut e = toml::Table::new();
            e.insert("charge".into(), s.charge.into());
            e.insert("mass".into(), s.mass.into());
            e.insert("charge_mass_ratio".into(), (s.charge / s.mass).into());
            e.insert("alpha0".into(), s.alpha0.into());
            e.insert("n_h".into(), (s.n_h as i64).into());
            sp.insert(s.name.clone(), toml::Value::Table(e));
        }
        t.insert("species".into(), toml::Value::Table(sp));
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_keys_and_species_sections() {
        let cfg = RunConfig::from_toml_str(
            r#"
            scenario = "ion_acoustic"
            n_x = 16
            method = "dg"
            poisson = "mixed"
            [species.ions]
            alpha0 = 40.0
            "#,
        )
        .unwrap();
        let run = cfg.resolve().unwrap();
        assert_eq!(run.n_x, 16);
        assert_eq!(run.poisson, PoissonMethod::Mixed);
        assert_eq!(run.species[1].alpha0, 40.0);
        assert_eq!(run.species[0].alpha0, 1.0);
        assert_eq!(run.species[0].n_h, 128);
    }

    #[test]
    fn fourier_forces_spectral_poisson() {
        let cfg = RunConfig {
            method: SpatialMethod::Fourier,
            ..RunConfig::default()
        };
        assert_eq!(cfg.resolve().unwrap().poisson, PoissonMethod::Spectral);
        let bad = RunConfig {
            method: SpatialMethod::Fourier,
            poisson: Some(PoissonMethod::Ldg),
            ..RunConfig::default()
        };
        assert!(matches!(bad.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_unknown_keys_and_scenarios() {
        assert!(RunConfig::from_toml_str("nx_typo = 3").is_err());
        let cfg = RunConfig {
            scenario: "nope".into(),
            ..RunConfig::default()
        };
        assert!(matches!(cfg.resolve(), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig {
            dt: Some(0.01),
            snapshot_times: Some(vec![1.0, 2.5]),
            ..RunConfig::default()
        };
        let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn explicit_config_resolves_identically() {
        let cfg = RunConfig {
            scenario: "ion_acoustic".into(),
            n_h: Some(32),
            ..RunConfig::default()
        };
        let full = cfg.explicit().unwrap();
        let back = RunConfig::from_toml_str(&full.to_toml_string()).unwrap();
        assert_eq!(back.resolve().unwrap(), cfg.resolve().unwrap());
        assert_eq!(back.species["ions"].n_h, Some(32));
    }
}
