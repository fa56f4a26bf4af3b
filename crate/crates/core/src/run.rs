//! Initialization from a scenario and the time loop with diagnostics and
//! snapshot output.

use std::path::{Path, PathBuf};

use crate::config::{PoissonMethod, ResolvedRun, SpatialMethod};
use crate::dg::Mesh;
use crate::diagnostics::{record, CsvWriter, DiagnosticsRecord};
use crate::discretization::{DgDiscretization, Discretization, FourierDiscretization};
use crate::error::{Error, Result};
use crate::hermite::{HermiteParams, HermiteState, VelocityGrid, VelocityProjector};
use crate::scenario::Scenario;
use crate::snapshot::Snapshot;
use crate::timestep::{step, suggest_plasma_dt, PlasmaState, Species, StepConfig};

/// Relative size of the last Hermite mode above which the initial data is
/// reported as unresolved.
pub const TAIL_WARNING: f64 = 1e-8;

/// Resolution of one species in [`initialize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesResolution {
    pub n_h: usize,
    pub alpha0: f64,
    pub gamma: f64,
}

/// Projects every species of `scenario` onto the Hermite basis at the
/// sample points of `disc`, fits the spatial fields and solves Poisson.
pub fn initialize<D: Discretization>(
    disc: &D,
    scenario: &Scenario,
    resolution: &[SpeciesResolution],
) -> Result<PlasmaState<D::Field>> {
    if resolution.len() != scenario.species.len() {
        return Err(Error::InvalidParameter(format!(
            "{} resolutions for {} species",
            resolution.len(),
            scenario.species.len()
        )));
    }
    let xs = disc.sample_points();
    let mut species = Vec::new();
    let mut states = Vec::new();
    for (spec, res) in scenario.species.iter().zip(resolution) {
        let params = HermiteParams::new(res.n_h, res.alpha0, res.gamma, spec.charge_mass_ratio())?;
        let grid = VelocityGrid::for_params(&params);
        let projector = VelocityProjector::new(&params, &grid);
        let mut per_mode = vec![vec![0.0; xs.len()]; res.n_h];
        let mut samples = vec![0.0; projector.nodes().len()];
        for (ix, x) in xs.iter().enumerate() {
            let xp = scenario.x_min + x;
            for (s, v) in samples.iter_mut().zip(projector.nodes()) {
                *s = spec.distribution.eval(xp, *v);
            }
            for (n, c) in projector.project_samples(&samples)?.into_iter().enumerate() {
                per_mode[n][ix] = c;
            }
        }
        let peak = per_mode.iter().flatten().fold(0.0f64, |m, c| m.max(c.abs()));
        let tail = per_mode[res.n_h - 1].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if tail > TAIL_WARNING * peak {
            log::warn!(
                "species `{}`: initial data not resolved by {} Hermite modes (|C_{}| / max = {:.2e})",
                spec.name,
                res.n_h,
                res.n_h - 1,
                tail / peak
            );
        }
        let coeffs = per_mode.iter().map(|vals| disc.fit(vals)).collect();
        states.push(HermiteState::new(coeffs, params)?);
        species.push(Species::new(spec.name.clone(), spec.charge, spec.mass)?);
    }
    PlasmaState::new(disc, species, states)
}

/// Uniform step count and size reaching `t_final` exactly.
pub fn plan_steps(t_final: f64, dt_max: f64) -> (usize, f64) {
    if t_final <= 0.0 {
        return (0, dt_max);
    }
    let n = (t_final / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (n, t_final / n as f64)
}

/// Advances `plasma` `n_steps` times, recording diagnostics initially, every
/// `diag_every` steps and at the end.
pub fn simulate<D: Discretization>(
    disc: &D,
    plasma: PlasmaState<D::Field>,
    cfg: &StepConfig,
    n_steps: usize,
    diag_every: usize,
) -> Result<(PlasmaState<D::Field>, Vec<DiagnosticsRecord>)> {
    let mut records = vec![record(disc, &plasma)?];
    let mut p = plasma;
    for i in 1..=n_steps {
        p = step(disc, &p, cfg)?;
        if i % diag_every.max(1) == 0 || i == n_steps {
            records.push(record(disc, &p)?);
        }
    }
    Ok((p, records))
}

/// Summary of a finished [`run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub steps: usize,
    pub dt: f64,
    pub final_time: f64,
    pub diagnostics: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Executes a resolved configuration, writing `diagnostics.csv`,
/// `snapshot_<species>_t<time>.txt` files and `manifest.toml` into `out_dir`.
pub fn run(cfg: &ResolvedRun, out_dir: &Path) -> Result<RunReport> {
    let scenario = &cfg.scenario;
    match cfg.method {
        SpatialMethod::Dg => {
            let mesh = Mesh::uniform(scenario.length, cfg.n_x, cfg.degree)?;
            let disc = match cfg.poisson {
                PoissonMethod::Mixed => DgDiscretization::mixed(&mesh)?,
                _ => DgDiscretization::ldg(&mesh, cfg.ldg)?,
            };
            run_with(&disc, cfg, out_dir)
        }
        SpatialMethod::Fourier => {
            let disc = FourierDiscretization::new(cfg.n_x, scenario.length)?;
            run_with(&disc, cfg, out_dir)
        }
    }
}

fn snapshot_name(species: &str, time: f64) -> String {
    format!("snapshot_{species}_t{time}.txt")
}

fn run_with<D: Discretization>(disc: &D, cfg: &ResolvedRun, out_dir: &Path) -> Result<RunReport> {
    let scenario = &cfg.scenario;
    let resolution: Vec<SpeciesResolution> = cfg
        .species
        .iter()
        .map(|s| SpeciesResolution {
            n_h: s.n_h,
            alpha0: s.alpha0,
            gamma: cfg.gamma,
        })
        .collect();
    let plasma = initialize(disc, scenario, &resolution)?;
    let dt_max = cfg.dt.unwrap_or_else(|| suggest_plasma_dt(disc, &plasma, cfg.cfl));
    let (n_steps, dt) = plan_steps(cfg.t_final, dt_max);
    let step_cfg = StepConfig {
        dt,
        cfl: cfg.cfl,
        max_courant: cfg.max_courant,
        filter_enabled: cfg.filter,
        free_streaming: false,
    };
    let mut snapshot_steps: Vec<(usize, f64)> = cfg
        .snapshot_times
        .iter()
        .filter(|t| **t <= cfg.t_final * (1.0 + 1e-12))
        .map(|t| (((t / dt).round() as usize).min(n_steps), *t))
        .collect();
    if snapshot_steps.is_empty() || cfg.t_final == 0.0 {
        snapshot_steps.push((0, 0.0));
    }
    snapshot_steps.sort_by_key(|a| a.0);
    snapshot_steps.dedup_by_key(|s| s.0);

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut manifest = cfg.manifest();
    manifest.insert("steps".into(), (n_steps as i64).into());
    manifest.insert("dt_used".into(), dt.into());
    manifest.insert("discretization".into(), disc.describe().into());
    manifest.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    let manifest_path = out_dir.join("manifest.toml");
    std::fs::write(&manifest_path, toml::to_string(&manifest).expect("manifest serializes"))
        .map_err(|e| Error::io(&manifest_path, e))?;

    let diag_path = out_dir.join("diagnostics.csv");
    let mut csv = CsvWriter::create(&diag_path)?;
    let mut snapshots = Vec::new();
    let write_snapshots = |p: &PlasmaState<D::Field>, nominal: f64, out: &mut Vec<PathBuf>| -> Result<()> {
        for ((sp, st), spec) in p.species.iter().zip(&p.states).zip(&scenario.species) {
            let (x, v) = Snapshot::grids(
                scenario.x_min,
                scenario.length,
                cfg.snapshot_nx,
                spec.v_window,
                cfg.snapshot_nv,
            );
            let snap = Snapshot::from_state(st, &sp.name, p.time, scenario.x_min, x, v);
            let path = out_dir.join(snapshot_name(&sp.name, nominal));
            snap.write(&path)?;
            out.push(path);
        }
        Ok(())
    };

    let mut p = plasma;
    csv.write(&record(disc, &p)?)?;
    let mut next_snap = snapshot_steps.iter().peekable();
    if let Some(&&(_, t)) = next_snap.peek().filter(|s| s.0 == 0) {
        write_snapshots(&p, t, &mut snapshots)?;
        next_snap.next();
    }
    for i in 1..=n_steps {
        p = match step(disc, &p, &step_cfg) {
            Ok(next) => next,
            Err(e) => {
                csv.flush()?;
                return Err(e);
            }
        };
        if i % cfg.diag_every == 0 || i == n_steps {
            csv.write(&record(disc, &p)?)?;
        }
        if let Some(&&(_, t)) = next_snap.peek().filter(|s| s.0 == i) {
            write_snapshots(&p, t, &mut snapshots)?;
            next_snap.next();
        }
    }
    csv.flush()?;
    log::info!(
        "{}: {} steps of {:.4e} with {}, final alpha {:?}",
        scenario.name,
        n_steps,
        dt,
        disc.describe(),
        p.states.iter().map(|s| s.alpha()).collect::<Vec<_>>()
    );
    Ok(RunReport {
        steps: n_steps,
        dt,
        final_time: p.time,
        diagnostics: diag_path,
        snapshots,
    })
}
