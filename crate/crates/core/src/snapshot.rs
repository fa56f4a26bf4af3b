//! Reconstructed `f(x, v)` on a tensor grid, stored as a self-describing
//! text matrix.
//!
//! ```text
//! # hermite-vlasov snapshot
//! time <t>
//! species <name>
//! nx <n>
//! nv <m>
//! x <n values>
//! v <m values>
//! data
//! <n rows of m values>
//! ```
//!
//! Values use the shortest representation that parses back to the same
//! double.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermite::{basis_all, HermiteState};

const MAGIC: &str = "# hermite-vlasov snapshot";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub species: String,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// Row-major, one row per `x`.
    pub values: Vec<f64>,
}

impl Snapshot {
    /// Samples `Σ Cₙ(x) Ψₙ(α, v)`. `x` is in physical coordinates; the state
    /// lives on `[0, L)` shifted by `x_min`.
    pub fn from_state<F: Field>(
        state: &HermiteState<F>,
        species: &str,
        time: f64,
        x_min: f64,
        x: Vec<f64>,
        v: Vec<f64>,
    ) -> Self {
        let n_modes = state.n_modes();
        let mut psi = vec![0.0; v.len() * n_modes];
        for (j, vj) in v.iter().enumerate() {
            basis_all(state.alpha(), *vj, &mut psi[j * n_modes..(j + 1) * n_modes]);
        }
        let mut values = Vec::with_capacity(x.len() * v.len());
        let mut cx = vec![0.0; n_modes];
        for xi in &x {
            for (c, field) in cx.iter_mut().zip(&state.coeffs) {
                *c = field.eval(xi - x_min);
            }
            for row in psi.chunks(n_modes) {
                values.push(cx.iter().zip(row).map(|(a, b)| a * b).sum());
            }
        }
        Snapshot {
            time,
            species: species.to_string(),
            x,
            v,
            values,
        }
    }

    /// `nx` cell-start points on `[x_min, x_min + L)` and `nv` points spanning
    /// `[v_min, v_max]`.
    pub fn grids(x_min: f64, length: f64, nx: usize, v_window: (f64, f64), nv: usize) -> (Vec<f64>, Vec<f64>) {
        let x = (0..nx).map(|i| x_min + length * i as f64 / nx as f64).collect();
        let (lo, hi) = v_window;
        let v = (0..nv)
            .map(|j| lo + (hi - lo) * j as f64 / (nv.max(2) - 1) as f64)
            .collect();
        (x, v)
    }

    pub fn value(&self, ix: usize, iv: usize) -> f64 {
        self.values[ix * self.v.len() + iv]
    }

    pub fn to_text(&self) -> String {
        let join = |xs: &[f64]| xs.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        writeln!(s, "{MAGIC}").unwrap();
        writeln!(s, "time {:?}", self.time).unwrap();
        writeln!(s, "species {}", self.species).unwrap();
        writeln!(s, "nx {}", self.x.len()).unwrap();
        writeln!(s, "nv {}", self.v.len()).unwrap();
        writeln!(s, "x {}", join(&self.x)).unwrap();
        writeln!(s, "v {}", join(&self.v)).unwrap();
        writeln!(s, "data").unwrap();
        for row in self.values.chunks(self.v.len().max(1)) {
            writeln!(s, "{}", join(row)).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Output(format!("malformed snapshot: {m}"));
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(bad("missing header"));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(key))?;
            let rest = line.strip_prefix(key).ok_or_else(|| bad(key))?;
            Ok(rest.trim_start().to_string())
        };
        let nums = |s: &str| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| bad(t)))
                .collect()
        };
        let time = field("time")?.parse::<f64>().map_err(|_| bad("time"))?;
        let species = field("species")?;
        let nx: usize = field("nx")?.parse().map_err(|_| bad("nx"))?;
        let nv: usize = field("nv")?.parse().map_err(|_| bad("nv"))?;
        let x = nums(&field("x")?)?;
        let v = nums(&field("v")?)?;
        if !field("data")?.is_empty() || x.len() != nx || v.len() != nv {
            return Err(bad("grid dimensions"));
        }
        let mut values = Vec::with_capacity(nx * nv);
        for line in lines.by_ref().take(nx) {
            let row = nums(line)?;
            if row.len() != nv {
                return Err(bad("row length"));
            }
            values.extend(row);
        }
        if values.len() != nx * nv {
            return Err(bad("row count"));
        }
        Ok(Snapshot {
            time,
            species,
            x,
            v,
            values,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
