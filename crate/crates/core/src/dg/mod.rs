//! Periodic 1D mesh, the broken polynomial space `V_h^k` in a modal
//! orthonormal Legendre basis, and the DG Vlasov operators.

mod operator;
pub mod reference;

pub use operator::{DgOperator, FluxSpec};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quadrature::gauss_legendre;
use reference::{left_value, legendre_values, right_value};

/// Partition `0 = x_{1/2} < … < x_{N+1/2} = L` of the periodic interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub length: f64,
    pub n_cells: usize,
    /// Polynomial degree `k` of the solution space.
    pub degree: usize,
    pub cell_edges: Vec<f64>,
}

impl Mesh {
    pub fn uniform(length: f64, n_cells: usize, degree: usize) -> Result<Arc<Self>> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("domain length must be positive, got {length}")));
        }
        if n_cells == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one cell".into()));
        }
        let h = length / n_cells as f64;
        let mut edges: Vec<f64> = (0..=n_cells).map(|i| i as f64 * h).collect();
        edges[n_cells] = length;
        Ok(Arc::new(Mesh {
            length,
            n_cells,
            degree,
            cell_edges: edges,
        }))
    }

    pub fn from_edges(edges: Vec<f64>, degree: usize) -> Result<Arc<Self>> {
        if edges.len() < 2 || edges[0] != 0.0 {
            return Err(Error::InvalidParameter("edges must start at 0 and contain at least one cell".into()));
        }
        if !edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter("edges must be strictly increasing".into()));
        }
        let length = *edges.last().unwrap();
        Ok(Arc::new(Mesh {
            length,
            n_cells: edges.len() - 1,
            degree,
            cell_edges: edges,
        }))
    }

    pub fn width(&self, cell: usize) -> f64 {
        self.cell_edges[cell + 1] - self.cell_edges[cell]
    }

    pub fn h_min(&self) -> f64 {
        (0..self.n_cells).map(|i| self.width(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        (0..self.n_cells).map(|i| self.width(i)).fold(0.0, f64::max)
    }

    /// Physical coordinate of reference point `xi` in `cell`.
    pub fn map_to_physical(&self, cell: usize, xi: f64) -> f64 {
        let a = self.cell_edges[cell];
        let b = self.cell_edges[cell + 1];
        0.5 * (a + b) + 0.5 * (b - a) * xi
    }

    /// Cell containing `x` (taken modulo `L`) and the reference coordinate.
    /// Points on an interior edge belong to the cell on their right.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let mut y = x.rem_euclid(self.length);
        if y >= self.length {
            y = 0.0;
        }
        let idx = self.cell_edges.partition_point(|e| *e <= y);
        let cell = idx.saturating_sub(1).min(self.n_cells - 1);
        let a = self.cell_edges[cell];
        let b = self.cell_edges[cell + 1];
        let xi = (2.0 * (y - a) / (b - a) - 1.0).clamp(-1.0, 1.0);
        (cell, xi)
    }
}

/// Values at one cell edge: left trace, right trace, jump `u⁺−u⁻`, average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Traces {
    pub minus: f64,
    pub plus: f64,
    pub jump: f64,
    pub average: f64,
}

/// Element of `V_h^degree`: per-cell coefficients in the orthonormal Legendre
/// basis, stored cell-major.
#[derive(Debug, Clone)]
pub struct DGField {
    mesh: Arc<Mesh>,
    degree: usize,
    coeffs: Vec<f64>,
}

impl DGField {
    pub fn zeros(mesh: &Arc<Mesh>, degree: usize) -> Self {
        DGField {
            mesh: Arc::clone(mesh),
            degree,
            coeffs: vec![0.0; mesh.n_cells * (degree + 1)],
        }
    }

    pub fn from_coeffs(mesh: &Arc<Mesh>, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != mesh.n_cells * (degree + 1) {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                mesh.n_cells * (degree + 1),
                coeffs.len()
            )));
        }
        Ok(DGField {
            mesh: Arc::clone(mesh),
            degree,
            coeffs,
        })
    }

    /// Constant function.
    pub fn constant(mesh: &Arc<Mesh>, degree: usize, value: f64) -> Self {
        let mut f = Self::zeros(mesh, degree);
        let c0 = value * 2f64.sqrt();
        for i in 0..mesh.n_cells {
            f.coeffs[i * (degree + 1)] = c0;
        }
        f
    }

    /// L² projection of `f` using `n_quad` Gauss points per cell.
    pub fn project<G: Fn(f64) -> f64>(mesh: &Arc<Mesh>, degree: usize, n_quad: usize, f: G) -> Self {
        let (xs, ws) = gauss_legendre(n_quad);
        let nb = degree + 1;
        let mut phi = vec![0.0; nb];
        let mut out = Self::zeros(mesh, degree);
        for cell in 0..mesh.n_cells {
            let dst = &mut out.coeffs[cell * nb..(cell + 1) * nb];
            for (xi, w) in xs.iter().zip(&ws) {
                let fx = f(mesh.map_to_physical(cell, *xi));
                legendre_values(*xi, &mut phi);
                for (d, p) in dst.iter_mut().zip(&phi) {
                    *d += w * fx * p;
                }
            }
        }
        out
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_basis(&self) -> usize {
        self.degree + 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn cell(&self, cell: usize) -> &[f64] {
        let nb = self.degree + 1;
        &self.coeffs[cell * nb..(cell + 1) * nb]
    }

    pub fn cell_mut(&mut self, cell: usize) -> &mut [f64] {
        let nb = self.degree + 1;
        &mut self.coeffs[cell * nb..(cell + 1) * nb]
    }

    /// Value at the left end of `cell` (`ξ = −1`).
    pub fn left_trace(&self, cell: usize) -> f64 {
        self.cell(cell).iter().enumerate().map(|(p, c)| c * left_value(p)).sum()
    }

    /// Value at the right end of `cell` (`ξ = 1`).
    pub fn right_trace(&self, cell: usize) -> f64 {
        self.cell(cell).iter().enumerate().map(|(p, c)| c * right_value(p)).sum()
    }

    pub fn eval_in_cell(&self, cell: usize, xi: f64) -> f64 {
        let mut phi = vec![0.0; self.degree + 1];
        legendre_values(xi, &mut phi);
        self.cell(cell).iter().zip(&phi).map(|(c, p)| c * p).sum()
    }

    /// Traces at edge `x_{e+1/2}` shared by cells `e−1` and `e` (indices wrap).
    pub fn traces(&self, edge: usize) -> Traces {
        let n = self.mesh.n_cells;
        let right_cell = edge % n;
        let left_cell = (edge + n - 1) % n;
        let minus = self.right_trace(left_cell);
        let plus = self.left_trace(right_cell);
        Traces {
            minus,
            plus,
            jump: plus - minus,
            average: 0.5 * (plus + minus),
        }
    }

    /// Exact `∫ u w dx`.
    pub fn l2_inner(&self, other: &DGField) -> Result<f64> {
        if !self.same_mesh(other) {
            return Err(Error::MeshMismatch);
        }
        let nb_a = self.degree + 1;
        let nb_b = other.degree + 1;
        let nb = nb_a.min(nb_b);
        let mut total = 0.0;
        for cell in 0..self.mesh.n_cells {
            let a = &self.coeffs[cell * nb_a..cell * nb_a + nb];
            let b = &other.coeffs[cell * nb_b..cell * nb_b + nb];
            let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            total += 0.5 * self.mesh.width(cell) * s;
        }
        Ok(total)
    }

    pub fn same_mesh(&self, other: &DGField) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || *self.mesh == *other.mesh
    }

    /// `max |u|` over `n_quad` Gauss points per cell and both traces of every
    /// cell.
    pub fn sup_norm(&self, n_quad: usize) -> f64 {
        let (xs, _) = gauss_legendre(n_quad);
        let nb = self.degree + 1;
        let mut table = vec![0.0; xs.len() * nb];
        for (i, xi) in xs.iter().enumerate() {
            legendre_values(*xi, &mut table[i * nb..(i + 1) * nb]);
        }
        let mut best: f64 = 0.0;
        for cell in 0..self.mesh.n_cells {
            let c = self.cell(cell);
            for row in table.chunks(nb) {
                let v: f64 = c.iter().zip(row).map(|(a, b)| a * b).sum();
                best = best.max(v.abs());
            }
            best = best.max(self.left_trace(cell).abs());
            best = best.max(self.right_trace(cell).abs());
        }
        best
    }

    /// Same function represented with a higher (or equal) degree.
    pub fn with_degree(&self, degree: usize) -> DGField {
        assert!(degree >= self.degree, "degree reduction is a projection, not a re-embedding");
        let mut out = DGField::zeros(&self.mesh, degree);
        for cell in 0..self.mesh.n_cells {
            out.cell_mut(cell)[..self.degree + 1].copy_from_slice(self.cell(cell));
        }
        out
    }
}

impl Field for DGField {
    fn zeros_like(&self) -> Self {
        DGField::zeros(&self.mesh, self.degree)
    }

    fn scale(&mut self, factor: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
    }

    fn add_scaled(&mut self, a: f64, other: &Self) {
        debug_assert!(self.same_mesh(other));
        if self.degree == other.degree {
            for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
                *x += a * y;
            }
        } else {
            let nb_a = self.degree + 1;
            let nb_b = other.degree + 1;
            let nb = nb_a.min(nb_b);
            for cell in 0..self.mesh.n_cells {
                for p in 0..nb {
                    self.coeffs[cell * nb_a + p] += a * other.coeffs[cell * nb_b + p];
                }
            }
        }
    }

    fn integral(&self) -> f64 {
        let nb = self.degree + 1;
        (0..self.mesh.n_cells)
            .map(|cell| self.mesh.width(cell) * self.coeffs[cell * nb])
            .sum::<f64>()
            / 2f64.sqrt()
    }

    fn inner(&self, other: &Self) -> f64 {
        self.l2_inner(other).expect("inner product of fields on different meshes")
    }

    fn eval(&self, x: f64) -> f64 {
        let (cell, xi) = self.mesh.locate(x);
        self.eval_in_cell(cell, xi)
    }

    fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    fn length(&self) -> f64 {
        self.mesh.length
    }
}
