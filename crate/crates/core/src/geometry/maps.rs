//! Incidence map Δ and averaging maps Ξ, Ξ̃.
//!
//! Rows of Δ (columns of Ξ) are indexed by cells followed by boundary cells:
//! row `num_cells() + b` is the boundary cell of boundary face `b`.

use super::grid::Grid;
use crate::boundary::Robin;
use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

#[derive(Clone, Debug)]
pub struct IncidenceMap<T> {
    pub matrix: SparseMatrix<T>,
    num_cells: usize,
}

impl<T: Scalar> IncidenceMap<T> {
    /// Δ_T: rows of the grid cells.
    pub fn interior(&self) -> SparseMatrix<T> {
        self.matrix.block(0..self.num_cells, 0..self.matrix.ncols())
    }

    /// Δ_B: rows of the boundary cells.
    pub fn boundary(&self) -> SparseMatrix<T> {
        self.matrix.block(self.num_cells..self.matrix.nrows(), 0..self.matrix.ncols())
    }

    /// Discrete divergence `(Δψ)_i` of an integrated scalar face field.
    pub fn divergence(&self, psi: &[T]) -> Vec<T> {
        self.matrix.mul_vec(psi)
    }
}

pub fn build_incidence<T: Scalar>(grid: &Grid<T>) -> IncidenceMap<T> {
    let nc = grid.num_cells();
    let mut t = Vec::with_capacity(2 * grid.num_faces());
    for (k, f) in grid.faces().iter().enumerate() {
        t.push((f.inner, k, T::one()));
        let j = match f.outer {
            Some(j) => j,
            None => nc + grid.boundary_index(k).expect("boundary face"),
        };
        t.push((j, k, -T::one()));
    }
    IncidenceMap {
        matrix: SparseMatrix::from_triplets(nc + grid.num_boundary_faces(), grid.num_faces(), &t)
            .expect("valid incidence entries"),
        num_cells: nc,
    }
}

/// Weights `(Ξ_{k,i}, Ξ_{k,j})` of face `k` for inner cell `i` and outer cell
/// (or boundary cell) `j`. Boundary cells inherit the inner cell's weight and
/// sit at distance `robin`.
pub fn averaging_weights<T: Scalar>(grid: &Grid<T>, k: usize, weight: &[T], robin: Option<Robin<T>>) -> (T, T) {
    let f = grid.face(k);
    match (f.outer, f.dist_outer) {
        (Some(j), Some(dj)) => {
            let a = weight[f.inner] / f.dist_inner;
            let e = weight[j] / dj;
            let xi = a / (a + e);
            (xi, e / (a + e))
        }
        _ => {
            let b = robin.expect("boundary face needs a Robin weight");
            (b.interior_fraction(f.dist_inner), b.boundary_fraction(f.dist_inner))
        }
    }
}

#[derive(Clone, Debug)]
pub struct AveragingMap<T> {
    pub xi: SparseMatrix<T>,
    pub xi_tilde: SparseMatrix<T>,
}

/// Ξ and Ξ̃ for a positive per-cell weight and per-boundary-face Robin weights.
pub fn build_averaging<T: Scalar>(grid: &Grid<T>, weight: &[T], robin: &[Robin<T>]) -> Result<AveragingMap<T>> {
    if weight.len() != grid.num_cells() || robin.len() != grid.num_boundary_faces() {
        return Err(TpsaError::invalid("averaging weight sizes do not match the grid"));
    }
    if let Some(i) = weight.iter().position(|w| !(*w > T::zero()) || !w.is_finite()) {
        return Err(TpsaError::invalid(format!("averaging weight must be positive, cell {i} has {}", weight[i])));
    }
    let nc = grid.num_cells();
    let mut xi = Vec::with_capacity(2 * grid.num_faces());
    let mut xt = Vec::with_capacity(2 * grid.num_faces());
    for (k, f) in grid.faces().iter().enumerate() {
        let bi = grid.boundary_index(k);
        let (wi, wj) = averaging_weights(grid, k, weight, bi.map(|b| robin[b]));
        let j = f.outer.unwrap_or_else(|| nc + bi.expect("boundary face"));
        xi.push((k, f.inner, wi));
        xi.push((k, j, wj));
        xt.push((k, f.inner, T::one() - wi));
        xt.push((k, j, T::one() - wj));
    }
    let ncol = nc + grid.num_boundary_faces();
    Ok(AveragingMap {
        xi: SparseMatrix::from_triplets(grid.num_faces(), ncol, &xi)?,
        xi_tilde: SparseMatrix::from_triplets(grid.num_faces(), ncol, &xt)?,
    })
}
