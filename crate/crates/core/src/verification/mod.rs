//! Discrete norms, manufactured solutions, errors and the convergence driver.

mod convergence;
pub mod exact;
pub mod identities;
mod norms;

pub use identities::{averaging_identity, directional_decomposition};
pub use convergence::{run_convergence, ConvergenceReport, ExperimentSpec, GridSource, LevelResult, Model, SideKinds};
pub use exact::{boundary_data, lookup as lookup_solution, BoundaryKinds, ExactSolution};
pub use norms::{
    cell_norm, cell_seminorm, compute_error, face_difference_norm, face_norm, solution_norm, solution_norm_parts,
    ErrorReport, NormKind, NormParts,
};

use crate::assembly::DofLayout;
use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::scalar::Scalar;

/// Per-cell unknowns. `u` and `r` are cell-major with `dim` and `rot_dim`
/// components; `w` is empty for the elastic models.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSolution<T> {
    pub dim: usize,
    pub rot_dim: usize,
    pub u: Vec<T>,
    pub r: Vec<T>,
    pub p: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Scalar> DiscreteSolution<T> {
    pub fn zeros(grid: &Grid<T>, with_w: bool) -> Self {
        let n = grid.num_cells();
        DiscreteSolution {
            dim: grid.dim(),
            rot_dim: grid.rot_dim(),
            u: vec![T::zero(); n * grid.dim()],
            r: vec![T::zero(); n * grid.rot_dim()],
            p: vec![T::zero(); n],
            w: if with_w { vec![T::zero(); n] } else { Vec::new() },
        }
    }

    /// Splits a block vector laid out by `layout`.
    pub fn from_vector(layout: &DofLayout, x: &[T]) -> Result<Self> {
        if x.len() != layout.len() {
            return Err(TpsaError::invalid("solution vector length does not match the layout"));
        }
        let w = if layout.with_w { x[layout.range(crate::assembly::Field::W)].to_vec() } else { Vec::new() };
        use crate::assembly::Field;
        Ok(DiscreteSolution {
            dim: layout.dim,
            rot_dim: layout.rot_dim,
            u: x[layout.range(Field::U)].to_vec(),
            r: x[layout.range(Field::R)].to_vec(),
            p: x[layout.range(Field::P)].to_vec(),
            w,
        })
    }

    /// The exact fields sampled at cell centers.
    pub fn sample(exact: &dyn ExactSolution, grid: &Grid<T>, with_w: bool) -> Self {
        let mut s = Self::zeros(grid, with_w);
        let (dim, rd) = (s.dim, s.rot_dim);
        for (c, cell) in grid.cells().iter().enumerate() {
            let x = cell.center.map(|v| v.to_f64_lossy());
            let u = exact.u(x);
            let r = exact.r(x);
            for d in 0..dim {
                s.u[c * dim + d] = T::lit(u[d]);
            }
            if rd == 1 {
                s.r[c] = T::lit(r[2]);
            } else {
                for d in 0..3 {
                    s.r[c * 3 + d] = T::lit(r[d]);
                }
            }
            s.p[c] = T::lit(exact.p(x));
            if with_w {
                s.w[c] = T::lit(exact.w(x));
            }
        }
        s
    }

    pub fn num_cells(&self) -> usize {
        self.p.len()
    }

    pub fn has_w(&self) -> bool {
        !self.w.is_empty()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.u.len() != other.u.len() || self.r.len() != other.r.len() || self.p.len() != other.p.len() || self.w.len() != other.w.len()
        {
            return Err(TpsaError::invalid("solution sizes differ"));
        }
        let z = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect();
        Ok(DiscreteSolution {
            dim: self.dim,
            rot_dim: self.rot_dim,
            u: z(&self.u, &other.u),
            r: z(&self.r, &other.r),
            p: z(&self.p, &other.p),
            w: z(&self.w, &other.w),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, s: T) -> Self {
        let m = |v: &[T]| v.iter().map(|x| *x * s).collect();
        DiscreteSolution { dim: self.dim, rot_dim: self.rot_dim, u: m(&self.u), r: m(&self.r), p: m(&self.p), w: m(&self.w) }
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.r).chain(&self.p).chain(&self.w).all(|v| v.is_finite())
    }
}
