//! Two-point stress approximation (TPSA) finite volumes for linearized
//! elasticity, Cosserat media, Stokes flow and Biot poromechanics.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`). Grids are
//! built by [`geometry`], per-face stencils by [`discretization`], global block
//! systems by [`assembly`] and solved by [`solver`]. The [`verification`]
//! module holds discrete norms, manufactured solutions and the convergence
//! driver used by the `tpsa` binary in [`cli`].
//!
//! ```
//! use tpsa::{geometry, Grid64};
//!
//! let grid: Grid64 = geometry::build_cartesian_grid(4, 4, None, &geometry::Extent::unit(2)).unwrap();
//! assert_eq!(grid.num_cells(), 16);
//! assert!(geometry::check_admissibility(&grid).admissible);
//! ```

// `!(x > 0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod boundary;
pub mod cli;
pub mod discretization;
pub mod error;
pub mod geometry;
pub mod materials;
pub mod scalar;
pub mod solver;
pub mod sparse;
pub mod tensor_ops;
pub mod verification;

pub use boundary::{BoundaryCondition, BoundarySpec, Robin};
pub use error::{Result, TpsaError};
pub use geometry::Grid;
pub use materials::{MaterialField, MaterialParams};
pub use scalar::Scalar;
pub use sparse::SparseMatrix;

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type MaterialField64 = MaterialField<f64>;
pub type BoundarySpec64 = BoundarySpec<f64>;
pub type SparseMatrix64 = SparseMatrix<f64>;
pub type BlockSystem64 = assembly::BlockSystem<f64>;
pub type DiscreteSolution64 = verification::DiscreteSolution<f64>;
pub type DiscreteSolution32 = verification::DiscreteSolution<f32>;
