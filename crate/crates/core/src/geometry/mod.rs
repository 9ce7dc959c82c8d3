//! Grids, their generators, admissibility diagnostics and the incidence and
//! averaging maps.

mod diagnostics;
mod generators;
mod grid;
mod maps;
pub mod mesh_io;

pub use diagnostics::{
    check_admissibility, check_face_orthogonality, closure_residuals, volume_residuals, AdmissibilityReport,
    OrthogonalityReport,
};
pub use generators::{build_cartesian_grid, build_simplex_grid, perturb_grid, Extent};
pub use grid::{CartesianInfo, Cell, CellShape, Face, Grid};
pub use maps::{averaging_weights, build_averaging, build_incidence, AveragingMap, IncidenceMap};

use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;

/// Named grid families on the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFamily {
    /// Cartesian.
    Gt1,
    /// Cartesian with O(h²) vertex perturbation.
    Gt2,
    /// Four triangles per square.
    Gt3,
    /// Cartesian with O(h) vertex perturbation.
    Gt4,
}

/// Perturbation amplitude used for the perturbed families.
pub const DEFAULT_AMPLITUDE: f64 = 0.3;

impl GridFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gt1" => Some(GridFamily::Gt1),
            "gt2" => Some(GridFamily::Gt2),
            "gt3" => Some(GridFamily::Gt3),
            "gt4" => Some(GridFamily::Gt4),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GridFamily::Gt1 => "gt1",
            GridFamily::Gt2 => "gt2",
            GridFamily::Gt3 => "gt3",
            GridFamily::Gt4 => "gt4",
        }
    }

    /// The level-`n` member on the unit square.
    pub fn build<T: Scalar>(self, n: usize, seed: u64) -> Result<Grid<T>> {
        let unit = Extent::unit(2);
        let amp = T::lit(DEFAULT_AMPLITUDE);
        match self {
            GridFamily::Gt1 => build_cartesian_grid(n, n, None, &unit),
            GridFamily::Gt2 => perturb_grid(&build_cartesian_grid(n, n, None, &unit)?, 2, amp, seed),
            GridFamily::Gt3 => build_simplex_grid(n, &unit),
            GridFamily::Gt4 => perturb_grid(&build_cartesian_grid(n, n, None, &unit)?, 1, amp, seed),
        }
    }
}

impl std::fmt::Display for GridFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn require_dim<T: Scalar>(grid: &Grid<T>, dims: &[usize]) -> Result<()> {
    if dims.contains(&grid.dim()) {
        Ok(())
    } else {
        Err(TpsaError::invalid(format!("unsupported dimension {}", grid.dim())))
    }
}
