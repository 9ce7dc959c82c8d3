use std::path::PathBuf;
use std::time::Instant;

use super::exact::{boundary_data, lookup, BoundaryKinds, ExactSolution};
use super::norms::{compute_error, ErrorReport};
use super::DiscreteSolution;
use crate::assembly::{
    assemble_elastic, assemble_poromech, evaluate_sources, handle_incompressible_limit, pressure_kernel,
};
use crate::boundary::{Robin, Side};
use crate::error::{Result, TpsaError};
use crate::geometry::{mesh_io, Grid, GridFamily};
use crate::materials::{MaterialField, MaterialParams};
use crate::scalar::Scalar;
use crate::solver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Elastic,
    Cosserat,
    Stokes,
    Poromech,
}

impl Model {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "elastic" => Some(Model::Elastic),
            "cosserat" => Some(Model::Cosserat),
            "stokes" => Some(Model::Stokes),
            "poromech" => Some(Model::Poromech),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Elastic => "elastic",
            Model::Cosserat => "cosserat",
            Model::Stokes => "stokes",
            Model::Poromech => "poromech",
        }
    }

    pub fn has_fluid(self) -> bool {
        self == Model::Poromech
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GridSource {
    Family(GridFamily),
    /// A single grid read from the mesh text format.
    File(PathBuf),
}

impl GridSource {
    pub fn name(&self) -> String {
        match self {
            GridSource::Family(f) => f.name().to_string(),
            GridSource::File(p) => format!("file:{}", p.display()),
        }
    }
}

/// Boundary weights per side of the domain box.
#[derive(Clone, Copy, Debug, PartialEq)]
#[derive(Default)]
pub struct SideKinds {
    pub sides: [BoundaryKinds<f64>; 6],
}


impl SideKinds {
    fn slot(side: Side) -> usize {
        Side::ALL.iter().position(|s| *s == side).expect("side")
    }

    pub fn get(&self, side: Side) -> BoundaryKinds<f64> {
        self.sides[Self::slot(side)]
    }

    pub fn get_mut(&mut self, side: Side) -> &mut BoundaryKinds<f64> {
        &mut self.sides[Self::slot(side)]
    }
}

fn cast_robin<T: Scalar>(r: Robin<f64>) -> Robin<T> {
    match r {
        Robin::Finite(b) => Robin::Finite(T::lit(b)),
        Robin::Infinite => Robin::Infinite,
    }
}

/// One manufactured-solution experiment over a sequence of grid levels.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub model: Model,
    pub grid: GridSource,
    pub levels: Vec<usize>,
    pub params: MaterialParams<f64>,
    pub bc: SideKinds,
    pub solution: String,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Parameters after the model constraints are applied: Stokes is
    /// incompressible.
    pub fn effective_params(&self) -> MaterialParams<f64> {
        let mut p = self.params;
        if self.model == Model::Stokes {
            p.lambda_inv = 0.0;
        }
        p
    }
}

#[derive(Clone, Debug)]
pub struct LevelResult<T> {
    pub n: usize,
    pub delta: f64,
    pub cells: usize,
    pub errors: ErrorReport,
    /// Observed order against the previous level.
    pub order: Option<f64>,
    pub wall_ms: f64,
    pub grid: Grid<T>,
    pub solution: DiscreteSolution<T>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport<T> {
    pub levels: Vec<LevelResult<T>>,
}

impl<T> ConvergenceReport<T> {
    /// Order between the two finest levels.
    pub fn final_order(&self) -> Option<f64> {
        self.levels.last().and_then(|l| l.order)
    }

    pub fn errors(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.errors.total).collect()
    }
}

/// Moves `sol` along the pressure kernel `(1, kw)` so that its mean pressure
/// matches the exact one.
fn match_gauge<T: Scalar>(sol: &mut DiscreteSolution<T>, exact: &dyn ExactSolution, grid: &Grid<T>, kw: &[T]) {
    let (mut vol, mut diff) = (T::zero(), T::zero());
    for (i, c) in grid.cells().iter().enumerate() {
        let x = c.center.map(|v| v.to_f64_lossy());
        diff += c.volume * (T::lit(exact.p(x)) - sol.p[i]);
        vol += c.volume;
    }
    let shift = diff / vol;
    for (i, p) in sol.p.iter_mut().enumerate() {
        *p += shift;
        if let Some(w) = sol.w.get_mut(i) {
            *w += shift * kw[i];
        }
    }
}

/// Builds, assembles, solves and measures the error on every level.
pub fn run_convergence<T: Scalar>(spec: &ExperimentSpec) -> Result<ConvergenceReport<T>> {
    let exact = lookup(&spec.solution)
        .ok_or_else(|| TpsaError::invalid(format!("unknown exact solution `{}`", spec.solution)))?;
    let params = spec.effective_params();
    let levels: Vec<usize> = match &spec.grid {
        GridSource::Family(_) => spec.levels.clone(),
        GridSource::File(_) => vec![0],
    };
    if levels.is_empty() {
        return Err(TpsaError::invalid("no refinement levels"));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TpsaError::invalid("levels must be strictly increasing"));
    }
    let fluid = spec.model.has_fluid();
    let tp = MaterialParams {
        mu: T::lit(params.mu),
        lambda_inv: T::lit(params.lambda_inv),
        ell: T::lit(params.ell),
        theta: T::lit(params.theta),
        kappa: T::lit(params.kappa),
        eta_w: T::lit(params.eta_w),
    };

    let mut out: Vec<LevelResult<T>> = Vec::with_capacity(levels.len());
    for n in levels {
        let start = Instant::now();
        let grid: Grid<T> = match &spec.grid {
            GridSource::Family(f) => f.build(n, spec.seed)?,
            GridSource::File(p) => mesh_io::read_mesh(p)?,
        };
        let mat = MaterialField::uniform(grid.num_cells(), tp);
        let src = evaluate_sources(exact.as_ref(), &mat, &grid, fluid)?;
        let bc = boundary_data(exact.as_ref(), &grid, &mat, |side| {
            let k = spec.bc.get(side);
            BoundaryKinds { b_u: cast_robin(k.b_u), b_r: cast_robin(k.b_r), b_w: cast_robin(k.b_w) }
        })?;
        let mut system = if fluid {
            assemble_poromech(&grid, &mat, &bc, &src)?
        } else {
            assemble_elastic(&grid, &mat, &bc, &src)?
        };
        let kernel = pressure_kernel(&mat, &bc, fluid);
        if kernel.is_some() {
            system = handle_incompressible_limit(system, &grid, &mat, &bc)?;
        }
        let mut solution = solver::solve(&system)?;
        if let Some(kw) = &kernel {
            match_gauge(&mut solution, exact.as_ref(), &grid, kw);
        }
        let errors = compute_error(&solution, exact.as_ref(), &mat, &grid)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let delta = grid.spacing().to_f64_lossy();
        let order = out.last().map(|prev| (prev.errors.total / errors.total).ln() / (prev.delta / delta).ln());
        out.push(LevelResult {
            n: if n == 0 { grid.num_cells() } else { n },
            delta,
            cells: grid.num_cells(),
            errors,
            order,
            wall_ms,
            grid,
            solution,
        });
    }
    Ok(ConvergenceReport { levels: out })
}
