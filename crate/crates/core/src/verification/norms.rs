use super::exact::ExactSolution;
use super::DiscreteSolution;
use crate::boundary::BoundaryCondition;
use crate::discretization::face_coefficients;
use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::materials::MaterialField;
use crate::scalar::Scalar;

fn check_weight<T: Scalar>(weight: &[T], len: usize) -> Result<()> {
    if weight.len() != len {
        return Err(TpsaError::invalid(format!("weight has {} entries, expected {len}", weight.len())));
    }
    if let Some(i) = weight.iter().position(|w| !(*w >= T::zero())) {
        return Err(TpsaError::invalid(format!("negative weight at index {i}")));
    }
    Ok(())
}

fn components(len: usize, n: usize) -> Result<usize> {
    if n == 0 || !len.is_multiple_of(n) {
        return Err(TpsaError::invalid(format!("field of length {len} does not fit {n} entities")));
    }
    Ok(len / n)
}

fn cell_norm_sq<T: Scalar>(grid: &Grid<T>, values: &[T], weight: &[T]) -> Result<T> {
    let nc = grid.num_cells();
    let m = components(values.len(), nc)?;
    check_weight(weight, nc)?;
    let mut s = T::zero();
    for (i, cell) in grid.cells().iter().enumerate() {
        let v = &values[i * m..(i + 1) * m];
        s += cell.volume * weight[i] * v.iter().fold(T::zero(), |a, x| a + *x * *x);
    }
    Ok(s)
}

/// `sqrt(Σ_i |ω_i| γ_i u_i·u_i)`. The number of components per cell is
/// `values.len() / num_cells`.
pub fn cell_norm<T: Scalar>(grid: &Grid<T>, values: &[T], weight: &[T]) -> Result<T> {
    Ok(cell_norm_sq(grid, values, weight)?.sqrt())
}

fn weighted_mean<T: Scalar>(grid: &Grid<T>, values: &[T], weight: &[T]) -> T {
    let (mut s, mut m) = (T::zero(), T::zero());
    for (i, cell) in grid.cells().iter().enumerate() {
        s += cell.volume * weight[i] * values[i];
        m += cell.volume * weight[i];
    }
    if m > T::zero() {
        s / m
    } else {
        T::zero()
    }
}

/// Weighted norm of a scalar cell field after removing its weighted mean.
pub fn cell_seminorm<T: Scalar>(grid: &Grid<T>, values: &[T], weight: &[T]) -> Result<T> {
    check_weight(weight, grid.num_cells())?;
    if values.len() != grid.num_cells() {
        return Err(TpsaError::invalid("seminorm expects a scalar cell field"));
    }
    let mean = weighted_mean(grid, values, weight);
    let shifted: Vec<T> = values.iter().map(|v| *v - mean).collect();
    cell_norm(grid, &shifted, weight)
}

/// `sqrt(Σ_k (|ζ_k| δ_k / N) γ_k ψ_k·ψ_k)` over all faces, with the geometric
/// face distance `δ_k`.
pub fn face_norm<T: Scalar>(grid: &Grid<T>, values: &[T], weight: &[T]) -> Result<T> {
    let nf = grid.num_faces();
    let m = components(values.len(), nf)?;
    check_weight(weight, nf)?;
    let n = T::from_usize_lossy(grid.dim());
    let mut s = T::zero();
    for (k, f) in grid.faces().iter().enumerate() {
        let v = &values[k * m..(k + 1) * m];
        s += f.area * f.delta() / n * weight[k] * v.iter().fold(T::zero(), |a, x| a + *x * *x);
    }
    Ok(s.sqrt())
}

/// `Δ*x / δ` per face, with zero boundary values at the boundary cells.
fn scaled_jumps<T: Scalar>(grid: &Grid<T>, values: &[T]) -> Result<Vec<T>> {
    let m = components(values.len(), grid.num_cells())?;
    let mut out = Vec::with_capacity(grid.num_faces() * m);
    for f in grid.faces() {
        let d = f.delta();
        for a in 0..m {
            let outer = f.outer.map_or(T::zero(), |j| values[j * m + a]);
            out.push((values[f.inner * m + a] - outer) / d);
        }
    }
    Ok(out)
}

/// `‖δ⁻¹Δ*x‖_γ̄` for a cell field with homogeneous Dirichlet boundary values.
pub fn face_difference_norm<T: Scalar>(grid: &Grid<T>, values: &[T], face_weight: &[T]) -> Result<T> {
    face_norm(grid, &scaled_jumps(grid, values)?, face_weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Elastic,
    Poromech,
}

/// Squared contributions of each field to the solution norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormParts<T> {
    pub u: T,
    pub r: T,
    pub p: T,
    pub w: T,
}

impl<T: Scalar> NormParts<T> {
    pub fn total(&self) -> T {
        (self.u + self.r + self.p + self.w).sqrt()
    }
}

struct FaceMeans<T> {
    mu: Vec<T>,
    ell2: Vec<T>,
    kappa: Vec<T>,
}

fn face_means<T: Scalar>(grid: &Grid<T>, mat: &MaterialField<T>) -> Result<FaceMeans<T>> {
    let dirichlet = BoundaryCondition::dirichlet();
    let mut m = FaceMeans { mu: Vec::new(), ell2: Vec::new(), kappa: Vec::new() };
    for k in 0..grid.num_faces() {
        let c = face_coefficients(grid, k, mat, Some(&dirichlet))?;
        m.mu.push(c.mu_bar);
        m.ell2.push(c.ell2_bar);
        m.kappa.push(c.kappa_bar);
    }
    Ok(m)
}

/// Squared field contributions of the discrete solution norm:
///
/// ```text
/// u: ‖δ⁻¹Δ*u‖²_μ̄ + ‖u‖²_μ
/// r: ‖δ⁻¹Δ*r‖²_ℓ̄² + ‖r‖²_μ⁻¹
/// p: ‖p‖²_λ⁻¹ + |p|²_μ⁻¹      (elastic)
///    |p|²_μ⁻¹                 (poromech)
/// w: ‖δ⁻¹Δ*w‖²_κ̄ + ‖w‖²      (poromech)
/// ```
pub fn solution_norm_parts<T: Scalar>(
    sol: &DiscreteSolution<T>,
    mat: &MaterialField<T>,
    grid: &Grid<T>,
    which: NormKind,
) -> Result<NormParts<T>> {
    let nc = grid.num_cells();
    mat.validate(nc, false)?;
    if sol.num_cells() != nc || sol.dim != grid.dim() {
        return Err(TpsaError::invalid("solution does not match the grid"));
    }
    if which == NormKind::Poromech && !sol.has_w() {
        return Err(TpsaError::invalid("poromechanical norm needs a fluid field"));
    }
    let fm = face_means(grid, mat)?;
    let sq = |x: T| x * x;
    let mu_inv: Vec<T> = mat.mu.iter().map(|m| T::one() / *m).collect();
    let u = sq(face_difference_norm(grid, &sol.u, &fm.mu)?) + cell_norm_sq(grid, &sol.u, &mat.mu)?;
    let r = sq(face_difference_norm(grid, &sol.r, &fm.ell2)?) + cell_norm_sq(grid, &sol.r, &mu_inv)?;
    let semi = sq(cell_seminorm(grid, &sol.p, &mu_inv)?);
    let (p, w) = match which {
        NormKind::Elastic => (cell_norm_sq(grid, &sol.p, &mat.lambda_inv)? + semi, T::zero()),
        NormKind::Poromech => (
            semi,
            sq(face_difference_norm(grid, &sol.w, &fm.kappa)?) + cell_norm_sq(grid, &sol.w, &vec![T::one(); nc])?,
        ),
    };
    Ok(NormParts { u, r, p, w })
}

pub fn solution_norm<T: Scalar>(
    sol: &DiscreteSolution<T>,
    mat: &MaterialField<T>,
    grid: &Grid<T>,
    which: NormKind,
) -> Result<T> {
    Ok(solution_norm_parts(sol, mat, grid, which)?.total())
}

/// Relative errors. Field entries are the field contributions divided by
/// the total exact norm, so that their squares sum to the square of `total`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    pub total: f64,
    pub u: f64,
    pub r: f64,
    pub p: f64,
    pub w: f64,
    pub exact_norm: f64,
}

/// Relative error of `sol` against `exact` sampled at cell centers, in the
/// solution norm (poromechanical when `sol` carries `w`).
pub fn compute_error<T: Scalar>(
    sol: &DiscreteSolution<T>,
    exact: &dyn ExactSolution,
    mat: &MaterialField<T>,
    grid: &Grid<T>,
) -> Result<ErrorReport> {
    let which = if sol.has_w() { NormKind::Poromech } else { NormKind::Elastic };
    let reference = DiscreteSolution::sample(exact, grid, sol.has_w());
    let e = solution_norm_parts(&sol.sub(&reference)?, mat, grid, which)?;
    let denom = solution_norm(&reference, mat, grid, which)?.to_f64_lossy();
    if !(denom > 0.0) {
        return Err(TpsaError::invalid(format!("exact solution `{}` has zero norm", exact.name())));
    }
    let f = |x: T| x.to_f64_lossy().sqrt() / denom;
    Ok(ErrorReport {
        total: e.total().to_f64_lossy() / denom,
        u: f(e.u),
        r: f(e.r),
        p: f(e.p),
        w: f(e.w),
        exact_norm: denom,
    })
}
