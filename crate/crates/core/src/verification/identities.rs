//! Discrete identities of the averaging and jump operators, evaluated on
//! given fields with homogeneous Dirichlet boundary conditions. Each function
//! returns both sides of the identity.

use crate::boundary::BoundaryCondition;
use crate::discretization::{face_coefficients, rotation_coupling};
use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::materials::{MaterialField, MaterialParams};
use crate::scalar::Scalar;

fn mu_field<T: Scalar>(grid: &Grid<T>, mu: &[T]) -> Result<MaterialField<T>> {
    if mu.len() != grid.num_cells() {
        return Err(TpsaError::invalid("μ must have one entry per cell"));
    }
    let mut m = MaterialField::uniform(grid.num_cells(), MaterialParams::default());
    m.mu = mu.to_vec();
    m.validate(grid.num_cells(), false)?;
    Ok(m)
}

/// `Σ_k (|ζ_k|δ_k/N) μ̄_k⁻¹ Σ_i Ξ̃_{k,i} r_i·r_i` against `‖r‖²_μ⁻¹`.
pub fn averaging_identity<T: Scalar>(grid: &Grid<T>, mu: &[T], r: &[T]) -> Result<(T, T)> {
    let mat = mu_field(grid, mu)?;
    let nc = grid.num_cells();
    if r.is_empty() || !r.len().is_multiple_of(nc) {
        return Err(TpsaError::invalid("r does not fit the grid"));
    }
    let m = r.len() / nc;
    let sq = |i: usize| r[i * m..(i + 1) * m].iter().fold(T::zero(), |a, x| a + *x * *x);
    let bc = BoundaryCondition::dirichlet();
    let n = T::from_usize_lossy(grid.dim());
    let mut lhs = T::zero();
    for (k, f) in grid.faces().iter().enumerate() {
        let c = face_coefficients(grid, k, &mat, Some(&bc))?;
        let [xi, xj] = c.xi;
        let mut s = (T::one() - xi) * sq(f.inner);
        if let Some(j) = f.outer {
            s += (T::one() - xj) * sq(j);
        }
        lhs += f.area * f.delta() / n / c.mu_bar * s;
    }
    let rhs = grid.cells().iter().enumerate().fold(T::zero(), |a, (i, c)| a + c.volume / mu[i] * sq(i));
    Ok((lhs, rhs))
}

/// `‖δ⁻¹Δ*u‖²_μ̄` against `‖δ⁻¹nΔ*u‖²_μ̄ + ‖δ⁻¹RⁿΔ*u‖²_μ̄`.
pub fn directional_decomposition<T: Scalar>(grid: &Grid<T>, mu: &[T], u: &[T]) -> Result<(T, T)> {
    let mat = mu_field(grid, mu)?;
    let dim = grid.dim();
    if u.len() != grid.num_cells() * dim {
        return Err(TpsaError::invalid("u does not fit the grid"));
    }
    let bc = BoundaryCondition::dirichlet();
    let n = T::from_usize_lossy(dim);
    let (mut full, mut split) = (T::zero(), T::zero());
    for (k, f) in grid.faces().iter().enumerate() {
        let c = face_coefficients(grid, k, &mat, Some(&bc))?;
        let d = f.delta();
        let jump: Vec<T> = (0..dim)
            .map(|a| (u[f.inner * dim + a] - f.outer.map_or(T::zero(), |j| u[j * dim + a])) / d)
            .collect();
        let w = f.area * d / n * c.mu_bar;
        full += w * jump.iter().fold(T::zero(), |a, x| a + *x * *x);
        let normal = (0..dim).fold(T::zero(), |a, b| a + f.normal[b] * jump[b]);
        // Rⁿ v = −Dᵀ v with D the rotation coupling of the face
        let dmat = rotation_coupling(dim, &f.normal);
        let rd = dmat[0].len();
        let tangential = (0..rd).fold(T::zero(), |a, b| {
            let v = (0..dim).fold(T::zero(), |s, x| s + dmat[x][b] * jump[x]);
            a + v * v
        });
        split += w * (normal * normal + tangential);
    }
    Ok((full, split))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GridFamily;

    #[test]
    fn identities_on_a_perturbed_grid() {
        let g: Grid<f64> = GridFamily::Gt4.build(4, 3).unwrap();
        let mu: Vec<f64> = (0..16).map(|i| 1.0 + (i % 5) as f64).collect();
        let r: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
        let (a, b) = averaging_identity(&g, &mu, &r).unwrap();
        assert!((a - b).abs() <= 1e-13 * b);
        let u: Vec<f64> = (0..32).map(|i| (i as f64 * 0.7).cos()).collect();
        let (a, b) = directional_decomposition(&g, &mu, &u).unwrap();
        assert!((a - b).abs() <= 1e-13 * b);
    }
}
