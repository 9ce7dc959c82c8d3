use super::grid::Grid;
use crate::scalar::Scalar;
use crate::tensor_ops::{cross, norm, sub};

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport<T> {
    /// Normalized defect `|n × (x_k − x_i)| / δ_k^i`, max over the grid-cell neighbors.
    pub per_face: Vec<T>,
    pub max: T,
}

/// Face-orthogonality defect of every face.
pub fn check_face_orthogonality<T: Scalar>(grid: &Grid<T>) -> OrthogonalityReport<T> {
    let cells = grid.cells();
    let per_face: Vec<T> = grid
        .faces()
        .iter()
        .map(|f| {
            let defect = |c: usize, d: T| norm(&cross(&f.normal, &sub(&f.center, &cells[c].center))) / d.abs();
            let mut m = defect(f.inner, f.dist_inner);
            if let (Some(j), Some(dj)) = (f.outer, f.dist_outer) {
                m = m.max(defect(j, dj));
            }
            m
        })
        .collect();
    let max = per_face.iter().fold(T::zero(), |m, &d| m.max(d));
    OrthogonalityReport { per_face, max }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// First violated invariant.
    pub violation: Option<String>,
    /// Largest `|Σ_k |ζ_k| Δ_{i,k} n_k| / Σ_k |ζ_k|` over cells.
    pub closure_defect: f64,
    /// Largest `|Σ_k |ζ_k| δ_k^i − dim·|ω_i|| / (dim·|ω_i|)` over cells.
    pub volume_defect: f64,
    /// Smallest cell-to-face distance.
    pub min_distance: f64,
}

/// Per-cell relative residual of the closure identity `Σ_k |ζ_k| Δ_{i,k} n_k = 0`.
pub fn closure_residuals<T: Scalar>(grid: &Grid<T>) -> Vec<T> {
    let mut sum = vec![[T::zero(); 3]; grid.num_cells()];
    let mut scale = vec![T::zero(); grid.num_cells()];
    for f in grid.faces() {
        for d in 0..3 {
            sum[f.inner][d] += f.area * f.normal[d];
        }
        scale[f.inner] += f.area;
        if let Some(j) = f.outer {
            for d in 0..3 {
                sum[j][d] -= f.area * f.normal[d];
            }
            scale[j] += f.area;
        }
    }
    sum.iter().zip(&scale).map(|(s, a)| norm(s) / *a).collect()
}

/// Per-cell relative residual of `Σ_k |ζ_k| δ_k^i = dim·|ω_i|`.
pub fn volume_residuals<T: Scalar>(grid: &Grid<T>) -> Vec<T> {
    let mut sum = vec![T::zero(); grid.num_cells()];
    for f in grid.faces() {
        sum[f.inner] += f.area * f.dist_inner;
        if let (Some(j), Some(dj)) = (f.outer, f.dist_outer) {
            sum[j] += f.area * dj;
        }
    }
    let n = T::from_usize_lossy(grid.dim());
    sum.iter()
        .zip(grid.cells())
        .map(|(s, c)| (*s - n * c.volume).abs() / (n * c.volume))
        .collect()
}

/// Checks positive distances, two neighbors per face, closure and the volume identity.
pub fn check_admissibility<T: Scalar>(grid: &Grid<T>) -> AdmissibilityReport {
    let tol = T::GEOMETRY_TOLERANCE;
    let mut violation = None;
    let mut min_distance = f64::INFINITY;
    for (k, f) in grid.faces().iter().enumerate() {
        if f.outer == Some(f.inner) && violation.is_none() {
            violation = Some(format!("face {k} does not have two distinct neighbors"));
        }
        let mut ds = vec![(f.inner, f.dist_inner)];
        if let (Some(j), Some(dj)) = (f.outer, f.dist_outer) {
            ds.push((j, dj));
        }
        for (c, d) in ds {
            let d = d.to_f64_lossy();
            min_distance = min_distance.min(d);
            if !(d > 0.0) && violation.is_none() {
                violation = Some(format!("δ_k^i ≤ 0 on face {k} for cell {c} (δ = {d:.3e})"));
            }
        }
    }
    let closure_defect = closure_residuals(grid).iter().fold(0.0f64, |m, v| m.max(v.to_f64_lossy()));
    let volume_defect = volume_residuals(grid).iter().fold(0.0f64, |m, v| m.max(v.to_f64_lossy()));
    if violation.is_none() && !(closure_defect <= tol) {
        violation = Some(format!("cell faces do not close (defect {closure_defect:.3e})"));
    }
    if violation.is_none() && !(volume_defect <= tol) {
        violation = Some(format!("volume identity violated (defect {volume_defect:.3e})"));
    }
    AdmissibilityReport { admissible: violation.is_none(), violation, closure_defect, volume_defect, min_distance }
}
