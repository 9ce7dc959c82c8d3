//! Per-face TPSA stencils for `(u, r, p)`, TPFA stencils for `w`, and the
//! recovery of couple stresses.
//!
//! Local unknowns of a cell are stacked as `[u (dim) | r (rot_dim) | p]` and
//! the face outputs as `[σ (dim) | τ (rot_dim) | v]`. Every stencil is already
//! multiplied by the face measure. `Δ*z = z_i − z_j` with `n` pointing out of
//! the inner cell `i`.

use crate::boundary::{BoundaryCondition, Robin};
use crate::error::{Result, TpsaError};
use crate::geometry::{averaging_weights, Face, Grid};
use crate::materials::MaterialField;
use crate::scalar::Scalar;

/// Harmonic face means and distance weights of one face.
///
/// On boundary faces the missing neighbor carries the inner cell's material
/// and sits at the Robin distance of the respective field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceCoefficients<T> {
    pub mu_bar: T,
    pub ell2_bar: T,
    pub kappa_bar: T,
    /// μ-weighted distance `(2μ_i/δ^i + 2μ_j/δ^j)⁻¹`.
    pub delta_mu: T,
    /// `δ_k⁻¹` with the displacement boundary distance.
    pub inv_delta: T,
    /// `δ_k⁻¹` with the rotation boundary distance.
    pub inv_delta_r: T,
    /// `δ_k⁻¹` with the fluid boundary distance.
    pub inv_delta_w: T,
    /// μ-weighted averaging `(Ξ_{k,i}, Ξ_{k,j})`.
    pub xi: [T; 2],
    /// ℓ²-weighted interior weight on boundary faces (zero when ℓ_i = 0).
    pub xi_ell_inner: T,
    /// κ-weighted interior weight on boundary faces.
    pub xi_kappa_inner: T,
}

fn harmonic<T: Scalar>(a: T, da: T, b: T, db: T) -> T {
    if a == T::zero() || b == T::zero() {
        return T::zero();
    }
    a * b * (da + db) / (a * db + b * da)
}

pub fn face_coefficients<T: Scalar>(
    grid: &Grid<T>,
    k: usize,
    mat: &MaterialField<T>,
    bc: Option<&BoundaryCondition<T>>,
) -> Result<FaceCoefficients<T>> {
    let f = grid.face(k);
    let i = f.inner;
    if !(mat.mu[i] > T::zero()) {
        return Err(TpsaError::invalid(format!("μ must be positive, cell {i} has {}", mat.mu[i])));
    }
    let two = T::lit(2.0);
    let di = f.dist_inner;
    match (f.outer, f.dist_outer) {
        (Some(j), Some(dj)) => {
            if !(mat.mu[j] > T::zero()) {
                return Err(TpsaError::invalid(format!("μ must be positive, cell {j} has {}", mat.mu[j])));
            }
            let (a, e) = (mat.mu[i] / di, mat.mu[j] / dj);
            let (xi_i, xi_j) = averaging_weights(grid, k, &mat.mu, None);
            let inv = T::one() / (di + dj);
            Ok(FaceCoefficients {
                mu_bar: harmonic(mat.mu[i], di, mat.mu[j], dj),
                ell2_bar: harmonic(mat.ell[i] * mat.ell[i], di, mat.ell[j] * mat.ell[j], dj),
                kappa_bar: harmonic(mat.kappa[i], di, mat.kappa[j], dj),
                delta_mu: T::one() / (two * a + two * e),
                inv_delta: inv,
                inv_delta_r: inv,
                inv_delta_w: inv,
                xi: [xi_i, xi_j],
                xi_ell_inner: T::zero(),
                xi_kappa_inner: T::zero(),
            })
        }
        _ => {
            let bc = bc.ok_or_else(|| TpsaError::invalid(format!("boundary face {k} needs a boundary condition")))?;
            let mu = mat.mu[i];
            let delta_mu = match bc.b_u {
                Robin::Finite(b) => di * b / (two * mu * (di + b)),
                Robin::Infinite => di / (two * mu),
            };
            let ell2 = mat.ell[i] * mat.ell[i];
            Ok(FaceCoefficients {
                mu_bar: mu,
                ell2_bar: ell2,
                kappa_bar: mat.kappa[i],
                delta_mu,
                inv_delta: bc.b_u.inv_total(di),
                inv_delta_r: bc.b_r.inv_total(di),
                inv_delta_w: bc.b_w.inv_total(di),
                xi: [bc.b_u.interior_fraction(di), bc.b_u.boundary_fraction(di)],
                xi_ell_inner: if ell2 > T::zero() { bc.b_r.interior_fraction(di) } else { T::zero() },
                xi_kappa_inner: bc.b_w.interior_fraction(di),
            })
        }
    }
}

/// Dense row-major block used for local stencils.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> LocalMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LocalMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    fn add(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] += v;
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).fold(T::zero(), |s, c| s + self.get(r, c) * x[c]))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

/// Stencil of one face: `[σ; τ; v] = inner·x_i + outer·x_j + data·[g_u; g_r]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceStencil<T> {
    pub dim: usize,
    pub rot_dim: usize,
    pub inner: LocalMatrix<T>,
    /// Interior faces only.
    pub outer: Option<LocalMatrix<T>>,
    /// Boundary faces only; columns are `[g_u (dim) | g_r (rot_dim)]`.
    pub data: Option<LocalMatrix<T>>,
}

impl<T: Scalar> FaceStencil<T> {
    pub fn block_size(&self) -> usize {
        self.dim + self.rot_dim + 1
    }

    pub fn apply(&self, xi: &[T], xj: Option<&[T]>, g: Option<&[T]>) -> Vec<T> {
        let mut out = self.inner.mul_vec(xi);
        if let (Some(m), Some(x)) = (&self.outer, xj) {
            out.iter_mut().zip(m.mul_vec(x)).for_each(|(o, v)| *o += v);
        }
        if let (Some(m), Some(x)) = (&self.data, g) {
            out.iter_mut().zip(m.mul_vec(x)).for_each(|(o, v)| *o += v);
        }
        out
    }
}

/// Rotation-to-traction coupling `D` (dim × rot_dim), so that the traction
/// carries `−D Ξ̃ r`. The displacement-to-rotation coupling is `−Dᵀ`.
pub fn rotation_coupling<T: Scalar>(dim: usize, n: &[T; 3]) -> Vec<Vec<T>> {
    if dim == 2 {
        vec![vec![n[1]], vec![-n[0]]]
    } else {
        crate::tensor_ops::asym_adjoint(n).iter().map(|r| r.to_vec()).collect()
    }
}

fn check_normal<T: Scalar>(dim: usize, n: &[T; 3]) -> Result<()> {
    if dim == 2 {
        crate::tensor_ops::rot_coupling_2d(&[n[0], n[1]]).map(|_| ())
    } else {
        crate::tensor_ops::rot_n(n).map(|_| ())
    }
}

/// Fills the cell block for a neighbor with sign `s` in `Δ*` and averaging
/// weight `xi` (so `Ξ̃ = 1 − xi`).
#[allow(clippy::too_many_arguments)]
fn fill_cell_block<T: Scalar>(
    m: &mut LocalMatrix<T>,
    dim: usize,
    rd: usize,
    area: T,
    n: &[T; 3],
    c: &FaceCoefficients<T>,
    xi: T,
    s: T,
) {
    let two = T::lit(2.0);
    let d = rotation_coupling(dim, n);
    let xt = T::one() - xi;
    let p = dim + rd;
    for a in 0..dim {
        m.add(a, a, -area * c.inv_delta * two * c.mu_bar * s);
        for b in 0..rd {
            m.add(a, dim + b, -area * d[a][b] * xt);
            // τ row b: −C Ξ u with C = −Dᵀ
            m.add(dim + b, a, area * d[a][b] * xi);
        }
        m.add(a, p, area * n[a] * xt);
        m.add(p, a, area * n[a] * xi);
    }
    for b in 0..rd {
        m.add(dim + b, dim + b, -area * c.inv_delta_r * c.ell2_bar * s);
    }
    m.add(p, p, -area * c.delta_mu * s);
}

/// Stencil of an interior face.
pub fn tpsa_internal_stencil<T: Scalar>(grid: &Grid<T>, k: usize, c: &FaceCoefficients<T>) -> Result<FaceStencil<T>> {
    let f: &Face<T> = grid.face(k);
    if f.is_boundary() {
        return Err(TpsaError::invalid(format!("face {k} is a boundary face")));
    }
    let (dim, rd) = (grid.dim(), grid.rot_dim());
    check_normal(dim, &f.normal)?;
    let m = dim + rd + 1;
    let mut inner = LocalMatrix::zeros(m, m);
    let mut outer = LocalMatrix::zeros(m, m);
    fill_cell_block(&mut inner, dim, rd, f.area, &f.normal, c, c.xi[0], T::one());
    fill_cell_block(&mut outer, dim, rd, f.area, &f.normal, c, c.xi[1], -T::one());
    Ok(FaceStencil { dim, rot_dim: rd, inner, outer: Some(outer), data: None })
}

/// Stencil of a boundary face with Robin weights `b^u`, `b^r`.
///
/// The data columns multiply `(g_u, g_r)`: boundary values for a Dirichlet
/// weight, stress densities for a Neumann weight.
pub fn tpsa_boundary_stencil<T: Scalar>(grid: &Grid<T>, k: usize, c: &FaceCoefficients<T>) -> Result<FaceStencil<T>> {
    let f = grid.face(k);
    if !f.is_boundary() {
        return Err(TpsaError::invalid(format!("face {k} is an interior face")));
    }
    let (dim, rd) = (grid.dim(), grid.rot_dim());
    check_normal(dim, &f.normal)?;
    let m = dim + rd + 1;
    let mut inner = LocalMatrix::zeros(m, m);
    fill_cell_block(&mut inner, dim, rd, f.area, &f.normal, c, c.xi[0], T::one());

    let two = T::lit(2.0);
    let a = f.area;
    let d = rotation_coupling(dim, &f.normal);
    let outer_weight = c.xi[1] + c.delta_mu;
    let mut data = LocalMatrix::zeros(m, dim + rd);
    for x in 0..dim {
        data.add(x, x, a * (two * c.inv_delta * c.mu_bar + c.xi[0]));
        for b in 0..rd {
            // −C (Ξ_B + δ^μ) g_u with C = −Dᵀ
            data.add(dim + b, x, a * d[x][b] * outer_weight);
        }
        data.add(dim + rd, x, a * f.normal[x] * outer_weight);
    }
    for b in 0..rd {
        data.add(dim + b, dim + b, a * (c.inv_delta_r * c.ell2_bar + c.xi_ell_inner));
    }
    Ok(FaceStencil { dim, rot_dim: rd, inner, outer: None, data: Some(data) })
}

/// Two-point flux `χ = inner·w_i + outer·w_j + data·g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TpfaStencil<T> {
    pub inner: T,
    pub outer: Option<T>,
    pub data: T,
}

pub fn tpfa_stencil<T: Scalar>(grid: &Grid<T>, k: usize, c: &FaceCoefficients<T>) -> TpfaStencil<T> {
    let f = grid.face(k);
    if f.is_boundary() {
        let t = f.area * c.kappa_bar * c.inv_delta_w;
        TpfaStencil { inner: t, outer: None, data: f.area * c.xi_kappa_inner - t }
    } else {
        let t = f.area * c.kappa_bar * c.inv_delta_w;
        TpfaStencil { inner: t, outer: Some(-t), data: T::zero() }
    }
}

/// Face displacement consistent with the stencil, `Ξu − δ^μ n Δ*p`, with the
/// boundary data taking the place of the missing neighbor.
pub fn face_displacement<T: Scalar>(
    grid: &Grid<T>,
    k: usize,
    c: &FaceCoefficients<T>,
    ui: &[T],
    pi: T,
    outer: Option<(&[T], T)>,
    g_u: &[T],
) -> Vec<T> {
    let f = grid.face(k);
    let dim = grid.dim();
    (0..dim)
        .map(|a| match outer {
            Some((uj, pj)) => c.xi[0] * ui[a] + c.xi[1] * uj[a] - c.delta_mu * f.normal[a] * (pi - pj),
            None => c.xi[0] * ui[a] + (c.xi[1] + c.delta_mu) * g_u[a] - c.delta_mu * f.normal[a] * pi,
        })
        .collect()
}

/// Integrated couple stress `ν_k = 2(τ_k + |ζ_k| C u_k)`, `C` the
/// displacement-to-rotation coupling of the face.
pub fn recover_couple_stress<T: Scalar>(grid: &Grid<T>, k: usize, tau: &[T], u_face: &[T]) -> Vec<T> {
    let f = grid.face(k);
    let dim = grid.dim();
    let d = rotation_coupling(dim, &f.normal);
    let two = T::lit(2.0);
    (0..grid.rot_dim())
        .map(|b| {
            let cu = (0..dim).fold(T::zero(), |s, a| s - d[a][b] * u_face[a]);
            two * (tau[b] + f.area * cu)
        })
        .collect()
}
