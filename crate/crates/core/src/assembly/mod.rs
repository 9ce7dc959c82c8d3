//! Global block systems for elasticity/Cosserat/Stokes and for the coupled
//! poromechanical problem.
//!
//! Unknowns are ordered variable-major, `[u | r | p | w]`, cell-minor within
//! each block. Row blocks are the discrete balance laws
//!
//! ```text
//! u:  Δσ                         = |ω| f^u
//! r:  Δτ − |ω|μ⁻¹ r              = |ω| f^r
//! p:  Δv − |ω|λ⁻¹ p − |ω|ϑλ⁻¹ w  = |ω| f^p
//! w:  Δχ + |ω|ϑλ⁻¹ p + |ω|η w    = |ω| f^w
//! ```
//!
//! with the boundary data contributions of the face stencils moved to the
//! right-hand side.

mod sources;

pub use sources::{evaluate_sources, SourceField};

use crate::boundary::BoundarySpec;
use crate::discretization::{face_coefficients, tpfa_stencil, tpsa_boundary_stencil, tpsa_internal_stencil};
use crate::error::{Result, TpsaError};
use crate::geometry::{require_dim, Grid};
use crate::materials::MaterialField;
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    U,
    R,
    P,
    W,
}

/// Index map of the block unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofLayout {
    pub num_cells: usize,
    pub dim: usize,
    pub rot_dim: usize,
    pub with_w: bool,
    /// A trailing scalar unknown fixing the mean of `p`.
    pub with_multiplier: bool,
}

impl DofLayout {
    pub fn new(num_cells: usize, dim: usize, with_w: bool) -> Self {
        DofLayout { num_cells, dim, rot_dim: if dim == 2 { 1 } else { 3 }, with_w, with_multiplier: false }
    }

    pub fn u(&self, c: usize, d: usize) -> usize {
        c * self.dim + d
    }

    pub fn r(&self, c: usize, d: usize) -> usize {
        self.num_cells * self.dim + c * self.rot_dim + d
    }

    pub fn p(&self, c: usize) -> usize {
        self.num_cells * (self.dim + self.rot_dim) + c
    }

    pub fn w(&self, c: usize) -> usize {
        assert!(self.with_w, "layout has no fluid block");
        self.num_cells * (self.dim + self.rot_dim + 1) + c
    }

    pub fn multiplier(&self) -> Option<usize> {
        self.with_multiplier.then(|| self.num_cells * self.fields_per_cell())
    }

    fn fields_per_cell(&self) -> usize {
        self.dim + self.rot_dim + 1 + usize::from(self.with_w)
    }

    pub fn len(&self) -> usize {
        self.num_cells * self.fields_per_cell() + usize::from(self.with_multiplier)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Global index of local stencil unknown `l` (`[u | r | p]`) of cell `c`.
    pub fn local(&self, c: usize, l: usize) -> usize {
        if l < self.dim {
            self.u(c, l)
        } else if l < self.dim + self.rot_dim {
            self.r(c, l - self.dim)
        } else {
            self.p(c)
        }
    }

    pub fn range(&self, f: Field) -> std::ops::Range<usize> {
        let nc = self.num_cells;
        match f {
            Field::U => 0..nc * self.dim,
            Field::R => nc * self.dim..nc * (self.dim + self.rot_dim),
            Field::P => nc * (self.dim + self.rot_dim)..nc * (self.dim + self.rot_dim + 1),
            Field::W => {
                let s = nc * (self.dim + self.rot_dim + 1);
                if self.with_w {
                    s..s + nc
                } else {
                    s..s
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockSystem<T> {
    pub matrix: SparseMatrix<T>,
    pub rhs: Vec<T>,
    pub layout: DofLayout,
}

impl<T: Scalar> BlockSystem<T> {
    /// Submatrix coupling row field `a` to column field `b`.
    pub fn block(&self, a: Field, b: Field) -> SparseMatrix<T> {
        self.matrix.block(self.layout.range(a), self.layout.range(b))
    }
}

fn check_inputs<T: Scalar>(
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    bc: &BoundarySpec<T>,
    src: &SourceField<T>,
    fluid: bool,
) -> Result<()> {
    require_dim(grid, &[2, 3])?;
    mat.validate(grid.num_cells(), fluid)?;
    bc.check(grid)?;
    src.check(grid, fluid)?;
    if bc.all_u_neumann() {
        return Err(TpsaError::SingularSystem(
            "pure traction boundary: rigid body motions are not controlled".into(),
        ));
    }
    if fluid && bc.all_w_neumann() && (0..grid.num_cells()).all(|i| mat.eta(i) == T::zero()) {
        return Err(TpsaError::SingularSystem("pure flux boundary with η = 0: w is determined up to a constant".into()));
    }
    Ok(())
}

fn assemble<T: Scalar>(
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    bc: &BoundarySpec<T>,
    src: &SourceField<T>,
    fluid: bool,
) -> Result<BlockSystem<T>> {
    check_inputs(grid, mat, bc, src, fluid)?;
    let layout = DofLayout::new(grid.num_cells(), grid.dim(), fluid);
    let (dim, rd) = (layout.dim, layout.rot_dim);
    let m = dim + rd + 1;
    let mut t: Vec<(usize, usize, T)> = Vec::with_capacity(grid.num_faces() * 4 * m * m);
    let mut rhs = vec![T::zero(); layout.len()];

    for (k, f) in grid.faces().iter().enumerate() {
        let bck = grid.boundary_index(k).map(|b| &bc.faces[b]);
        let c = face_coefficients(grid, k, mat, bck)?;
        let i = f.inner;
        match f.outer {
            Some(j) => {
                let s = tpsa_internal_stencil(grid, k, &c)?;
                let outer = s.outer.as_ref().expect("interior stencil");
                for a in 0..m {
                    for b in 0..m {
                        let (vi, vj) = (s.inner.get(a, b), outer.get(a, b));
                        t.push((layout.local(i, a), layout.local(i, b), vi));
                        t.push((layout.local(i, a), layout.local(j, b), vj));
                        t.push((layout.local(j, a), layout.local(i, b), -vi));
                        t.push((layout.local(j, a), layout.local(j, b), -vj));
                    }
                }
                if fluid {
                    let tp = tpfa_stencil(grid, k, &c);
                    let o = tp.outer.expect("interior flux");
                    t.push((layout.w(i), layout.w(i), tp.inner));
                    t.push((layout.w(i), layout.w(j), o));
                    t.push((layout.w(j), layout.w(i), -tp.inner));
                    t.push((layout.w(j), layout.w(j), -o));
                }
            }
            None => {
                let bcf = bck.expect("boundary condition");
                let s = tpsa_boundary_stencil(grid, k, &c)?;
                for a in 0..m {
                    for b in 0..m {
                        t.push((layout.local(i, a), layout.local(i, b), s.inner.get(a, b)));
                    }
                }
                let mut g = Vec::with_capacity(dim + rd);
                g.extend_from_slice(&bcf.g_u[..dim]);
                if dim == 2 {
                    g.push(bcf.g_r[0]);
                } else {
                    g.extend_from_slice(&bcf.g_r);
                }
                let data = s.data.as_ref().expect("boundary stencil").mul_vec(&g);
                for (a, v) in data.into_iter().enumerate() {
                    rhs[layout.local(i, a)] -= v;
                }
                if fluid {
                    let tp = tpfa_stencil(grid, k, &c);
                    t.push((layout.w(i), layout.w(i), tp.inner));
                    rhs[layout.w(i)] -= tp.data * bcf.g_w;
                }
            }
        }
    }

    for (c, cell) in grid.cells().iter().enumerate() {
        let vol = cell.volume;
        let p = mat.cell(c);
        for d in 0..rd {
            t.push((layout.r(c, d), layout.r(c, d), -vol / p.mu));
        }
        t.push((layout.p(c), layout.p(c), -vol * p.lambda_inv));
        if fluid {
            let coupling = vol * p.theta * p.lambda_inv;
            t.push((layout.p(c), layout.w(c), -coupling));
            t.push((layout.w(c), layout.p(c), coupling));
            t.push((layout.w(c), layout.w(c), vol * p.eta()));
            rhs[layout.w(c)] += vol * src.fw[c];
        }
        for d in 0..dim {
            rhs[layout.u(c, d)] += vol * src.fu[c * dim + d];
        }
        for d in 0..rd {
            rhs[layout.r(c, d)] += vol * src.fr[c * rd + d];
        }
        rhs[layout.p(c)] += vol * src.fp[c];
    }

    let matrix = SparseMatrix::from_triplets(layout.len(), layout.len(), &t)?;
    Ok(BlockSystem { matrix, rhs, layout })
}

/// Elastic (Cosserat, Stokes) system in the unknowns `(u, r, p)`.
pub fn assemble_elastic<T: Scalar>(
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    bc: &BoundarySpec<T>,
    src: &SourceField<T>,
) -> Result<BlockSystem<T>> {
    assemble(grid, mat, bc, src, false)
}

/// Coupled poromechanical system in `(u, r, p, w)`.
pub fn assemble_poromech<T: Scalar>(
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    bc: &BoundarySpec<T>,
    src: &SourceField<T>,
) -> Result<BlockSystem<T>> {
    assemble(grid, mat, bc, src, true)
}

/// Per-cell `w` part of the pressure kernel `(p, w) = (1, −ϑλ⁻¹/η)`, or
/// `None` when some cell pins the pressure (`λ⁻¹η_w > 0`).
fn kernel_w<T: Scalar>(mat: &MaterialField<T>) -> Option<Vec<T>> {
    (0..mat.mu.len())
        .map(|i| {
            let m = mat.cell(i);
            if m.lambda_inv == T::zero() {
                Some(T::zero())
            } else if m.eta_w == T::zero() {
                Some(-m.theta * m.lambda_inv / m.eta())
            } else {
                None
            }
        })
        .collect()
}

/// The `w` part of the constant-pressure kernel `(p, w) = (1, w_i)` when the
/// operator has one, see [`has_pressure_kernel`].
pub fn pressure_kernel<T: Scalar>(mat: &MaterialField<T>, bc: &BoundarySpec<T>, fluid: bool) -> Option<Vec<T>> {
    if !bc.faces.iter().all(|f| f.b_u.is_dirichlet()) {
        return None;
    }
    if !fluid {
        return mat.is_incompressible().then(|| vec![T::zero(); mat.mu.len()]);
    }
    let w = kernel_w(mat)?;
    let flux_free = w.iter().all(|v| *v == T::zero())
        || mat.kappa.iter().all(|k| *k == T::zero())
        || (bc.all_w_neumann() && w.iter().all(|v| (*v - w[0]).abs() <= T::lit(1e-12) * w[0].abs()));
    flux_free.then_some(w)
}

/// Whether the assembled operator has a constant-pressure kernel. Every
/// displacement boundary condition must be Dirichlet. Without fluid the solid
/// must be incompressible. With fluid, eliminating `w` must leave no pressure
/// mass (`λ⁻¹η_w = 0` in every cell) and the matching `w` field must carry no
/// flux: either `κ ≡ 0`, or a uniform `w` under pure flux conditions.
pub fn has_pressure_kernel<T: Scalar>(mat: &MaterialField<T>, bc: &BoundarySpec<T>, fluid: bool) -> bool {
    pressure_kernel(mat, bc, fluid).is_some()
}

/// Appends a Lagrange multiplier enforcing `Σ_i |ω_i| p_i = 0`. The operator
/// must have the pressure kernel of [`has_pressure_kernel`].
pub fn handle_incompressible_limit<T: Scalar>(
    system: BlockSystem<T>,
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    bc: &BoundarySpec<T>,
) -> Result<BlockSystem<T>> {
    if !has_pressure_kernel(mat, bc, system.layout.with_w) {
        return Err(TpsaError::invalid("the pressure is already determined, no gauge needed"));
    }
    if system.layout.with_multiplier {
        return Err(TpsaError::invalid("system already carries a pressure multiplier"));
    }
    let mut layout = system.layout;
    layout.with_multiplier = true;
    let n = layout.len();
    let lm = n - 1;
    let mut t = system.matrix.triplets();
    for (c, cell) in grid.cells().iter().enumerate() {
        t.push((lm, layout.p(c), cell.volume));
        t.push((layout.p(c), lm, cell.volume));
    }
    let mut rhs = system.rhs;
    rhs.push(T::zero());
    Ok(BlockSystem { matrix: SparseMatrix::from_triplets(n, n, &t)?, rhs, layout })
}
