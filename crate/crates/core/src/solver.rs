//! Sparse direct solution of the assembled block systems.

use crate::assembly::{BlockSystem, DofLayout, Field};
use crate::error::{Result, TpsaError};
use crate::scalar::{LuSolve, Scalar};
use crate::verification::DiscreteSolution;

pub use crate::sparse::SparseMatrix;

const REFINEMENT_STEPS: usize = 3;

fn norm2<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, x| a + *x * *x).sqrt()
}

fn residual<T: Scalar>(a: &SparseMatrix<T>, x: &[T], b: &[T]) -> Vec<T> {
    a.mul_vec(x).iter().zip(b).map(|(ax, bi)| *bi - *ax).collect()
}

fn describe(layout: Option<&DofLayout>, i: usize) -> String {
    let Some(l) = layout else { return format!("unknown {i}") };
    for (f, name) in [(Field::U, "u"), (Field::R, "r"), (Field::P, "p"), (Field::W, "w")] {
        let r = l.range(f);
        if r.contains(&i) {
            let per = match f {
                Field::U => l.dim,
                Field::R => l.rot_dim,
                _ => 1,
            };
            return format!("unknown {i} ({name} of cell {})", (i - r.start) / per);
        }
    }
    format!("unknown {i} (pressure multiplier)")
}

/// Bordered solve for `[[A, c], [rᵀ, d]]` where `A` itself has a one
/// dimensional kernel that the border removes. Factors `A + s e_k e_kᵀ`, which
/// is regular when the kernel has a nonzero entry at `k`, and recovers `x_k`
/// and the border unknown from a 2×2 system.
fn bordered<T: Scalar>(
    n: usize,
    entries: &[(usize, usize, T)],
    k: usize,
) -> std::result::Result<LuSolve<T>, String> {
    let m = n - 1;
    let (mut col, mut row, mut corner) = (vec![T::zero(); m], vec![T::zero(); m], T::zero());
    let mut inner: Vec<(usize, usize, T)> = Vec::with_capacity(entries.len() + 1);
    let mut scale = T::zero();
    for &(i, j, v) in entries {
        match (i == m, j == m) {
            (false, false) => {
                scale = scale.max(v.abs());
                inner.push((i, j, v));
            }
            (false, true) => col[i] += v,
            (true, false) => row[j] += v,
            (true, true) => corner += v,
        }
    }
    let s = if scale > T::zero() { scale } else { T::one() };
    inner.push((k, k, s));
    let lu = T::sparse_lu(m, &inner)?;
    let mut ek = vec![T::zero(); m];
    ek[k] = s;
    let yk = lu(&ek);
    let yc = lu(&col);
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y);
    let (rk, rc) = (dot(&row, &yk), dot(&row, &yc));
    Ok(Box::new(move |b: &[T]| {
        let y0 = lu(&b[..m]);
        // x = y0 + x_k yk − λ yc with x_k = (x)_k and rᵀx + dλ = b_m
        let (a11, a12, f1) = (T::one() - yk[k], yc[k], y0[k]);
        let (a21, a22, f2) = (rk, corner - rc, b[m] - dot(&row, &y0));
        let det = a11 * a22 - a12 * a21;
        let xk = (f1 * a22 - a12 * f2) / det;
        let lam = (a11 * f2 - a21 * f1) / det;
        let mut x: Vec<T> = (0..m).map(|i| y0[i] + xk * yk[i] - lam * yc[i]).collect();
        x.push(lam);
        x
    }))
}

fn solve_impl<T: Scalar>(a: &SparseMatrix<T>, b: &[T], layout: Option<&DofLayout>) -> Result<Vec<T>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(TpsaError::invalid(format!("system is {}x{} with {} right-hand side entries", n, a.ncols(), b.len())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let entries = a.triplets();
    let tol = T::lit(T::SOLVE_TOLERANCE);
    let singular = |why: String| TpsaError::SingularSystem(why);
    let lu = match layout.filter(|l| l.with_multiplier && l.num_cells > 0) {
        Some(l) => bordered(n, &entries, l.p(0)),
        None => T::sparse_lu(n, &entries),
    }
    .map_err(|e| singular(format!("factorization failed: {e}")))?;
    let mut x = lu(b);
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(singular(format!("zero pivot: non-finite value at {}", describe(layout, i))));
    }
    let bnorm = norm2(b);
    let scale = if bnorm > T::zero() { bnorm } else { a.max_abs() * norm2(&x) };
    let mut r = residual(a, &x, b);
    for _ in 0..REFINEMENT_STEPS {
        if norm2(&r) <= tol * scale {
            break;
        }
        let dx = lu(&r);
        if dx.iter().any(|v| !v.is_finite()) {
            break;
        }
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += *di;
        }
        r = residual(a, &x, b);
    }
    let rn = norm2(&r);
    if !(rn <= tol * scale) {
        let worst = r
            .iter()
            .enumerate()
            .max_by(|p, q| p.1.abs().partial_cmp(&q.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .map_or(0, |(i, _)| i);
        return Err(singular(format!(
            "numerically rank deficient: relative residual {:.2e}, largest at {}",
            (rn / scale).to_f64_lossy(),
            describe(layout, worst)
        )));
    }
    Ok(x)
}

/// Solves `A x = b` by sparse LU with partial pivoting and up to three steps
/// of iterative refinement. Fails with [`TpsaError::SingularSystem`] if the
/// relative residual `‖Ax − b‖/‖b‖` stays above the precision's tolerance.
pub fn solve_linear<T: Scalar>(a: &SparseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    solve_impl(a, b, None)
}

/// Solves an assembled block system and splits the result into fields.
pub fn solve<T: Scalar>(system: &BlockSystem<T>) -> Result<DiscreteSolution<T>> {
    let x = solve_impl(&system.matrix, &system.rhs, Some(&system.layout))?;
    DiscreteSolution::from_vector(&system.layout, &x)
}
