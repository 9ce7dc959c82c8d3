//! Floating point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

mod sealed {
    pub trait Sealed {}
    impl Sealed for f32 {}
    impl Sealed for f64 {}
}

/// Real scalar type the discretization is generic over: `f32` or `f64`.
///
/// The trait is sealed because the sparse direct factorization backend is only
/// provided for the two IEEE types.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
    + sealed::Sealed
{
    /// Relative residual the direct solver must reach for this precision.
    const SOLVE_TOLERANCE: f64;

    /// Tolerance used by geometric identity checks (closure, volume identity).
    const GEOMETRY_TOLERANCE: f64;

    /// Converts an `f64` literal. Never fails for finite input.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 literal")
    }

    /// Converts a count or index.
    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    /// Lossless widening to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Factorizes the square sparse matrix given in coordinate form (duplicates
    /// are summed) with partial pivoting. The returned closure solves for one
    /// right-hand side with the stored factors.
    #[doc(hidden)]
    fn sparse_lu(n: usize, entries: &[(usize, usize, Self)]) -> Result<LuSolve<Self>, String>;

    /// Factorizes and solves for a single right-hand side.
    #[doc(hidden)]
    fn sparse_lu_solve(n: usize, entries: &[(usize, usize, Self)], rhs: &[Self]) -> Result<Vec<Self>, String> {
        Ok(Self::sparse_lu(n, entries)?(rhs))
    }
}

/// Solve with a stored sparse factorization.
pub type LuSolve<T> = Box<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

macro_rules! impl_scalar {
    ($t:ty, $solve_tol:expr, $geom_tol:expr) => {
        impl Scalar for $t {
            const SOLVE_TOLERANCE: f64 = $solve_tol;
            const GEOMETRY_TOLERANCE: f64 = $geom_tol;

            fn sparse_lu(n: usize, entries: &[(usize, usize, Self)]) -> Result<LuSolve<Self>, String> {
                use faer::linalg::solvers::SolveCore;
                use faer::sparse::{SparseColMat, Triplet};

                let triplets: Vec<Triplet<usize, usize, $t>> = entries
                    .iter()
                    .map(|&(i, j, v)| Triplet::new(i, j, v))
                    .collect();
                let matrix = SparseColMat::<usize, $t>::try_new_from_triplets(n, n, &triplets)
                    .map_err(|e| format!("{e:?}"))?;
                let lu = matrix.sp_lu().map_err(|e| format!("{e:?}"))?;
                Ok(Box::new(move |rhs: &[$t]| {
                    let mut x = faer::Mat::<$t>::zeros(n, 1);
                    for (i, b) in rhs.iter().enumerate() {
                        x[(i, 0)] = *b;
                    }
                    lu.solve_in_place_with_conj(faer::Conj::No, x.as_mut());
                    (0..n).map(|i| x[(i, 0)]).collect()
                }))
            }
        }
    };
}

impl_scalar!(f64, 1e-10, 1e-12);
impl_scalar!(f32, 1e-4, 1e-4);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_backend_sums_duplicate_entries() {
        // [[2, 2], [0, 4]] assembled from a split (0, 1) entry.
        let entries = [(0, 0, 2.0), (0, 1, 1.0), (0, 1, 1.0), (1, 1, 4.0)];
        let x = f64::sparse_lu_solve(2, &entries, &[4.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_precision_backend() {
        let x = f32::sparse_lu_solve(1, &[(0, 0, 2.0)], &[1.0]).unwrap();
        assert_eq!(x, vec![0.5]);
    }
}
