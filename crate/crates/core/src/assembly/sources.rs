use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::materials::MaterialField;
use crate::scalar::Scalar;
use crate::verification::exact::{d1, d2, ExactSolution};

/// Cell-center source densities. `fu` is cell-major with `dim` components,
/// `fr` with `rot_dim` components.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceField<T> {
    pub fu: Vec<T>,
    pub fr: Vec<T>,
    pub fp: Vec<T>,
    pub fw: Vec<T>,
}

impl<T: Scalar> SourceField<T> {
    pub fn zeros(grid: &Grid<T>) -> Self {
        let n = grid.num_cells();
        SourceField {
            fu: vec![T::zero(); n * grid.dim()],
            fr: vec![T::zero(); n * grid.rot_dim()],
            fp: vec![T::zero(); n],
            fw: vec![T::zero(); n],
        }
    }

    pub(crate) fn check(&self, grid: &Grid<T>, fluid: bool) -> Result<()> {
        let n = grid.num_cells();
        let ok = self.fu.len() == n * grid.dim()
            && self.fr.len() == n * grid.rot_dim()
            && self.fp.len() == n
            && (!fluid || self.fw.len() == n);
        if !ok {
            return Err(TpsaError::invalid("source field sizes do not match the grid"));
        }
        let all = self.fu.iter().chain(&self.fr).chain(&self.fp).chain(&self.fw);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(TpsaError::invalid("non-finite source value"));
        }
        Ok(())
    }
}

/// Sources that make `exact` solve the continuous problem with the given
/// materials, sampled at cell centers:
///
/// ```text
/// f^u = 2μΔu + ∇·(S*r) + ∇p
/// f^r = −∇×u + ℓ²Δr − μ⁻¹r
/// f^p = ∇·u − λ⁻¹p − ϑλ⁻¹w
/// f^w = −κΔw + ϑλ⁻¹p + ηw
/// ```
///
/// Without `fluid`, `w` is dropped from `f^p`. Derivatives are sixth-order
/// central differences of the closed-form fields.
pub fn evaluate_sources<T: Scalar>(
    exact: &dyn ExactSolution,
    mat: &MaterialField<T>,
    grid: &Grid<T>,
    fluid: bool,
) -> Result<SourceField<T>> {
    mat.validate(grid.num_cells(), false)?;
    let dim = grid.dim();
    let mut src = SourceField::zeros(grid);
    for (c, cell) in grid.cells().iter().enumerate() {
        let x = cell.center.map(|v| v.to_f64_lossy());
        let m = mat.cell(c);
        let (mu, li, ell, th, ka) = (
            m.mu.to_f64_lossy(),
            m.lambda_inv.to_f64_lossy(),
            m.ell.to_f64_lossy(),
            m.theta.to_f64_lossy(),
            m.kappa.to_f64_lossy(),
        );
        let eta = m.eta().to_f64_lossy();
        let du = |a: usize, b: usize| d1(|y| exact.u(y)[a], x, b);
        let dr = |a: usize, b: usize| d1(|y| exact.r(y)[a], x, b);
        let lap = |f: &dyn Fn([f64; 3]) -> f64| (0..dim).map(|b| d2(f, x, b)).sum::<f64>();

        // row divergence of the skew matrix r ↦ (n ↦ r × n) is −∇×r
        let curl = |d: &dyn Fn(usize, usize) -> f64| {
            [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
        };
        let (curl_u, curl_r) = if dim == 2 {
            let z = |d: &dyn Fn(usize, usize) -> f64| [d(2, 1), -d(2, 0), d(1, 0) - d(0, 1)];
            (z(&du), z(&dr))
        } else {
            (curl(&du), curl(&dr))
        };

        for a in 0..dim {
            let lap_u = lap(&|y| exact.u(y)[a]);
            let dp = d1(|y| exact.p(y), x, a);
            src.fu[c * dim + a] = T::lit(2.0 * mu * lap_u - curl_r[a] + dp);
        }
        let r = exact.r(x);
        let comps: &[usize] = if dim == 2 { &[2] } else { &[0, 1, 2] };
        for (l, &a) in comps.iter().enumerate() {
            let lap_r = lap(&|y| exact.r(y)[a]);
            src.fr[c * comps.len() + l] = T::lit(-curl_u[a] + ell * ell * lap_r - r[a] / mu);
        }
        let div_u: f64 = (0..dim).map(|a| du(a, a)).sum();
        let (p, w) = (exact.p(x), exact.w(x));
        src.fp[c] = T::lit(div_u - li * p - if fluid { th * li * w } else { 0.0 });
        if fluid {
            src.fw[c] = T::lit(-ka * lap(&|y| exact.w(y)) + th * li * p + eta * w);
        }
    }
    src.check(grid, fluid)?;
    Ok(src)
}
