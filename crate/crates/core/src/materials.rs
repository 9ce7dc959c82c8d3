use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;

/// Constitutive parameters of one cell.
///
/// `lambda_inv = 0` encodes an incompressible solid. `kappa` is the
/// permeability already multiplied by the time step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams<T> {
    pub mu: T,
    pub lambda_inv: T,
    pub ell: T,
    pub theta: T,
    pub kappa: T,
    pub eta_w: T,
}

impl<T: Scalar> Default for MaterialParams<T> {
    fn default() -> Self {
        MaterialParams {
            mu: T::one(),
            lambda_inv: T::one(),
            ell: T::zero(),
            theta: T::zero(),
            kappa: T::zero(),
            eta_w: T::zero(),
        }
    }
}

impl<T: Scalar> MaterialParams<T> {
    /// Effective compressibility `η_w + λ⁻¹ϑ²`.
    pub fn eta(&self) -> T {
        self.eta_w + self.lambda_inv * self.theta * self.theta
    }
}

/// Per-cell material coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MaterialField<T> {
    pub mu: Vec<T>,
    pub lambda_inv: Vec<T>,
    pub ell: Vec<T>,
    pub theta: Vec<T>,
    pub kappa: Vec<T>,
    pub eta_w: Vec<T>,
}

impl<T: Scalar> MaterialField<T> {
    pub fn uniform(num_cells: usize, p: MaterialParams<T>) -> Self {
        MaterialField {
            mu: vec![p.mu; num_cells],
            lambda_inv: vec![p.lambda_inv; num_cells],
            ell: vec![p.ell; num_cells],
            theta: vec![p.theta; num_cells],
            kappa: vec![p.kappa; num_cells],
            eta_w: vec![p.eta_w; num_cells],
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn cell(&self, i: usize) -> MaterialParams<T> {
        MaterialParams {
            mu: self.mu[i],
            lambda_inv: self.lambda_inv[i],
            ell: self.ell[i],
            theta: self.theta[i],
            kappa: self.kappa[i],
            eta_w: self.eta_w[i],
        }
    }

    pub fn eta(&self, i: usize) -> T {
        self.cell(i).eta()
    }

    /// `ℓ²` per cell.
    pub fn ell2(&self) -> Vec<T> {
        self.ell.iter().map(|l| *l * *l).collect()
    }

    pub fn is_incompressible(&self) -> bool {
        self.lambda_inv.iter().all(|l| *l == T::zero())
    }

    /// Checks sizes and parameter bounds. With `fluid` set, also requires
    /// `κ + η_w + λ⁻¹ϑ² > 0` in every cell.
    pub fn validate(&self, num_cells: usize, fluid: bool) -> Result<()> {
        let fields = [&self.mu, &self.lambda_inv, &self.ell, &self.theta, &self.kappa, &self.eta_w];
        if fields.iter().any(|f| f.len() != num_cells) {
            return Err(TpsaError::invalid(format!("material field sizes do not match {num_cells} cells")));
        }
        for i in 0..num_cells {
            let m = self.cell(i);
            let bad = |what: &str| Err(TpsaError::MaterialBounds(format!("cell {i}: {what}")));
            if [m.mu, m.lambda_inv, m.ell, m.theta, m.kappa, m.eta_w].iter().any(|v| !v.is_finite()) {
                return bad("non-finite parameter");
            }
            if !(m.mu > T::zero()) {
                return bad("μ must be positive");
            }
            if m.lambda_inv < T::zero() || m.ell < T::zero() || m.theta < T::zero() {
                return bad("λ⁻¹, ℓ and ϑ must be nonnegative");
            }
            if m.kappa < T::zero() || m.eta_w < T::zero() {
                return bad("κ and η_w must be nonnegative");
            }
            if m.theta * m.lambda_inv > T::one() {
                return bad("ϑλ⁻¹ must not exceed 1");
            }
            if fluid && !(m.kappa + m.eta() > T::zero()) {
                return bad("degenerate fluid block: κ + η_w + λ⁻¹ϑ² must be positive");
            }
        }
        Ok(())
    }
}
