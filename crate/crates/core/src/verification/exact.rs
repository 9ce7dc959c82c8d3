//! Closed-form manufactured solutions.
//!
//! Fields are evaluated in `f64` on 3-vectors. In 2D the rotation is the
//! third component of `r`.

use std::f64::consts::PI;

use crate::boundary::{BoundaryCondition, BoundarySpec, Robin, Side};
use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::materials::MaterialField;
use crate::scalar::Scalar;

pub trait ExactSolution: Send + Sync {
    fn name(&self) -> &'static str;
    fn u(&self, x: [f64; 3]) -> [f64; 3];
    fn r(&self, x: [f64; 3]) -> [f64; 3];
    fn p(&self, x: [f64; 3]) -> f64;
    fn w(&self, x: [f64; 3]) -> f64;
}

const FD_STEP: f64 = 1e-3;

fn shifted(x: [f64; 3], axis: usize, s: f64) -> [f64; 3] {
    let mut y = x;
    y[axis] += s;
    y
}

/// Sixth-order central first derivative along `axis`.
pub fn d1(f: impl Fn([f64; 3]) -> f64, x: [f64; 3], axis: usize) -> f64 {
    let h = FD_STEP;
    let v = |k: f64| f(shifted(x, axis, k * h));
    (45.0 * (v(1.0) - v(-1.0)) - 9.0 * (v(2.0) - v(-2.0)) + (v(3.0) - v(-3.0))) / (60.0 * h)
}

/// Sixth-order central second derivative along `axis`.
pub fn d2(f: impl Fn([f64; 3]) -> f64, x: [f64; 3], axis: usize) -> f64 {
    let h = FD_STEP;
    let v = |k: f64| f(shifted(x, axis, k * h));
    (270.0 * (v(1.0) + v(-1.0)) - 27.0 * (v(2.0) + v(-2.0)) + 2.0 * (v(3.0) + v(-3.0)) - 490.0 * v(0.0))
        / (180.0 * h * h)
}

/// Divergence-free displacement from the stream function
/// `ψ = sin²(2πx) sin²(2πy)`, with `r = x(1−x) sin(2πy)` and `p = 0`.
pub struct ElasticStream;

impl ExactSolution for ElasticStream {
    fn name(&self) -> &'static str {
        "elastic_stream"
    }

    fn u(&self, x: [f64; 3]) -> [f64; 3] {
        let (sx, sy) = ((2.0 * PI * x[0]).sin(), (2.0 * PI * x[1]).sin());
        [
            2.0 * PI * sx * sx * (4.0 * PI * x[1]).sin(),
            -2.0 * PI * (4.0 * PI * x[0]).sin() * sy * sy,
            0.0,
        ]
    }

    fn r(&self, x: [f64; 3]) -> [f64; 3] {
        [0.0, 0.0, x[0] * (1.0 - x[0]) * (2.0 * PI * x[1]).sin()]
    }

    fn p(&self, _: [f64; 3]) -> f64 {
        0.0
    }

    fn w(&self, _: [f64; 3]) -> f64 {
        0.0
    }
}

/// Smooth fields for the coupled problem, vanishing on the unit square
/// boundary.
pub struct PoromechSine;

impl ExactSolution for PoromechSine {
    fn name(&self) -> &'static str {
        "poromech_sine"
    }

    fn u(&self, x: [f64; 3]) -> [f64; 3] {
        let (a, b) = (x[0], x[1]);
        [(PI * a).sin() * b * (1.0 - b), (PI * b).sin() * a * (1.0 - a), 0.0]
    }

    fn r(&self, x: [f64; 3]) -> [f64; 3] {
        [0.0, 0.0, x[0] * (1.0 - x[0]) * (PI * x[1]).sin()]
    }

    fn p(&self, x: [f64; 3]) -> f64 {
        (PI * x[1]).sin() * x[0] * (1.0 - x[0])
    }

    fn w(&self, x: [f64; 3]) -> f64 {
        (PI * x[0]).sin() * x[1] * (1.0 - x[1])
    }
}

pub struct Zero;

impl ExactSolution for Zero {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn u(&self, _: [f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }

    fn r(&self, _: [f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }

    fn p(&self, _: [f64; 3]) -> f64 {
        0.0
    }

    fn w(&self, _: [f64; 3]) -> f64 {
        0.0
    }
}

pub const SOLUTION_NAMES: [&str; 3] = ["elastic_stream", "poromech_sine", "zero"];

pub fn lookup(name: &str) -> Option<Box<dyn ExactSolution>> {
    match name {
        "elastic_stream" => Some(Box::new(ElasticStream)),
        "poromech_sine" => Some(Box::new(PoromechSine)),
        "zero" => Some(Box::new(Zero)),
        _ => None,
    }
}

/// Robin weights of one boundary face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryKinds<T> {
    pub b_u: Robin<T>,
    pub b_r: Robin<T>,
    pub b_w: Robin<T>,
}

impl<T: Scalar> Default for BoundaryKinds<T> {
    fn default() -> Self {
        BoundaryKinds { b_u: Robin::dirichlet(), b_r: Robin::dirichlet(), b_w: Robin::dirichlet() }
    }
}

/// Boundary data consistent with `exact` for the given weights.
///
/// With traction `t = 2μ∂ₙu + r×n + pn`, couple density `c = ℓ²∂ₙr` and flux
/// `q = −κ∂ₙw`, the data is the value for Dirichlet weights, `t`, `c`, `q` for
/// Neumann weights, and for a finite weight `b`
///
/// ```text
/// g_u = (b t + 2μ u) / (b + 2μ)
/// g_r = (b c + ℓ² r) / (b + ℓ²)
/// g_w = (κ w − b q) / (κ − b)
/// ```
pub fn boundary_data<T: Scalar>(
    exact: &dyn ExactSolution,
    grid: &Grid<T>,
    mat: &MaterialField<T>,
    kinds: impl Fn(Side) -> BoundaryKinds<T>,
) -> Result<BoundarySpec<T>> {
    let dim = grid.dim();
    let mut faces = Vec::with_capacity(grid.num_boundary_faces());
    for &k in grid.boundary_faces() {
        let f = grid.face(k);
        let kind = kinds(Side::of_normal(&f.normal));
        let x = f.center.map(|v| v.to_f64_lossy());
        let n = f.normal.map(|v| v.to_f64_lossy());
        let m = mat.cell(f.inner);
        let (mu, ell2, kappa) = (m.mu.to_f64_lossy(), (m.ell * m.ell).to_f64_lossy(), m.kappa.to_f64_lossy());
        let dn = |g: &dyn Fn([f64; 3]) -> f64| (0..dim).map(|b| n[b] * d1(g, x, b)).sum::<f64>();

        let (u, r, p, w) = (exact.u(x), exact.r(x), exact.p(x), exact.w(x));
        let rxn = [r[1] * n[2] - r[2] * n[1], r[2] * n[0] - r[0] * n[2], r[0] * n[1] - r[1] * n[0]];
        let mut g_u = [T::zero(); 3];
        for a in 0..dim {
            let t = 2.0 * mu * dn(&|y| exact.u(y)[a]) + rxn[a] + p * n[a];
            g_u[a] = T::lit(match kind.b_u {
                Robin::Infinite => t,
                Robin::Finite(b) => {
                    let b = b.to_f64_lossy();
                    (b * t + 2.0 * mu * u[a]) / (b + 2.0 * mu)
                }
            });
        }
        let comps: &[usize] = if dim == 2 { &[2] } else { &[0, 1, 2] };
        let mut g_r = [T::zero(); 3];
        for (l, &a) in comps.iter().enumerate() {
            let c = ell2 * dn(&|y| exact.r(y)[a]);
            g_r[l] = T::lit(match kind.b_r {
                Robin::Infinite => c,
                Robin::Finite(b) => {
                    let b = b.to_f64_lossy();
                    if b + ell2 == 0.0 {
                        r[a]
                    } else {
                        (b * c + ell2 * r[a]) / (b + ell2)
                    }
                }
            });
        }
        let q = -kappa * dn(&|y| exact.w(y));
        let g_w = match kind.b_w {
            Robin::Infinite => q,
            Robin::Finite(b) => {
                let b = b.to_f64_lossy();
                if b == 0.0 {
                    w
                } else if (kappa - b).abs() <= 1e-12 * kappa.max(b) {
                    return Err(TpsaError::invalid(format!(
                        "flux Robin weight {b} equals κ: boundary data cannot be represented"
                    )));
                } else {
                    (kappa * w - b * q) / (kappa - b)
                }
            }
        };
        faces.push(BoundaryCondition { b_u: kind.b_u, b_r: kind.b_r, b_w: kind.b_w, g_u, g_r, g_w: T::lit(g_w) });
    }
    Ok(BoundarySpec { faces })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_differences_are_accurate() {
        let f = |x: [f64; 3]| (2.0 * x[0]).sin() * x[1].exp();
        let x = [0.3, 0.7, 0.0];
        assert!((d1(f, x, 0) - 2.0 * (0.6f64).cos() * 0.7f64.exp()).abs() < 1e-11);
        assert!((d2(f, x, 0) + 4.0 * (0.6f64).sin() * 0.7f64.exp()).abs() < 1e-8);
        assert!((d2(f, x, 1) - (0.6f64).sin() * 0.7f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn lookup_by_name() {
        for n in SOLUTION_NAMES {
            assert_eq!(lookup(n).unwrap().name(), n);
        }
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn sine_fields_vanish_on_boundary() {
        let s = PoromechSine;
        for t in [0.0, 0.25, 0.8] {
            for x in [[0.0, t, 0.0], [1.0, t, 0.0], [t, 0.0, 0.0], [t, 1.0, 0.0]] {
                assert!(s.u(x).iter().all(|v| v.abs() < 1e-15));
                assert!(s.r(x)[2].abs() < 1e-15 && s.p(x).abs() < 1e-15 && s.w(x).abs() < 1e-15);
            }
        }
    }
}
