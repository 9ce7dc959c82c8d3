//! Robin boundary weights and per-face boundary data.
//!
//! A boundary face behaves like a face to a fictitious neighbor at distance
//! `b` from the face: `b = 0` is a Dirichlet condition, `b = ∞` a Neumann
//! condition. Infinite weights are a dedicated variant and every formula uses
//! the exact limit.

use crate::error::{Result, TpsaError};
use crate::geometry::Grid;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Robin<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Robin<T> {
    pub fn dirichlet() -> Self {
        Robin::Finite(T::zero())
    }

    pub fn neumann() -> Self {
        Robin::Infinite
    }

    pub fn finite(b: T) -> Result<Self> {
        if !(b >= T::zero()) || !b.is_finite() {
            return Err(TpsaError::invalid(format!("Robin weight must be finite and >= 0, got {b}")));
        }
        Ok(Robin::Finite(b))
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Robin::Finite(b) if *b == T::zero())
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, Robin::Infinite)
    }

    /// `1 / (d + b)`, zero for an infinite weight.
    pub fn inv_total(&self, d: T) -> T {
        match *self {
            Robin::Finite(b) => T::one() / (d + b),
            Robin::Infinite => T::zero(),
        }
    }

    /// `b / (d + b)`: the averaging weight of the interior cell.
    pub fn interior_fraction(&self, d: T) -> T {
        match *self {
            Robin::Finite(b) => b / (d + b),
            Robin::Infinite => T::one(),
        }
    }

    /// `d / (d + b)`: the averaging weight of the boundary cell.
    pub fn boundary_fraction(&self, d: T) -> T {
        match *self {
            Robin::Finite(b) => d / (d + b),
            Robin::Infinite => T::zero(),
        }
    }
}

/// Boundary condition on one boundary face.
///
/// `g_u` and `g_r` are 3-vectors; in 2D only `g_u[0..2]` and `g_r[0]` are read.
/// With a Dirichlet weight the data is a value, with a Neumann weight it is
/// the stress (or flux) density on the face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCondition<T> {
    pub b_u: Robin<T>,
    pub b_r: Robin<T>,
    pub b_w: Robin<T>,
    pub g_u: [T; 3],
    pub g_r: [T; 3],
    pub g_w: T,
}

impl<T: Scalar> BoundaryCondition<T> {
    pub fn homogeneous(b_u: Robin<T>, b_r: Robin<T>, b_w: Robin<T>) -> Self {
        BoundaryCondition {
            b_u,
            b_r,
            b_w,
            g_u: [T::zero(); 3],
            g_r: [T::zero(); 3],
            g_w: T::zero(),
        }
    }

    pub fn dirichlet() -> Self {
        Self::homogeneous(Robin::dirichlet(), Robin::dirichlet(), Robin::dirichlet())
    }
}

/// Boundary conditions for all boundary faces, indexed by boundary index.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySpec<T> {
    pub faces: Vec<BoundaryCondition<T>>,
}

impl<T: Scalar> BoundarySpec<T> {
    pub fn uniform(grid: &Grid<T>, bc: BoundaryCondition<T>) -> Self {
        BoundarySpec { faces: vec![bc; grid.num_boundary_faces()] }
    }

    pub fn dirichlet(grid: &Grid<T>) -> Self {
        Self::uniform(grid, BoundaryCondition::dirichlet())
    }

    /// `f(face_index)` gives the condition of each boundary face.
    pub fn from_fn(grid: &Grid<T>, mut f: impl FnMut(usize) -> BoundaryCondition<T>) -> Self {
        BoundarySpec { faces: grid.boundary_faces().iter().map(|&k| f(k)).collect() }
    }

    pub fn check(&self, grid: &Grid<T>) -> Result<()> {
        if self.faces.len() != grid.num_boundary_faces() {
            return Err(TpsaError::invalid(format!(
                "boundary spec has {} entries, grid has {} boundary faces",
                self.faces.len(),
                grid.num_boundary_faces()
            )));
        }
        for (b, bc) in self.faces.iter().enumerate() {
            for w in [bc.b_u, bc.b_r, bc.b_w] {
                if let Robin::Finite(x) = w {
                    if !(x >= T::zero()) || !x.is_finite() {
                        return Err(TpsaError::invalid(format!("boundary face {b}: Robin weight {x} out of range")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn robin_u(&self) -> Vec<Robin<T>> {
        self.faces.iter().map(|f| f.b_u).collect()
    }

    pub fn robin_r(&self) -> Vec<Robin<T>> {
        self.faces.iter().map(|f| f.b_r).collect()
    }

    pub fn robin_w(&self) -> Vec<Robin<T>> {
        self.faces.iter().map(|f| f.b_w).collect()
    }

    pub fn all_u_neumann(&self) -> bool {
        self.faces.iter().all(|f| f.b_u.is_neumann())
    }

    pub fn all_w_neumann(&self) -> bool {
        self.faces.iter().all(|f| f.b_w.is_neumann())
    }
}

/// Side of an axis-aligned box a boundary face lies on, from its normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
    Front,
    Back,
}

impl Side {
    pub const ALL: [Side; 6] = [Side::Left, Side::Right, Side::Bottom, Side::Top, Side::Front, Side::Back];

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
            Side::Front => "front",
            Side::Back => "back",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        Side::ALL.into_iter().find(|side| side.name() == s)
    }

    /// Dominant axis and sign of the outward normal. Left/right is x, bottom/top
    /// is y, front/back is z.
    pub fn of_normal<T: Scalar>(n: &[T; 3]) -> Side {
        let mut axis = 0;
        for d in 1..3 {
            if n[d].abs() > n[axis].abs() {
                axis = d;
            }
        }
        let pos = n[axis] > T::zero();
        match (axis, pos) {
            (0, false) => Side::Left,
            (0, true) => Side::Right,
            (1, false) => Side::Bottom,
            (1, true) => Side::Top,
            (_, false) => Side::Front,
            (_, true) => Side::Back,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        let d: Robin<f64> = Robin::dirichlet();
        assert_eq!(d.interior_fraction(0.5), 0.0);
        assert_eq!(d.boundary_fraction(0.5), 1.0);
        assert_eq!(d.inv_total(0.5), 2.0);
        let n: Robin<f64> = Robin::neumann();
        assert_eq!(n.interior_fraction(0.5), 1.0);
        assert_eq!(n.boundary_fraction(0.5), 0.0);
        assert_eq!(n.inv_total(0.5), 0.0);
        let r = Robin::finite(0.5).unwrap();
        assert_eq!(r.interior_fraction(0.5), 0.5);
        assert!(Robin::finite(-1.0).is_err());
        assert!(Robin::finite(f64::INFINITY).is_err());
    }

    #[test]
    fn sides_from_normals() {
        assert_eq!(Side::of_normal(&[-1.0, 0.0, 0.0]), Side::Left);
        assert_eq!(Side::of_normal(&[0.0, 1.0, 0.0]), Side::Top);
        assert_eq!(Side::of_normal(&[0.0, 0.0, 1.0]), Side::Back);
        assert_eq!(Side::parse("bottom"), Some(Side::Bottom));
        assert_eq!(Side::parse("up"), None);
    }
}
