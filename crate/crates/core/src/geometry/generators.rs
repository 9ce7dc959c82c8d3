//! Grid families: Cartesian (GT1), smoothly and roughly perturbed Cartesian
//! (GT2, GT4) and the structured simplicial split (GT3).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{CartesianInfo, Grid};
use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;

/// Axis-aligned box `[lo, hi]`; the third axis is ignored in 2D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extent<T> {
    pub dim: usize,
    pub lo: [T; 3],
    pub hi: [T; 3],
}

impl<T: Scalar> Extent<T> {
    pub fn unit(dim: usize) -> Self {
        Extent { dim, lo: [T::zero(); 3], hi: [T::one(); 3] }
    }

    fn check(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(TpsaError::invalid(format!("dimension must be 2 or 3, got {}", self.dim)));
        }
        for d in 0..self.dim {
            if !(self.hi[d] > self.lo[d]) || !self.lo[d].is_finite() || !self.hi[d].is_finite() {
                return Err(TpsaError::invalid(format!("degenerate extent along axis {d}")));
            }
        }
        Ok(())
    }
}

/// Tensor-product grid with `nx × ny` (× `nz`) cells.
pub fn build_cartesian_grid<T: Scalar>(
    nx: usize,
    ny: usize,
    nz: Option<usize>,
    extent: &Extent<T>,
) -> Result<Grid<T>> {
    let mut extent = *extent;
    extent.dim = if nz.is_some() { 3 } else { 2 };
    extent.check()?;
    let nz_ = nz.unwrap_or(1);
    if nx == 0 || ny == 0 || nz_ == 0 {
        return Err(TpsaError::invalid("cell counts must be at least 1"));
    }
    let counts = [nx, ny, nz_];
    let coord = |d: usize, i: usize| {
        let t = T::from_usize_lossy(i) / T::from_usize_lossy(counts[d]);
        extent.lo[d] + t * (extent.hi[d] - extent.lo[d])
    };

    let mut grid = if nz.is_none() {
        let vid = |i: usize, j: usize| i + (nx + 1) * j;
        let mut verts = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                verts.push([coord(0, i), coord(1, j)]);
            }
        }
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                cells.push(vec![vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
            }
        }
        Grid::from_polygons(&verts, &cells, None)?
    } else {
        let vid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
        let mut verts = Vec::with_capacity((nx + 1) * (ny + 1) * (nz_ + 1));
        for k in 0..=nz_ {
            for j in 0..=ny {
                for i in 0..=nx {
                    verts.push([coord(0, i), coord(1, j), coord(2, k)]);
                }
            }
        }
        let mut cells = Vec::with_capacity(nx * ny * nz_);
        for k in 0..nz_ {
            for j in 0..ny {
                for i in 0..nx {
                    cells.push([
                        vid(i, j, k),
                        vid(i + 1, j, k),
                        vid(i + 1, j + 1, k),
                        vid(i, j + 1, k),
                        vid(i, j, k + 1),
                        vid(i + 1, j, k + 1),
                        vid(i + 1, j + 1, k + 1),
                        vid(i, j + 1, k + 1),
                    ]);
                }
            }
        }
        Grid::from_hexahedra(&verts, &cells, None)?
    };
    grid.cartesian = Some(CartesianInfo { counts, lo: extent.lo, hi: extent.hi });
    grid.nominal_spacing = Some((extent.hi[0] - extent.lo[0]) / T::from_usize_lossy(nx));
    Ok(grid)
}

/// Randomly displaces the interior vertices of a logically Cartesian 2D grid.
///
/// Each coordinate of each interior vertex moves by an independent uniform
/// sample in `[-amplitude·h^order, amplitude·h^order]`, `h` the spacing along
/// that axis. Centers are recomputed as vertex centroids.
pub fn perturb_grid<T: Scalar>(grid: &Grid<T>, order: u32, amplitude: T, seed: u64) -> Result<Grid<T>> {
    let info = *grid
        .cartesian()
        .ok_or_else(|| TpsaError::invalid("perturbation needs a logically Cartesian grid"))?;
    if grid.dim() != 2 {
        return Err(TpsaError::invalid("perturbation of 3D grids would create non-planar faces"));
    }
    if order != 1 && order != 2 {
        return Err(TpsaError::invalid(format!("perturbation order must be 1 or 2, got {order}")));
    }
    if !(amplitude >= T::zero() && amplitude < T::lit(0.5)) {
        return Err(TpsaError::invalid(format!("amplitude must lie in [0, 0.5), got {amplitude}")));
    }
    let [nx, ny, _] = info.counts;
    let bound = [0, 1].map(|d| amplitude * info.spacing(d).powi(order as i32));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<[T; 2]> = grid.vertices().iter().map(|v| [v[0], v[1]]).collect();
    for j in 1..ny {
        for i in 1..nx {
            let v = &mut verts[i + (nx + 1) * j];
            for d in 0..2 {
                let s: f64 = rng.random_range(-1.0..=1.0);
                v[d] += T::lit(s) * bound[d];
            }
        }
    }
    let cells: Vec<Vec<usize>> = grid.cells().iter().map(|c| c.vertices.clone()).collect();
    let mut out = Grid::from_polygons(&verts, &cells, None)
        .map_err(|e| TpsaError::DegenerateGrid(format!("perturbed grid is invalid: {e}")))?;
    out.cartesian = Some(info);
    out.nominal_spacing = grid.nominal_spacing;
    if let Some(k) = out.faces().iter().position(|f| !(f.dist_inner > T::zero()) || f.dist_outer.is_some_and(|d| !(d > T::zero()))) {
        return Err(TpsaError::DegenerateGrid(format!("δ_k^i ≤ 0 on face {k} after perturbation")));
    }
    Ok(out)
}

/// Staggered-row triangulation with `n` rows of height `1/n`.
///
/// Vertex rows alternate between `x = i/n` and `x = (i + ½)/n` (the latter
/// closed off by vertices on the left and right sides). Interior triangles
/// are acute isosceles with their circumcenter as cell center, which makes
/// them exactly face-orthogonal with face centers at edge midpoints. The
/// half triangles along the left and right sides are right triangles and use
/// their centroid, so orthogonality fails only in that boundary layer.
pub fn build_simplex_grid<T: Scalar>(n: usize, extent: &Extent<T>) -> Result<Grid<T>> {
    if n == 0 {
        return Err(TpsaError::invalid("simplex grid needs n >= 1"));
    }
    let mut extent = *extent;
    extent.dim = 2;
    extent.check()?;
    let coord = |d: usize, t: T| extent.lo[d] + t * (extent.hi[d] - extent.lo[d]);
    let nf = T::from_usize_lossy(n);
    let half = T::lit(0.5);

    // row j holds n + 1 vertices if j is even, n + 2 if odd
    let mut verts = Vec::new();
    let mut row_start = Vec::with_capacity(n + 1);
    for j in 0..=n {
        row_start.push(verts.len());
        let y = coord(1, T::from_usize_lossy(j) / nf);
        if j % 2 == 0 {
            for i in 0..=n {
                verts.push([coord(0, T::from_usize_lossy(i) / nf), y]);
            }
        } else {
            verts.push([coord(0, T::zero()), y]);
            for i in 0..n {
                verts.push([coord(0, (T::from_usize_lossy(i) + half) / nf), y]);
            }
            verts.push([coord(0, T::one()), y]);
        }
    }

    let mut cells = Vec::with_capacity(n * (2 * n + 1));
    for j in 0..n {
        let (lo, hi) = (row_start[j], row_start[j + 1]);
        if j % 2 == 0 {
            // straight row below, staggered row above
            let (b, t) = (|i: usize| lo + i, |i: usize| hi + i);
            cells.push(vec![b(0), t(1), t(0)]);
            for i in 0..n {
                cells.push(vec![b(i), b(i + 1), t(i + 1)]);
                if i + 1 < n {
                    cells.push(vec![b(i + 1), t(i + 2), t(i + 1)]);
                }
            }
            cells.push(vec![b(n), t(n + 1), t(n)]);
        } else {
            let (t, b) = (|i: usize| lo + i, |i: usize| hi + i);
            cells.push(vec![t(0), t(1), b(0)]);
            for i in 0..n {
                cells.push(vec![t(i + 1), b(i + 1), b(i)]);
                if i + 1 < n {
                    cells.push(vec![t(i + 1), t(i + 2), b(i + 1)]);
                }
            }
            cells.push(vec![t(n), t(n + 1), b(n)]);
        }
    }
    let mut grid = Grid::from_polygons(&verts, &cells, None)?;
    grid.nominal_spacing = Some((extent.hi[0] - extent.lo[0]) / nf);
    Ok(grid)
}
