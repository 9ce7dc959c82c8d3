//! Line-oriented mesh text format.
//!
//! ```text
//! dim 2
//! vertices 4
//! 0 0
//! 1 0
//! 1 1
//! 0 1
//! cells 1
//! 0 1 2 3
//! cell_centers
//! 0.5 0.5
//! ```
//!
//! 2D cells are counter-clockwise vertex loops, 3D cells are hexahedra with
//! eight vertex ids in VTK order. `cell_centers` is optional and, when
//! present, has one line per cell. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::grid::{CellShape, Grid};
use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(TpsaError::Parse { line: self.last + 1, message: format!("unexpected end of file, expected {what}") }),
        }
    }

    fn header(&mut self, key: &str) -> Result<(usize, Option<usize>)> {
        let (n, l) = self.next(&format!("`{key}`"))?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(TpsaError::Parse { line: n, message: format!("expected `{key}`, found `{l}`") });
        }
        let count = match parts.next() {
            Some(s) => Some(parse_num::<usize>(n, s)?),
            None => None,
        };
        Ok((n, count))
    }
}

fn parse_num<U: std::str::FromStr>(line: usize, s: &str) -> Result<U> {
    s.parse().map_err(|_| TpsaError::Parse { line, message: format!("invalid number `{s}`") })
}

fn parse_row<T: Scalar>(line: usize, l: &str, expected: usize) -> Result<Vec<T>> {
    let vals: Vec<f64> = l.split_whitespace().map(|s| parse_num::<f64>(line, s)).collect::<Result<_>>()?;
    if vals.len() != expected {
        return Err(TpsaError::Parse { line, message: format!("expected {expected} coordinates, found {}", vals.len()) });
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(TpsaError::Parse { line, message: "non-finite coordinate".into() });
    }
    Ok(vals.into_iter().map(T::lit).collect())
}

/// Parses a grid from the mesh text format.
pub fn parse_mesh<T: Scalar>(text: &str) -> Result<Grid<T>> {
    let mut lines = Lines::new(text);
    let (n, dim) = lines.header("dim")?;
    let dim = dim.ok_or(TpsaError::Parse { line: n, message: "missing dimension".into() })?;
    if dim != 2 && dim != 3 {
        return Err(TpsaError::Parse { line: n, message: format!("dimension must be 2 or 3, got {dim}") });
    }
    let (n, nv) = lines.header("vertices")?;
    let nv = nv.ok_or(TpsaError::Parse { line: n, message: "missing vertex count".into() })?;
    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next("a vertex line")?;
        let v = parse_row::<T>(n, l, dim)?;
        verts.push([v[0], v[1], if dim == 3 { v[2] } else { T::zero() }]);
    }
    let (n, nc) = lines.header("cells")?;
    let nc = nc.ok_or(TpsaError::Parse { line: n, message: "missing cell count".into() })?;
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, l) = lines.next("a cell line")?;
        let ids: Vec<usize> = l.split_whitespace().map(|s| parse_num::<usize>(n, s)).collect::<Result<_>>()?;
        if dim == 2 && ids.len() < 3 {
            return Err(TpsaError::Parse { line: n, message: "a polygon needs at least 3 vertices".into() });
        }
        if dim == 3 && ids.len() != 8 {
            return Err(TpsaError::Parse { line: n, message: "3D cells must be hexahedra with 8 vertices".into() });
        }
        if let Some(&bad) = ids.iter().find(|&&v| v >= nv) {
            return Err(TpsaError::Parse { line: n, message: format!("vertex index {bad} out of range") });
        }
        cells.push(ids);
    }
    let mut centers = None;
    if lines.inner.peek().is_some() {
        let (n, count) = lines.header("cell_centers")?;
        if count.is_some_and(|c| c != nc) {
            return Err(TpsaError::Parse { line: n, message: "cell_centers count differs from cell count".into() });
        }
        let mut cs = Vec::with_capacity(nc);
        for _ in 0..nc {
            let (n, l) = lines.next("a cell center line")?;
            let v = parse_row::<T>(n, l, dim)?;
            cs.push([v[0], v[1], if dim == 3 { v[2] } else { T::zero() }]);
        }
        if let Some((n, l)) = lines.inner.next() {
            return Err(TpsaError::Parse { line: n, message: format!("unexpected trailing content `{l}`") });
        }
        centers = Some(cs);
    }

    if dim == 2 {
        let v2: Vec<[T; 2]> = verts.iter().map(|v| [v[0], v[1]]).collect();
        let c2 = centers.map(|cs| cs.iter().map(|c| [c[0], c[1]]).collect::<Vec<_>>());
        Grid::from_polygons(&v2, &cells, c2.as_deref())
    } else {
        let hex: Vec<[usize; 8]> = cells.iter().map(|c| c.as_slice().try_into().expect("eight ids")).collect();
        Grid::from_hexahedra(&verts, &hex, centers.as_deref())
    }
}

pub fn read_mesh<T: Scalar>(path: &Path) -> Result<Grid<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

/// Writes the grid in the mesh text format, including cell centers.
pub fn write_mesh<T: Scalar>(grid: &Grid<T>) -> Result<String> {
    if grid.cells().iter().any(|c| c.shape == CellShape::Polyhedron) {
        return Err(TpsaError::invalid("general polyhedra cannot be written in the mesh format"));
    }
    let dim = grid.dim();
    let mut s = String::new();
    let coords = |s: &mut String, v: &[T; 3]| {
        let parts: Vec<String> = v[..dim].iter().map(|x| format!("{:e}", x.to_f64_lossy())).collect();
        let _ = writeln!(s, "{}", parts.join(" "));
    };
    let _ = writeln!(s, "dim {dim}");
    let _ = writeln!(s, "vertices {}", grid.vertices().len());
    for v in grid.vertices() {
        coords(&mut s, v);
    }
    let _ = writeln!(s, "cells {}", grid.num_cells());
    for c in grid.cells() {
        let ids: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", ids.join(" "));
    }
    let _ = writeln!(s, "cell_centers {}", grid.num_cells());
    for c in grid.cells() {
        coords(&mut s, &c.center);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cartesian_grid, build_simplex_grid, Extent};

    #[test]
    fn roundtrip_preserves_geometry() {
        for g in [
            build_simplex_grid::<f64>(2, &Extent::unit(2)).unwrap(),
            build_cartesian_grid::<f64>(2, 2, Some(2), &Extent::unit(3)).unwrap(),
        ] {
            let text = write_mesh(&g).unwrap();
            let h: Grid<f64> = parse_mesh(&text).unwrap();
            assert_eq!(h.num_cells(), g.num_cells());
            assert_eq!(h.num_faces(), g.num_faces());
            for (a, b) in g.cells().iter().zip(h.cells()) {
                assert_eq!(a.center, b.center);
                assert!((a.volume - b.volume).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "dim 2\nvertices 3\n0 0\n1 0\n1 x\ncells 1\n0 1 2\n";
        match parse_mesh::<f64>(bad) {
            Err(TpsaError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        let truncated = "dim 2\nvertices 3\n0 0\n";
        assert!(matches!(parse_mesh::<f64>(truncated), Err(TpsaError::Parse { .. })));
        let out_of_range = "dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 7\n";
        match parse_mesh::<f64>(out_of_range) {
            Err(TpsaError::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_optional_centers() {
        let text = "# one triangle\ndim 2\nvertices 3\n0 0\n1 0\n0 1 # last\n\ncells 1\n0 1 2\n";
        let g: Grid<f64> = parse_mesh(text).unwrap();
        assert_eq!(g.num_cells(), 1);
        assert!((g.cell(0).volume - 0.5).abs() < 1e-15);
    }
}
