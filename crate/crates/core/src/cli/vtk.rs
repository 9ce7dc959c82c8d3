//! Legacy ASCII VTK (version 3.0) unstructured grid output.

use std::fmt::Write as _;

use crate::geometry::{CellShape, Grid};
use crate::scalar::Scalar;
use crate::verification::DiscreteSolution;

const VTK_POLYGON: u8 = 7;
const VTK_HEXAHEDRON: u8 = 12;
// general polyhedra are written as convex point sets
const VTK_CONVEX_POINT_SET: u8 = 41;

fn cell_type(shape: CellShape) -> u8 {
    match shape {
        CellShape::Polygon => VTK_POLYGON,
        CellShape::Hexahedron => VTK_HEXAHEDRON,
        CellShape::Polyhedron => VTK_CONVEX_POINT_SET,
    }
}

/// Grid and cell data `u`, `r`, `p` and, when present, `w`.
pub fn write_vtk<T: Scalar>(grid: &Grid<T>, sol: &DiscreteSolution<T>, title: &str) -> String {
    let mut s = String::new();
    let f = |x: T| format!("{:e}", x.to_f64_lossy());
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{}", title.lines().next().unwrap_or("tpsa"));
    let _ = writeln!(s, "ASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {} double", grid.vertices().len());
    for v in grid.vertices() {
        let _ = writeln!(s, "{} {} {}", f(v[0]), f(v[1]), f(v[2]));
    }
    let size: usize = grid.cells().iter().map(|c| c.vertices.len() + 1).sum();
    let _ = writeln!(s, "CELLS {} {}", grid.num_cells(), size);
    for c in grid.cells() {
        let ids: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{} {}", c.vertices.len(), ids.join(" "));
    }
    let _ = writeln!(s, "CELL_TYPES {}", grid.num_cells());
    for c in grid.cells() {
        let _ = writeln!(s, "{}", cell_type(c.shape));
    }
    let _ = writeln!(s, "CELL_DATA {}", grid.num_cells());
    let vector = |s: &mut String, name: &str, v: &[T], m: usize| {
        let _ = writeln!(s, "VECTORS {name} double");
        for c in 0..grid.num_cells() {
            let comp = |a: usize| if a < m { f(v[c * m + a]) } else { f(T::zero()) };
            let _ = writeln!(s, "{} {} {}", comp(0), comp(1), comp(2));
        }
    };
    let scalar = |s: &mut String, name: &str, v: &[T]| {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for x in v {
            let _ = writeln!(s, "{}", f(*x));
        }
    };
    vector(&mut s, "u", &sol.u, sol.dim);
    if sol.rot_dim == 1 {
        scalar(&mut s, "r", &sol.r);
    } else {
        vector(&mut s, "r", &sol.r, 3);
    }
    scalar(&mut s, "p", &sol.p);
    if sol.has_w() {
        scalar(&mut s, "w", &sol.w);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cartesian_grid, Extent};

    #[test]
    fn header_and_counts() {
        let g = build_cartesian_grid::<f64>(2, 1, None, &Extent::unit(2)).unwrap();
        let text = write_vtk(&g, &DiscreteSolution::zeros(&g, true), "t");
        assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(text.contains("CELLS 2 10\n"));
        assert!(text.contains("CELL_TYPES 2\n7\n7\n"));
        assert!(text.contains("SCALARS w double 1"));
        let g3 = build_cartesian_grid::<f64>(1, 1, Some(1), &Extent::unit(3)).unwrap();
        let text = write_vtk(&g3, &DiscreteSolution::zeros(&g3, false), "t");
        assert!(text.contains("CELL_TYPES 1\n12\n"));
        assert!(!text.contains("SCALARS w"));
    }
}
