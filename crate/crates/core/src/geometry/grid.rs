use std::collections::HashMap;

use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;
use crate::tensor_ops::{add, cross, dot, norm, scale, sub, Vec3};

/// Shape tag used by exporters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellShape {
    Polygon,
    /// Eight vertices in VTK order: bottom loop counter-clockwise seen from
    /// above, then the top loop.
    Hexahedron,
    Polyhedron,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell<T> {
    pub center: Vec3<T>,
    pub volume: T,
    pub vertices: Vec<usize>,
    pub faces: Vec<usize>,
    pub shape: CellShape,
}

/// A face with its fixed orientation: `normal` points out of `inner`.
#[derive(Clone, Debug, PartialEq)]
pub struct Face<T> {
    pub center: Vec3<T>,
    pub area: T,
    pub normal: Vec3<T>,
    pub inner: usize,
    /// `None` on the domain boundary; the neighbor is then a boundary cell.
    pub outer: Option<usize>,
    /// Signed distance from the inner cell center to the face plane.
    pub dist_inner: T,
    /// Signed distance from the face plane to the outer cell center.
    pub dist_outer: Option<T>,
    pub vertices: Vec<usize>,
}

impl<T: Scalar> Face<T> {
    pub fn is_boundary(&self) -> bool {
        self.outer.is_none()
    }

    /// Center-to-center distance projected on the normal; on a boundary face
    /// this is the geometric (Dirichlet) distance `dist_inner`.
    pub fn delta(&self) -> T {
        self.dist_inner + self.dist_outer.unwrap_or(T::zero())
    }
}

/// Logical structure of generated tensor-product grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianInfo<T> {
    pub counts: [usize; 3],
    pub lo: Vec3<T>,
    pub hi: Vec3<T>,
}

impl<T: Scalar> CartesianInfo<T> {
    pub fn spacing(&self, axis: usize) -> T {
        (self.hi[axis] - self.lo[axis]) / T::from_usize_lossy(self.counts[axis])
    }
}

/// Admissible polygonal (2D) or polyhedral (3D) grid.
///
/// Every face stores its two neighbors. On the boundary the second neighbor
/// is a boundary cell whose center is the face center; boundary cells are
/// numbered `0..num_boundary_faces()` in face order.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    dim: usize,
    vertices: Vec<Vec3<T>>,
    cells: Vec<Cell<T>>,
    faces: Vec<Face<T>>,
    boundary_faces: Vec<usize>,
    boundary_index: Vec<Option<usize>>,
    pub(crate) cartesian: Option<CartesianInfo<T>>,
    pub(crate) nominal_spacing: Option<T>,
}

struct RawFace {
    loop_: Vec<usize>,
    inner: usize,
    outer: Option<usize>,
}

impl<T: Scalar> Grid<T> {
    /// Polygonal grid from counter-clockwise vertex loops.
    ///
    /// Cell centers default to the circumcenter for triangles whose
    /// circumcenter is strictly inside, and to the vertex centroid otherwise.
    pub fn from_polygons(
        vertices: &[[T; 2]],
        cells: &[Vec<usize>],
        centers: Option<&[[T; 2]]>,
    ) -> Result<Self> {
        let verts: Vec<Vec3<T>> = vertices.iter().map(|v| [v[0], v[1], T::zero()]).collect();
        let mut loops = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(TpsaError::DegenerateGrid(format!("cell {c} has fewer than 3 vertices")));
            }
            check_indices(c, cell, verts.len())?;
            let n = cell.len();
            loops.push((0..n).map(|a| vec![cell[a], cell[(a + 1) % n]]).collect::<Vec<_>>());
        }
        let centers = centers.map(|cs| cs.iter().map(|c| [c[0], c[1], T::zero()]).collect::<Vec<_>>());
        Self::assemble(2, verts, cells.to_vec(), vec![CellShape::Polygon; cells.len()], loops, centers)
    }

    /// Hexahedral grid; see [`CellShape::Hexahedron`] for the vertex order.
    pub fn from_hexahedra(
        vertices: &[[T; 3]],
        cells: &[[usize; 8]],
        centers: Option<&[[T; 3]]>,
    ) -> Result<Self> {
        const LOOPS: [[usize; 4]; 6] =
            [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]];
        let mut loops = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            check_indices(c, cell, vertices.len())?;
            loops.push(LOOPS.iter().map(|l| l.iter().map(|&a| cell[a]).collect()).collect());
        }
        Self::assemble(
            3,
            vertices.to_vec(),
            cells.iter().map(|c| c.to_vec()).collect(),
            vec![CellShape::Hexahedron; cells.len()],
            loops,
            centers.map(|c| c.to_vec()),
        )
    }

    /// General polyhedral grid: each cell is a list of planar faces given as
    /// vertex loops oriented counter-clockwise seen from outside the cell.
    pub fn from_polyhedra(
        vertices: &[[T; 3]],
        cells: &[Vec<Vec<usize>>],
        centers: Option<&[[T; 3]]>,
    ) -> Result<Self> {
        let mut cell_vertices = Vec::with_capacity(cells.len());
        for (c, faces) in cells.iter().enumerate() {
            if faces.len() < 4 {
                return Err(TpsaError::DegenerateGrid(format!("cell {c} has fewer than 4 faces")));
            }
            let mut vs: Vec<usize> = Vec::new();
            for f in faces {
                if f.len() < 3 {
                    return Err(TpsaError::DegenerateGrid(format!("cell {c} has a face with fewer than 3 vertices")));
                }
                check_indices(c, f, vertices.len())?;
                for &v in f {
                    if !vs.contains(&v) {
                        vs.push(v);
                    }
                }
            }
            cell_vertices.push(vs);
        }
        Self::assemble(
            3,
            vertices.to_vec(),
            cell_vertices,
            vec![CellShape::Polyhedron; cells.len()],
            cells.to_vec(),
            centers.map(|c| c.to_vec()),
        )
    }

    fn assemble(
        dim: usize,
        vertices: Vec<Vec3<T>>,
        cell_vertices: Vec<Vec<usize>>,
        shapes: Vec<CellShape>,
        loops: Vec<Vec<Vec<usize>>>,
        centers: Option<Vec<Vec3<T>>>,
    ) -> Result<Self> {
        if cell_vertices.is_empty() {
            return Err(TpsaError::invalid("grid has no cells"));
        }
        if let Some(c) = &centers {
            if c.len() != cell_vertices.len() {
                return Err(TpsaError::invalid(format!(
                    "{} cell centers given for {} cells",
                    c.len(),
                    cell_vertices.len()
                )));
            }
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(TpsaError::invalid("non-finite vertex coordinate"));
        }

        let mut raw: Vec<RawFace> = Vec::new();
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut cell_faces = vec![Vec::new(); cell_vertices.len()];
        for (c, cell_loops) in loops.into_iter().enumerate() {
            for l in cell_loops {
                let mut key = l.clone();
                key.sort_unstable();
                if key.windows(2).any(|w| w[0] == w[1]) {
                    return Err(TpsaError::DegenerateGrid(format!("cell {c} has a face with repeated vertices")));
                }
                match lookup.get(&key) {
                    Some(&k) => {
                        let f = &mut raw[k];
                        if f.outer.is_some() || f.inner == c {
                            return Err(TpsaError::DegenerateGrid(format!(
                                "face {key:?} is shared by more than two cells"
                            )));
                        }
                        f.outer = Some(c);
                        cell_faces[c].push(k);
                    }
                    None => {
                        lookup.insert(key, raw.len());
                        cell_faces[c].push(raw.len());
                        raw.push(RawFace { loop_: l, inner: c, outer: None });
                    }
                }
            }
        }

        let mut faces = Vec::with_capacity(raw.len());
        for (k, f) in raw.into_iter().enumerate() {
            let (center, area, normal) = face_geometry(dim, &vertices, &f.loop_);
            if !(area > T::zero()) {
                return Err(TpsaError::DegenerateGrid(format!("face {k} has zero measure")));
            }
            faces.push(Face {
                center,
                area,
                normal,
                inner: f.inner,
                outer: f.outer,
                dist_inner: T::zero(),
                dist_outer: None,
                vertices: f.loop_,
            });
        }

        let mut cells = Vec::with_capacity(cell_vertices.len());
        for (c, vs) in cell_vertices.into_iter().enumerate() {
            let mut volume = T::zero();
            for &k in &cell_faces[c] {
                let f = &faces[k];
                let s = if f.inner == c { T::one() } else { -T::one() };
                volume += s * f.area * dot(&f.center, &f.normal);
            }
            volume /= T::from_usize_lossy(dim);
            if !(volume > T::zero()) {
                return Err(TpsaError::DegenerateGrid(format!(
                    "cell {c} has nonpositive volume {volume} (wrong orientation?)"
                )));
            }
            let center = match &centers {
                Some(cs) => cs[c],
                None => default_center(dim, &vertices, &vs),
            };
            cells.push(Cell { center, volume, vertices: vs, faces: cell_faces[c].clone(), shape: shapes[c] });
        }

        let mut boundary_faces = Vec::new();
        let mut boundary_index = vec![None; faces.len()];
        for (k, f) in faces.iter().enumerate() {
            if f.outer.is_none() {
                boundary_index[k] = Some(boundary_faces.len());
                boundary_faces.push(k);
            }
        }

        let mut grid = Grid {
            dim,
            vertices,
            cells,
            faces,
            boundary_faces,
            boundary_index,
            cartesian: None,
            nominal_spacing: None,
        };
        grid.update_distances();
        Ok(grid)
    }

    fn update_distances(&mut self) {
        for f in &mut self.faces {
            let xi = self.cells[f.inner].center;
            f.dist_inner = dot(&sub(&f.center, &xi), &f.normal);
            f.dist_outer = f.outer.map(|j| dot(&sub(&self.cells[j].center, &f.center), &f.normal));
        }
    }

    /// Same topology and geometry with new cell centers. Distances are
    /// recomputed but not validated; use `check_admissibility`.
    pub fn with_cell_centers(&self, centers: &[Vec3<T>]) -> Result<Self> {
        if centers.len() != self.cells.len() {
            return Err(TpsaError::invalid("cell center count does not match the grid"));
        }
        let mut g = self.clone();
        for (c, x) in g.cells.iter_mut().zip(centers) {
            c.center = *x;
        }
        g.update_distances();
        Ok(g)
    }

    /// Moves every interior face center to the point where the segment
    /// between its two cell centers crosses the face plane.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of rotation components per cell: 1 in 2D, 3 in 3D.
    pub fn rot_dim(&self) -> usize {
        if self.dim == 2 {
            1
        } else {
            3
        }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_boundary_faces(&self) -> usize {
        self.boundary_faces.len()
    }

    pub fn num_interior_faces(&self) -> usize {
        self.faces.len() - self.boundary_faces.len()
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Cell<T>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell<T> {
        &self.cells[i]
    }

    pub fn faces(&self) -> &[Face<T>] {
        &self.faces
    }

    pub fn face(&self, k: usize) -> &Face<T> {
        &self.faces[k]
    }

    /// Face indices of the boundary cells, in boundary order.
    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }

    pub fn boundary_index(&self, k: usize) -> Option<usize> {
        self.boundary_index[k]
    }

    pub fn cartesian(&self) -> Option<&CartesianInfo<T>> {
        self.cartesian.as_ref()
    }

    /// Generator spacing when known, else the largest `|ω|^(1/dim)`.
    pub fn spacing(&self) -> T {
        self.nominal_spacing.unwrap_or_else(|| {
            let p = T::one() / T::from_usize_lossy(self.dim);
            self.cells.iter().fold(T::zero(), |m, c| m.max(c.volume.powf(p)))
        })
    }

    pub fn total_volume(&self) -> T {
        self.cells.iter().fold(T::zero(), |s, c| s + c.volume)
    }

    /// Converts every coordinate to another precision.
    pub fn cast<U: Scalar>(&self) -> Grid<U> {
        let c3 = |v: &Vec3<T>| v.map(|x| U::lit(x.to_f64_lossy()));
        let c = |x: T| U::lit(x.to_f64_lossy());
        Grid {
            dim: self.dim,
            vertices: self.vertices.iter().map(c3).collect(),
            cells: self
                .cells
                .iter()
                .map(|cell| Cell {
                    center: c3(&cell.center),
                    volume: c(cell.volume),
                    vertices: cell.vertices.clone(),
                    faces: cell.faces.clone(),
                    shape: cell.shape,
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| Face {
                    center: c3(&f.center),
                    area: c(f.area),
                    normal: c3(&f.normal),
                    inner: f.inner,
                    outer: f.outer,
                    dist_inner: c(f.dist_inner),
                    dist_outer: f.dist_outer.map(c),
                    vertices: f.vertices.clone(),
                })
                .collect(),
            boundary_faces: self.boundary_faces.clone(),
            boundary_index: self.boundary_index.clone(),
            cartesian: self.cartesian.map(|ci| CartesianInfo { counts: ci.counts, lo: c3(&ci.lo), hi: c3(&ci.hi) }),
            nominal_spacing: self.nominal_spacing.map(c),
        }
    }
}

fn check_indices(c: usize, ids: &[usize], nv: usize) -> Result<()> {
    match ids.iter().find(|&&v| v >= nv) {
        Some(v) => Err(TpsaError::invalid(format!("cell {c} references vertex {v}, only {nv} vertices"))),
        None => Ok(()),
    }
}

/// Center, measure and unit normal of a face loop.
fn face_geometry<T: Scalar>(dim: usize, verts: &[Vec3<T>], l: &[usize]) -> (Vec3<T>, T, Vec3<T>) {
    let half = T::lit(0.5);
    if dim == 2 {
        let a = verts[l[0]];
        let b = verts[l[1]];
        let d = sub(&b, &a);
        let len = norm(&d);
        let normal = if len > T::zero() { [d[1] / len, -d[0] / len, T::zero()] } else { [T::zero(); 3] };
        return (scale(half, &add(&a, &b)), len, normal);
    }
    // Fan triangulation about the vertex average.
    let m = l.len();
    let mut avg = [T::zero(); 3];
    for &v in l {
        avg = add(&avg, &verts[v]);
    }
    avg = scale(T::one() / T::from_usize_lossy(m), &avg);
    let mut area_vec = [T::zero(); 3];
    let mut weighted = [T::zero(); 3];
    let mut total = T::zero();
    for a in 0..m {
        let p = verts[l[a]];
        let q = verts[l[(a + 1) % m]];
        let tri = scale(half, &cross(&sub(&p, &avg), &sub(&q, &avg)));
        area_vec = add(&area_vec, &tri);
        let w = norm(&tri);
        let centroid = scale(T::one() / T::lit(3.0), &add(&add(&p, &q), &avg));
        weighted = add(&weighted, &scale(w, &centroid));
        total += w;
    }
    let area = norm(&area_vec);
    if !(area > T::zero()) {
        return (avg, T::zero(), [T::zero(); 3]);
    }
    let normal = scale(T::one() / area, &area_vec);
    let center = if total > T::zero() { scale(T::one() / total, &weighted) } else { avg };
    (center, area, normal)
}

fn default_center<T: Scalar>(dim: usize, verts: &[Vec3<T>], vs: &[usize]) -> Vec3<T> {
    let mut c = [T::zero(); 3];
    for &v in vs {
        c = add(&c, &verts[v]);
    }
    c = scale(T::one() / T::from_usize_lossy(vs.len()), &c);
    if dim == 2 && vs.len() == 3 {
        if let Some(cc) = circumcenter(&verts[vs[0]], &verts[vs[1]], &verts[vs[2]]) {
            if strictly_inside(&cc, &verts[vs[0]], &verts[vs[1]], &verts[vs[2]]) {
                return cc;
            }
        }
    }
    c
}

fn circumcenter<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> Option<Vec3<T>> {
    let two = T::lit(2.0);
    let d = two * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d == T::zero() {
        return None;
    }
    let sa = a[0] * a[0] + a[1] * a[1];
    let sb = b[0] * b[0] + b[1] * b[1];
    let sc = c[0] * c[0] + c[1] * c[1];
    let x = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d;
    let y = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d;
    Some([x, y, T::zero()])
}

fn strictly_inside<T: Scalar>(p: &Vec3<T>, a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> bool {
    let orient = |u: &Vec3<T>, v: &Vec3<T>, w: &Vec3<T>| (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
    let area = orient(a, b, c).abs();
    let tol = T::lit(1e-10) * area;
    let s = orient(a, b, c).signum();
    [orient(a, b, p), orient(b, c, p), orient(c, a, p)].iter().all(|&o| o * s > tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Grid<f64> {
        Grid::from_polygons(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], &[vec![0, 1, 2, 3]], None).unwrap()
    }

    #[test]
    fn single_square() {
        let g = unit_square();
        assert_eq!(g.num_faces(), 4);
        assert_eq!(g.num_boundary_faces(), 4);
        assert_eq!(g.cell(0).volume, 1.0);
        assert_eq!(g.cell(0).center, [0.5, 0.5, 0.0]);
        for f in g.faces() {
            assert_eq!(f.dist_inner, 0.5);
            assert_eq!(f.area, 1.0);
        }
        // first edge (0,0)-(1,0) faces down
        assert_eq!(g.face(0).normal, [0.0, -1.0, 0.0]);
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let r = Grid::from_polygons(&[[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]], &[vec![0, 1, 2, 3]], None);
        assert!(matches!(r, Err(TpsaError::DegenerateGrid(_))));
    }

    #[test]
    fn triangle_centers() {
        // equilateral-ish acute triangle: circumcenter inside
        let acute = Grid::<f64>::from_polygons(&[[0.0, 0.0], [2.0, 0.0], [1.0, 1.5]], &[vec![0, 1, 2]], None).unwrap();
        let c = acute.cell(0).center;
        assert!((c[0] - 1.0).abs() < 1e-15);
        assert!((c[1] - 5.0 / 12.0).abs() < 1e-15);
        // right triangle: circumcenter on the hypotenuse, falls back to centroid
        let right = Grid::<f64>::from_polygons(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], &[vec![0, 1, 2]], None).unwrap();
        let c = right.cell(0).center;
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-15 && (c[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unit_cube_hexahedron() {
        let v = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
            [1.0, 1.0, 1.0],
            [0.0, 1.0, 1.0],
        ];
        let g = Grid::<f64>::from_hexahedra(&v, &[[0, 1, 2, 3, 4, 5, 6, 7]], None).unwrap();
        assert_eq!(g.num_faces(), 6);
        assert!((g.cell(0).volume - 1.0).abs() < 1e-15);
        for f in g.faces() {
            assert!((f.dist_inner - 0.5).abs() < 1e-15);
            let out = sub(&f.center, &g.cell(0).center);
            assert!(dot(&out, &f.normal) > 0.0);
        }
    }

    #[test]
    fn three_cells_on_an_edge_rejected() {
        let v = [[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [0.5, 2.0]];
        let r = Grid::from_polygons(&v, &[vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]], None);
        assert!(r.is_err());
    }
}
