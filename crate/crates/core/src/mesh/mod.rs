//! Conforming 2D triangulations: storage, adjacency, geometry queries,
//! point location and file I/O.

mod io;
mod locate;
mod scalar;
mod svg;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Error, Result};

pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use locate::{Location, BARY_TOL};
pub use scalar::ScalarField;
pub use svg::{write_svg, SvgOptions};

/// 2D point.
pub type Point = [f64; 2];

/// Marker for "no neighbor" in [`SimplicialMesh::tri_neighbors`].
pub const NO_NEIGHBOR: usize = usize::MAX;

static NEXT_MESH_ID: AtomicU64 = AtomicU64::new(1);

/// Boundary edge with an integer tag (one tag per straight boundary side for
/// rectangles).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    pub tag: i32,
}

/// Conforming, positively oriented triangulation of a planar domain.
///
/// The mesh is immutable once built. All adjacency is derived at construction.
#[derive(Clone, Debug)]
pub struct SimplicialMesh {
    id: u64,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    corners: Vec<bool>,
    edges: Vec<[usize; 2]>,
    edge_tris: Vec<[usize; 2]>,
    tri_neighbors: Vec<[usize; 3]>,
    vt_offsets: Vec<usize>,
    vt_list: Vec<usize>,
    vv_offsets: Vec<usize>,
    vv_list: Vec<usize>,
    on_boundary: Vec<bool>,
    boundary_tag: Vec<Option<i32>>,
}

/// Signed area of the triangle (a, b, c); positive when counter-clockwise.
#[inline]
pub fn signed_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl SimplicialMesh {
    /// Builds a mesh and checks conformity, orientation and boundary closure.
    ///
    /// When `corners` is `None`, corners are inferred: a boundary vertex is a
    /// corner if its two boundary edges carry different tags or are not
    /// collinear.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
        corners: Option<Vec<bool>>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if let Some(p) = vertices.iter().find(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::Structural(format!("non-finite vertex {p:?}")));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::Structural(format!("triangle {t} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Structural(format!("triangle {t} repeats a vertex")));
            }
            let a = signed_area(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
            if !(a > 0.0) {
                return Err(Error::Structural(format!(
                    "triangle {t} has non-positive signed area {a:e}"
                )));
            }
        }
        {
            let mut keys: Vec<[usize; 3]> = triangles
                .iter()
                .map(|t| {
                    let mut k = *t;
                    k.sort_unstable();
                    k
                })
                .collect();
            keys.sort_unstable();
            if keys.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Structural("duplicate triangle".into()));
            }
        }

        // Half-edges sorted by undirected key.
        let mut half: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(3 * triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let a = tri[(k + 1) % 3];
                let b = tri[(k + 2) % 3];
                half.push((a.min(b), a.max(b), t, k));
            }
        }
        half.sort_unstable();
        let mut edges = Vec::new();
        let mut edge_tris = Vec::new();
        let mut tri_neighbors = vec![[NO_NEIGHBOR; 3]; triangles.len()];
        let mut open_edges = Vec::new();
        let mut i = 0;
        while i < half.len() {
            let mut j = i + 1;
            while j < half.len() && half[j].0 == half[i].0 && half[j].1 == half[i].1 {
                j += 1;
            }
            let (a, b, t0, k0) = half[i];
            match j - i {
                1 => {
                    edges.push([a, b]);
                    edge_tris.push([t0, NO_NEIGHBOR]);
                    open_edges.push([a, b]);
                }
                2 => {
                    let (_, _, t1, k1) = half[i + 1];
                    // Shared edges must be traversed in opposite directions.
                    let d0 = triangles[t0][(k0 + 1) % 3];
                    let d1 = triangles[t1][(k1 + 1) % 3];
                    if d0 == d1 {
                        return Err(Error::Structural(format!(
                            "inconsistent orientation across edge ({a}, {b})"
                        )));
                    }
                    edges.push([a, b]);
                    edge_tris.push([t0, t1]);
                    tri_neighbors[t0][k0] = t1;
                    tri_neighbors[t1][k1] = t0;
                }
                n => {
                    return Err(Error::Structural(format!(
                        "edge ({a}, {b}) is shared by {n} triangles"
                    )))
                }
            }
            i = j;
        }

        let mut bkeys: Vec<[usize; 2]> = boundary
            .iter()
            .map(|e| [e.v[0].min(e.v[1]), e.v[0].max(e.v[1])])
            .collect();
        bkeys.sort_unstable();
        if bkeys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural("duplicate boundary edge".into()));
        }
        if bkeys != open_edges {
            return Err(Error::Structural(format!(
                "boundary edges ({}) do not match the {} edges owned by a single triangle",
                bkeys.len(),
                open_edges.len()
            )));
        }

        let mut on_boundary = vec![false; nv];
        let mut bcount = vec![0usize; nv];
        let mut boundary_tag: Vec<Option<i32>> = vec![None; nv];
        for e in &boundary {
            for &v in &e.v {
                on_boundary[v] = true;
                bcount[v] += 1;
                boundary_tag[v].get_or_insert(e.tag);
            }
        }
        if let Some(v) = (0..nv).find(|&v| on_boundary[v] && bcount[v] != 2) {
            return Err(Error::Structural(format!(
                "boundary is not a set of closed loops at vertex {v}"
            )));
        }

        let mut vt_count = vec![0usize; nv + 1];
        for tri in &triangles {
            for &v in tri {
                vt_count[v + 1] += 1;
            }
        }
        for v in 0..nv {
            vt_count[v + 1] += vt_count[v];
        }
        let vt_offsets = vt_count.clone();
        let mut fill = vt_count;
        let mut vt_list = vec![0; vt_offsets[nv]];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                vt_list[fill[v]] = t;
                fill[v] += 1;
            }
        }

        let mut vv: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in &edges {
            vv[e[0]].push(e[1]);
            vv[e[1]].push(e[0]);
        }
        let mut vv_offsets = Vec::with_capacity(nv + 1);
        let mut vv_list = Vec::with_capacity(2 * edges.len());
        vv_offsets.push(0);
        for mut n in vv {
            n.sort_unstable();
            vv_list.extend(n);
            vv_offsets.push(vv_list.len());
        }

        let corners = match corners {
            Some(c) => {
                if c.len() != nv {
                    return invalid(format!("{} corner flags for {nv} vertices", c.len()));
                }
                c
            }
            None => infer_corners(&vertices, &boundary),
        };

        Ok(Self {
            id: NEXT_MESH_ID.fetch_add(1, Ordering::Relaxed),
            vertices,
            triangles,
            boundary,
            corners,
            edges,
            edge_tris,
            tri_neighbors,
            vt_offsets,
            vt_list,
            vv_offsets,
            vv_list,
            on_boundary,
            boundary_tag,
        })
    }

    /// Uniform triangulation of `[x0, x1] × [y0, y1]` with `nx × ny` cells,
    /// each cut along its lower-left/upper-right diagonal. Boundary tags are
    /// 1 (bottom), 2 (right), 3 (top), 4 (left).
    pub fn structured_rect(nx: usize, ny: usize, bounds: [f64; 4]) -> Result<Self> {
        let [x0, x1, y0, y1] = bounds;
        if nx == 0 || ny == 0 {
            return invalid("structured mesh needs nx, ny >= 1");
        }
        if !(x1 > x0 && y1 > y0) {
            return invalid(format!("empty rectangle {bounds:?}"));
        }
        let idx = |i: usize, j: usize| j * (nx + 1) + i;
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            let y = if j == ny { y1 } else { y0 + (y1 - y0) * j as f64 / ny as f64 };
            for i in 0..=nx {
                let x = if i == nx { x1 } else { x0 + (x1 - x0) * i as f64 / nx as f64 };
                vertices.push([x, y]);
            }
        }
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let a = idx(i, j);
                let b = idx(i + 1, j);
                let c = idx(i + 1, j + 1);
                let d = idx(i, j + 1);
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
        let mut boundary = Vec::with_capacity(2 * (nx + ny));
        for i in 0..nx {
            boundary.push(BoundaryEdge { v: [idx(i, 0), idx(i + 1, 0)], tag: 1 });
        }
        for j in 0..ny {
            boundary.push(BoundaryEdge { v: [idx(nx, j), idx(nx, j + 1)], tag: 2 });
        }
        for i in (0..nx).rev() {
            boundary.push(BoundaryEdge { v: [idx(i + 1, ny), idx(i, ny)], tag: 3 });
        }
        for j in (0..ny).rev() {
            boundary.push(BoundaryEdge { v: [idx(0, j + 1), idx(0, j)], tag: 4 });
        }
        let mut corners = vec![false; vertices.len()];
        for v in [idx(0, 0), idx(nx, 0), idx(nx, ny), idx(0, ny)] {
            corners[v] = true;
        }
        Self::new(vertices, triangles, boundary, Some(corners))
    }

    /// Unique identifier of this mesh instance (clones share it).
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn corners(&self) -> &[bool] {
        &self.corners
    }

    pub fn is_corner(&self, v: usize) -> bool {
        self.corners[v]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    /// Tag of one boundary edge incident to `v`, if `v` is on the boundary.
    pub fn boundary_tag(&self, v: usize) -> Option<i32> {
        self.boundary_tag[v]
    }

    /// Unique undirected edges `[a, b]` with `a < b`, sorted.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Triangles on each side of `edges()[e]`; the second is
    /// [`NO_NEIGHBOR`] on the boundary.
    pub fn edge_triangles(&self, e: usize) -> [usize; 2] {
        self.edge_tris[e]
    }

    /// Neighbor of triangle `t` across the edge opposite local vertex `k`.
    pub fn tri_neighbors(&self, t: usize) -> [usize; 3] {
        self.tri_neighbors[t]
    }

    /// Triangles incident to vertex `v`.
    pub fn vertex_triangles(&self, v: usize) -> &[usize] {
        &self.vt_list[self.vt_offsets[v]..self.vt_offsets[v + 1]]
    }

    /// Vertices sharing an edge with `v`, sorted.
    pub fn vertex_neighbors(&self, v: usize) -> &[usize] {
        &self.vv_list[self.vv_offsets[v]..self.vv_offsets[v + 1]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.area(t)).sum()
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0]
    }

    /// `[xmin, xmax, ymin, ymax]`.
    pub fn bounds(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for p in &self.vertices {
            b[0] = b[0].min(p[0]);
            b[1] = b[1].max(p[0]);
            b[2] = b[2].min(p[1]);
            b[3] = b[3].max(p[1]);
        }
        b
    }

    /// Length of the bounding-box diagonal.
    pub fn diameter(&self) -> f64 {
        let b = self.bounds();
        (b[1] - b[0]).hypot(b[3] - b[2])
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary
            .iter()
            .map(|e| {
                let (p, q) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .sum()
    }

    /// Barycentric coordinates of `p` with respect to triangle `t`.
    pub fn barycentric(&self, t: usize, p: Point) -> [f64; 3] {
        let [a, b, c] = self.triangles[t];
        barycentric(&self.vertices[a], &self.vertices[b], &self.vertices[c], &p)
    }

    /// Vertices inside the `rings`-ring neighborhood of `v`, including `v`.
    pub fn ring(&self, v: usize, rings: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut frontier = 0;
        for _ in 0..rings {
            let end = out.len();
            for i in frontier..end {
                for &w in self.vertex_neighbors(out[i]) {
                    if !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
            frontier = end;
        }
        out
    }
}

/// Barycentric coordinates of `p` in the triangle (a, b, c).
#[inline]
pub fn barycentric(a: &Point, b: &Point, c: &Point, p: &Point) -> [f64; 3] {
    let area = signed_area(a, b, c);
    let l0 = signed_area(p, b, c) / area;
    let l1 = signed_area(a, p, c) / area;
    [l0, l1, 1.0 - l0 - l1]
}

fn infer_corners(vertices: &[Point], boundary: &[BoundaryEdge]) -> Vec<bool> {
    let nv = vertices.len();
    let mut incident: Vec<Vec<&BoundaryEdge>> = vec![Vec::new(); nv];
    for e in boundary {
        incident[e.v[0]].push(e);
        incident[e.v[1]].push(e);
    }
    (0..nv)
        .map(|v| match incident[v].as_slice() {
            [] => false,
            [e0, e1] => {
                if e0.tag != e1.tag {
                    return true;
                }
                let other = |e: &BoundaryEdge| if e.v[0] == v { e.v[1] } else { e.v[0] };
                let (p, a, b) = (vertices[v], vertices[other(e0)], vertices[other(e1)]);
                let u = [a[0] - p[0], a[1] - p[1]];
                let w = [b[0] - p[0], b[1] - p[1]];
                let cross = u[0] * w[1] - u[1] * w[0];
                cross.abs() > 1e-12 * u[0].hypot(u[1]) * w[0].hypot(w[1])
            }
            _ => true,
        })
        .collect()
}

/// Summary statistics printed by `mesh-info`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshStats {
    pub num_vertices: usize,
    pub num_triangles: usize,
    pub num_edges: usize,
    pub num_boundary_edges: usize,
    pub min_area: f64,
    pub max_area: f64,
    pub total_area: f64,
}

impl SimplicialMesh {
    pub fn stats(&self) -> MeshStats {
        let areas = (0..self.num_triangles()).map(|t| self.area(t));
        let (min_area, max_area) = areas
            .clone()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), a| (lo.min(a), hi.max(a)));
        MeshStats {
            num_vertices: self.num_vertices(),
            num_triangles: self.num_triangles(),
            num_edges: self.num_edges(),
            num_boundary_edges: self.boundary.len(),
            min_area,
            max_area,
            total_area: areas.sum(),
        }
    }
}
