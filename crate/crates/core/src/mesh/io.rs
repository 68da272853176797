//! ASCII mesh files in a subset of the INRIA `.mesh` layout.
//!
//! ```text
//! MeshVersionFormatted 2
//! Dimension 2
//! Vertices
//! <N>
//! x y ref
//! Triangles
//! <M>
//! a b c ref        (1-based)
//! Edges
//! <K>
//! a b tag          (1-based)
//! Corners
//! <C>
//! v                (1-based)
//! End
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{BoundaryEdge, Point, SimplicialMesh};
use crate::error::{Error, Result};

/// Serializes `mesh`; coordinates carry 17 significant digits.
pub fn write_mesh(mesh: &SimplicialMesh) -> String {
    let mut s = String::new();
    s.push_str("MeshVersionFormatted 2\nDimension 2\n");
    let _ = writeln!(s, "Vertices\n{}", mesh.num_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{:.16e} {:.16e} 0", p[0], p[1]);
    }
    let _ = writeln!(s, "Triangles\n{}", mesh.num_triangles());
    for t in mesh.triangles() {
        let _ = writeln!(s, "{} {} {} 0", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    let _ = writeln!(s, "Edges\n{}", mesh.boundary_edges().len());
    for e in mesh.boundary_edges() {
        let _ = writeln!(s, "{} {} {}", e.v[0] + 1, e.v[1] + 1, e.tag);
    }
    let corners: Vec<usize> = (0..mesh.num_vertices()).filter(|&v| mesh.is_corner(v)).collect();
    let _ = writeln!(s, "Corners\n{}", corners.len());
    for v in corners {
        let _ = writeln!(s, "{}", v + 1);
    }
    s.push_str("End\n");
    s
}

pub fn save_mesh(mesh: &SimplicialMesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_mesh(mesh))?;
    Ok(())
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_mesh(&text, path)
}

struct Lines<'a> {
    path: &'a Path,
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: PathBuf::from(self.path), line, msg: msg.into() }
    }

    /// Next non-empty, non-comment line as (1-based line number, text).
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            let l = l.split('#').next().unwrap_or("").trim();
            if !l.is_empty() {
                self.last = i + 1;
                return Some((i + 1, l));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.last;
        self.next().ok_or_else(|| self.err(last + 1, format!("unexpected end of file, expected {what}")))
    }

    fn count(&mut self) -> Result<usize> {
        let (n, l) = self.expect("a count")?;
        l.parse().map_err(|_| self.err(n, format!("expected a count, found `{l}`")))
    }

    fn numbers<T: std::str::FromStr>(&mut self, k: usize, what: &str) -> Result<(usize, Vec<T>)> {
        let (n, l) = self.expect(what)?;
        let v: Vec<T> = l
            .split_whitespace()
            .map(|t| t.parse::<T>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| self.err(n, format!("malformed {what}: `{l}`")))?;
        if v.len() < k {
            return Err(self.err(n, format!("{what} needs {k} fields, found {}", v.len())));
        }
        Ok((n, v))
    }
}

/// Parses mesh text; `path` is only used in error messages.
pub fn parse_mesh(text: &str, path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    let mut lines = Lines { path: path.as_ref(), inner: text.lines().enumerate().peekable(), last: 0 };
    let mut vertices: Option<Vec<Point>> = None;
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut boundary: Vec<BoundaryEdge> = Vec::new();
    let mut corner_ids: Option<Vec<usize>> = None;
    let mut ended = false;

    while let Some((n, l)) = lines.next() {
        let mut tok = l.split_whitespace();
        let key = tok.next().unwrap_or("");
        match key {
            "MeshVersionFormatted" => {}
            "Dimension" => {
                let d = match tok.next() {
                    Some(d) => d.to_string(),
                    None => lines.expect("a dimension")?.1.to_string(),
                };
                if d != "2" {
                    return Err(lines.err(n, format!("only 2D meshes are supported, found dimension {d}")));
                }
            }
            "Vertices" => {
                let count = lines.count()?;
                let mut vs = Vec::with_capacity(count);
                for _ in 0..count {
                    let (_, v) = lines.numbers::<f64>(2, "vertex")?;
                    vs.push([v[0], v[1]]);
                }
                vertices = Some(vs);
            }
            "Triangles" => {
                let count = lines.count()?;
                for _ in 0..count {
                    let (ln, v) = lines.numbers::<usize>(3, "triangle")?;
                    if v[..3].contains(&0) {
                        return Err(lines.err(ln, "vertex indices are 1-based"));
                    }
                    triangles.push([v[0] - 1, v[1] - 1, v[2] - 1]);
                }
            }
            "Edges" => {
                let count = lines.count()?;
                for _ in 0..count {
                    let (ln, v) = lines.numbers::<i64>(2, "edge")?;
                    if v[0] < 1 || v[1] < 1 {
                        return Err(lines.err(ln, "vertex indices are 1-based"));
                    }
                    let tag = v.get(2).copied().unwrap_or(0) as i32;
                    boundary.push(BoundaryEdge { v: [v[0] as usize - 1, v[1] as usize - 1], tag });
                }
            }
            "Corners" => {
                let count = lines.count()?;
                let mut ids = Vec::with_capacity(count);
                for _ in 0..count {
                    let (ln, v) = lines.numbers::<usize>(1, "corner")?;
                    if v[0] == 0 {
                        return Err(lines.err(ln, "vertex indices are 1-based"));
                    }
                    ids.push(v[0] - 1);
                }
                corner_ids = Some(ids);
            }
            "End" => {
                ended = true;
                break;
            }
            other => return Err(lines.err(n, format!("unknown section `{other}`"))),
        }
    }
    if !ended {
        return Err(lines.err(lines.last + 1, "missing `End`"));
    }
    let vertices = vertices.ok_or_else(|| lines.err(lines.last, "no `Vertices` section"))?;
    let nv = vertices.len();
    let corners = match corner_ids {
        Some(ids) => {
            let mut c = vec![false; nv];
            for v in ids {
                if v >= nv {
                    return Err(Error::Structural(format!("corner {} out of range", v + 1)));
                }
                c[v] = true;
            }
            Some(c)
        }
        None => None,
    };
    if let Some(e) = boundary.iter().find(|e| e.v[0] >= nv || e.v[1] >= nv) {
        return Err(Error::Structural(format!("boundary edge {:?} out of range", e.v)));
    }
    SimplicialMesh::new(vertices, triangles, boundary, corners)
}
