use super::{barycentric, Point, SimplicialMesh, NO_NEIGHBOR};
use crate::error::{Error, Result};

/// Barycentric slack accepted when deciding that a point lies in a triangle.
pub const BARY_TOL: f64 = 1e-9;

/// Containing triangle and barycentric coordinates of a located point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub tri: usize,
    pub bary: [f64; 3],
}

impl SimplicialMesh {
    /// Walks from `hint` towards `p` across the edge with the most negative
    /// barycentric coordinate. Falls back to an exhaustive scan when the walk
    /// leaves the mesh or cycles.
    pub fn locate_point(&self, p: Point, hint: usize) -> Result<Location> {
        if let Some(loc) = self.walk(p, hint) {
            return Ok(loc);
        }
        self.locate_brute_force(p)
    }

    fn walk(&self, p: Point, hint: usize) -> Option<Location> {
        let nt = self.num_triangles();
        if nt == 0 {
            return None;
        }
        let mut t = if hint < nt { hint } else { 0 };
        let mut prev = NO_NEIGHBOR;
        for _ in 0..nt.min(4096 + 4 * (nt as f64).sqrt() as usize) {
            let bary = self.barycentric(t, p);
            let (kmin, bmin) = bary
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (k, b)| if b < acc.1 { (k, b) } else { acc });
            if bmin >= -BARY_TOL {
                return Some(Location { tri: t, bary });
            }
            let mut next = self.tri_neighbors(t)[kmin];
            if next == prev {
                // Step across the second most negative edge to break two-cycles.
                let alt = (0..3)
                    .filter(|&k| k != kmin && bary[k] < -BARY_TOL)
                    .map(|k| self.tri_neighbors(t)[k])
                    .find(|&n| n != NO_NEIGHBOR && n != prev);
                next = alt.unwrap_or(NO_NEIGHBOR);
            }
            if next == NO_NEIGHBOR {
                return None;
            }
            prev = t;
            t = next;
        }
        None
    }

    /// Exhaustive scan returning the triangle that maximizes the smallest
    /// barycentric coordinate of `p`.
    pub fn locate_brute_force(&self, p: Point) -> Result<Location> {
        let best = self.best_triangle(p);
        match best {
            Some(loc) if loc.bary.iter().all(|&b| b >= -BARY_TOL) => Ok(loc),
            _ => Err(Error::NotFound(p[0], p[1])),
        }
    }

    fn best_triangle(&self, p: Point) -> Option<Location> {
        let mut best: Option<(f64, Location)> = None;
        for t in 0..self.num_triangles() {
            let bary = self.barycentric(t, p);
            let m = bary[0].min(bary[1]).min(bary[2]);
            if best.as_ref().map_or(true, |(bm, _)| m > *bm) {
                best = Some((m, Location { tri: t, bary }));
            }
        }
        best.map(|(_, l)| l)
    }

    /// Locates `p`; if it lies outside the mesh, projects it onto the nearest
    /// triangle instead. The flag is `true` when a projection was needed.
    pub fn locate_or_project(&self, p: Point, hint: usize) -> (Location, bool) {
        if let Ok(loc) = self.locate_point(p, hint) {
            return (loc, false);
        }
        let mut best = (f64::INFINITY, 0, [1.0, 0.0, 0.0]);
        for t in 0..self.num_triangles() {
            let [a, b, c] = self.triangle(t);
            let q = closest_point_on_triangle(&self.vertex(a), &self.vertex(b), &self.vertex(c), &p);
            let d = (q[0] - p[0]).hypot(q[1] - p[1]);
            if d < best.0 {
                let mut bary =
                    barycentric(&self.vertex(a), &self.vertex(b), &self.vertex(c), &q);
                for l in &mut bary {
                    *l = l.clamp(0.0, 1.0);
                }
                let s: f64 = bary.iter().sum();
                best = (d, t, bary.map(|l| l / s));
            }
        }
        (Location { tri: best.1, bary: best.2 }, true)
    }
}

fn closest_point_on_segment(a: &Point, b: &Point, p: &Point) -> Point {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let s = if len2 > 0.0 {
        (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    [a[0] + s * ab[0], a[1] + s * ab[1]]
}

fn closest_point_on_triangle(a: &Point, b: &Point, c: &Point, p: &Point) -> Point {
    let bary = barycentric(a, b, c, p);
    if bary.iter().all(|&l| l >= 0.0) {
        return *p;
    }
    [
        closest_point_on_segment(a, b, p),
        closest_point_on_segment(b, c, p),
        closest_point_on_segment(c, a, p),
    ]
    .into_iter()
    .min_by(|q, r| {
        let dq = (q[0] - p[0]).hypot(q[1] - p[1]);
        let dr = (r[0] - p[0]).hypot(r[1] - p[1]);
        dq.total_cmp(&dr)
    })
    .unwrap()
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn centroid_and_vertex() {
        let m = SimplicialMesh::structured_rect(5, 3, [0.0, 1.0, 0.0, 1.0]).unwrap();
        for t in 0..m.num_triangles() {
            let loc = m.locate_point(m.centroid(t), 0).unwrap();
            assert_eq!(loc.tri, t);
            for b in loc.bary {
                assert!((b - 1.0 / 3.0).abs() < 1e-12);
            }
        }
        let v = 7;
        let loc = m.locate_point(m.vertex(v), 0).unwrap();
        let [a, b, c] = m.triangle(loc.tri);
        let k = [a, b, c].iter().position(|&w| w == v).unwrap();
        assert!((loc.bary[k] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn walking_matches_brute_force() {
        let m = SimplicialMesh::structured_rect(40, 20, [-2.0, 2.0, -1.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut hint = 0;
        for _ in 0..10_000 {
            let p = [rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0)];
            let walk = m.locate_point(p, hint).unwrap();
            let scan = m.locate_brute_force(p).unwrap();
            assert_eq!(walk.tri, scan.tri);
            let s: f64 = walk.bary.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            hint = walk.tri;
        }
    }

    #[test]
    fn outside_point_not_found_and_projected() {
        let m = SimplicialMesh::structured_rect(2, 2, [0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(m.locate_point([1.5, 0.5], 0), Err(Error::NotFound(..))));
        let (loc, projected) = m.locate_or_project([1.0 + 1e-7, 0.5], 0);
        assert!(projected);
        let [a, b, c] = m.triangle(loc.tri);
        let x: f64 = loc.bary[0] * m.vertex(a)[0] + loc.bary[1] * m.vertex(b)[0] + loc.bary[2] * m.vertex(c)[0];
        assert!((x - 1.0).abs() < 1e-12);
    }
}
