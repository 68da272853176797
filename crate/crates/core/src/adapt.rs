//! Metric-driven local remeshing: long edges are split, short edges
//! collapsed, edges flipped to improve metric quality and vertices relaxed
//! toward unit edge lengths, until the mesh is quasi-unit for the metric.
//!
//! Every operation is checked before it is applied (orientation, quality,
//! topology), so a rejected operation leaves the mesh untouched.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::mesh::{signed_area, BoundaryEdge, Point, SimplicialMesh};
use crate::metric::{edge_length_log, element_volume_from_sqrt_dets, MetricField, MetricTensor, SymMat2};

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptParams {
    pub split_threshold: f64,
    pub collapse_threshold: f64,
    pub max_passes: usize,
    pub quality_floor: f64,
    /// Keep the boundary discretization as is: no splits, collapses or
    /// sliding of boundary vertices.
    pub boundary_tags_frozen: bool,
    /// Seeds the tie-breaking of equal-length edges.
    pub seed: u64,
}

impl Default for AdaptParams {
    fn default() -> Self {
        Self {
            split_threshold: std::f64::consts::SQRT_2,
            collapse_threshold: std::f64::consts::FRAC_1_SQRT_2,
            max_passes: 20,
            quality_floor: 0.2,
            boundary_tags_frozen: false,
            seed: 0,
        }
    }
}

impl AdaptParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.collapse_threshold > 0.0 && self.collapse_threshold < 1.0 && 1.0 < self.split_threshold) {
            return invalid(format!(
                "need 0 < collapse_threshold < 1 < split_threshold, got {} and {}",
                self.collapse_threshold, self.split_threshold
            ));
        }
        if self.max_passes == 0 || !(0.0..1.0).contains(&self.quality_floor) {
            return invalid("need max_passes ≥ 1 and quality_floor in [0, 1)");
        }
        Ok(())
    }
}

/// Result of [`adapt_mesh`].
#[derive(Clone, Debug)]
pub struct AdaptOutcome {
    pub mesh: SimplicialMesh,
    pub passes: usize,
    /// `false` when the pass budget ran out while operations were still
    /// being applied; the mesh is still valid.
    pub converged: bool,
    pub splits: usize,
    pub collapses: usize,
    pub flips: usize,
    pub moves: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Interior,
    Boundary,
    Corner,
}

/// Relative step of the vertex relaxation.
const RELAX: f64 = 0.5;
/// Sweeps of edge flipping per pass.
const FLIP_SWEEPS: usize = 8;
/// Required gain in minimum quality for a flip.
const FLIP_GAIN: f64 = 1e-6;
/// Edges below this length are candidates for balancing collapses.
const BALANCE_COLLAPSE: f64 = 0.85;
/// Longest edge a balancing collapse may create.
const BALANCE_MAX_EDGE: f64 = 1.3;
/// New vertices are placed at a random fraction of the edge within this
/// distance of the midpoint, so refinement does not reproduce a lattice.
const SPLIT_JITTER: f64 = 0.1;
/// Splits plus collapses per pass, relative to the edge count, below which
/// the mesh counts as converged.
const CONVERGED_CHANGES: f64 = 1e-3;
/// Thresholds are compared with this relative slack so that edges sitting
/// exactly on a threshold are left alone.
const THRESHOLD_SLACK: f64 = 1e-9;

struct Background<'a> {
    field: &'a MetricField,
}

impl Background<'_> {
    fn metric_at(&self, p: Point, hint: &mut usize) -> MetricTensor {
        let (loc, _) = self.field.mesh().locate_or_project(p, *hint);
        *hint = loc.tri;
        self.field.interpolate(&loc)
    }
}

struct Work<'a> {
    bg: Background<'a>,
    pts: Vec<Point>,
    logm: Vec<SymMat2>,
    sqrt_det: Vec<f64>,
    kind: Vec<Kind>,
    hint: Vec<usize>,
    alive_v: Vec<bool>,
    tris: Vec<[usize; 3]>,
    alive_t: Vec<bool>,
    vt: Vec<Vec<usize>>,
    bnd: BTreeMap<[usize; 2], i32>,
    params: AdaptParams,
    rng: ChaCha8Rng,
}

fn key(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

/// Rotates `tri` so that it starts at `v`.
fn rotate_to(tri: [usize; 3], v: usize) -> [usize; 3] {
    match tri.iter().position(|&w| w == v) {
        Some(0) => tri,
        Some(1) => [tri[1], tri[2], tri[0]],
        Some(2) => [tri[2], tri[0], tri[1]],
        _ => unreachable!("vertex not in triangle"),
    }
}

impl<'a> Work<'a> {
    fn new(mesh: &SimplicialMesh, field: &'a MetricField, params: &AdaptParams) -> Self {
        let bg = Background { field };
        let same = mesh.id() == field.mesh().id();
        let n = mesh.num_vertices();
        let mut hint = vec![0; n];
        let mut logm = Vec::with_capacity(n);
        let mut sqrt_det = Vec::with_capacity(n);
        for v in 0..n {
            let m = if same {
                hint[v] = mesh.vertex_triangles(v)[0];
                field.tensor(v)
            } else {
                let mut h = if v > 0 { hint[v - 1] } else { 0 };
                let m = bg.metric_at(mesh.vertex(v), &mut h);
                hint[v] = h;
                m
            };
            logm.push(m.log());
            sqrt_det.push(m.sqrt_det());
        }
        let kind = (0..n)
            .map(|v| {
                if mesh.is_corner(v) {
                    Kind::Corner
                } else if mesh.is_boundary_vertex(v) {
                    Kind::Boundary
                } else {
                    Kind::Interior
                }
            })
            .collect();
        let mut vt = vec![Vec::new(); n];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            for &v in tri {
                vt[v].push(t);
            }
        }
        let bnd = mesh.boundary_edges().iter().map(|e| (key(e.v[0], e.v[1]), e.tag)).collect();
        Self {
            bg,
            pts: mesh.vertices().to_vec(),
            logm,
            sqrt_det,
            kind,
            hint,
            alive_v: vec![true; n],
            tris: mesh.triangles().to_vec(),
            alive_t: vec![true; mesh.num_triangles()],
            vt,
            bnd,
            params: params.clone(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        }
    }

    fn set_metric(&mut self, v: usize, m: &MetricTensor) {
        self.logm[v] = m.log();
        self.sqrt_det[v] = m.sqrt_det();
    }

    fn length(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.pts[a], self.pts[b]);
        edge_length_log([q[0] - p[0], q[1] - p[1]], &self.logm[a], &self.logm[b])
    }

    fn area(&self, t: [usize; 3]) -> f64 {
        signed_area(&self.pts[t[0]], &self.pts[t[1]], &self.pts[t[2]])
    }

    /// Metric quality of a (possibly hypothetical) triangle; 0 if inverted.
    fn quality(&self, t: [usize; 3]) -> f64 {
        let area = self.area(t);
        if !(area > 0.0) {
            return 0.0;
        }
        let l2: f64 = (0..3).map(|k| self.length(t[k], t[(k + 1) % 3]).powi(2)).sum();
        let vol = element_volume_from_sqrt_dets(area, t.map(|v| self.sqrt_det[v]));
        (4.0 * 3f64.sqrt() * vol / l2).min(1.0)
    }

    fn edge_tris(&self, a: usize, b: usize) -> Vec<usize> {
        self.vt[a].iter().copied().filter(|&t| self.tris[t].contains(&b)).collect()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut n: Vec<usize> =
            self.vt[v].iter().flat_map(|&t| self.tris[t]).filter(|&w| w != v).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    fn edges(&self) -> Vec<[usize; 2]> {
        let mut e: Vec<[usize; 2]> = (0..self.tris.len())
            .filter(|&t| self.alive_t[t])
            .flat_map(|t| {
                let [a, b, c] = self.tris[t];
                [key(a, b), key(b, c), key(c, a)]
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    fn add_tri(&mut self, tri: [usize; 3]) -> usize {
        let t = self.tris.len();
        self.tris.push(tri);
        self.alive_t.push(true);
        for v in tri {
            self.vt[v].push(t);
        }
        t
    }

    fn kill_tri(&mut self, t: usize) {
        self.alive_t[t] = false;
        for v in self.tris[t] {
            self.vt[v].retain(|&s| s != t);
        }
    }

    /// Edges longer than the split threshold, longest first.
    fn ranked_edges(&mut self, keep: impl Fn(f64) -> bool, longest_first: bool) -> Vec<[usize; 2]> {
        let mut cand: Vec<(f64, u64, [usize; 2])> = Vec::new();
        for e in self.edges() {
            let l = self.length(e[0], e[1]);
            if keep(l) {
                cand.push((l, self.rng.gen(), e));
            }
        }
        cand.sort_by(|x, y| {
            let o = x.0.total_cmp(&y.0);
            (if longest_first { o.reverse() } else { o }).then(x.1.cmp(&y.1))
        });
        cand.into_iter().map(|c| c.2).collect()
    }

    fn split_pass(&mut self) -> usize {
        let thr = self.params.split_threshold * (1.0 + THRESHOLD_SLACK);
        let mut count = 0;
        // Triangles changed in this pass; their other edges wait for the next
        // pass so refinement does not simply halve a structured mesh.
        let mut touched = vec![false; self.tris.len()];
        for [a, b] in self.ranked_edges(|l| l > thr, true) {
            let tag = self.bnd.get(&[a, b]).copied();
            if tag.is_some() && self.params.boundary_tags_frozen {
                continue;
            }
            let ts = self.edge_tris(a, b);
            if ts.is_empty() || ts.iter().any(|&t| touched[t]) || self.length(a, b) <= thr {
                continue;
            }
            let (p, q) = (self.pts[a], self.pts[b]);
            let s = 0.5 + SPLIT_JITTER * (2.0 * self.rng.gen::<f64>() - 1.0);
            let mid = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
            let mut hint = self.hint[a];
            let metric = self.bg.metric_at(mid, &mut hint);
            let m = self.pts.len();
            self.pts.push(mid);
            self.logm.push(metric.log());
            self.sqrt_det.push(metric.sqrt_det());
            self.kind.push(if tag.is_some() { Kind::Boundary } else { Kind::Interior });
            self.hint.push(hint);
            self.alive_v.push(true);
            self.vt.push(Vec::new());
            for t in ts {
                // (x, y, c) with (x, y) the split edge in triangle order.
                let tri = self.tris[t];
                let apex = *tri.iter().find(|&&v| v != a && v != b).unwrap();
                let [c, x, y] = rotate_to(tri, apex);
                self.tris[t] = [x, m, c];
                self.vt[y].retain(|&s| s != t);
                self.vt[m].push(t);
                self.add_tri([m, y, c]);
                touched[t] = true;
            }
            touched.resize(self.tris.len(), true);
            if let Some(tag) = tag {
                self.bnd.remove(&[a, b]);
                self.bnd.insert(key(a, m), tag);
                self.bnd.insert(key(m, b), tag);
            }
            count += 1;
        }
        count
    }

    /// Checks whether vertex `a` can be merged into `b` without creating an
    /// edge longer than `max_new`.
    fn can_collapse(&self, a: usize, b: usize, max_new: f64) -> bool {
        match self.kind[a] {
            Kind::Corner => return false,
            Kind::Boundary => {
                if self.params.boundary_tags_frozen || !self.bnd.contains_key(&key(a, b)) {
                    return false;
                }
            }
            Kind::Interior => {}
        }
        // Link condition: shared neighbors are exactly the apexes of the edge.
        let shared = self.edge_tris(a, b);
        let mut apex: Vec<usize> =
            shared.iter().map(|&t| *self.tris[t].iter().find(|&&v| v != a && v != b).unwrap()).collect();
        apex.sort_unstable();
        let nb = self.neighbors(b);
        let common: Vec<usize> = self.neighbors(a).into_iter().filter(|w| nb.binary_search(w).is_ok()).collect();
        if common != apex {
            return false;
        }
        // An interior edge between two boundary vertices would pinch the domain.
        if self.kind[a] == Kind::Interior && shared.len() == 1 {
            return false;
        }
        let old_min = self.vt[a].iter().map(|&t| self.quality(self.tris[t])).fold(1.0, f64::min);
        let mut new_min = 1.0f64;
        for &t in &self.vt[a] {
            let tri = self.tris[t];
            if tri.contains(&b) {
                continue;
            }
            let moved = tri.map(|v| if v == a { b } else { v });
            let old_area = self.area(tri);
            if !(self.area(moved) > 1e-12 * old_area.abs()) {
                return false;
            }
            new_min = new_min.min(self.quality(moved));
        }
        if new_min < self.params.quality_floor && new_min < old_min {
            return false;
        }
        self.neighbors(a)
            .into_iter()
            .filter(|&w| w != b && nb.binary_search(&w).is_err())
            .all(|w| self.length(b, w) <= max_new)
    }

    fn collapse(&mut self, a: usize, b: usize) {
        for t in self.edge_tris(a, b) {
            self.kill_tri(t);
        }
        for t in std::mem::take(&mut self.vt[a]) {
            for v in &mut self.tris[t] {
                if *v == a {
                    *v = b;
                }
            }
            self.vt[b].push(t);
        }
        if let Some(tag) = self.bnd.remove(&key(a, b)) {
            let other = self.bnd.keys().find(|e| e.contains(&a)).copied();
            if let Some(e) = other {
                self.bnd.remove(&e);
                let w = if e[0] == a { e[1] } else { e[0] };
                self.bnd.insert(key(b, w), tag);
            }
        }
        self.alive_v[a] = false;
    }

    /// Collapses edges shorter than the collapse threshold, shortest first.
    /// Edges up to [`BALANCE_COLLAPSE`] are also collapsed when every edge
    /// this creates stays below [`BALANCE_MAX_EDGE`]; this moves the length
    /// distribution toward 1 without feeding the next split pass.
    fn collapse_pass(&mut self) -> usize {
        let thr = self.params.collapse_threshold * (1.0 - THRESHOLD_SLACK);
        let reach = thr.max(BALANCE_COLLAPSE);
        let mut count = 0;
        for [a, b] in self.ranked_edges(|l| l < reach, false) {
            if !self.alive_v[a] || !self.alive_v[b] || self.edge_tris(a, b).is_empty() {
                continue;
            }
            let l = self.length(a, b);
            let max_new = if l < thr {
                self.params.split_threshold
            } else if l < reach {
                BALANCE_MAX_EDGE.min(self.params.split_threshold)
            } else {
                continue;
            };
            if self.can_collapse(a, b, max_new) {
                self.collapse(a, b);
                count += 1;
            } else if self.can_collapse(b, a, max_new) {
                self.collapse(b, a);
                count += 1;
            }
        }
        count
    }

    fn try_flip(&mut self, a: usize, b: usize) -> bool {
        if self.bnd.contains_key(&key(a, b)) {
            return false;
        }
        let ts = self.edge_tris(a, b);
        if ts.len() != 2 {
            return false;
        }
        // t1 = (x, y, c), t2 = (y, x, d).
        let [c, x, y] = {
            let tri = self.tris[ts[0]];
            rotate_to(tri, *tri.iter().find(|&&v| v != a && v != b).unwrap())
        };
        let (t1, t2) = (ts[0], ts[1]);
        let d = *self.tris[t2].iter().find(|&&v| v != x && v != y).unwrap();
        if self.neighbors(c).binary_search(&d).is_ok() {
            return false;
        }
        let (n1, n2) = ([x, d, c], [d, y, c]);
        let scale = self.area(self.tris[t1]) + self.area(self.tris[t2]);
        if !(self.area(n1) > 1e-10 * scale && self.area(n2) > 1e-10 * scale) {
            return false;
        }
        let old = self.quality(self.tris[t1]).min(self.quality(self.tris[t2]));
        let new = self.quality(n1).min(self.quality(n2));
        if new <= old + FLIP_GAIN {
            return false;
        }
        self.kill_tri(t1);
        self.kill_tri(t2);
        self.add_tri(n1);
        self.add_tri(n2);
        true
    }

    fn flip_pass(&mut self) -> usize {
        let mut total = 0;
        for _ in 0..FLIP_SWEEPS {
            let mut count = 0;
            for [a, b] in self.edges() {
                if self.try_flip(a, b) {
                    count += 1;
                }
            }
            total += count;
            if count == 0 {
                break;
            }
        }
        total
    }

    /// Unit tangent of the boundary at `v` (from its two boundary neighbors).
    fn boundary_tangent(&self, v: usize) -> Option<[f64; 2]> {
        let ends: Vec<usize> =
            self.neighbors(v).into_iter().filter(|&w| self.bnd.contains_key(&key(v, w))).collect();
        if ends.len() != 2 {
            return None;
        }
        let (p, q) = (self.pts[ends[0]], self.pts[ends[1]]);
        let d = [q[0] - p[0], q[1] - p[1]];
        let n = d[0].hypot(d[1]);
        (n > 0.0).then(|| [d[0] / n, d[1] / n])
    }

    fn smooth_pass(&mut self) -> usize {
        let mut moves = 0;
        for v in 0..self.pts.len() {
            if !self.alive_v[v] || self.kind[v] == Kind::Corner {
                continue;
            }
            let tangent = match self.kind[v] {
                Kind::Boundary if self.params.boundary_tags_frozen => continue,
                Kind::Boundary => match self.boundary_tangent(v) {
                    Some(t) => Some(t),
                    None => continue,
                },
                _ => None,
            };
            let nb = self.neighbors(v);
            let p = self.pts[v];
            // Average of the points at unit metric distance from each neighbor.
            let mut d = [0.0, 0.0];
            for &w in &nb {
                let f = (1.0 - 1.0 / self.length(v, w)).clamp(-1.0, 1.0);
                let q = self.pts[w];
                d[0] += f * (q[0] - p[0]);
                d[1] += f * (q[1] - p[1]);
            }
            d = [d[0] / nb.len() as f64, d[1] / nb.len() as f64];
            if let Some(t) = tangent {
                let s = d[0] * t[0] + d[1] * t[1];
                d = [s * t[0], s * t[1]];
            }
            let old_min = self.vt[v].iter().map(|&t| self.quality(self.tris[t])).fold(1.0, f64::min);
            let (old_log, old_sd, old_hint) = (self.logm[v], self.sqrt_det[v], self.hint[v]);
            let mut accepted = false;
            for w in [RELAX, 0.5 * RELAX] {
                let trial = [p[0] + w * d[0], p[1] + w * d[1]];
                if trial == p {
                    break;
                }
                let mut hint = old_hint;
                let m = self.bg.metric_at(trial, &mut hint);
                self.pts[v] = trial;
                self.set_metric(v, &m);
                let new_min = self.vt[v].iter().map(|&t| self.quality(self.tris[t])).fold(1.0, f64::min);
                if new_min > old_min {
                    self.hint[v] = hint;
                    accepted = true;
                    break;
                }
            }
            if accepted {
                moves += 1;
            } else {
                self.pts[v] = p;
                self.logm[v] = old_log;
                self.sqrt_det[v] = old_sd;
            }
        }
        moves
    }

    fn check_valid(&self) -> Result<()> {
        for t in (0..self.tris.len()).filter(|&t| self.alive_t[t]) {
            if !(self.area(self.tris[t]) > 0.0) {
                return Err(Error::Internal(format!("adaptation produced inverted triangle {t}")));
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<SimplicialMesh> {
        let mut new_id = vec![usize::MAX; self.pts.len()];
        let mut verts = Vec::new();
        let mut corners = Vec::new();
        for v in (0..self.pts.len()).filter(|&v| self.alive_v[v]) {
            new_id[v] = verts.len();
            verts.push(self.pts[v]);
            corners.push(self.kind[v] == Kind::Corner);
        }
        let tris = (0..self.tris.len())
            .filter(|&t| self.alive_t[t])
            .map(|t| self.tris[t].map(|v| new_id[v]))
            .collect();
        let boundary = self.bnd.iter().map(|(e, &tag)| BoundaryEdge { v: [new_id[e[0]], new_id[e[1]]], tag }).collect();
        SimplicialMesh::new(verts, tris, boundary, Some(corners))
            .map_err(|e| Error::Internal(format!("adapted mesh failed validation: {e}")))
    }
}

/// Adapts `mesh` to the metric `field` (defined on its own background
/// mesh, which may be `mesh` itself).
pub fn adapt_mesh(mesh: &SimplicialMesh, field: &MetricField, params: &AdaptParams) -> Result<AdaptOutcome> {
    params.validate()?;
    let mut work = Work::new(mesh, field, params);
    let mut out = (0, false, 0, 0, 0, 0);
    for pass in 1..=params.max_passes {
        let s = work.split_pass();
        let c = work.collapse_pass();
        let f = work.flip_pass();
        let m = work.smooth_pass();
        if cfg!(debug_assertions) {
            work.check_valid()?;
        }
        // A trickle of changes caused by vertex motion counts as converged.
        let live_edges = 3 * work.alive_t.iter().filter(|&&a| a).count() / 2;
        let settled = (s + c) as f64 <= CONVERGED_CHANGES * live_edges as f64;
        out = (pass, settled, out.2 + s, out.3 + c, out.4 + f, out.5 + m);
        log::debug!("adapt pass {pass}: {s} splits, {c} collapses, {f} flips, {m} moves");
        if out.1 {
            break;
        }
    }
    if !out.1 {
        log::warn!("adaptation stopped after {} passes without converging", params.max_passes);
    }
    work.check_valid()?;
    let (passes, converged, splits, collapses, flips, moves) = out;
    Ok(AdaptOutcome { mesh: work.finish()?, passes, converged, splits, collapses, flips, moves })
}

/// Metric lengths of all edges of `mesh` under `field` (interpolated onto
/// the vertices of `mesh` when it lives on another mesh).
pub fn metric_edge_lengths(mesh: &SimplicialMesh, field: &MetricField) -> Vec<f64> {
    let logs: Vec<SymMat2> = if mesh.id() == field.mesh().id() {
        field.tensors().iter().map(MetricTensor::log).collect()
    } else {
        let bg = Background { field };
        let mut hint = 0;
        mesh.vertices().iter().map(|&p| bg.metric_at(p, &mut hint).log()).collect()
    };
    mesh.edges()
        .iter()
        .map(|&[a, b]| {
            let (p, q) = (mesh.vertex(a), mesh.vertex(b));
            edge_length_log([q[0] - p[0], q[1] - p[1]], &logs[a], &logs[b])
        })
        .collect()
}

/// Counts of metric edge lengths in bins of width [`EdgeHistogram::BIN_WIDTH`]
/// over `[0, 3)`, plus one overflow bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeHistogram {
    pub counts: Vec<usize>,
}

impl EdgeHistogram {
    pub const BIN_WIDTH: f64 = 0.1;
    pub const BINS: usize = 30;

    pub fn from_lengths(lengths: &[f64]) -> Self {
        let mut counts = vec![0; Self::BINS + 1];
        for &l in lengths {
            let b = ((l / Self::BIN_WIDTH).floor().max(0.0) as usize).min(Self::BINS);
            counts[b] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Center of the fullest bin.
    pub fn mode(&self) -> f64 {
        let b = (0..self.counts.len()).max_by_key(|&b| (self.counts[b], std::cmp::Reverse(b))).unwrap_or(0);
        (b as f64 + 0.5) * Self::BIN_WIDTH
    }
}

pub fn unit_edge_histogram(mesh: &SimplicialMesh, field: &MetricField) -> EdgeHistogram {
    EdgeHistogram::from_lengths(&metric_edge_lengths(mesh, field))
}

/// Fraction of `lengths` inside `[lo, hi]`.
pub fn fraction_within(lengths: &[f64], lo: f64, hi: f64) -> f64 {
    if lengths.is_empty() {
        return 0.0;
    }
    lengths.iter().filter(|&&l| l >= lo && l <= hi).count() as f64 / lengths.len() as f64
}
