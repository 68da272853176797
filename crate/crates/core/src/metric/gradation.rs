//! Size gradation: limits the growth of prescribed sizes along mesh edges.
//!
//! For an edge `pq` of Euclidean length `L`, the metric at `p` is spanned to
//! `q` by growing each of its eigen-sizes to `h_i + (β − 1) L`; the metric at
//! `q` is then intersected with the spanned one. Edges are relaxed in both
//! directions until the field stops changing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::MetricField;
use super::tensor::MetricTensor;
use crate::error::{invalid, Result};

/// Relative Frobenius change below which a sweep counts as stationary.
pub const GRADATION_TOL: f64 = 1e-10;
/// Upper bound on randomized sweeps.
pub const MAX_GRADATION_SWEEPS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradationReport {
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(PartialEq)]
struct Finest {
    lambda: f64,
    v: usize,
}

impl Eq for Finest {}

impl PartialOrd for Finest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Finest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lambda.total_cmp(&other.lambda).then_with(|| other.v.cmp(&self.v))
    }
}

fn relax(tensors: &mut [MetricTensor], from: usize, to: usize, growth: f64) -> f64 {
    let spanned = tensors[from].span(growth);
    let updated = tensors[to].intersect(&spanned);
    if updated == tensors[to] {
        return 0.0;
    }
    let change = tensors[to].rel_diff(&updated);
    tensors[to] = updated;
    change
}

/// Applies gradation with growth bound `beta > 1`. Edge order in every sweep
/// is a random permutation drawn from `seed`.
///
/// A finest-first propagation pass seeds the sweeps so that long chains of
/// constraints settle in a handful of sweeps.
pub fn apply_gradation(field: &MetricField, beta: f64, seed: u64) -> Result<(MetricField, GradationReport)> {
    if !(beta > 1.0 && beta.is_finite()) {
        return invalid(format!("gradation needs beta > 1, got {beta}"));
    }
    let mesh = field.mesh().clone();
    let mut tensors = field.tensors().to_vec();
    let edge_len: Vec<f64> = mesh
        .edges()
        .iter()
        .map(|e| {
            let (p, q) = (mesh.vertex(e[0]), mesh.vertex(e[1]));
            (q[0] - p[0]).hypot(q[1] - p[1])
        })
        .collect();

    // Finest-first pass.
    let mut heap: BinaryHeap<Finest> = tensors
        .iter()
        .enumerate()
        .map(|(v, m)| Finest { lambda: m.as_sym().eigen().values[0], v })
        .collect();
    let mut done = vec![false; tensors.len()];
    while let Some(Finest { v, .. }) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &w in mesh.vertex_neighbors(v) {
            if done[w] {
                continue;
            }
            let (p, q) = (mesh.vertex(v), mesh.vertex(w));
            let growth = (beta - 1.0) * (q[0] - p[0]).hypot(q[1] - p[1]);
            if relax(&mut tensors, v, w, growth) > 0.0 {
                heap.push(Finest { lambda: tensors[w].as_sym().eigen().values[0], v: w });
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..mesh.num_edges()).collect();
    let mut report = GradationReport { sweeps: 0, converged: false };
    while report.sweeps < MAX_GRADATION_SWEEPS {
        order.shuffle(&mut rng);
        report.sweeps += 1;
        let mut max_change = 0.0f64;
        for &e in &order {
            let [p, q] = mesh.edges()[e];
            let growth = (beta - 1.0) * edge_len[e];
            max_change = max_change.max(relax(&mut tensors, p, q, growth));
            max_change = max_change.max(relax(&mut tensors, q, p, growth));
        }
        if max_change <= GRADATION_TOL {
            report.converged = true;
            break;
        }
    }
    if !report.converged {
        log::warn!("gradation stopped after {} sweeps without converging", report.sweeps);
    }
    Ok((MetricField::new(mesh, tensors)?, report))
}

/// Largest relative violation of the growth bound over all edges (0 when
/// every edge complies).
pub fn gradation_violation(field: &MetricField, beta: f64) -> f64 {
    let mesh = field.mesh();
    let mut worst = 0.0f64;
    for e in mesh.edges() {
        let (p, q) = (mesh.vertex(e[0]), mesh.vertex(e[1]));
        let growth = (beta - 1.0) * (q[0] - p[0]).hypot(q[1] - p[1]);
        for (a, b) in [(e[0], e[1]), (e[1], e[0])] {
            let spanned = field.tensor(a).span(growth);
            let m = field.tensor(b);
            // Smallest eigenvalue of spanned^{-1/2} m spanned^{-1/2} must be ≥ 1.
            let s = spanned.powf(-0.5).congruence(m.as_sym()).eigen().values[1];
            worst = worst.max(1.0 - s);
        }
    }
    worst
}
