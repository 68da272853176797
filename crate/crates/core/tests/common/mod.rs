#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stadapt::SimplicialMesh;

pub fn rect(nx: usize, ny: usize, b: [f64; 4]) -> Arc<SimplicialMesh> {
    Arc::new(SimplicialMesh::structured_rect(nx, ny, b).unwrap())
}

/// Structured mesh whose interior vertices are moved by up to `amp` cell
/// widths in each direction.
pub fn perturbed(nx: usize, ny: usize, b: [f64; 4], amp: f64, seed: u64) -> Arc<SimplicialMesh> {
    let m = SimplicialMesh::structured_rect(nx, ny, b).unwrap();
    let (hx, hy) = ((b[1] - b[0]) / nx as f64, (b[3] - b[2]) / ny as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts = (0..m.num_vertices())
        .map(|v| {
            let p = m.vertex(v);
            if m.is_boundary_vertex(v) {
                p
            } else {
                [p[0] + amp * hx * rng.gen_range(-1.0..1.0), p[1] + amp * hy * rng.gen_range(-1.0..1.0)]
            }
        })
        .collect();
    Arc::new(SimplicialMesh::new(verts, m.triangles().to_vec(), m.boundary_edges().to_vec(), None).unwrap())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Unique scratch directory under the system temp dir.
pub fn scratch(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("stadapt_{name}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}
