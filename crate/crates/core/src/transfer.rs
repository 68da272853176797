//! Transfer of P1 fields between meshes by nodal interpolation.

use std::sync::Arc;

use crate::error::Result;
use crate::fem::HeatProblem;
use crate::mesh::{ScalarField, SimplicialMesh};

/// Diagnostics of one transfer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferReport {
    /// Destination vertices that were outside the source mesh and were
    /// projected onto its nearest element.
    pub projected: usize,
    /// `∫ dst − ∫ src`; nodal interpolation does not conserve the integral.
    pub integral_drift: f64,
}

/// Evaluates the P1 function `src` at every vertex of `dst`.
pub fn interpolate_field(src: &ScalarField, dst: &Arc<SimplicialMesh>) -> Result<(ScalarField, TransferReport)> {
    let mesh = src.mesh();
    let vals = src.values();
    let mut hint = 0;
    let mut projected = 0;
    let out: Vec<f64> = dst
        .vertices()
        .iter()
        .map(|&p| {
            let (loc, proj) = mesh.locate_or_project(p, hint);
            projected += proj as usize;
            hint = loc.tri;
            let tri = mesh.triangle(loc.tri);
            // Convex combination, clamped so roundoff cannot leave the source range.
            let v: f64 = (0..3).map(|k| loc.bary[k] * vals[tri[k]]).sum();
            let (lo, hi) = tri.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
                (lo.min(vals[w]), hi.max(vals[w]))
            });
            v.clamp(lo, hi)
        })
        .collect();
    if projected > 0 {
        log::warn!("transfer projected {projected} destination vertices onto the source mesh");
    }
    let field = ScalarField::new(dst.clone(), out)?;
    let integral_drift = field.integral() - src.integral();
    Ok((field, TransferReport { projected, integral_drift }))
}

/// Samples the exact solution at `t` on the vertices of `dst`.
pub fn reinterpolate_exact(dst: &Arc<SimplicialMesh>, prob: &impl HeatProblem, t: f64) -> ScalarField {
    ScalarField::from_fn(dst.clone(), |p| prob.reference(p, t))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fem::MmsProblem;

    fn rect(nx: usize, ny: usize, b: [f64; 4]) -> Arc<SimplicialMesh> {
        Arc::new(SimplicialMesh::structured_rect(nx, ny, b).unwrap())
    }

    /// Interior vertices jittered by up to `amp` cells.
    fn jittered(nx: usize, ny: usize, b: [f64; 4], amp: f64, seed: u64) -> Arc<SimplicialMesh> {
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

    #[test]
    fn identical_meshes_copy_values() {
        let m = jittered(9, 7, [0.0, 1.0, 0.0, 1.0], 0.3, 2);
        let f = ScalarField::from_fn(m.clone(), |p| (7.0 * p[0]).sin() + p[1] * p[1]);
        let (g, rep) = interpolate_field(&f, &m).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(rep.projected, 0);
        assert!(rep.integral_drift.abs() < 1e-13);
    }

    #[test]
    fn nested_refinement_reproduces_p1_function() {
        let coarse = rect(5, 3, [-2.0, 2.0, -1.0, 1.0]);
        let fine = rect(20, 12, [-2.0, 2.0, -1.0, 1.0]);
        let f = ScalarField::from_fn(coarse.clone(), |p| (p[0] * p[1]).exp());
        let (g, rep) = interpolate_field(&f, &fine).unwrap();
        // The P1 interpolant evaluated directly in the coarse mesh.
        for (v, &p) in fine.vertices().iter().enumerate() {
            let loc = coarse.locate_brute_force(p).unwrap();
            let tri = coarse.triangle(loc.tri);
            let want: f64 = (0..3).map(|k| loc.bary[k] * f.values()[tri[k]]).sum();
            assert!((g.values()[v] - want).abs() < 1e-12);
        }
        // Same function, so the integral is preserved.
        assert!(rep.integral_drift.abs() < 1e-12);
    }

    #[test]
    fn affine_fields_transfer_exactly_and_stay_in_range() {
        let src = jittered(13, 9, [0.0, 2.0, 0.0, 1.0], 0.35, 5);
        let dst = jittered(17, 6, [0.0, 2.0, 0.0, 1.0], 0.35, 6);
        let aff = |p: [f64; 2]| 3.0 * p[0] - 2.0 * p[1] + 1.0;
        let (g, _) = interpolate_field(&ScalarField::from_fn(src.clone(), aff), &dst).unwrap();
        for (v, &p) in dst.vertices().iter().enumerate() {
            assert!((g.values()[v] - aff(p)).abs() < 1e-12);
        }
        let wiggly = ScalarField::from_fn(src, |p| (9.0 * p[0]).sin() * (5.0 * p[1]).cos());
        let (lo, hi) = wiggly.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let (g, _) = interpolate_field(&wiggly, &dst).unwrap();
        assert!(g.values().iter().all(|&v| v >= lo && v <= hi));
    }

    #[test]
    fn outside_vertices_are_projected_and_counted() {
        let src = rect(4, 4, [0.0, 1.0, 0.0, 1.0]);
        let dst = rect(3, 3, [0.0, 1.0 + 1e-6, 0.0, 1.0]);
        let (g, rep) = interpolate_field(&ScalarField::from_fn(src, |p| p[0]), &dst).unwrap();
        assert_eq!(rep.projected, 4);
        assert!(g.values().iter().all(|v| *v <= 1.0));
    }

    #[test]
    fn exact_reinterpolation() {
        let prob = MmsProblem::default();
        let m = rect(8, 4, MmsProblem::DOMAIN);
        let u = reinterpolate_exact(&m, &prob, 0.0);
        for (v, &p) in m.vertices().iter().enumerate() {
            assert_eq!(u.values()[v], prob.reference(p, 0.0));
        }
        // Front-line vertex: x = ct + sin(5y)/2 at y = 0, t = 0.5.
        let m = rect(8, 4, MmsProblem::DOMAIN);
        let u = reinterpolate_exact(&m, &prob, 0.5);
        let v = m.vertices().iter().position(|p| *p == [0.5, 0.0]).unwrap();
        assert!(u.values()[v].abs() < 1e-15);
    }

    #[test]
    fn transferred_samples_approach_exact_at_second_order() {
        let prob = MmsProblem { delta: 2.0, ..MmsProblem::default() };
        let errs: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let src = jittered(2 * n, n, MmsProblem::DOMAIN, 0.2, n as u64);
                let dst = jittered(2 * n + 3, n + 1, MmsProblem::DOMAIN, 0.2, 100 + n as u64);
                let (g, _) = interpolate_field(&reinterpolate_exact(&src, &prob, 0.2), &dst).unwrap();
                let exact = reinterpolate_exact(&dst, &prob, 0.2);
                g.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() > 1.6, "{errs:?}");
        }
    }
}
