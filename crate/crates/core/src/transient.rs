//! Time-integrated Hessians per sub-interval and the optimal interval
//! metrics built from them.
//!
//! For interval `i` with accumulated Hessian `Hᵢ = ∫ |H_φ| dt`,
//!
//! ```text
//! Mᵢ = (N_avg n_I / n_T)^{2/d} (Σⱼ Kⱼ)^{-2/d} (det Hᵢ)^{-1/(2p+d)} Hᵢ,
//! Kⱼ = ∫_Ω (det Hⱼ)^{p/(2p+d)},
//! ```
//!
//! which makes the space-time complexity `n_T Σᵢ C(Mᵢ)` equal to
//! `N_avg n_I`.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::mesh::SimplicialMesh;
use crate::metric::{apply_gradation, write_metric, GradationReport, MetricField, MetricTensor, SymMat2};
use crate::recovery::TensorField;

/// Relative eigenvalue floor applied before the negative determinant power.
pub const DET_FLOOR: f64 = 1e-10;

/// Streaming trapezoidal integral of `|H|` over one sub-interval.
#[derive(Clone, Debug)]
pub struct IntervalHessian {
    mesh: Arc<SimplicialMesh>,
    accumulated: Vec<SymMat2>,
    last: Vec<SymMat2>,
    steps_seen: usize,
}

impl IntervalHessian {
    pub fn new(mesh: Arc<SimplicialMesh>) -> Self {
        let n = mesh.num_vertices();
        Self { mesh, accumulated: vec![SymMat2::ZERO; n], last: vec![SymMat2::ZERO; n], steps_seen: 0 }
    }

    /// Builds an already-integrated Hessian (e.g. from analytic data).
    pub fn from_accumulated(field: TensorField) -> Self {
        let mesh = field.mesh().clone();
        let accumulated: Vec<SymMat2> = field.into_values().iter().map(SymMat2::abs).collect();
        let last = vec![SymMat2::ZERO; accumulated.len()];
        Self { mesh, accumulated, last, steps_seen: 1 }
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn accumulated(&self) -> &[SymMat2] {
        &self.accumulated
    }

    /// Number of samples received (time steps plus the initial sample).
    pub fn steps_seen(&self) -> usize {
        self.steps_seen
    }

    /// Adds the sample `|h_step|` taken `dt` after the previous one. The first
    /// sample only opens the integral; `dt` is then unused.
    pub fn accumulate(&mut self, h_step: &TensorField, dt: f64) -> Result<()> {
        if h_step.mesh().id() != self.mesh.id() {
            return invalid("Hessian sample lives on a different mesh than the accumulator");
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return invalid(format!("time step must be positive, got {dt}"));
        }
        for ((acc, last), h) in self.accumulated.iter_mut().zip(&mut self.last).zip(h_step.values()) {
            let h = h.abs();
            if self.steps_seen > 0 {
                *acc = *acc + (*last + h) * (0.5 * dt);
            }
            *last = h;
        }
        self.steps_seen += 1;
        Ok(())
    }

    /// `∫_Ω (det H)^{p/(2p+d)}` with the vertex rule on each element.
    pub fn compute_k(&self, p: f64, d: f64) -> Result<f64> {
        let e = p / (2.0 * p + d);
        let dens = self
            .accumulated
            .iter()
            .map(|h| {
                let det = h.det();
                let tol = 1e-12 * h.trace().powi(2);
                if det < -tol {
                    return Err(Error::Internal(format!("accumulated Hessian has det {det} < 0")));
                }
                Ok(det.max(0.0).powf(e))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((0..self.mesh.num_triangles())
            .map(|t| {
                let [a, b, c] = self.mesh.triangle(t);
                self.mesh.area(t) * (dens[a] + dens[b] + dens[c]) / 3.0
            })
            .sum())
    }
}

/// Normalization and post-processing parameters of the interval metrics.
#[derive(Clone, Debug)]
pub struct NormalizationParams {
    pub n_avg: f64,
    pub n_i: usize,
    pub n_t: usize,
    pub p: f64,
    pub d: f64,
    /// `(h_min, h_max)` eigenvalue clamp; `None` disables clamping.
    pub clamp: Option<(f64, f64)>,
    /// Gradation bound; `None` disables gradation.
    pub beta: Option<f64>,
    pub seed: u64,
}

impl NormalizationParams {
    /// Defaults: `p = 2`, `β = 1.8`, sizes clamped to
    /// `[diameter/10⁵, diameter/2]`.
    pub fn new(n_avg: f64, n_i: usize, n_t: usize, diameter: f64) -> Self {
        Self {
            n_avg,
            n_i,
            n_t,
            p: 2.0,
            d: 2.0,
            clamp: Some((diameter / 1e5, diameter / 2.0)),
            beta: Some(1.8),
            seed: 0,
        }
    }

    /// Plain normalization: no clamping, no gradation.
    pub fn unclamped(n_avg: f64, n_i: usize, n_t: usize) -> Self {
        Self { clamp: None, beta: None, ..Self::new(n_avg, n_i, n_t, 1.0) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_avg > 0.0 && self.n_avg.is_finite()) {
            return invalid(format!("N_avg must be positive, got {}", self.n_avg));
        }
        if self.n_i < 1 || self.n_t < 1 {
            return invalid("n_I and n_T must be at least 1");
        }
        if !(self.p >= 1.0) || self.d != 2.0 {
            return invalid(format!("need p ≥ 1 and d = 2, got p={}, d={}", self.p, self.d));
        }
        if let Some((lo, hi)) = self.clamp {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return invalid(format!("need 0 < h_min < h_max, got {lo}, {hi}"));
            }
        }
        if let Some(beta) = self.beta {
            if !(beta > 1.0 && beta.is_finite()) {
                return invalid(format!("gradation needs beta > 1, got {beta}"));
            }
        }
        Ok(())
    }
}

/// Interval metrics plus diagnostics.
#[derive(Clone, Debug)]
pub struct IntervalMetrics {
    pub fields: Vec<MetricField>,
    pub k: Vec<f64>,
    /// Set when every Hessian vanished and uniform metrics were substituted.
    pub degenerate: bool,
    pub gradation: Vec<GradationReport>,
}

/// Evaluates the optimal metric of every sub-interval.
pub fn interval_metrics(ihs: &[IntervalHessian], params: &NormalizationParams) -> Result<IntervalMetrics> {
    params.validate()?;
    if ihs.len() != params.n_i {
        return invalid(format!("{} interval Hessians for n_I = {}", ihs.len(), params.n_i));
    }
    let (p, d) = (params.p, params.d);
    let k = ihs.iter().map(|ih| ih.compute_k(p, d)).collect::<Result<Vec<_>>>()?;
    let k_sum: f64 = k.iter().sum();
    let lambda_max = ihs
        .iter()
        .flat_map(|ih| ih.accumulated.iter())
        .map(|h| h.eigen().values[0])
        .fold(0.0, f64::max);
    let degenerate = !(k_sum > 0.0 && lambda_max > 0.0);

    let target = params.n_avg * params.n_i as f64 / params.n_t as f64;
    let mut fields = Vec::with_capacity(ihs.len());
    let mut reports = Vec::with_capacity(ihs.len());
    for ih in ihs {
        let raw: Vec<SymMat2> = if degenerate {
            log::warn!("all interval Hessians vanish; falling back to uniform metrics");
            let density = params.n_avg / params.n_t as f64 / ih.mesh.total_area();
            vec![SymMat2::scaled_identity(density); ih.accumulated.len()]
        } else {
            let scale = (target / k_sum).powf(2.0 / d);
            let floor = DET_FLOOR * lambda_max;
            ih.accumulated
                .iter()
                .map(|h| {
                    let h = h.map_eigen(|l| l.max(floor));
                    h * (scale * h.det().powf(-1.0 / (2.0 * p + d)))
                })
                .collect()
        };
        let tensors = raw
            .iter()
            .map(|m| match params.clamp {
                Some((lo, hi)) => crate::metric::bound_eigenvalues(m, lo, hi),
                None => MetricTensor::try_from_sym(*m),
            })
            .collect::<Result<Vec<_>>>()?;
        let field = MetricField::new(ih.mesh.clone(), tensors)?;
        match params.beta {
            Some(beta) => {
                let (graded, rep) = apply_gradation(&field, beta, params.seed)?;
                fields.push(graded);
                reports.push(rep);
            }
            None => fields.push(field),
        }
    }
    Ok(IntervalMetrics { fields, k, degenerate, gradation: reports })
}

/// Writes `metric_interval_<i>.txt` for each interval plus `metric_manifest.txt`.
pub fn save_interval_metrics(
    dir: impl AsRef<Path>,
    fields: &[MetricField],
    params: &NormalizationParams,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    for (i, f) in fields.iter().enumerate() {
        std::fs::write(dir.join(format!("metric_interval_{i}.txt")), write_metric(f.tensors()))?;
    }
    let mut s = String::new();
    let _ = writeln!(s, "n_I = {}", params.n_i);
    let _ = writeln!(s, "n_T = {}", params.n_t);
    let _ = writeln!(s, "N_avg = {}", params.n_avg);
    let _ = writeln!(s, "p = {}", params.p);
    match params.beta {
        Some(b) => writeln!(s, "beta = {b}"),
        None => writeln!(s, "beta = none"),
    }
    .ok();
    std::fs::write(dir.join("metric_manifest.txt"), s)?;
    Ok(())
}
