use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use super::config::FixedPointConfig;
use crate::adapt::adapt_mesh;
use crate::error::Result;
use crate::fem::{l2_error, solve_interval, MmsProblem, Operators, TimeState};
use crate::mesh::{save_mesh, write_svg, ScalarField, SimplicialMesh, SvgOptions};
use crate::recovery::PatchRecovery;
use crate::transfer::{interpolate_field, reinterpolate_exact};
use crate::transient::{interval_metrics, save_interval_metrics, IntervalHessian};

pub const CSV_HEADER: &str = "fp_iter,interval,N_v,complexity,N_st,E";

/// One CSV row. `n_st` and `e_partial` are running sums over the intervals
/// of the iteration, so the last row of an iteration carries its totals.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyRecord {
    pub fp_iter: usize,
    pub interval: usize,
    /// Vertices of the mesh the interval was solved on.
    pub vertex_count: usize,
    /// Complexity of the metric computed for the interval in this iteration.
    pub complexity: f64,
    pub n_st: usize,
    pub e_partial: f64,
}

/// Totals of one fixed-point iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationSummary {
    pub fp_iter: usize,
    /// `Σᵢ n_T Δt ‖φ_ref(tᵢ₊₁) − u_h(tᵢ₊₁)‖_{L²}`.
    pub e: f64,
    /// `n_T Σᵢ N_{v,i}`.
    pub n_st: usize,
    pub vertex_counts: Vec<usize>,
    pub complexities: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub records: Vec<StudyRecord>,
    pub iterations: Vec<IterationSummary>,
    /// Meshes of the last iteration, one per interval.
    pub meshes: Vec<Arc<SimplicialMesh>>,
    /// Solution at `T` on the last interval's mesh.
    pub final_solution: ScalarField,
}

impl RunResult {
    pub fn last(&self) -> &IterationSummary {
        self.iterations.last().expect("a run has at least one iteration")
    }

    pub fn csv(&self) -> String {
        records_to_csv(&self.records)
    }
}

pub fn records_to_csv(records: &[StudyRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{:.9e},{},{:.9e}",
            r.fp_iter, r.interval, r.vertex_count, r.complexity, r.n_st, r.e_partial
        );
    }
    s
}

/// Start state of interval `i` at `t0`, built from the end state of the
/// previous interval.
fn start_state(
    cfg: &FixedPointConfig,
    prev: Option<TimeState>,
    mesh: &Arc<SimplicialMesh>,
    t0: f64,
) -> Result<TimeState> {
    let prob = &cfg.problem;
    let Some(prev) = prev else {
        return Ok(TimeState::initial(mesh.clone(), prob, t0));
    };
    if cfg.cancel_transfer_error {
        let u_prev = prev.u_prev.as_ref().map(|_| reinterpolate_exact(mesh, prob, t0 - prev.last_dt));
        return Ok(TimeState { u: reinterpolate_exact(mesh, prob, t0), u_prev, t: t0, last_dt: prev.last_dt });
    }
    if prev.mesh().id() == mesh.id() {
        return Ok(TimeState { t: t0, ..prev });
    }
    let u = interpolate_field(&prev.u, mesh)?.0;
    let u_prev = match &prev.u_prev {
        Some(p) => Some(interpolate_field(p, mesh)?.0),
        None => None,
    };
    Ok(TimeState { u, u_prev, t: t0, last_dt: prev.last_dt })
}

/// Solves all intervals on `meshes`, returning the interval Hessians, the
/// per-interval error contributions and the final state.
fn solve_all(cfg: &FixedPointConfig, meshes: &[Arc<SimplicialMesh>]) -> Result<(Vec<IntervalHessian>, Vec<f64>, TimeState)> {
    let prob: &MmsProblem = &cfg.problem;
    let mut ihs = Vec::with_capacity(cfg.n_i);
    let mut errs = Vec::with_capacity(cfg.n_i);
    let mut carry = None;
    let span = cfg.n_t as f64 * cfg.dt();
    for (i, mesh) in meshes.iter().enumerate() {
        let (t0, t1) = (cfg.interval_start(i), cfg.interval_start(i + 1));
        let state = start_state(cfg, carry.take(), mesh, t0)?;
        let ops = Operators::assemble(mesh.clone())?;
        let recovery = PatchRecovery::new(mesh.clone())?;
        let (mut state, ih) = solve_interval(&ops, &recovery, state, t1, cfg.n_t, prob)?;
        state.t = t1;
        errs.push(span * l2_error(&state.u, prob, t1));
        ihs.push(ih);
        carry = Some(state);
    }
    Ok((ihs, errs, carry.expect("n_I ≥ 1")))
}

fn write_iteration(
    dir: &Path,
    cfg: &FixedPointConfig,
    k: usize,
    meshes: &[Arc<SimplicialMesh>],
    metrics: Option<&[crate::metric::MetricField]>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    if cfg.svg {
        let opts = SvgOptions::default();
        for (i, m) in meshes.iter().enumerate() {
            std::fs::write(dir.join(format!("mesh_fp{k}_interval{i}.svg")), write_svg(m, None, &opts))?;
        }
    }
    if let Some(fields) = metrics {
        save_interval_metrics(dir.join(format!("metrics_fp{k}")), fields, &cfg.normalization(meshes[0].diameter()))?;
    }
    Ok(())
}

/// Writes the meshes that were live when a run failed, plus the error.
fn dump_failure(dir: &Path, k: usize, meshes: &[Arc<SimplicialMesh>], err: &crate::Error) {
    let fail = dir.join(format!("failure_fp{k}"));
    let res = std::fs::create_dir_all(&fail).map_err(crate::Error::from).and_then(|_| {
        for (i, m) in meshes.iter().enumerate() {
            save_mesh(m, fail.join(format!("mesh_interval{i}.mesh")))?;
        }
        std::fs::write(fail.join("error.txt"), format!("{err}\n"))?;
        Ok(())
    });
    if let Err(e) = res {
        log::error!("could not dump failure state to {}: {e}", fail.display());
    }
}

/// Runs the global transient fixed-point algorithm.
///
/// Iteration 1 solves every interval on the initial mesh. Each iteration
/// then builds the interval metrics from its own solution and adapts the
/// interval meshes used by the next iteration; the last iteration skips
/// the adaptation.
pub fn global_fixed_point(cfg: &FixedPointConfig) -> Result<RunResult> {
    cfg.validate()?;
    let started = Instant::now();
    let init = Arc::new(cfg.initial_mesh()?);
    let params = cfg.normalization(init.diameter());
    let adapt = cfg.adapt_params();
    let mut meshes = vec![init; cfg.n_i];
    let mut records = Vec::new();
    let mut iterations: Vec<IterationSummary> = Vec::new();
    let mut final_solution = None;
    for k in 1..=cfg.n_fp {
        let step = (|| -> Result<_> {
            let (ihs, errs, end) = solve_all(cfg, &meshes)?;
            let metrics = interval_metrics(&ihs, &params)?;
            Ok((errs, end, metrics))
        })();
        let (errs, end, metrics) = match step {
            Ok(v) => v,
            Err(e) => {
                if let Some(dir) = &cfg.output {
                    dump_failure(dir, k, &meshes, &e);
                }
                return Err(e);
            }
        };
        let vertex_counts: Vec<usize> = meshes.iter().map(|m| m.num_vertices()).collect();
        let complexities: Vec<f64> = metrics.fields.iter().map(|f| f.complexity()).collect();
        let (mut e, mut n_st) = (0.0, 0);
        for i in 0..cfg.n_i {
            e += errs[i];
            n_st += cfg.n_t * vertex_counts[i];
            records.push(StudyRecord {
                fp_iter: k,
                interval: i,
                vertex_count: vertex_counts[i],
                complexity: complexities[i],
                n_st,
                e_partial: e,
            });
        }
        log::info!("fixed-point iteration {k}: E = {e:.4e}, N_st = {n_st}, vertices {vertex_counts:?}");
        if let Some(dir) = &cfg.output {
            write_iteration(dir, cfg, k, &meshes, Some(&metrics.fields))?;
        }
        iterations.push(IterationSummary { fp_iter: k, e, n_st, vertex_counts, complexities });
        final_solution = Some(end.u);
        if k < cfg.n_fp {
            let mut next = Vec::with_capacity(cfg.n_i);
            for (i, (mesh, field)) in meshes.iter().zip(&metrics.fields).enumerate() {
                match adapt_mesh(mesh, field, &adapt) {
                    Ok(out) => next.push(Arc::new(out.mesh)),
                    Err(e) => {
                        log::error!("adaptation of interval {i} failed in iteration {k}");
                        if let Some(dir) = &cfg.output {
                            dump_failure(dir, k, &meshes, &e);
                        }
                        return Err(e);
                    }
                }
            }
            meshes = next;
        }
    }
    let result = RunResult {
        records,
        iterations,
        meshes,
        final_solution: final_solution.expect("n_fp ≥ 1"),
    };
    if let Some(dir) = &cfg.output {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("run.csv"), result.csv())?;
        for (i, m) in result.meshes.iter().enumerate() {
            save_mesh(m, dir.join(format!("mesh_final_interval{i}.mesh")))?;
        }
        std::fs::write(dir.join("manifest.txt"), manifest(cfg, &result, started.elapsed().as_secs_f64()))?;
    }
    Ok(result)
}

fn manifest(cfg: &FixedPointConfig, res: &RunResult, seconds: f64) -> String {
    let mut s = String::from("# config\n");
    s.push_str(&cfg.to_text());
    let _ = writeln!(s, "# wall_clock_seconds = {seconds:.3}");
    for it in &res.iterations {
        let counts: Vec<String> = it.vertex_counts.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "# fp{} vertices = {}", it.fp_iter, counts.join(" "));
    }
    s
}
