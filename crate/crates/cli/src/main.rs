use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use stadapt::adapt::{adapt_mesh, fraction_within, metric_edge_lengths, AdaptParams, EdgeHistogram};
use stadapt::driver::{convergence_study, global_fixed_point, records_to_csv, FixedPointConfig, StudyKind};
use stadapt::mesh::{load_mesh, save_mesh, write_svg, SvgOptions};
use stadapt::metric::load_metric;
use stadapt::{Error, MetricField, MetricTensor, SimplicialMesh, SizeSpec};

#[derive(Parser)]
#[command(name = "stadapt", version, about = "Anisotropic mesh adaptation with the global transient fixed-point method")]
struct Cli {
    /// Log progress (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adapt a mesh once to a metric.
    Adapt(AdaptArgs),
    /// Single transient solve on the initial mesh, without adaptation.
    Solve(ConfigArgs),
    /// Run the global transient fixed-point algorithm.
    FixedPoint(ConfigArgs),
    /// Convergence study over a sweep of N_avg or n_I.
    Study(StudyArgs),
    /// Mesh statistics and, given a metric, the edge-length histogram.
    MeshInfo(MeshInfoArgs),
}

/// Flags mirroring the keys of the config file; flags win over the file.
#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_i: Option<usize>,
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long)]
    n_avg: Option<f64>,
    /// Fixed-point iterations.
    #[arg(long)]
    n_fp: Option<usize>,
    /// Lᵖ norm of the interpolation error.
    #[arg(long)]
    p: Option<f64>,
    /// Gradation bound, or `none`.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    /// Restart each interval from the exact solution.
    #[arg(long)]
    cancel_transfer_error: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    init_nx: Option<usize>,
    #[arg(long)]
    init_ny: Option<usize>,
    /// Initial mesh file instead of a uniform grid.
    #[arg(long)]
    init_mesh: Option<PathBuf>,
    /// Front speed.
    #[arg(long)]
    c: Option<f64>,
    /// Front steepness.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    max_passes: Option<usize>,
    /// Output directory for CSV, meshes, metrics and SVG snapshots.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Skip SVG snapshots.
    #[arg(long)]
    no_svg: bool,
}

impl ConfigArgs {
    fn build(&self) -> stadapt::Result<FixedPointConfig> {
        let mut cfg = match &self.config {
            Some(p) => FixedPointConfig::load(p)?,
            None => FixedPointConfig::default(),
        };
        let s = |v: &dyn ToString| v.to_string();
        let pairs: [(&str, Option<String>); 18] = [
            ("n_i", self.n_i.as_ref().map(|v| s(v))),
            ("n_t", self.n_t.as_ref().map(|v| s(v))),
            ("n_avg", self.n_avg.as_ref().map(|v| s(v))),
            ("n_fp", self.n_fp.as_ref().map(|v| s(v))),
            ("p", self.p.as_ref().map(|v| s(v))),
            ("beta", self.beta.clone()),
            ("h_min", self.h_min.as_ref().map(|v| s(v))),
            ("h_max", self.h_max.as_ref().map(|v| s(v))),
            ("cancel_transfer_error", self.cancel_transfer_error.then(|| "true".into())),
            ("seed", self.seed.as_ref().map(|v| s(v))),
            ("init_nx", self.init_nx.as_ref().map(|v| s(v))),
            ("init_ny", self.init_ny.as_ref().map(|v| s(v))),
            ("init_mesh", self.init_mesh.as_ref().map(|v| v.display().to_string())),
            ("c", self.c.as_ref().map(|v| s(v))),
            ("delta", self.delta.as_ref().map(|v| s(v))),
            ("t_final", self.t_final.as_ref().map(|v| s(v))),
            ("max_passes", self.max_passes.as_ref().map(|v| s(v))),
            ("output", self.output.as_ref().map(|v| v.display().to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        if self.no_svg {
            cfg.svg = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct AdaptArgs {
    /// Input mesh.
    #[arg(long)]
    mesh: PathBuf,
    /// Per-vertex metric file on the input mesh.
    #[arg(long, conflicts_with = "size", required_unless_present = "size")]
    metric: Option<PathBuf>,
    /// Constant metric as `h1,h2[,theta]`.
    #[arg(long, value_delimiter = ',')]
    size: Option<Vec<f64>>,
    /// Output mesh.
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG picture of the adapted mesh.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = AdaptParams::default().max_passes)]
    max_passes: usize,
}

#[derive(Args)]
struct StudyArgs {
    /// `fixed-ni` sweeps N_avg; `fixed-navg` sweeps n_I at constant n_I·n_T.
    #[arg(long)]
    kind: String,
    /// Comma-separated sweep values (at least three).
    #[arg(long, value_delimiter = ',', required = true)]
    sweep: Vec<f64>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct MeshInfoArgs {
    /// Mesh file.
    #[arg(conflicts_with = "uniform", required_unless_present = "uniform")]
    mesh: Option<PathBuf>,
    /// Uniform mesh `nx,ny` on the problem domain instead of a file.
    #[arg(long, value_delimiter = ',')]
    uniform: Option<Vec<usize>>,
    /// Per-vertex metric for the edge-length histogram.
    #[arg(long)]
    metric: Option<PathBuf>,
}

/// 2 for bad input or configuration, 3 for numerical failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::Io(_)
        | Error::Structural(_)
        | Error::InsufficientData(_) => 2,
        Error::NotFound(..)
        | Error::InsufficientPatch(_)
        | Error::Assembly(_)
        | Error::Solver { .. }
        | Error::DegenerateInput(_)
        | Error::Internal(_) => 3,
    }
}

fn load_field(mesh: &Arc<SimplicialMesh>, path: &PathBuf) -> stadapt::Result<MetricField> {
    MetricField::new(mesh.clone(), load_metric(path)?)
}

fn adapt(a: &AdaptArgs) -> stadapt::Result<()> {
    let mesh = Arc::new(load_mesh(&a.mesh)?);
    let field = match (&a.metric, &a.size) {
        (Some(p), _) => load_field(&mesh, p)?,
        (None, Some(s)) => {
            if !(2..=3).contains(&s.len()) {
                return Err(Error::InvalidArgument(format!("--size takes h1,h2[,theta], got {} values", s.len())));
            }
            let spec = SizeSpec { h1: s[0], h2: s[1], theta: s.get(2).copied().unwrap_or(0.0) };
            MetricField::uniform(mesh.clone(), MetricTensor::from_sizes(spec)?)
        }
        (None, None) => unreachable!("clap requires --metric or --size"),
    };
    let params = AdaptParams { seed: a.seed, max_passes: a.max_passes, ..AdaptParams::default() };
    let out = adapt_mesh(&mesh, &field, &params)?;
    save_mesh(&out.mesh, &a.out)?;
    if let Some(svg) = &a.svg {
        std::fs::write(svg, write_svg(&out.mesh, None, &SvgOptions::default()))?;
    }
    let lengths = metric_edge_lengths(&out.mesh, &field);
    println!("V_in={}", mesh.num_vertices());
    println!("V_out={}", out.mesh.num_vertices());
    println!("complexity={:.3}", field.complexity());
    println!("unit_fraction={:.4}", fraction_within(&lengths, 0.9 / 2f64.sqrt(), 1.1 * 2f64.sqrt()));
    println!("passes={} converged={}", out.passes, out.converged);
    println!("splits={} collapses={} flips={} moves={}", out.splits, out.collapses, out.flips, out.moves);
    Ok(())
}

fn run_fixed_point(cfg: &FixedPointConfig) -> stadapt::Result<()> {
    println!("# dt = {}", cfg.dt());
    let res = global_fixed_point(cfg)?;
    for it in &res.iterations {
        println!("# fp {}: E = {:.6e}, N_st = {}", it.fp_iter, it.e, it.n_st);
    }
    print!("{}", res.csv());
    Ok(())
}

fn study(a: &StudyArgs) -> stadapt::Result<()> {
    let kind: StudyKind = a.kind.parse()?;
    let base = a.config.build()?;
    let res = convergence_study(&base, kind, &a.sweep)?;
    // Records of every point back to back; `fp_iter` restarts at 1 per point.
    let records: Vec<_> = res.points.iter().flat_map(|p| p.records.iter().cloned()).collect();
    print!("{}", records_to_csv(&records));
    for p in &res.points {
        eprintln!("n_I={} n_T={} N_avg={} N_st={} E={:.6e}", p.n_i, p.n_t, p.n_avg, p.n_st, p.e);
    }
    eprintln!("r = {:.4} (fitted on the last {} points)", res.rate, res.fitted);
    Ok(())
}

fn mesh_info(a: &MeshInfoArgs) -> stadapt::Result<()> {
    let mesh = match (&a.mesh, &a.uniform) {
        (Some(p), _) => load_mesh(p)?,
        (None, Some(n)) if n.len() != 2 => {
            return Err(Error::InvalidArgument(format!("--uniform takes nx,ny, got {} values", n.len())));
        }
        (None, Some(n)) => SimplicialMesh::structured_rect(n[0], n[1], stadapt::fem::MmsProblem::DOMAIN)?,
        (None, None) => unreachable!("clap requires a mesh or --uniform"),
    };
    let s = mesh.stats();
    println!("V={}", s.num_vertices);
    println!("T={}", s.num_triangles);
    println!("E={}", s.num_edges);
    println!("E_boundary={}", s.num_boundary_edges);
    println!("area={:.6e} min_area={:.6e} max_area={:.6e}", s.total_area, s.min_area, s.max_area);
    if let Some(p) = &a.metric {
        let mesh = Arc::new(mesh);
        let field = load_field(&mesh, p)?;
        let lengths = metric_edge_lengths(&mesh, &field);
        let h = EdgeHistogram::from_lengths(&lengths);
        println!("complexity={:.3}", field.complexity());
        println!("unit_fraction={:.4}", fraction_within(&lengths, 0.9 / 2f64.sqrt(), 1.1 * 2f64.sqrt()));
        println!("bin_lo,count");
        for (b, c) in h.counts.iter().enumerate() {
            println!("{:.1},{c}", b as f64 * EdgeHistogram::BIN_WIDTH);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let res = match &cli.command {
        Command::Adapt(a) => adapt(a),
        Command::Solve(c) => c.build().and_then(|cfg| run_fixed_point(&FixedPointConfig { n_fp: 1, ..cfg })),
        Command::FixedPoint(c) => c.build().and_then(|cfg| run_fixed_point(&cfg)),
        Command::Study(a) => study(a),
        Command::MeshInfo(a) => mesh_info(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
