use stadapt::driver::{FixedPointConfig, InitialMesh};
use stadapt::fem::{l2_error, MmsProblem};
use stadapt::global_fixed_point;

fn smooth_front() -> FixedPointConfig {
    FixedPointConfig {
        n_i: 4,
        n_t: 5,
        n_avg: 1500.0,
        n_fp: 3,
        initial_mesh: InitialMesh::Uniform { nx: 20, ny: 10 },
        problem: MmsProblem { delta: 0.1, ..MmsProblem::default() },
        svg: false,
        ..FixedPointConfig::default()
    }
}

#[test]
fn fixed_point_on_a_smooth_front() {
    let cfg = smooth_front();
    let run = global_fixed_point(&cfg).unwrap();
    assert_eq!(run.iterations.len(), 3);
    assert_eq!(run.records.len(), 12);
    assert_eq!(run.meshes.len(), 4);

    // Interval complexities add up to the normalization target.
    let target = cfg.n_avg * cfg.n_i as f64 / cfg.n_t as f64;
    for it in &run.iterations {
        let total: f64 = it.complexities.iter().sum();
        assert!((total / target - 1.0).abs() < 0.15, "iteration {}: {total} vs {target}", it.fp_iter);
    }

    let e: Vec<f64> = run.iterations.iter().map(|it| it.e).collect();
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");

    // The front moves at constant speed, so every interval needs about the
    // same resolution.
    let counts = &run.last().vertex_counts;
    let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
    assert!(counts.iter().all(|&n| (n as f64 / mean - 1.0).abs() < 0.15), "{counts:?}");
    assert_eq!(run.last().n_st, cfg.n_t * counts.iter().sum::<usize>());

    for m in &run.meshes {
        assert!((m.total_area() - 8.0).abs() < 1e-9);
        assert_eq!(m.bounds(), MmsProblem::DOMAIN);
    }
    let err = l2_error(&run.final_solution, &cfg.problem, cfg.problem.t_final);
    let r = &run.records;
    let last_term = r[r.len() - 1].e_partial - r[r.len() - 2].e_partial;
    let dt_i = cfg.n_t as f64 * cfg.dt();
    assert!((dt_i * err - last_term).abs() < 1e-9 * last_term, "{err} vs {last_term}");
    assert!(err < 0.2, "{err}");
}

#[test]
fn the_same_seed_gives_the_same_run() {
    let cfg = FixedPointConfig { n_fp: 2, ..smooth_front() };
    let a = global_fixed_point(&cfg).unwrap();
    let b = global_fixed_point(&cfg).unwrap();
    assert_eq!(a.csv(), b.csv());
}
