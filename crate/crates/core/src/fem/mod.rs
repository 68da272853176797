//! P1 finite elements for the unsteady heat equation `∂ₜu − Δu + f = 0`
//! with Dirichlet data, BDF2 in time and a BDF1 startup step.

mod quadrature;
mod sparse;

use std::sync::Arc;

pub use quadrature::{degree8, Rule, DEGREE4};
pub use sparse::{pcg, CsrMatrix};

use crate::error::{invalid, Error, Result};
use crate::mesh::{Point, ScalarField, SimplicialMesh};
use crate::recovery::{absolute_tensor, PatchRecovery};
use crate::transient::IntervalHessian;

/// Relative residual at which the linear solves stop.
pub const SOLVER_TOL: f64 = 1e-10;

/// A heat problem given by its exact solution (also the Dirichlet data) and
/// the source `f` that makes it exact.
pub trait HeatProblem {
    fn reference(&self, p: Point, t: f64) -> f64;
    fn source(&self, p: Point, t: f64) -> f64;
}

/// Manufactured traveling front `φ = tanh((2(x − ct) − sin 5y)/δ)` on
/// `[−2, 2] × [−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmsProblem {
    pub c: f64,
    pub delta: f64,
    pub t_final: f64,
}

impl Default for MmsProblem {
    fn default() -> Self {
        Self { c: 1.0, delta: 0.02, t_final: 1.0 }
    }
}

impl MmsProblem {
    pub const DOMAIN: [f64; 4] = [-2.0, 2.0, -1.0, 1.0];

    pub fn new(c: f64, delta: f64, t_final: f64) -> Result<Self> {
        if !(delta > 0.0 && t_final > 0.0 && c.is_finite()) {
            return invalid(format!("need delta > 0, T > 0; got delta={delta}, T={t_final}"));
        }
        Ok(Self { c, delta, t_final })
    }

    fn arg(&self, p: Point, t: f64) -> f64 {
        (2.0 * (p[0] - self.c * t) - (5.0 * p[1]).sin()) / self.delta
    }

    /// `∂ₜφ`.
    pub fn time_derivative(&self, p: Point, t: f64) -> f64 {
        let th = self.arg(p, t).tanh();
        (1.0 - th * th) * (-2.0 * self.c / self.delta)
    }

    /// `Δφ`.
    pub fn laplacian(&self, p: Point, t: f64) -> f64 {
        let th = self.arg(p, t).tanh();
        let sech2 = 1.0 - th * th;
        let (sy, cy) = (5.0 * p[1]).sin_cos();
        let sx = 2.0 / self.delta;
        let syy = 5.0 * cy / self.delta;
        sech2 * (-2.0 * th * (sx * sx + syy * syy) + 25.0 * sy / self.delta)
    }
}

impl HeatProblem for MmsProblem {
    fn reference(&self, p: Point, t: f64) -> f64 {
        self.arg(p, t).tanh()
    }

    fn source(&self, p: Point, t: f64) -> f64 {
        self.laplacian(p, t) - self.time_derivative(p, t)
    }
}

/// A heat problem from two closures.
pub struct ClosureProblem<R, S> {
    pub reference: R,
    pub source: S,
}

impl<R: Fn(Point, f64) -> f64, S: Fn(Point, f64) -> f64> HeatProblem for ClosureProblem<R, S> {
    fn reference(&self, p: Point, t: f64) -> f64 {
        (self.reference)(p, t)
    }

    fn source(&self, p: Point, t: f64) -> f64 {
        (self.source)(p, t)
    }
}

fn bary_point(mesh: &SimplicialMesh, tri: [usize; 3], l: &[f64; 3]) -> Point {
    let (a, b, c) = (mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
    [l[0] * a[0] + l[1] * b[0] + l[2] * c[0], l[0] * a[1] + l[1] * b[1] + l[2] * c[1]]
}

/// Consistent P1 mass and stiffness matrices of a mesh.
#[derive(Clone, Debug)]
pub struct Operators {
    mesh: Arc<SimplicialMesh>,
    pub mass: CsrMatrix,
    pub stiffness: CsrMatrix,
}

impl Operators {
    pub fn assemble(mesh: Arc<SimplicialMesh>) -> Result<Self> {
        let mut mass = CsrMatrix::zeros_on(&mesh);
        let mut stiffness = CsrMatrix::zeros_on(&mesh);
        for t in 0..mesh.num_triangles() {
            let tri = mesh.triangle(t);
            let area = mesh.area(t);
            if !(area > 0.0 && area.is_finite()) {
                return Err(Error::Assembly(t));
            }
            let p = tri.map(|v| mesh.vertex(v));
            // ∇λᵢ = (y_j − y_k, x_k − x_j) / 2|K| for cyclic (i, j, k).
            let grad: [[f64; 2]; 3] = std::array::from_fn(|i| {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                [(p[j][1] - p[k][1]) / (2.0 * area), (p[k][0] - p[j][0]) / (2.0 * area)]
            });
            for i in 0..3 {
                for j in 0..3 {
                    let m = if i == j { area / 6.0 } else { area / 12.0 };
                    mass.add(tri[i], tri[j], m);
                    let k = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
                    stiffness.add(tri[i], tri[j], k);
                }
            }
        }
        Ok(Self { mesh, mass, stiffness })
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    /// `Fᵢ = ∫ f ψᵢ` with the degree-4 rule.
    pub fn load_vector(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; self.mesh.num_vertices()];
        for t in 0..self.mesh.num_triangles() {
            let tri = self.mesh.triangle(t);
            let area = self.mesh.area(t);
            for (w, l) in DEGREE4.iter() {
                let fv = f(bary_point(&self.mesh, tri, l)) * w * area;
                for k in 0..3 {
                    out[tri[k]] += fv * l[k];
                }
            }
        }
        out
    }

    /// Solves `(a₀M + K) u = rhs` with `u = g` on boundary vertices,
    /// eliminating the Dirichlet columns symmetrically. `u` holds the initial
    /// guess on entry.
    fn solve_dirichlet(&self, a0: f64, rhs: &[f64], g: impl Fn(Point) -> f64, u: &mut [f64]) -> Result<usize> {
        let mesh = &self.mesh;
        let n = mesh.num_vertices();
        let fixed: Vec<bool> = (0..n).map(|v| mesh.is_boundary_vertex(v)).collect();
        let mut b = rhs.to_vec();
        for v in 0..n {
            if fixed[v] {
                u[v] = g(mesh.vertex(v));
            }
        }
        for i in 0..n {
            if fixed[i] {
                b[i] = u[i];
                continue;
            }
            for ((j, m), (_, k)) in self.mass.row(i).zip(self.stiffness.row(i)) {
                if fixed[j] {
                    b[i] -= (a0 * m + k) * u[j];
                }
            }
        }
        let diag: Vec<f64> = self
            .mass
            .diagonal()
            .iter()
            .zip(self.stiffness.diagonal())
            .zip(&fixed)
            .map(|((m, k), &f)| if f { 1.0 } else { a0 * m + k })
            .collect();
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                y[i] = if fixed[i] {
                    x[i]
                } else {
                    self.mass
                        .row(i)
                        .zip(self.stiffness.row(i))
                        .filter(|((j, _), _)| !fixed[*j])
                        .map(|((j, m), (_, k))| (a0 * m + k) * x[j])
                        .sum()
                };
            }
        };
        let max_iter = (10.0 * (n as f64).sqrt()).ceil() as usize;
        pcg(apply, &diag, &b, u, SOLVER_TOL, max_iter)
    }
}

/// Solution history for BDF2.
#[derive(Clone, Debug)]
pub struct TimeState {
    pub u: ScalarField,
    /// Solution one step back; `None` before the first step.
    pub u_prev: Option<ScalarField>,
    pub t: f64,
    /// Size of the step that produced `u` (0 before the first step).
    pub last_dt: f64,
}

impl TimeState {
    /// The reference solution sampled at `t`, without history.
    pub fn initial(mesh: Arc<SimplicialMesh>, prob: &impl HeatProblem, t: f64) -> Self {
        Self { u: ScalarField::from_fn(mesh, |p| prob.reference(p, t)), u_prev: None, t, last_dt: 0.0 }
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        self.u.mesh()
    }
}

/// One variable-step BDF2 (or BDF1 when `omega` is `None`) solve from
/// `u_n` (and `u_nm1`) to `t_new = t_n + dt`.
fn bdf_solve(
    ops: &Operators,
    prob: &impl HeatProblem,
    u_n: &[f64],
    u_nm1: Option<(&[f64], f64)>,
    dt: f64,
    t_new: f64,
) -> Result<Vec<f64>> {
    // u' ≈ a₀ uⁿ⁺¹ − a₁ uⁿ − a₂ uⁿ⁻¹ with ω = dt / dt_prev.
    let (a0, a1, a2) = match u_nm1 {
        None => (1.0 / dt, 1.0 / dt, 0.0),
        Some((_, omega)) => (
            (1.0 + 2.0 * omega) / ((1.0 + omega) * dt),
            (1.0 + omega) / dt,
            -omega * omega / ((1.0 + omega) * dt),
        ),
    };
    let hist: Vec<f64> = match u_nm1 {
        None => u_n.iter().map(|u| a1 * u).collect(),
        Some((prev, _)) => u_n.iter().zip(prev).map(|(u, p)| a1 * u + a2 * p).collect(),
    };
    let f = ops.load_vector(|p| prob.source(p, t_new));
    let rhs: Vec<f64> = ops.mass.mul_vec(&hist).iter().zip(&f).map(|(m, f)| m - f).collect();
    let mut u = u_n.to_vec();
    ops.solve_dirichlet(a0, &rhs, |p| prob.reference(p, t_new), &mut u)?;
    Ok(u)
}

/// Advances `state` by `dt`. Without history, a BDF1 step of `dt/10` is
/// followed by a variable-step BDF2 step of `9dt/10`; afterwards steps use
/// variable-step BDF2 with the ratio to the previous step.
pub fn step_bdf2(state: &TimeState, ops: &Operators, prob: &impl HeatProblem, dt: f64) -> Result<TimeState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    if state.mesh().id() != ops.mesh().id() {
        return invalid("state and operators live on different meshes");
    }
    let mesh = ops.mesh().clone();
    let u_n = state.u.values();
    let (prev, cur, last_dt) = match &state.u_prev {
        None => {
            let k0 = dt / 10.0;
            let u1 = bdf_solve(ops, prob, u_n, None, k0, state.t + k0)?;
            let k1 = dt - k0;
            let u2 = bdf_solve(ops, prob, &u1, Some((u_n, k1 / k0)), k1, state.t + dt)?;
            (u1, u2, k1)
        }
        Some(prev) => {
            let omega = dt / state.last_dt;
            let u = bdf_solve(ops, prob, u_n, Some((prev.values(), omega)), dt, state.t + dt)?;
            (u_n.to_vec(), u, dt)
        }
    };
    Ok(TimeState {
        u: ScalarField::new(mesh.clone(), cur)?,
        u_prev: Some(ScalarField::new(mesh, prev)?),
        t: state.t + dt,
        last_dt,
    })
}

/// Runs `n_t` constant steps from `state.t` to `t1`, sampling `|H|` of the
/// solution at the start and after every step.
pub fn solve_interval(
    ops: &Operators,
    recovery: &PatchRecovery,
    state: TimeState,
    t1: f64,
    n_t: usize,
    prob: &impl HeatProblem,
) -> Result<(TimeState, IntervalHessian)> {
    if n_t == 0 || !(t1 > state.t) {
        return invalid(format!("need n_T ≥ 1 and t1 > t0, got n_T={n_t}, t0={}, t1={t1}", state.t));
    }
    let dt = (t1 - state.t) / n_t as f64;
    let mut ih = IntervalHessian::new(ops.mesh().clone());
    ih.accumulate(&absolute_tensor(&recovery.hessian(&state.u)?), dt)?;
    let mut state = state;
    for _ in 0..n_t {
        state = step_bdf2(&state, ops, prob, dt)?;
        ih.accumulate(&absolute_tensor(&recovery.hessian(&state.u)?), dt)?;
    }
    Ok((state, ih))
}

/// `‖φ_ref(·, t) − u‖_{L²(Ω)}` with the given rule on every element.
pub fn l2_error_with(u: &ScalarField, prob: &impl HeatProblem, t: f64, rule: &Rule) -> f64 {
    let mesh = u.mesh();
    let vals = u.values();
    let mut acc = 0.0;
    for tri_id in 0..mesh.num_triangles() {
        let tri = mesh.triangle(tri_id);
        let area = mesh.area(tri_id);
        for (w, l) in rule {
            let uh = l[0] * vals[tri[0]] + l[1] * vals[tri[1]] + l[2] * vals[tri[2]];
            let e = prob.reference(bary_point(mesh, tri, l), t) - uh;
            acc += w * area * e * e;
        }
    }
    acc.sqrt()
}

pub fn l2_error(u: &ScalarField, prob: &impl HeatProblem, t: f64) -> f64 {
    l2_error_with(u, prob, t, &DEGREE4)
}

/// `E = Σⱼ spanⱼ ‖φ_ref(·, tⱼ) − uⱼ‖_{L²}` over `(uⱼ, tⱼ, spanⱼ)` triples,
/// where `spanⱼ = n_T Δt` is the length of interval `j`.
pub fn error_l1l2<'a>(ends: impl IntoIterator<Item = (&'a ScalarField, f64, f64)>, prob: &impl HeatProblem) -> f64 {
    ends.into_iter().map(|(u, t, span)| span * l2_error(u, prob, t)).sum()
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn rect(n: usize, m: usize, b: [f64; 4]) -> Arc<SimplicialMesh> {
        Arc::new(SimplicialMesh::structured_rect(n, m, b).unwrap())
    }

    #[test]
    fn mms_reference_values() {
        let prob = MmsProblem::default();
        for &(y, t) in &[(0.3, 0.0), (-0.7, 0.4), (0.1, 0.9)] {
            let x = prob.c * t + (5.0 * y as f64).sin() / 2.0;
            assert!(prob.reference([x, y], t).abs() < 1e-12);
        }
        assert_eq!(prob.reference([1e3, 0.2], 0.5), 1.0);
        assert_eq!(prob.reference([-1e3, 0.2], 0.5), -1.0);
        assert!(MmsProblem::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn mms_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 1e-5;
        for delta in [0.02, 0.5] {
            let prob = MmsProblem { delta, ..MmsProblem::default() };
            for _ in 0..100 {
                // Points within a few widths of the front, where derivatives are O(1/δ²).
                let (y, t, s) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(-2.0..2.0));
                let x = 0.5 * (s * delta + (5.0 * y as f64).sin()) + prob.c * t;
                let f = |x: f64, y: f64, t: f64| prob.reference([x, y], t);
                // Fourth-order centered stencils: the second-order ones carry
                // O(h²/δ⁴) truncation that exceeds the tolerance for steep fronts.
                let d1 = |g: &dyn Fn(f64) -> f64, z: f64| {
                    (-g(z + 2.0 * h) + 8.0 * g(z + h) - 8.0 * g(z - h) + g(z - 2.0 * h)) / (12.0 * h)
                };
                let d2 = |g: &dyn Fn(f64) -> f64, z: f64| {
                    (-g(z + 2.0 * h) + 16.0 * g(z + h) - 30.0 * g(z) + 16.0 * g(z - h) - g(z - 2.0 * h))
                        / (12.0 * h * h)
                };
                let dt_fd = d1(&|s| f(x, y, s), t);
                let lap_fd = d2(&|s| f(s, y, t), x) + d2(&|s| f(x, s, t), y);
                let (dt, lap) = (prob.time_derivative([x, y], t), prob.laplacian([x, y], t));
                assert!((dt - dt_fd).abs() <= 1e-6 * dt.abs(), "∂t {dt} vs {dt_fd}");
                // Cancellation floor of the two second-difference stencils (|φ| ≤ 1).
                let roundoff = 2.0 * 64.0 * f64::EPSILON / (12.0 * h * h);
                assert!((lap - lap_fd).abs() <= 1e-6 * lap.abs() + roundoff, "Δ {lap} vs {lap_fd}");
                assert_eq!(prob.source([x, y], t), lap - dt);
            }
        }
    }

    #[test]
    fn operator_identities() {
        let sq = rect(1, 1, [0.0, 1.0, 0.0, 1.0]);
        let ops = Operators::assemble(sq).unwrap();
        let ones = vec![1.0; 4];
        assert!((ops.mass.quad_form(&ones) - 1.0).abs() < 1e-15);

        let m = rect(7, 5, [-2.0, 2.0, -1.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let ones = vec![1.0; m.num_vertices()];
        assert!(ops.stiffness.mul_vec(&ones).iter().all(|r| r.abs() < 1e-12));
        let x: Vec<f64> = m.vertices().iter().map(|p| p[0]).collect();
        assert!((ops.stiffness.quad_form(&x) - 8.0).abs() < 1e-12);
        // Row sums of the mass matrix are the lumped vertex areas.
        let mut lumped = vec![0.0; m.num_vertices()];
        for t in 0..m.num_triangles() {
            for v in m.triangle(t) {
                lumped[v] += m.area(t) / 3.0;
            }
        }
        for (r, l) in ops.mass.mul_vec(&ones).iter().zip(&lumped) {
            assert!((r - l).abs() < 1e-14);
        }
        // Symmetry.
        for i in 0..m.num_vertices() {
            for (j, a) in ops.stiffness.row(i) {
                assert_eq!(a, ops.stiffness.get(j, i));
                assert_eq!(ops.mass.get(i, j), ops.mass.get(j, i));
            }
        }
    }

    #[test]
    fn constant_steady_state_is_preserved() {
        let m = rect(6, 6, [0.0, 1.0, 0.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let prob = ClosureProblem { reference: |_: Point, _: f64| 0.75, source: |_: Point, _: f64| 0.0 };
        let mut s = TimeState::initial(m, &prob, 0.0);
        for _ in 0..5 {
            s = step_bdf2(&s, &ops, &prob, 0.1).unwrap();
        }
        assert!(s.u.values().iter().all(|u| (u - 0.75).abs() < 1e-12));
        assert!((s.t - 0.5).abs() < 1e-15);
    }

    fn cubic() -> ClosureProblem<impl Fn(Point, f64) -> f64, impl Fn(Point, f64) -> f64> {
        ClosureProblem {
            reference: |p: Point, t: f64| t.powi(3) * (p[0] + p[1]),
            source: |p: Point, t: f64| -3.0 * t * t * (p[0] + p[1]),
        }
    }

    #[test]
    fn startup_reaches_first_step() {
        let m = rect(4, 4, [0.0, 1.0, 0.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let prob = cubic();
        let s = step_bdf2(&TimeState::initial(m, &prob, 0.0), &ops, &prob, 0.2).unwrap();
        assert!((s.t - 0.2).abs() < 1e-15 && (s.last_dt - 0.18).abs() < 1e-15);
        // BDF1 on t³ over [0, 0.02] then BDF2: small but nonzero error.
        let err = l2_error(&s.u, &prob, s.t);
        assert!(err > 0.0 && err < 1e-3, "{err}");
    }

    #[test]
    fn temporal_order_two_on_space_exact_solution() {
        let m = rect(4, 4, [0.0, 1.0, 0.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let prob = cubic();
        let errs: Vec<f64> = [10, 20, 40, 80]
            .iter()
            .map(|&n| {
                let mut s = TimeState::initial(m.clone(), &prob, 0.0);
                for _ in 0..n {
                    s = step_bdf2(&s, &ops, &prob, 1.0 / n as f64).unwrap();
                }
                l2_error(&s.u, &prob, 1.0)
            })
            .collect();
        for w in errs.windows(2) {
            let r = (w[0] / w[1]).log2();
            assert!((r - 2.0).abs() < 0.2, "rate {r} from {errs:?}");
        }
    }

    #[test]
    fn interval_hessian_of_time_constant_solution() {
        let m = rect(8, 8, [0.0, 1.0, 0.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let rec = PatchRecovery::new(m.clone()).unwrap();
        // Harmonic quadratic: steady with zero source, |H| = diag(2, 2).
        let prob = ClosureProblem { reference: |p: Point, _: f64| p[0] * p[0] - p[1] * p[1], source: |_: Point, _: f64| 0.0 };
        let s0 = TimeState::initial(m.clone(), &prob, 0.25);
        let (s, ih) = solve_interval(&ops, &rec, s0, 0.75, 4, &prob).unwrap();
        assert_eq!(ih.steps_seen(), 5);
        assert!((s.t - 0.75).abs() < 1e-15);
        for h in ih.accumulated() {
            assert!((*h - crate::metric::SymMat2::IDENTITY).frobenius() < 1e-8, "{h:?}");
        }
    }

    #[test]
    fn maximum_principle_sanity() {
        let m = rect(16, 8, [-2.0, 2.0, -1.0, 1.0]);
        let ops = Operators::assemble(m.clone()).unwrap();
        let prob = ClosureProblem {
            reference: |p: Point, _: f64| if p[0] < 0.0 { -1.0 } else { 1.0 },
            source: |_: Point, _: f64| 0.0,
        };
        let mut s = TimeState::initial(m, &prob, 0.0);
        for _ in 0..10 {
            s = step_bdf2(&s, &ops, &prob, 0.01).unwrap();
            assert!(s.u.values().iter().all(|u| u.abs() <= 1.1));
        }
    }

    #[test]
    fn spatial_order_two_for_smooth_front() {
        let prob = MmsProblem { delta: 2.0, ..MmsProblem::default() };
        let t1 = 0.05;
        let errs: Vec<f64> = [(8, 4), (16, 8), (32, 16)]
            .iter()
            .map(|&(nx, ny)| {
                let m = rect(nx, ny, MmsProblem::DOMAIN);
                let ops = Operators::assemble(m.clone()).unwrap();
                let mut s = TimeState::initial(m, &prob, 0.0);
                for _ in 0..50 {
                    s = step_bdf2(&s, &ops, &prob, t1 / 50.0).unwrap();
                }
                l2_error(&s.u, &prob, t1)
            })
            .collect();
        for w in errs.windows(2) {
            let r = (w[0] / w[1]).log2();
            assert!((r - 2.0).abs() < 0.2, "rate {r} from {errs:?}");
        }
    }

    #[test]
    fn error_norm_examples() {
        let m = rect(4, 4, [0.0, 1.0, 0.0, 1.0]);
        let lin = ClosureProblem { reference: |p: Point, t: f64| 2.0 * p[0] - p[1] + t, source: |_: Point, _: f64| 0.0 };
        let u = ScalarField::from_fn(m.clone(), |p| lin.reference(p, 0.3));
        assert!(l2_error(&u, &lin, 0.3) < 1e-14);

        // Offset ε over four intervals of length 1/4: E = ε T.
        let eps = 0.01;
        let zero = ClosureProblem { reference: |_: Point, _: f64| 0.0, source: |_: Point, _: f64| 0.0 };
        let u = ScalarField::constant(m, eps);
        let e = error_l1l2((1..=4).map(|j| (&u, j as f64 / 4.0, 0.25)), &zero);
        assert!((e - eps).abs() < 1e-15);
    }

    #[test]
    fn doubling_quadrature_degree_barely_changes_error() {
        let prob = MmsProblem::default();
        let m = rect(64, 32, MmsProblem::DOMAIN);
        let u = ScalarField::from_fn(m, |p| prob.reference(p, 0.3));
        let (e4, e8) = (l2_error(&u, &prob, 0.3), l2_error_with(&u, &prob, 0.3, &degree8()));
        assert!(((e4 - e8) / e8).abs() < 0.05, "{e4} vs {e8}");
    }
}
