//! Polynomial preserving recovery of nodal gradients and Hessians.
//!
//! Each vertex owns a patch of nearby vertices; a quadratic is fitted to the
//! nodal values by least squares in patch-local scaled coordinates, and its
//! gradient at the vertex is the recovered gradient. The fit is linear in
//! the data, so it is precomputed once per mesh as two stencils per vertex.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mesh::{ScalarField, SimplicialMesh};
use crate::metric::SymMat2;

/// Cholesky pivot ratio above which the normal equations are abandoned for a
/// pivoted QR of the design matrix.
const CHOLESKY_RATIO_LIMIT: f64 = 1e12;
/// Relative size of the last pivoted-QR diagonal entry under which the
/// quadratic fit is declared rank-deficient.
const RANK_TOL: f64 = 1e-10;

/// Per-vertex gradient values.
#[derive(Clone, Debug)]
pub struct VectorField {
    mesh: Arc<SimplicialMesh>,
    values: Vec<[f64; 2]>,
}

impl VectorField {
    pub fn new(mesh: Arc<SimplicialMesh>, values: Vec<[f64; 2]>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return Err(Error::InvalidArgument(format!(
                "vector field has {} values for {} vertices",
                values.len(),
                mesh.num_vertices()
            )));
        }
        if values.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("vector field has non-finite entries".into()));
        }
        Ok(Self { mesh, values })
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }
}

/// Per-vertex symmetric 2×2 tensors.
#[derive(Clone, Debug)]
pub struct TensorField {
    mesh: Arc<SimplicialMesh>,
    values: Vec<SymMat2>,
}

impl TensorField {
    pub fn new(mesh: Arc<SimplicialMesh>, values: Vec<SymMat2>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return Err(Error::InvalidArgument(format!(
                "tensor field has {} values for {} vertices",
                values.len(),
                mesh.num_vertices()
            )));
        }
        if values.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidArgument("tensor field has non-finite entries".into()));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<SimplicialMesh>) -> Self {
        let n = mesh.num_vertices();
        Self { mesh, values: vec![SymMat2::ZERO; n] }
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[SymMat2] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [SymMat2] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<SymMat2> {
        self.values
    }
}

/// `P|Λ|Pᵀ` at every vertex.
pub fn absolute_tensor(t: &TensorField) -> TensorField {
    TensorField { mesh: t.mesh.clone(), values: t.values.iter().map(SymMat2::abs).collect() }
}

/// The vertex plus its 1-ring, grown ring by ring until it holds at least 6
/// vertices.
pub fn build_patch(mesh: &SimplicialMesh, v: usize) -> Result<Vec<usize>> {
    let mut rings = 1;
    let mut patch = mesh.ring(v, rings);
    while patch.len() < 6 {
        rings += 1;
        let grown = mesh.ring(v, rings);
        if grown.len() == patch.len() {
            return Err(Error::InsufficientPatch(v));
        }
        patch = grown;
    }
    Ok(patch)
}

#[derive(Clone, Debug)]
struct Stencil {
    verts: Vec<usize>,
    wx: Vec<f64>,
    wy: Vec<f64>,
}

impl Stencil {
    fn apply(&self, f: &[f64]) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for ((&v, &wx), &wy) in self.verts.iter().zip(&self.wx).zip(&self.wy) {
            g[0] += wx * f[v];
            g[1] += wy * f[v];
        }
        g
    }
}

/// How a patch fit was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    Cholesky,
    PivotedQr,
    /// The quadratic fit was rank-deficient; a linear fit was used instead.
    LinearFallback,
}

/// Rows of the least-squares pseudo-inverse `A⁺` for the ξ and η
/// coefficients of a fit with design matrix `a`. `None` when rank-deficient.
fn pinv_slope_rows(a: &DMatrix<f64>, force_qr: bool) -> Option<(DVector<f64>, DVector<f64>, FitKind)> {
    let ncols = a.ncols();
    if !force_qr {
        let ata = a.transpose() * a;
        if let Some(chol) = ata.clone().cholesky() {
            let d = chol.l_dirty().diagonal();
            let (lo, hi) = d.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            if lo > 0.0 && (hi / lo).powi(2) <= CHOLESKY_RATIO_LIMIT {
                // Rows 1, 2 of (AᵀA)⁻¹ Aᵀ.
                let mut e = DMatrix::zeros(ncols, 2);
                e[(1, 0)] = 1.0;
                e[(2, 1)] = 1.0;
                let rows = chol.solve(&e).transpose() * a.transpose();
                return Some((rows.row(0).transpose(), rows.row(1).transpose(), FitKind::Cholesky));
            }
        }
    }
    let qr = a.clone().col_piv_qr();
    let r = qr.r();
    let k = ncols.min(a.nrows());
    if k < ncols || r[(k - 1, k - 1)].abs() < RANK_TOL * r[(0, 0)].abs() {
        return None;
    }
    let q = qr.q();
    // A P = Q R  ⇒  A⁺ = P R⁻¹ Qᵀ.
    let mut rinv_qt = r.solve_upper_triangular(&q.transpose())?;
    qr.p().inv_permute_rows(&mut rinv_qt);
    Some((rinv_qt.row(1).transpose(), rinv_qt.row(2).transpose(), FitKind::PivotedQr))
}

fn fit_stencil(mesh: &SimplicialMesh, v: usize, force_qr: bool) -> Result<(Stencil, FitKind)> {
    let verts = build_patch(mesh, v)?;
    let c = mesh.vertex(v);
    let local: Vec<[f64; 2]> = verts.iter().map(|&w| {
        let p = mesh.vertex(w);
        [p[0] - c[0], p[1] - c[1]]
    }).collect();
    let radius = local.iter().map(|d| d[0].hypot(d[1])).fold(0.0, f64::max);
    let n = verts.len();
    let quad = DMatrix::from_fn(n, 6, |i, j| {
        let (x, y) = (local[i][0] / radius, local[i][1] / radius);
        [1.0, x, y, x * x, x * y, y * y][j]
    });
    let (rx, ry, kind) = match pinv_slope_rows(&quad, force_qr) {
        Some(fit) => fit,
        None => {
            let lin = quad.columns(0, 3).into_owned();
            let (rx, ry, _) = pinv_slope_rows(&lin, force_qr).ok_or(Error::InsufficientPatch(v))?;
            (rx, ry, FitKind::LinearFallback)
        }
    };
    let stencil = Stencil {
        verts,
        wx: rx.iter().map(|w| w / radius).collect(),
        wy: ry.iter().map(|w| w / radius).collect(),
    };
    Ok((stencil, kind))
}

/// Precomputed recovery stencils for one mesh.
#[derive(Clone, Debug)]
pub struct PatchRecovery {
    mesh: Arc<SimplicialMesh>,
    stencils: Vec<Stencil>,
    kinds: Vec<FitKind>,
}

impl PatchRecovery {
    pub fn new(mesh: Arc<SimplicialMesh>) -> Result<Self> {
        Self::build(mesh, false)
    }

    fn build(mesh: Arc<SimplicialMesh>, force_qr: bool) -> Result<Self> {
        let mut stencils = Vec::with_capacity(mesh.num_vertices());
        let mut kinds = Vec::with_capacity(mesh.num_vertices());
        for v in 0..mesh.num_vertices() {
            let (s, k) = fit_stencil(&mesh, v, force_qr)?;
            stencils.push(s);
            kinds.push(k);
        }
        let fallbacks = kinds.iter().filter(|&&k| k == FitKind::LinearFallback).count();
        if fallbacks > 0 {
            log::warn!("{fallbacks} recovery patches fell back to a linear fit");
        }
        Ok(Self { mesh, stencils, kinds })
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    /// How each vertex's fit was solved.
    pub fn fit_kinds(&self) -> &[FitKind] {
        &self.kinds
    }

    /// `true` where the quadratic fit was used (no linear fallback).
    pub fn full_rank(&self, v: usize) -> bool {
        self.kinds[v] != FitKind::LinearFallback
    }

    fn check(&self, f: &ScalarField) -> Result<()> {
        if f.mesh().id() != self.mesh.id() {
            return Err(Error::InvalidArgument("field lives on a different mesh".into()));
        }
        Ok(())
    }

    fn gradient_values(&self, f: &[f64]) -> Vec<[f64; 2]> {
        self.stencils.iter().map(|s| s.apply(f)).collect()
    }

    pub fn gradient(&self, f: &ScalarField) -> Result<VectorField> {
        self.check(f)?;
        Ok(VectorField { mesh: self.mesh.clone(), values: self.gradient_values(f.values()) })
    }

    /// Recovers the gradient, then recovers each gradient component again and
    /// symmetrizes the result.
    pub fn hessian(&self, f: &ScalarField) -> Result<TensorField> {
        self.check(f)?;
        let g = self.gradient_values(f.values());
        let gx: Vec<f64> = g.iter().map(|g| g[0]).collect();
        let gy: Vec<f64> = g.iter().map(|g| g[1]).collect();
        let values = self
            .stencils
            .iter()
            .map(|s| {
                let dx = s.apply(&gx);
                let dy = s.apply(&gy);
                SymMat2::new(dx[0], 0.5 * (dx[1] + dy[0]), dy[1])
            })
            .collect();
        Ok(TensorField { mesh: self.mesh.clone(), values })
    }
}

pub fn recover_gradient(f: &ScalarField) -> Result<VectorField> {
    PatchRecovery::new(f.mesh().clone())?.gradient(f)
}

pub fn recover_hessian(f: &ScalarField) -> Result<TensorField> {
    PatchRecovery::new(f.mesh().clone())?.hessian(f)
}
