use std::ops::{Add, Mul, Sub};

use crate::error::{invalid, Result};

/// Symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymMat2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

/// Eigen-decomposition of a symmetric 2×2 matrix, `λ1 ≥ λ2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen2 {
    pub values: [f64; 2],
    /// Angle of the eigenvector of `values[0]`; the second eigenvector is
    /// rotated by +π/2.
    pub angle: f64,
}

impl Eigen2 {
    pub fn v1(&self) -> [f64; 2] {
        [self.angle.cos(), self.angle.sin()]
    }

    pub fn v2(&self) -> [f64; 2] {
        [-self.angle.sin(), self.angle.cos()]
    }

    /// `P diag(f(λ)) Pᵀ`.
    pub fn compose(&self, f: impl Fn(f64) -> f64) -> SymMat2 {
        SymMat2::from_eigen(f(self.values[0]), f(self.values[1]), self.angle)
    }
}

impl SymMat2 {
    pub const IDENTITY: Self = Self { a11: 1.0, a12: 0.0, a22: 1.0 };
    pub const ZERO: Self = Self { a11: 0.0, a12: 0.0, a22: 0.0 };

    pub const fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub const fn diag(a11: f64, a22: f64) -> Self {
        Self { a11, a12: 0.0, a22 }
    }

    pub fn scaled_identity(s: f64) -> Self {
        Self::diag(s, s)
    }

    /// `P diag(l1, l2) Pᵀ` with `P` the rotation by `angle`.
    pub fn from_eigen(l1: f64, l2: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            a11: l1 * c * c + l2 * s * s,
            a12: (l1 - l2) * c * s,
            a22: l1 * s * s + l2 * c * c,
        }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn frobenius(&self) -> f64 {
        (self.a11 * self.a11 + 2.0 * self.a12 * self.a12 + self.a22 * self.a22).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a22.is_finite()
    }

    /// `eᵀ A e`.
    #[inline]
    pub fn quad_form(&self, e: [f64; 2]) -> f64 {
        self.a11 * e[0] * e[0] + 2.0 * self.a12 * e[0] * e[1] + self.a22 * e[1] * e[1]
    }

    /// `A v`.
    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a11 * v[0] + self.a12 * v[1], self.a12 * v[0] + self.a22 * v[1]]
    }

    /// Closed-form eigen-decomposition. The smaller-magnitude eigenvalue is
    /// recovered from the determinant to avoid cancellation.
    pub fn eigen(&self) -> Eigen2 {
        let mean = 0.5 * (self.a11 + self.a22);
        let half_diff = 0.5 * (self.a11 - self.a22);
        let r = half_diff.hypot(self.a12);
        let angle = if r == 0.0 { 0.0 } else { 0.5 * self.a12.atan2(half_diff) };
        let (l1, l2) = if mean >= 0.0 {
            let l1 = mean + r;
            let l2 = if l1 != 0.0 { self.det() / l1 } else { mean - r };
            (l1, l2)
        } else {
            let l2 = mean - r;
            (self.det() / l2, l2)
        };
        Eigen2 { values: [l1, l2.min(l1)], angle }
    }

    pub fn map_eigen(&self, f: impl Fn(f64) -> f64) -> Self {
        self.eigen().compose(f)
    }

    /// `|A| = P |Λ| Pᵀ`.
    pub fn abs(&self) -> Self {
        self.map_eigen(f64::abs)
    }

    /// Matrix exponential.
    pub fn exp(&self) -> Self {
        self.map_eigen(f64::exp)
    }

    /// `A B A` for symmetric `A`, `B`.
    pub fn congruence(&self, b: &Self) -> Self {
        let (a11, a12, a22) = (self.a11, self.a12, self.a22);
        // A·B
        let c11 = a11 * b.a11 + a12 * b.a12;
        let c12 = a11 * b.a12 + a12 * b.a22;
        let c21 = a12 * b.a11 + a22 * b.a12;
        let c22 = a12 * b.a12 + a22 * b.a22;
        // (A·B)·A
        let d11 = c11 * a11 + c12 * a12;
        let d12 = c11 * a12 + c12 * a22;
        let d21 = c21 * a11 + c22 * a12;
        let d22 = c21 * a12 + c22 * a22;
        Self { a11: d11, a12: 0.5 * (d12 + d21), a22: d22 }
    }
}

impl Add for SymMat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a11: self.a11 + o.a11, a12: self.a12 + o.a12, a22: self.a22 + o.a22 }
    }
}

impl Sub for SymMat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a11: self.a11 - o.a11, a12: self.a12 - o.a12, a22: self.a22 - o.a22 }
    }
}

impl Mul<f64> for SymMat2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { a11: self.a11 * s, a12: self.a12 * s, a22: self.a22 * s }
    }
}

/// Target sizes and orientation of a metric: `h1` along the direction at
/// angle `theta`, `h2` orthogonal to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeSpec {
    pub h1: f64,
    pub h2: f64,
    pub theta: f64,
}

/// Symmetric positive-definite 2×2 metric tensor (units 1/length²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricTensor(SymMat2);

impl MetricTensor {
    pub const IDENTITY: Self = Self(SymMat2::IDENTITY);

    /// Checked constructor: requires `m11 > 0` and `m11·m22 − m12² > 0`.
    pub fn new(m11: f64, m12: f64, m22: f64) -> Result<Self> {
        Self::try_from_sym(SymMat2::new(m11, m12, m22))
    }

    pub fn try_from_sym(m: SymMat2) -> Result<Self> {
        if m.is_finite() && m.a11 > 0.0 && m.det() > 0.0 {
            Ok(Self(m))
        } else {
            invalid(format!("matrix {m:?} is not symmetric positive-definite"))
        }
    }

    /// Wraps `m` without checking; callers guarantee positivity.
    pub(crate) fn from_sym_unchecked(m: SymMat2) -> Self {
        debug_assert!(m.a11 > 0.0 && m.det() > 0.0, "not SPD: {m:?}");
        Self(m)
    }

    pub fn isotropic(h: f64) -> Result<Self> {
        Self::from_sizes(SizeSpec { h1: h, h2: h, theta: 0.0 })
    }

    /// Metric with eigenvalues `h1⁻²`, `h2⁻²`; the `h1⁻²` eigenvector points
    /// at angle `theta`.
    pub fn from_sizes(spec: SizeSpec) -> Result<Self> {
        let SizeSpec { h1, h2, theta } = spec;
        if !(h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite() && theta.is_finite()) {
            return invalid(format!("sizes must be positive and finite, got {spec:?}"));
        }
        Self::try_from_sym(SymMat2::from_eigen(h1.powi(-2), h2.powi(-2), theta))
    }

    pub fn m11(&self) -> f64 {
        self.0.a11
    }

    pub fn m12(&self) -> f64 {
        self.0.a12
    }

    pub fn m22(&self) -> f64 {
        self.0.a22
    }

    pub fn as_sym(&self) -> &SymMat2 {
        &self.0
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    pub fn sqrt_det(&self) -> f64 {
        self.0.det().max(0.0).sqrt()
    }

    /// Eigenvalues `λ1 ≥ λ2 > 0` and unit eigenvectors.
    pub fn eigendecompose(&self) -> (f64, f64, [f64; 2], [f64; 2]) {
        let e = self.0.eigen();
        (e.values[0], e.values[1], e.v1(), e.v2())
    }

    /// Sizes `h_i = λ_i^{-1/2}`, smallest first.
    pub fn sizes(&self) -> [f64; 2] {
        let e = self.0.eigen();
        [e.values[0].powf(-0.5), e.values[1].powf(-0.5)]
    }

    /// Length of the vector `e` measured with this (constant) metric.
    #[inline]
    pub fn length(&self, e: [f64; 2]) -> f64 {
        self.0.quad_form(e).max(0.0).sqrt()
    }

    /// Matrix logarithm (symmetric, possibly indefinite).
    pub fn log(&self) -> SymMat2 {
        self.0.map_eigen(|l| l.max(f64::MIN_POSITIVE).ln())
    }

    /// Inverse of [`MetricTensor::log`].
    pub fn exp_of(log: &SymMat2) -> Self {
        Self::from_sym_unchecked(log.exp())
    }

    pub fn scale(&self, s: f64) -> Self {
        debug_assert!(s > 0.0);
        Self(self.0 * s)
    }

    pub fn powf(&self, e: f64) -> SymMat2 {
        self.0.map_eigen(|l| l.powf(e))
    }

    /// Log-Euclidean weighted mean `exp(Σ wᵢ log Mᵢ)`.
    pub fn interpolate<'a>(items: impl IntoIterator<Item = (f64, &'a MetricTensor)>) -> Self {
        let mut acc = SymMat2::ZERO;
        for (w, m) in items {
            acc = acc + m.log() * w;
        }
        Self::exp_of(&acc)
    }

    /// Simultaneous-reduction intersection: the largest metric whose unit
    /// ball lies in the unit balls of both `self` and `other`.
    ///
    /// Computed as `A^{1/2} Q max(Σ, 1) Qᵀ A^{1/2}` where
    /// `A^{-1/2} B A^{-1/2} = Q Σ Qᵀ`.
    ///
    /// The better-conditioned operand is used as the reference, with a
    /// lexicographic tie-break, so the result does not depend on argument
    /// order.
    pub fn intersect(&self, other: &Self) -> Self {
        const EPS: f64 = 1e-12;
        if self == other {
            return *self;
        }
        let (e_self, e_other) = (self.0.eigen(), other.0.eigen());
        let kappa = |e: &Eigen2| e.values[0] / e.values[1];
        let key = |m: &Self| (m.0.a11, m.0.a12, m.0.a22);
        let self_first = match kappa(&e_self).total_cmp(&kappa(&e_other)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => key(self).partial_cmp(&key(other)) != Some(std::cmp::Ordering::Greater),
        };
        let (a, b, ea) = if self_first { (self, other, e_self) } else { (other, self, e_other) };
        let inv_sqrt = ea.compose(|l| l.powf(-0.5));
        let c = inv_sqrt.congruence(&b.0).eigen();
        if c.values[0] <= 1.0 + EPS {
            return *a;
        }
        if c.values[1] >= 1.0 - EPS {
            return *b;
        }
        let sqrt = ea.compose(f64::sqrt);
        let mid = c.compose(|s| s.max(1.0));
        Self::from_sym_unchecked(sqrt.congruence(&mid))
    }

    /// Grows each eigen-size linearly: `h_i + growth`.
    pub fn span(&self, growth: f64) -> Self {
        let e = self.0.eigen();
        let grow = |l: f64| (l.powf(-0.5) + growth).powi(-2);
        Self::from_sym_unchecked(SymMat2::from_eigen(grow(e.values[0]), grow(e.values[1]), e.angle))
    }

    /// `true` if `self ⪰ other` in the Loewner order, up to a relative slack.
    pub fn dominates(&self, other: &Self, rel_tol: f64) -> bool {
        let inv_sqrt = other.0.map_eigen(|l| l.powf(-0.5));
        let c = inv_sqrt.congruence(&self.0).eigen();
        c.values[1] >= 1.0 - rel_tol
    }

    /// Relative Frobenius distance `‖a − b‖ / ‖a‖`.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).frobenius() / self.0.frobenius()
    }
}

/// Clamps the eigenvalues of a symmetric matrix into `[h_max⁻², h_min⁻²]`,
/// keeping its eigenvectors.
pub fn bound_eigenvalues(m: &SymMat2, h_min: f64, h_max: f64) -> Result<MetricTensor> {
    if !(h_min > 0.0 && h_min < h_max && h_max.is_finite()) {
        return invalid(format!("need 0 < h_min < h_max, got h_min={h_min}, h_max={h_max}"));
    }
    if !m.is_finite() {
        return invalid(format!("non-finite tensor {m:?}"));
    }
    let (lo, hi) = (h_max.powi(-2), h_min.powi(-2));
    let e = m.eigen();
    if e.values[1] >= lo && e.values[0] <= hi && m.a11 > 0.0 && m.det() > 0.0 {
        return Ok(MetricTensor(*m));
    }
    Ok(MetricTensor::from_sym_unchecked(e.compose(|l| l.clamp(lo, hi))))
}

impl MetricTensor {
    pub fn bound_eigenvalues(&self, h_min: f64, h_max: f64) -> Result<Self> {
        bound_eigenvalues(&self.0, h_min, h_max)
    }
}
