use std::sync::Arc;

use super::tensor::{MetricTensor, SymMat2};
use crate::error::{invalid, Result};
use crate::mesh::{Location, Point, SimplicialMesh};

/// Gauss–Legendre nodes on `[0, 1]` for the two-point rule.
const GAUSS2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

/// Two-point Gauss–Legendre approximation of `∫₀¹ √(eᵀ M(t) e) dt`.
pub fn gauss_edge_length(e: [f64; 2], metric_at: impl Fn(f64) -> SymMat2) -> f64 {
    GAUSS2.iter().map(|&t| metric_at(t).quad_form(e).max(0.0).sqrt()).sum::<f64>() * 0.5
}

/// Metric length of the straight edge `e` whose endpoint metrics have
/// logarithms `log0`, `log1`; the metric is interpolated log-Euclidean.
#[inline]
pub fn edge_length_log(e: [f64; 2], log0: &SymMat2, log1: &SymMat2) -> f64 {
    gauss_edge_length(e, |t| (*log0 * (1.0 - t) + *log1 * t).exp())
}

/// Metric volume of a triangle of Euclidean `area` whose vertex metrics have
/// the given `√det`. Vertices weigh 1/12 each and the centroid 3/4, where the
/// log-Euclidean mean gives `√det = (s0 s1 s2)^{1/3}`.
#[inline]
pub fn element_volume_from_sqrt_dets(area: f64, s: [f64; 3]) -> f64 {
    let centroid = (s[0] * s[1] * s[2]).cbrt();
    area * ((s[0] + s[1] + s[2]) / 12.0 + 0.75 * centroid)
}

/// One metric tensor per mesh vertex.
#[derive(Clone, Debug)]
pub struct MetricField {
    mesh: Arc<SimplicialMesh>,
    tensors: Vec<MetricTensor>,
}

impl MetricField {
    pub fn new(mesh: Arc<SimplicialMesh>, tensors: Vec<MetricTensor>) -> Result<Self> {
        if tensors.len() != mesh.num_vertices() {
            return invalid(format!(
                "{} metric tensors for a mesh of {} vertices",
                tensors.len(),
                mesh.num_vertices()
            ));
        }
        Ok(Self { mesh, tensors })
    }

    pub fn uniform(mesh: Arc<SimplicialMesh>, m: MetricTensor) -> Self {
        let tensors = vec![m; mesh.num_vertices()];
        Self { mesh, tensors }
    }

    /// Samples `f` at every vertex.
    pub fn from_fn(mesh: Arc<SimplicialMesh>, f: impl Fn(Point) -> MetricTensor) -> Self {
        let tensors = mesh.vertices().iter().map(|&p| f(p)).collect();
        Self { mesh, tensors }
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn tensors(&self) -> &[MetricTensor] {
        &self.tensors
    }

    pub fn tensor(&self, v: usize) -> MetricTensor {
        self.tensors[v]
    }

    pub fn into_tensors(self) -> Vec<MetricTensor> {
        self.tensors
    }

    /// Metric length of the edge `pq`: two-point Gauss rule on the
    /// log-Euclidean interpolation of the endpoint tensors.
    pub fn edge_length(&self, p: usize, q: usize) -> f64 {
        if p == q {
            return 0.0;
        }
        let (a, b) = (self.mesh.vertex(p), self.mesh.vertex(q));
        let e = [b[0] - a[0], b[1] - a[1]];
        let (ma, mb) = (self.tensors[p], self.tensors[q]);
        if ma == mb {
            return ma.length(e);
        }
        edge_length_log(e, &ma.log(), &mb.log())
    }

    /// `|K|_M = ∫_K √det M`.
    pub fn element_volume(&self, t: usize) -> f64 {
        let tri = self.mesh.triangle(t);
        let s = tri.map(|v| self.tensors[v].sqrt_det());
        element_volume_from_sqrt_dets(self.mesh.area(t), s)
    }

    /// `C(M) = ∫_Ω √det M`.
    pub fn complexity(&self) -> f64 {
        (0..self.mesh.num_triangles()).map(|t| self.element_volume(t)).sum()
    }

    /// Log-Euclidean barycentric interpolation inside a located triangle.
    pub fn interpolate(&self, loc: &Location) -> MetricTensor {
        let tri = self.mesh.triangle(loc.tri);
        let (m0, m1, m2) = (&self.tensors[tri[0]], &self.tensors[tri[1]], &self.tensors[tri[2]]);
        if m0 == m1 && m1 == m2 {
            return *m0;
        }
        MetricTensor::interpolate([(loc.bary[0], m0), (loc.bary[1], m1), (loc.bary[2], m2)])
    }

    /// Metric at an arbitrary point of the domain, walking from `hint`.
    pub fn evaluate(&self, p: Point, hint: usize) -> Result<(MetricTensor, Location)> {
        let loc = self.mesh.locate_point(p, hint)?;
        Ok((self.interpolate(&loc), loc))
    }

    /// Metric quality `4√3 |K|_M / Σ ℓ_M(e)²` of triangle `t`; 1 for a
    /// triangle that is equilateral in the metric, 0 when degenerate.
    pub fn quality(&self, t: usize) -> f64 {
        let [a, b, c] = self.mesh.triangle(t);
        let l2: f64 = [(a, b), (b, c), (c, a)]
            .iter()
            .map(|&(p, q)| self.edge_length(p, q).powi(2))
            .sum();
        let vol = self.element_volume(t);
        if l2 <= 0.0 || vol <= 0.0 {
            return 0.0;
        }
        (4.0 * 3f64.sqrt() * vol / l2).min(1.0)
    }
}

/// `C_st = n_T Σᵢ C(Mᵢ)` for constant time steps.
pub fn spacetime_complexity(fields: &[MetricField], n_t: usize) -> Result<f64> {
    if fields.is_empty() {
        return invalid("space-time complexity needs at least one metric field");
    }
    if n_t == 0 {
        return invalid("n_T must be positive");
    }
    Ok(n_t as f64 * fields.iter().map(MetricField::complexity).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::mesh::BoundaryEdge;
    use crate::metric::SizeSpec;

    fn square(n: usize) -> Arc<SimplicialMesh> {
        Arc::new(SimplicialMesh::structured_rect(n, n, [0.0, 1.0, 0.0, 1.0]).unwrap())
    }

    fn single_triangle(p: [Point; 3]) -> Arc<SimplicialMesh> {
        let boundary = (0..3).map(|k| BoundaryEdge { v: [k, (k + 1) % 3], tag: k as i32 }).collect();
        Arc::new(SimplicialMesh::new(p.to_vec(), vec![[0, 1, 2]], boundary, None).unwrap())
    }

    #[test]
    fn edge_length_examples() {
        let mesh = square(1);
        let id = MetricField::uniform(mesh.clone(), MetricTensor::IDENTITY);
        assert!((id.edge_length(0, 1) - 1.0).abs() < 1e-15);
        assert!((id.edge_length(0, 3) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(id.edge_length(3, 3), 0.0);
        let d = MetricField::uniform(mesh, MetricTensor::new(100.0, 0.0, 1e4).unwrap());
        assert!((d.edge_length(0, 1) - 10.0).abs() < 1e-13);
    }

    fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn edge_quadrature_against_dense_integration() {
        let e = [1.0, 0.0];
        // Linear interpolation of the matrix: ∫₀¹ √(1 + 99t) dt.
        let linear = |t: f64| SymMat2::scaled_identity(1.0 + 99.0 * t);
        let exact_linear = simpson(|t| (1.0 + 99.0 * t).sqrt(), 20_000);
        assert!((exact_linear - 6.7).abs() < 0.03);
        let gauss_linear = gauss_edge_length(e, linear);
        assert!((gauss_linear - exact_linear).abs() / exact_linear < 0.05);

        // Log-Euclidean interpolation, as used by the fields.
        let mesh = square(1);
        let mut t = vec![MetricTensor::IDENTITY; 4];
        t[1] = MetricTensor::new(100.0, 0.0, 100.0).unwrap();
        let field = MetricField::new(mesh, t).unwrap();
        let dense = simpson(|s| 100f64.powf(s).sqrt(), 20_000);
        let got = field.edge_length(0, 1);
        assert!((got - dense).abs() / dense < 0.05, "{got} vs {dense}");
    }

    #[test]
    fn element_volume_examples() {
        let mesh = single_triangle([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let id = MetricField::uniform(mesh.clone(), MetricTensor::IDENTITY);
        assert!((id.element_volume(0) - 0.5).abs() < 1e-15);
        let four = MetricField::uniform(mesh, MetricTensor::new(4.0, 0.0, 4.0).unwrap());
        assert!((four.element_volume(0) - 2.0).abs() < 1e-15);
    }

    /// Midpoint rule on a uniform `n²` sub-triangulation of the element.
    fn dense_volume(field: &MetricField, t: usize, n: usize) -> f64 {
        let mesh = field.mesh();
        let tri = mesh.triangle(t);
        let logs: Vec<SymMat2> = tri.iter().map(|&v| field.tensor(v).log()).collect();
        let sqrt_det_at = |l: [f64; 3]| {
            let m = (logs[0] * l[0] + logs[1] * l[1] + logs[2] * l[2]).exp();
            m.det().sqrt()
        };
        let area = mesh.area(t) / (n * n) as f64;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n - i {
                let (a, b) = (i as f64 * h, j as f64 * h);
                // Upward sub-triangle centroid.
                let l = [a + h / 3.0, b + h / 3.0];
                sum += sqrt_det_at([1.0 - l[0] - l[1], l[0], l[1]]);
                if i + j + 1 < n {
                    let l = [a + 2.0 * h / 3.0, b + 2.0 * h / 3.0];
                    sum += sqrt_det_at([1.0 - l[0] - l[1], l[0], l[1]]);
                }
            }
        }
        sum * area
    }

    #[test]
    fn element_volume_linear_variation_matches_dense_oracle() {
        let mesh = single_triangle([[0.0, 0.0], [0.3, 0.05], [0.1, 0.2]]);
        let field = MetricField::from_fn(mesh, |p| {
            MetricTensor::from_sizes(SizeSpec { h1: 0.01 + 0.1 * p[0], h2: 0.05 + 0.1 * p[1], theta: 0.5 })
                .unwrap()
        });
        let got = field.element_volume(0);
        let want = dense_volume(&field, 0, 400);
        assert!((got - want).abs() / want < 0.01, "{got} vs {want}");
    }

    #[test]
    fn complexity_examples() {
        let unit = square(4);
        assert!((MetricField::uniform(unit.clone(), MetricTensor::IDENTITY).complexity() - 1.0).abs() < 1e-14);
        let h = MetricTensor::isotropic(0.1).unwrap();
        assert!((MetricField::uniform(unit, h).complexity() - 100.0).abs() < 1e-10);
        let rect = Arc::new(SimplicialMesh::structured_rect(8, 4, [-2.0, 2.0, -1.0, 1.0]).unwrap());
        let h = MetricTensor::isotropic(0.01).unwrap();
        assert!((MetricField::uniform(rect, h).complexity() - 80_000.0).abs() < 1e-6);
    }

    #[test]
    fn spacetime_complexity_examples() {
        let unit = square(2);
        let m = MetricTensor::isotropic(0.1).unwrap();
        let f = MetricField::uniform(unit, m);
        let c = f.complexity();
        assert!((spacetime_complexity(&[f.clone()], 10).unwrap() - 1000.0).abs() < 1e-9);
        let four = vec![f.clone(), f.clone(), f.clone(), f];
        assert!((spacetime_complexity(&four, 1).unwrap() - 4.0 * c).abs() < 1e-9);
        assert!(spacetime_complexity(&[], 3).is_err());
    }

    #[test]
    fn quality_examples() {
        let s3 = 3f64.sqrt();
        let eq = single_triangle([[0.0, 0.0], [1.0, 0.0], [0.5, s3 / 2.0]]);
        let q = MetricField::uniform(eq, MetricTensor::IDENTITY).quality(0);
        assert!((q - 1.0).abs() < 1e-9);

        let needle = single_triangle([[0.0, 0.0], [1.0, 0.0], [0.5, 0.02]]);
        let q = MetricField::uniform(needle, MetricTensor::IDENTITY).quality(0);
        // 4√3 · 0.01 / (1 + 2·0.2504) by direct evaluation.
        let direct = 4.0 * s3 * 0.01 / (1.0 + 2.0 * (0.25 + 0.0004));
        assert!((q - direct).abs() < 1e-12 && q < 0.1);

        // Map the unit equilateral triangle through M^{-1/2}.
        let m = MetricTensor::from_sizes(SizeSpec { h1: 0.01, h2: 0.2, theta: PI / 6.0 }).unwrap();
        let inv_sqrt = m.powf(-0.5);
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, s3 / 2.0]].map(|p| inv_sqrt.apply(p));
        let mesh = single_triangle(if signed(&pts) > 0.0 { pts } else { [pts[0], pts[2], pts[1]] });
        let q = MetricField::uniform(mesh, m).quality(0);
        assert!((q - 1.0).abs() < 1e-6, "{q}");
    }

    fn signed(p: &[Point; 3]) -> f64 {
        crate::mesh::signed_area(&p[0], &p[1], &p[2])
    }
}
