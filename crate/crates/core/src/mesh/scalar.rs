use std::sync::Arc;

use super::{Point, SimplicialMesh};
use crate::error::{invalid, Result};

/// P1 nodal values bound to a mesh.
#[derive(Clone, Debug)]
pub struct ScalarField {
    mesh: Arc<SimplicialMesh>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(mesh: Arc<SimplicialMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return invalid(format!(
                "{} values for a mesh of {} vertices",
                values.len(),
                mesh.num_vertices()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("scalar field has non-finite values");
        }
        Ok(Self { mesh, values })
    }

    /// Samples `f` at every vertex.
    pub fn from_fn(mesh: Arc<SimplicialMesh>, f: impl Fn(Point) -> f64) -> Self {
        let values = mesh.vertices().iter().map(|&p| f(p)).collect();
        Self { mesh, values }
    }

    pub fn constant(mesh: Arc<SimplicialMesh>, c: f64) -> Self {
        let values = vec![c; mesh.num_vertices()];
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<SimplicialMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `∫_Ω u` for the P1 interpolant.
    pub fn integral(&self) -> f64 {
        (0..self.mesh.num_triangles())
            .map(|t| {
                let tri = self.mesh.triangle(t);
                self.mesh.area(t) * tri.iter().map(|&v| self.values[v]).sum::<f64>() / 3.0
            })
            .sum()
    }
}
