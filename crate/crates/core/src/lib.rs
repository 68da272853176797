//! Anisotropic mesh adaptation for unsteady problems with the global
//! transient fixed-point method.
//!
//! The crate solves a scalar heat problem with P1 finite elements and BDF2,
//! recovers Hessians by polynomial preserving recovery, builds one optimal
//! metric per time sub-interval and regenerates quasi-unit anisotropic meshes
//! with local remeshing operations.

pub mod adapt;
pub mod driver;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod metric;
pub mod recovery;
pub mod transfer;
pub mod transient;

pub use driver::{global_fixed_point, FixedPointConfig, RunResult};
pub use error::{Error, Result};
pub use mesh::{BoundaryEdge, Location, Point, SimplicialMesh};
pub use metric::{MetricField, MetricTensor, SizeSpec, SymMat2};
pub use recovery::{PatchRecovery, TensorField, VectorField};
