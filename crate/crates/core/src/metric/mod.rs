//! Riemannian metric algebra: tensors, per-vertex fields, lengths, volumes,
//! complexity, intersection, eigenvalue bounding and size gradation.

mod field;
mod gradation;
mod io;
mod tensor;

pub use field::{
    edge_length_log, element_volume_from_sqrt_dets, gauss_edge_length, spacetime_complexity,
    MetricField,
};
pub use gradation::{
    apply_gradation, gradation_violation, GradationReport, GRADATION_TOL, MAX_GRADATION_SWEEPS,
};
pub use io::{load_metric, parse_metric, parse_tensors, save_metric, write_metric, write_tensors};
pub use tensor::{bound_eigenvalues, Eigen2, MetricTensor, SizeSpec, SymMat2};
