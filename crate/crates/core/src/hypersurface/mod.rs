//! The cubic hypersurface and its pointwise invariants.

pub mod chart;
pub mod cubic;
pub mod fiber;
pub mod point;

pub use chart::{chart_defect, chart_jacobian, ChartJacobian};
pub use cubic::{restrict_to_subspace, ConeCertificate, CubicHypersurface, DefectEvidence};
pub use fiber::{FiberShape, GaussFiberSample};
pub use point::{FieldPoint, LinearSubspace, ProjectivePoint};
