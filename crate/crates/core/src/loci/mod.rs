pub mod enumerate;
pub mod interp;
pub mod sampler;
pub mod secant;
pub mod zlocus;

pub use enumerate::{enumerate_at_tiny_primes, enumerate_singular, enumerated_dimension, EnumeratedDimension, ENUMERATION_GUARD, TINY_PRIMES};
pub use sampler::{parse_sidecar, singular_dimension, Parameterization, SamplerMode, SingDimEstimate, SingularSampler};
pub use zlocus::{sample_z_locus, LocusEstimate, ZCluster, ZConfig};
pub use secant::{is_secant_linear_check, secant_or_join_dimension, SecantLinearity, TangentSource};
