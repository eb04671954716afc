pub mod classify;
pub mod error;
pub mod families;
pub mod field;
pub mod hypersurface;
pub mod linalg;
pub mod loci;
pub mod poly;

pub use error::{Error, Result};
