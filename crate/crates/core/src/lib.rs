pub mod design;
pub mod drive;
pub mod error;
pub mod floquet;
pub mod geometry;
pub mod grid;
pub mod interp;
pub mod linalg;
pub mod operators;
pub mod par;
pub mod pipeline;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
