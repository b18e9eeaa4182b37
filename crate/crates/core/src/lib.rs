//! Exact computation with G-quadratic forms over F_p(t).

pub mod algebra;
pub mod construct;
pub mod csa;
pub mod error;
pub mod funcfield;
pub mod grpalg;
pub mod hermitian;
pub mod linalg;
pub mod quadform;

pub use error::{Error, Result};
