//! Exact linear algebra over F_p(t).

mod dense;
mod sparse;

pub use dense::Matrix;
pub use sparse::{axpy, sparse_combination, sparse_from_dense, sparse_scale, sparse_to_dense, Echelon, SparseMatrix, SparseVec};
