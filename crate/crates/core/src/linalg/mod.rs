//! Dense complex linear algebra kernels sized for operators on spaces of
//! dimension up to a few dozen.

mod det;
mod eigen;
mod matrix;
mod svd;
mod takagi;

pub use det::det;
pub use eigen::{hermitian_eigen, hermitian_function, hermitian_power, HermitianEigen};
pub use matrix::{inner, vec_norm, CMatrix, C64};
pub use svd::{svd, SvdResult};
pub use takagi::{takagi, Takagi};

pub(crate) use matrix::{complete_orthonormal, ZERO};
