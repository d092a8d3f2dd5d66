//! Exact computation in the quantum algebras `U_q(f(K))`.

pub mod cyclo;
pub mod field;
pub mod poly;
pub mod scalar;
pub mod selftest;

pub use cyclo::{cyclotomic_polynomial, Cyclo};
pub use field::Field;
pub use poly::Poly;
pub use scalar::{Scalar, ScalarError};
pub mod algebra;
pub mod expr;
pub mod hyperbolic;
pub mod linalg;
pub mod weight;
pub mod whittaker;
