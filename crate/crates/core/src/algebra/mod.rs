//! The associative algebra `U_q(f(K))` in PBW normal form `F^a K^b E^c`.

mod center;
mod element;
mod laurent;

use thiserror::Error;

pub use center::{
    casimir, casimir_from_ef, casimir_k_part, center_membership, express_in_omega, has_weight,
    is_central, pbw_monomial_count, pbw_monomials, weight_decompose, OmegaPoly,
};
pub use element::{Algebra, AlgebraElement, Monomial};
pub use laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    MismatchedAlgebras,
    #[error("operation requires f = f_m for some m >= 1")]
    NotQuantumGroupCase,
    #[error("element is not of weight 0: monomial {0} present")]
    NotWeightZero(Monomial),
    #[error("substituting Omega back did not reproduce the input")]
    ReconstructionFailed,
}
