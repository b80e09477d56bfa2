//! Integer polynomials and the q-Weil polynomial layer.

pub mod factor;
pub mod modp;
pub mod poly;
pub mod weil;

pub use factor::{factor_over_z, is_irreducible, squarefree_decomposition};
pub use modp::FpPoly;
pub use poly::IntPolynomial;
pub use weil::{
    double_real_roots, frobenius_decompose, honda_tate_e, passes_trace_test, trace_polynomial, validate_weil,
    FrobeniusDecomposition, WeilPolynomial,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntPolyError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field exponent must be positive")]
    BadExponent,
    #[error("root {index} ({root}) is off the circle: |root|^2 in [{}, {}]", modulus_sq.0, modulus_sq.1)]
    RootOffCircle { index: usize, root: String, modulus_sq: (f64, f64) },
    #[error("factor {0} fails the exact Weil check")]
    NotWeil(String),
    #[error("root isolation failed")]
    RootIsolationFailed,
    #[error("trace polynomial needs an even-degree symmetric input")]
    OddDegreeWithoutRealHandling,
    #[error("polynomials live over different fields")]
    IncompatibleFields,
}
