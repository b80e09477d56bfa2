//! Rigorous complex arithmetic: magnitudes, balls and root isolation.

pub mod ball;
pub mod mag;
pub mod roots;

pub use ball::{Ball, IntegerTest};
pub use mag::Mag;
pub use roots::{conjugate_pairing, isolate_roots, RootBalls};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("precision exhausted before certification succeeded")]
    PrecisionExhausted,
    #[error("conjugate pairing of roots is ambiguous")]
    PairingAmbiguous,
}
