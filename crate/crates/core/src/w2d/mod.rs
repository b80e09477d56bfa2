//! The hyperoctahedral group `W_2d` of signed permutations, its subgroups,
//! labels, and conjugacy relative to a weighting.

mod group;
mod labels;
mod perm;
mod weights;

pub use group::{enumerate_subgroups_of, SignedSubgroup};
pub use labels::{atlas, calibrated_group, enumerate_subgroups, Atlas, SubgroupLabel, CALIBRATION};
pub use perm::{all_elements, SignedPerm};
pub use weights::{canonicalize_rep, w_conjugate, w_stabilizer, Weighting};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum W2dError {
    #[error("image vector is not a signed permutation")]
    NotSignedPermutation,
    #[error("cannot parse cycle notation {0:?}")]
    BadCycleNotation(String),
    #[error("cannot parse subgroup label {0:?}")]
    BadLabel(String),
    #[error("subgroup lattice not supported for d = {0}")]
    UnsupportedDegree(usize),
    #[error("calibration row inconsistent with computed lattice: {0}")]
    CalibrationMismatch(String),
    #[error("invalid weighting: {0}")]
    BadWeighting(String),
}
