//! Newton polygons, Galois groups and angle ranks of abelian varieties over
//! finite fields, tied together by weighted permutation representations.

pub mod intpoly;
pub mod numeric;
pub mod linalg;
pub mod newton;
pub mod w2d;
pub mod splitting;
pub mod localfield;
pub mod wpr;
pub mod classify;
pub mod parallel;
