//! Constructions of point sets in `F_p^d` and in integer grids `{1..n}^d`
//! with no `d+1` points on a hyperplane and no `d+2` points on a common
//! `Q`-quadric (the zero set of `Q + f`, `f` of degree at most 1), together
//! with exhaustive exact-arithmetic certificates.
//!
//! The construction takes the affine part of a rational normal curve whose
//! points at infinity are chosen from a rich basis of `Q`.

pub mod field;
pub mod linalg;
pub mod projective;
pub mod quadform;
pub mod curve;
pub mod lift;
pub mod verify;
pub mod cli;
