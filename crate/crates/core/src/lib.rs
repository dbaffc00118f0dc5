//! Exact computations around connectivity of complete intersections:
//! cohomology of twisted differentials on projective space, regularity
//! profiles, Nori degree thresholds, recursive bounds for linear subspaces
//! and Chow-group triviality, and a report assembling them.

pub mod bott;
pub mod bounds;
pub mod cli;
pub mod combinatorics;
pub mod nori;
pub mod report;
