//! Core library for analyzing the symmetry defect of midpoint maps on
//! complete intersections.
//!
//! Given two smooth complete intersections X, Y inside the same affine space,
//! the midpoint map sends a pair of points (x, y) on X x Y to (x + y)/2. The
//! fibers of this map are the sets of chords of X and Y with a prescribed
//! midpoint, and the locus of midpoints where the fiber topology changes (the
//! bifurcation set) is the object this crate computes: the closure of the
//! critical value set, the non-properness contribution at infinity, degree
//! bounds for both, and per-midpoint fiber invariants (degree, branch data,
//! Euler characteristic).
//!
//! The symbolic layer (`poly`, `ideal`, `solve`) is exact: rational
//! arithmetic, Groebner bases with explicit computation budgets, elimination,
//! saturation, dimension and degree of varieties, and zero-dimensional
//! solving with multiplicities. The geometric layer (`variety`, `chord`)
//! builds the midpoint-map constructions on top and mixes exact elimination
//! with controlled floating-point root finding.

pub mod chord;
pub mod ideal;
pub mod poly;
pub mod report;
pub mod seed;
pub mod solve;
pub mod variety;
