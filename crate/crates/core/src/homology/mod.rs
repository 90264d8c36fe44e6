//! Simplicial homology over GF(2).

mod complex;
mod decompose;
pub mod gf2;
mod linking;
mod reduce;

pub use complex::{
    simplex_volume, triangle_area, BoundaryMatrix, ChainZ2, SimplicialComplex, MAX_DIM,
};
pub use decompose::{decompose, exactly_two_violation, mod2_degree, DegreeOutcome};
pub use gf2::Gf2Vec;
pub use linking::{
    linking_obstruction, linking_reduce, obstruction_combination, obstruction_solutions,
    single_equation_solutions, BasisCoords, LinkingClass, OBSTRUCTION_CIRCLES,
};
pub use reduce::{cycle_basis, h1_rank, solve_boundary, solve_with, ColumnReduction};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum HomologyError {
    #[error("chain is not a cycle")]
    NonCycle,
    #[error("cycle is not a boundary in this complex")]
    NotABoundary,
    #[error("fill ({}, {}) does not bound its cycle", j + 1, l + 1)]
    BadBoundary { j: usize, l: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("expected a chain of dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain has {found} entries, complex has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("multiplicity violation: {0}")]
    MultiplicityViolation(String),
}
