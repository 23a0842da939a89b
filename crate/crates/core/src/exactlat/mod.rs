//! Exact integer linear algebra: Smith and Hermite forms, ranks, fixed and
//! moved sublattices, quotient invariants, and the sublattice covering test.

mod lattice;
mod matrix;
mod snf;

pub use lattice::{
    covers, fixed_lattice, moved_lattice, Cover, QuotientInvariants, Sublattice,
    COVER_QUOTIENT_LIMIT,
};
pub use matrix::IntMatrix;
pub use snf::{kernel_basis, rank, snf, SmithForm};
