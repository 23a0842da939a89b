//! Exact tools for multiplicative actions of finite subgroups of `GL_n(Z)` on
//! Laurent polynomial rings over `F_p`, ending in a certified Cohen-Macaulay
//! classifier for the invariant ring.

pub mod error;
pub mod cmclassify;
pub mod corpus;
pub mod exactlat;
pub mod fpcohom;
pub mod laurent;
pub mod matgroup;
pub mod mulaction;
mod par;
pub mod selftest;

pub use error::{Error, Result};
pub use exactlat::{IntMatrix, Sublattice};
pub use matgroup::MatGroup;
