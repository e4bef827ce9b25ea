//! Schubert, Grothendieck and H-polynomials with exact integer arithmetic.
//!
//! The crate builds the polynomials from divided-difference operators, the
//! 0-Hecke algebra, rc-graphs and climbing chains in the Bruhat order, and
//! expands products in the stable Grothendieck basis to obtain K-theoretic
//! Schubert structure constants.

pub mod par;
pub mod perm;
pub mod poly;
pub mod ops;
pub mod basis;
pub mod hecke;
pub mod pipedream;
pub mod chains;
pub mod subst;
pub mod verify;
pub mod cli;
