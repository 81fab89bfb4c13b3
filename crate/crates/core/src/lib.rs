//! Exact Beauville-Bogomolov lattice computations: lattice construction and
//! invariants, wall-divisor enumeration, Kaehler chamber tests, period-domain
//! membership and the mirror involution over Q(sqrt n).

pub mod chambers;
pub mod db;
pub mod enumerate;
pub mod error;
pub mod jsonio;
pub mod lattice;
pub mod mat;
pub mod period;
pub mod scalar;
pub mod walls;

pub use error::{Error, Result};
pub use lattice::{
    Block, BlockKind, Constraint, CVec, ExtVec, IntVec, Lattice, LatticeSpec, QVec, Sublattice,
};
pub use scalar::{rat, rat_int, CScalar, ExtScalar, Int, Rat};
