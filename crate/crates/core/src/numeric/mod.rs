//! Occurrence-counting domains: intervals, affine equalities, and their
//! reduced product.

pub mod affine;
pub mod interval;
pub mod lp;
pub mod occ;

pub use affine::{q, AffineSpace, Q};
pub use interval::{Bound, Interval};
pub use lp::{maximize, LpResult};
pub use occ::{CountVar, OccCount};
