//! Exact computation of the abelianized derived group of Artin groups and
//! two-generator one-relator groups, and finite presentability of their
//! metabelian tops.

pub mod artin;
pub mod freegroup;
pub mod homology;
pub mod laurent;
pub mod metabelian;
pub mod zlinalg;

pub use freegroup::{AbMap, FreeWord, GroupRingElem, NameTable};
pub use laurent::{LaurentPoly, Monomial};
pub use zlinalg::{FgAbelianGroup, IntegerMatrix};
