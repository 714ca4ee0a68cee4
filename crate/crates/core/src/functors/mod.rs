//! The concrete functor instances.

pub mod dfa;
pub mod dist;
pub mod lts;
pub mod mon;

pub use dfa::{Dfa, DfaModality, DfaValue};
pub use dist::{Dist, DistModality, DistValue};
pub use lts::{Lts, LtsModality, LtsValue};
pub use mon::{Mon, MonModality, MonValue};
