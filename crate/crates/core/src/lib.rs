//! Coalgebraic modal expressions over finite coalgebras: parsing,
//! semantics, synthesis and extraction, and behavioural equivalence.

pub mod coalgebra;
pub mod equivalence;
pub mod expr;
pub mod flow;
pub mod format;
pub mod functors;
pub mod kleene;
pub mod sample;
pub mod semantics;
pub mod signature;
pub mod state;

pub use coalgebra::{Coalgebra, CoalgebraError, Pointed};
pub use expr::{Expr, Term, WellFormed};
pub use signature::{Functor, FunctorTag, SignatureError};
pub use state::{Carrier, StateId, StateSet};
