use std::collections::VecDeque;

use thiserror::Error;

use crate::signature::{Functor, SignatureError};
use crate::state::{Carrier, CarrierError, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error(transparent)]
    Carrier(#[from] CarrierError),
    #[error("structure map has {found} entries for {expected} states")]
    Size { expected: usize, found: usize },
    #[error("state `{state}`: {source}")]
    Value {
        state: String,
        #[source]
        source: SignatureError,
    },
    #[error("coalgebras are over different functor instances")]
    FunctorMismatch,
}

/// A finite coalgebra `(X, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coalgebra<F: Functor> {
    functor: F,
    carrier: Carrier,
    structure: Vec<F::Value>,
}

impl<F: Functor> Coalgebra<F> {
    pub fn new(
        functor: F,
        carrier: Carrier,
        structure: Vec<F::Value>,
    ) -> Result<Self, CoalgebraError> {
        if structure.len() != carrier.len() {
            return Err(CoalgebraError::Size { expected: carrier.len(), found: structure.len() });
        }
        for (x, t) in structure.iter().enumerate() {
            functor.check_value(t, carrier.len()).map_err(|source| CoalgebraError::Value {
                state: carrier.name(x).to_string(),
                source,
            })?;
        }
        Ok(Coalgebra { functor, carrier, structure })
    }

    pub fn functor(&self) -> &F {
        &self.functor
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn step(&self, x: StateId) -> &F::Value {
        &self.structure[x]
    }

    pub fn structure(&self) -> &[F::Value] {
        &self.structure
    }

    /// Disjoint union; left states come first, names get `inl:`/`inr:`
    /// prefixes.
    pub fn coproduct(&self, other: &Coalgebra<F>) -> Result<Coalgebra<F>, CoalgebraError> {
        if self.functor != other.functor {
            return Err(CoalgebraError::FunctorMismatch);
        }
        let offset = self.len();
        let names = self
            .carrier
            .names()
            .iter()
            .map(|n| format!("inl:{n}"))
            .chain(other.carrier.names().iter().map(|n| format!("inr:{n}")));
        let shift: Vec<StateId> = (0..other.len()).map(|y| y + offset).collect();
        let structure = self
            .structure
            .iter()
            .cloned()
            .chain(other.structure.iter().map(|t| self.functor.raw_map(t, &shift)))
            .collect();
        Ok(Coalgebra {
            functor: self.functor.clone(),
            carrier: Carrier::new(names)?,
            structure,
        })
    }

    /// States reachable from `root` (breadth-first, `root` first).
    pub fn reachable(&self, root: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in self.functor.support(&self.structure[x]) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        order
    }
}

/// A coalgebra with a distinguished state.
#[derive(Debug, Clone, PartialEq)]
pub struct Pointed<F: Functor> {
    pub coalgebra: Coalgebra<F>,
    pub state: StateId,
}
