//! Carriers (finite, ordered sets of named states) and subsets thereof.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Index of a state in its carrier's declaration order.
pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarrierError {
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

/// A finite carrier. Declaration order is the canonical order used for all
/// tie-breaking.
#[derive(Clone, PartialEq, Eq)]
pub struct Carrier {
    names: Vec<String>,
    index: HashMap<String, StateId>,
}

impl Carrier {
    pub fn new<I, S>(names: I) -> Result<Self, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut carrier = Carrier {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if carrier.index.contains_key(&name) {
                return Err(CarrierError::DuplicateState(name));
            }
            carrier.index.insert(name.clone(), carrier.names.len());
            carrier.names.push(name);
        }
        Ok(carrier)
    }

    /// States named `0`, `1`, ...
    pub fn numbered(n: usize) -> Self {
        Carrier::new((0..n).map(|i| i.to_string())).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, state: StateId) -> &str {
        &self.names[state]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Result<StateId, CarrierError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CarrierError::UnknownState(name.to_string()))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len()
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

/// A subset of a carrier with `universe` states.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet { bits }
    }

    pub fn singleton(universe: usize, state: StateId) -> Self {
        let mut set = StateSet::empty(universe);
        set.insert(state);
        set
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(universe: usize, states: I) -> Self {
        let mut set = StateSet::empty(universe);
        for s in states {
            set.insert(s);
        }
        set
    }

    /// The subset whose members are the set bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        StateSet::from_states(universe, (0..universe).filter(|i| mask >> i & 1 == 1))
    }

    /// Size of the underlying carrier.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, state: StateId) -> bool {
        self.bits.contains(state)
    }

    /// Panics if `state` lies outside the universe.
    pub fn insert(&mut self, state: StateId) {
        self.bits.insert(state);
    }

    pub fn remove(&mut self, state: StateId) {
        self.bits.set(state, false);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        out
    }

    /// Preimage along `f`, where `f[x]` is the image of `x`.
    pub fn preimage(&self, f: &[StateId]) -> StateSet {
        StateSet::from_states(f.len(), (0..f.len()).filter(|&x| self.contains(f[x])))
    }

    /// Names of the members, in carrier order.
    pub fn names<'a>(&'a self, carrier: &'a Carrier) -> impl Iterator<Item = &'a str> + 'a {
        self.iter().map(move |s| carrier.name(s))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
