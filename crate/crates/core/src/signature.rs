//! The contract every functor instance satisfies.
//!
//! A functor instance fixes a family of modalities. Each modality has an
//! arity and is interpreted by a monotone predicate lifting which preserves
//! singletons: applied to singleton arguments `{x_1}, ..., {x_n}` it contains
//! exactly one functor value, the *singleton application* of the modality to
//! `x_1, ..., x_n`. The family is strongly expressive, so every value arises
//! this way; [`Functor::decompose`] picks a canonical witness.
//!
//! Values refer to states by their index in a carrier. All values are kept in
//! a normal form, so value equality is structural equality.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::state::{StateId, StateSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("modality {modality} expects {expected} argument(s), found {found}")]
    Arity {
        modality: String,
        expected: usize,
        found: usize,
    },
    #[error("state index {state} is outside a carrier of {carrier} state(s)")]
    UnknownState { state: StateId, carrier: usize },
    #[error("argument sets range over carriers of different sizes ({0} vs {1})")]
    CarrierMismatch(usize, usize),
    #[error("invalid modality: {0}")]
    Modality(String),
    #[error("malformed functor value: {0}")]
    Value(String),
    #[error("map is undefined on state {0}")]
    PartialMap(StateId),
}

/// Short tag naming a functor family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorTag {
    Dfa,
    Lts,
    Dist,
    Mon,
}

impl FunctorTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FunctorTag::Dfa => "dfa",
            FunctorTag::Lts => "lts",
            FunctorTag::Dist => "dist",
            FunctorTag::Mon => "mon",
        }
    }
}

impl fmt::Display for FunctorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FunctorTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dfa" => Ok(FunctorTag::Dfa),
            "lts" => Ok(FunctorTag::Lts),
            "dist" => Ok(FunctorTag::Dist),
            "mon" => Ok(FunctorTag::Mon),
            other => Err(format!("unknown functor `{other}` (expected dfa, lts, dist or mon)")),
        }
    }
}

/// A functor instance with a strongly expressive family of
/// singleton-preserving monotone modalities.
///
/// The `raw_*` methods assume well-formed input (arity and carrier bounds
/// already checked); the provided methods validate and then delegate.
pub trait Functor: Clone + PartialEq + fmt::Debug {
    type Value: Clone + Eq + Ord + Hash + fmt::Debug;
    type Modality: Clone + Eq + Ord + Hash + fmt::Debug;

    fn tag(&self) -> FunctorTag;

    fn arity(&self, op: &Self::Modality) -> usize;

    /// Rejects modalities that do not belong to this instance's family.
    fn check_modality(&self, op: &Self::Modality) -> Result<(), SignatureError>;

    /// Rejects values that are not in normal form or refer to states outside
    /// a carrier of `carrier` states.
    fn check_value(&self, t: &Self::Value, carrier: usize) -> Result<(), SignatureError>;

    /// The states a value refers to, ascending and without repetition.
    fn support(&self, t: &Self::Value) -> Vec<StateId>;

    fn raw_apply(&self, op: &Self::Modality, args: &[StateId]) -> Self::Value;

    fn raw_contains(&self, op: &Self::Modality, t: &Self::Value, args: &[StateSet]) -> bool;

    /// Canonical `(op, xs)` with `raw_apply(op, xs) == t`.
    fn decompose(&self, t: &Self::Value) -> (Self::Modality, Vec<StateId>);

    /// Functorial action along a total map given as an image table.
    fn raw_map(&self, t: &Self::Value, f: &[StateId]) -> Self::Value;

    fn parse_modality(&self, payload: &str) -> Result<Self::Modality, String>;

    /// Bracket payload, inverse to [`Functor::parse_modality`].
    fn format_modality(&self, op: &Self::Modality) -> String;

    fn check_args(&self, op: &Self::Modality, found: usize) -> Result<(), SignatureError> {
        self.check_modality(op)?;
        let expected = self.arity(op);
        if expected != found {
            return Err(SignatureError::Arity {
                modality: format!("[{}]", self.format_modality(op)),
                expected,
                found,
            });
        }
        Ok(())
    }

    /// The unique `t` with `{t} = λ({x_1}, ..., {x_n})`.
    fn singleton_apply(
        &self,
        op: &Self::Modality,
        args: &[StateId],
        carrier: usize,
    ) -> Result<Self::Value, SignatureError> {
        self.check_args(op, args.len())?;
        if let Some(&state) = args.iter().find(|&&s| s >= carrier) {
            return Err(SignatureError::UnknownState { state, carrier });
        }
        Ok(self.raw_apply(op, args))
    }

    /// Whether `t ∈ λ(A_1, ..., A_n)`.
    fn lifting_contains(
        &self,
        op: &Self::Modality,
        t: &Self::Value,
        args: &[StateSet],
    ) -> Result<bool, SignatureError> {
        self.check_args(op, args.len())?;
        if let Some(first) = args.first() {
            if let Some(other) = args.iter().find(|a| a.universe() != first.universe()) {
                return Err(SignatureError::CarrierMismatch(first.universe(), other.universe()));
            }
            self.check_value(t, first.universe())?;
        }
        Ok(self.raw_contains(op, t, args))
    }

    /// `Tf(t)` for `f` defined on (at least) the support of `t`.
    fn map_value<M>(&self, t: &Self::Value, f: M) -> Result<Self::Value, SignatureError>
    where
        M: Fn(StateId) -> Option<StateId>,
    {
        let support = self.support(t);
        let width = support.last().map_or(0, |&s| s + 1);
        let mut table = vec![0; width];
        for s in support {
            table[s] = f(s).ok_or(SignatureError::PartialMap(s))?;
        }
        Ok(self.raw_map(t, &table))
    }
}
