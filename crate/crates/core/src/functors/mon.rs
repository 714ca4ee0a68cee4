//! Finitary monotone neighbourhood systems.
//!
//! A value is an upward-closed family of subsets, represented by its finite
//! antichain of minimal sets. For group sizes `(k_1, ..., k_n)` there is a
//! modality of arity `Σ k_i`; its singleton application to `(x_ij)` is the
//! upward closure of `{{x_i1, ..., x_ik_i} | i = 1..n}`. A family `𝔄` lies in
//! `λ((A_ij))` iff every `⋃_j A_ij` belongs to `𝔄` and every `B ∈ 𝔄` meets
//! all `A_ij` of some group `i`. The second condition is upward closed in `B`,
//! so it is checked on minimal sets only.

use crate::signature::{Functor, FunctorTag, SignatureError};
use crate::state::{StateId, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Mon;

/// Antichain of minimal sets; each set sorted, sets in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MonValue(Vec<Vec<StateId>>);

fn is_subset(a: &[StateId], b: &[StateId]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl MonValue {
    /// The upward closure of `sets`, reduced to its minimal elements.
    pub fn new<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = StateId>,
    {
        let mut sets: Vec<Vec<StateId>> = sets
            .into_iter()
            .map(|s| {
                let mut s: Vec<StateId> = s.into_iter().collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        sets.sort();
        sets.dedup();
        let minimal = sets
            .iter()
            .filter(|s| !sets.iter().any(|o| o != *s && is_subset(o, s)))
            .cloned()
            .collect();
        MonValue(minimal)
    }

    pub fn minimal_sets(&self) -> &[Vec<StateId>] {
        &self.0
    }

    /// Whether `set` belongs to the upward closure.
    pub fn contains_set(&self, set: &StateSet) -> bool {
        self.0.iter().any(|m| m.iter().all(|&x| set.contains(x)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonModality(pub Vec<usize>);

impl MonModality {
    /// Argument index ranges of the groups.
    fn groups(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.0.iter().scan(0, |start, &k| {
            let r = *start..*start + k;
            *start += k;
            Some(r)
        })
    }
}

impl Functor for Mon {
    type Value = MonValue;
    type Modality = MonModality;

    fn tag(&self) -> FunctorTag {
        FunctorTag::Mon
    }

    fn arity(&self, op: &MonModality) -> usize {
        op.0.iter().sum()
    }

    fn check_modality(&self, _op: &MonModality) -> Result<(), SignatureError> {
        Ok(())
    }

    fn check_value(&self, t: &MonValue, carrier: usize) -> Result<(), SignatureError> {
        if MonValue::new(t.0.iter().cloned()) != *t {
            return Err(SignatureError::Value("not a sorted minimal antichain".into()));
        }
        match t.0.iter().flatten().find(|&&s| s >= carrier) {
            Some(&state) => Err(SignatureError::UnknownState { state, carrier }),
            None => Ok(()),
        }
    }

    fn support(&self, t: &MonValue) -> Vec<StateId> {
        let mut s: Vec<StateId> = t.0.iter().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn raw_apply(&self, op: &MonModality, args: &[StateId]) -> MonValue {
        MonValue::new(op.groups().map(|g| args[g].to_vec()))
    }

    fn raw_contains(&self, op: &MonModality, t: &MonValue, args: &[StateSet]) -> bool {
        let universe = args.first().map_or(0, StateSet::universe);
        let unions_belong = op.groups().all(|g| {
            let union = args[g].iter().fold(StateSet::empty(universe), |acc, a| acc.union(a));
            t.0.iter().any(|m| m.iter().all(|&x| union.contains(x)))
        });
        unions_belong
            && t.0.iter().all(|b| {
                op.groups()
                    .any(|g| args[g].iter().all(|a| b.iter().any(|&x| a.contains(x))))
            })
    }

    fn decompose(&self, t: &MonValue) -> (MonModality, Vec<StateId>) {
        let groups = t.0.iter().map(Vec::len).collect();
        (MonModality(groups), t.0.iter().flatten().copied().collect())
    }

    fn raw_map(&self, t: &MonValue, f: &[StateId]) -> MonValue {
        MonValue::new(t.0.iter().map(|m| m.iter().map(|&x| f[x]).collect::<Vec<_>>()))
    }

    fn parse_modality(&self, payload: &str) -> Result<MonModality, String> {
        let payload = payload.trim();
        if payload.is_empty() {
            return Ok(MonModality(Vec::new()));
        }
        payload
            .split(',')
            .map(|k| {
                let k = k.trim();
                k.parse::<usize>()
                    .map_err(|_| format!("group size `{k}` is not a natural number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MonModality)
    }

    fn format_modality(&self, op: &MonModality) -> String {
        op.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}
