//! Finite probability distributions with exact rational weights.
//!
//! For weights `p_1, ..., p_n` (positive, summing to one) there is an `n`-ary
//! modality `[p_1, ..., p_n]`. A distribution `μ` lies in `λ(A_1, ..., A_n)`
//! iff mass `p_i` can be sent from each index `i` into `A_i` so that every
//! state `x` receives exactly `μ(x)`. This transportation problem is decided
//! by an exact max-flow computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::flow::FlowNetwork;
use crate::signature::{Functor, FunctorTag, SignatureError};
use crate::state::{StateId, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dist;

/// Parses `p/q` or `p` with `p`, `q` decimal naturals, `q > 0`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !digits(den) {
        return Err(format!("malformed rational `{text}`"));
    }
    let num: BigInt = num.parse().map_err(|_| format!("malformed rational `{text}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("malformed rational `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(BigRational::new(num, den))
}

/// Reduced `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

/// Positive rational weights on finitely many states, summing to one and
/// sorted by state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistValue(Vec<(StateId, BigRational)>);

impl DistValue {
    /// Merges repeated states and drops zero weights; fails unless the
    /// weights are non-negative and sum to one.
    pub fn new<I>(weights: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = (StateId, BigRational)>,
    {
        let mut merged: Vec<(StateId, BigRational)> = Vec::new();
        let mut entries: Vec<(StateId, BigRational)> = weights.into_iter().collect();
        entries.sort_by_key(|(s, _)| *s);
        for (s, w) in entries {
            if w.is_negative() {
                return Err(SignatureError::Value(format!("negative weight {w}")));
            }
            match merged.last_mut() {
                Some((last, acc)) if *last == s => *acc += w,
                _ => merged.push((s, w)),
            }
        }
        merged.retain(|(_, w)| !w.is_zero());
        let total: BigRational = merged.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(SignatureError::Value(format!("weights sum to {total}, not 1")));
        }
        Ok(DistValue(merged))
    }

    pub fn weights(&self) -> &[(StateId, BigRational)] {
        &self.0
    }

    pub fn mass(&self, set: &StateSet) -> BigRational {
        self.0.iter().filter(|(s, _)| set.contains(*s)).map(|(_, w)| w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistModality(pub Vec<BigRational>);

impl DistModality {
    pub fn new(weights: Vec<BigRational>) -> Result<Self, SignatureError> {
        let op = DistModality(weights);
        Dist.check_modality(&op)?;
        Ok(op)
    }
}

/// Whether `p` can be transported onto `mu` along `i -> x` for `x ∈ sets[i]`.
pub fn transport_feasible(p: &[BigRational], mu: &DistValue, sets: &[StateSet]) -> bool {
    // nodes: source, indices 1..=n, support states, sink
    let n = p.len();
    let m = mu.0.len();
    let source = 0;
    let sink = n + m + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    for (i, (pi, set)) in p.iter().zip(sets).enumerate() {
        net.add_edge(source, 1 + i, pi.clone());
        for (j, (x, _)) in mu.0.iter().enumerate() {
            if set.contains(*x) {
                net.add_edge(1 + i, 1 + n + j, pi.clone());
            }
        }
    }
    for (j, (_, w)) in mu.0.iter().enumerate() {
        net.add_edge(1 + n + j, sink, w.clone());
    }
    net.max_flow(source, sink).is_one()
}

impl Functor for Dist {
    type Value = DistValue;
    type Modality = DistModality;

    fn tag(&self) -> FunctorTag {
        FunctorTag::Dist
    }

    fn arity(&self, op: &DistModality) -> usize {
        op.0.len()
    }

    fn check_modality(&self, op: &DistModality) -> Result<(), SignatureError> {
        if let Some(p) = op.0.iter().find(|p| !p.is_positive()) {
            return Err(SignatureError::Modality(format!("weight {p} is not positive")));
        }
        let total: BigRational = op.0.iter().sum();
        if !total.is_one() {
            return Err(SignatureError::Modality(format!("weights sum to {total}, not 1")));
        }
        Ok(())
    }

    fn check_value(&self, t: &DistValue, carrier: usize) -> Result<(), SignatureError> {
        if t.0.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(SignatureError::Value("support not sorted".into()));
        }
        if t.0.iter().any(|(_, w)| !w.is_positive()) {
            return Err(SignatureError::Value("non-positive weight".into()));
        }
        if !t.0.iter().map(|(_, w)| w).sum::<BigRational>().is_one() {
            return Err(SignatureError::Value("weights do not sum to 1".into()));
        }
        match t.0.iter().find(|(s, _)| *s >= carrier) {
            Some(&(state, _)) => Err(SignatureError::UnknownState { state, carrier }),
            None => Ok(()),
        }
    }

    fn support(&self, t: &DistValue) -> Vec<StateId> {
        t.0.iter().map(|(s, _)| *s).collect()
    }

    fn raw_apply(&self, op: &DistModality, args: &[StateId]) -> DistValue {
        DistValue::new(args.iter().copied().zip(op.0.iter().cloned()))
            .expect("modality weights sum to one")
    }

    fn raw_contains(&self, op: &DistModality, t: &DistValue, args: &[StateSet]) -> bool {
        transport_feasible(&op.0, t, args)
    }

    fn decompose(&self, t: &DistValue) -> (DistModality, Vec<StateId>) {
        let weights = t.0.iter().map(|(_, w)| w.clone()).collect();
        let states = t.0.iter().map(|(s, _)| *s).collect();
        (DistModality(weights), states)
    }

    fn raw_map(&self, t: &DistValue, f: &[StateId]) -> DistValue {
        DistValue::new(t.0.iter().map(|(s, w)| (f[*s], w.clone()))).expect("mass is preserved")
    }

    fn parse_modality(&self, payload: &str) -> Result<DistModality, String> {
        let payload = payload.trim();
        let weights = if payload.is_empty() {
            Vec::new()
        } else {
            payload.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?
        };
        DistModality::new(weights).map_err(|e| e.to_string())
    }

    fn format_modality(&self, op: &DistModality) -> String {
        op.0.iter().map(format_rational).collect::<Vec<_>>().join(",")
    }
}
