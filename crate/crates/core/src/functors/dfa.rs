//! Deterministic automata, `TX = 2 × X^A` over an ordered alphabet `A`.
//!
//! There are two modalities `[0]` and `[1]`, each of arity `|A|`; argument
//! `i` constrains the successor under the `i`-th letter.

use crate::signature::{Functor, FunctorTag, SignatureError};
use crate::state::{StateId, StateSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
}

impl Dfa {
    pub fn new<I, S>(alphabet: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(SignatureError::Modality(format!("duplicate letter `{a}`")));
            }
        }
        Ok(Dfa { alphabet })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DfaValue {
    pub output: bool,
    /// Successor per letter, in alphabet order.
    pub next: Vec<StateId>,
}

/// The output bit of `[0]` / `[1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DfaModality(pub bool);

impl Functor for Dfa {
    type Value = DfaValue;
    type Modality = DfaModality;

    fn tag(&self) -> FunctorTag {
        FunctorTag::Dfa
    }

    fn arity(&self, _op: &DfaModality) -> usize {
        self.alphabet.len()
    }

    fn check_modality(&self, _op: &DfaModality) -> Result<(), SignatureError> {
        Ok(())
    }

    fn check_value(&self, t: &DfaValue, carrier: usize) -> Result<(), SignatureError> {
        if t.next.len() != self.alphabet.len() {
            return Err(SignatureError::Value(format!(
                "expected {} successor(s), found {}",
                self.alphabet.len(),
                t.next.len()
            )));
        }
        match t.next.iter().find(|&&s| s >= carrier) {
            Some(&state) => Err(SignatureError::UnknownState { state, carrier }),
            None => Ok(()),
        }
    }

    fn support(&self, t: &DfaValue) -> Vec<StateId> {
        let mut s = t.next.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn raw_apply(&self, op: &DfaModality, args: &[StateId]) -> DfaValue {
        DfaValue {
            output: op.0,
            next: args.to_vec(),
        }
    }

    fn raw_contains(&self, op: &DfaModality, t: &DfaValue, args: &[StateSet]) -> bool {
        t.output == op.0 && t.next.iter().zip(args).all(|(&x, ys)| ys.contains(x))
    }

    fn decompose(&self, t: &DfaValue) -> (DfaModality, Vec<StateId>) {
        (DfaModality(t.output), t.next.clone())
    }

    fn raw_map(&self, t: &DfaValue, f: &[StateId]) -> DfaValue {
        DfaValue {
            output: t.output,
            next: t.next.iter().map(|&x| f[x]).collect(),
        }
    }

    fn parse_modality(&self, payload: &str) -> Result<DfaModality, String> {
        match payload.trim() {
            "0" => Ok(DfaModality(false)),
            "1" => Ok(DfaModality(true)),
            other => Err(format!("expected `0` or `1` as automaton modality, found `{other}`")),
        }
    }

    fn format_modality(&self, op: &DfaModality) -> String {
        if op.0 { "1" } else { "0" }.to_string()
    }
}
