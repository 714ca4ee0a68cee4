//! Labelled transition systems, `TX = P_ω(A × X)`.
//!
//! For every tuple of labels `(a_1, ..., a_n)` there is an `n`-ary modality
//! `[a_1, ..., a_n]`. A successor set `Z` lies in `λ(Y_1, ..., Y_n)` iff
//! `Z ⊆ ⋃ {a_i} × Y_i` and `Z` meets every `{a_i} × Y_i`.

use crate::signature::{Functor, FunctorTag, SignatureError};
use crate::state::{StateId, StateSet};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lts {
    /// When present, the only labels permitted in modalities and values.
    labels: Option<Vec<String>>,
}

impl Lts {
    /// An instance accepting any label.
    pub fn open() -> Self {
        Lts { labels: None }
    }

    pub fn with_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.dedup();
        Lts { labels: Some(labels) }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    fn check_label(&self, label: &str) -> Result<(), String> {
        if !is_label(label) {
            return Err(format!("`{label}` is not a valid label"));
        }
        match &self.labels {
            Some(ls) if !ls.iter().any(|l| l == label) => {
                Err(format!("label `{label}` is not declared"))
            }
            _ => Ok(()),
        }
    }
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphanumeric() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// A finite set of `(label, successor)` pairs, sorted, without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LtsValue(Vec<(String, StateId)>);

impl LtsValue {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, StateId)>,
        S: Into<String>,
    {
        let mut pairs: Vec<(String, StateId)> =
            pairs.into_iter().map(|(l, s)| (l.into(), s)).collect();
        pairs.sort();
        pairs.dedup();
        LtsValue(pairs)
    }

    pub fn pairs(&self) -> &[(String, StateId)] {
        &self.0
    }

    pub fn is_deadlock(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LtsModality(pub Vec<String>);

impl Functor for Lts {
    type Value = LtsValue;
    type Modality = LtsModality;

    fn tag(&self) -> FunctorTag {
        FunctorTag::Lts
    }

    fn arity(&self, op: &LtsModality) -> usize {
        op.0.len()
    }

    fn check_modality(&self, op: &LtsModality) -> Result<(), SignatureError> {
        op.0.iter()
            .try_for_each(|l| self.check_label(l))
            .map_err(SignatureError::Modality)
    }

    fn check_value(&self, t: &LtsValue, carrier: usize) -> Result<(), SignatureError> {
        if t.0.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SignatureError::Value("successor pairs not sorted".into()));
        }
        for (label, state) in &t.0 {
            self.check_label(label).map_err(SignatureError::Value)?;
            if *state >= carrier {
                return Err(SignatureError::UnknownState { state: *state, carrier });
            }
        }
        Ok(())
    }

    fn support(&self, t: &LtsValue) -> Vec<StateId> {
        let mut s: Vec<StateId> = t.0.iter().map(|&(_, x)| x).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn raw_apply(&self, op: &LtsModality, args: &[StateId]) -> LtsValue {
        LtsValue::new(op.0.iter().cloned().zip(args.iter().copied()))
    }

    fn raw_contains(&self, op: &LtsModality, t: &LtsValue, args: &[StateSet]) -> bool {
        let covered = t.0.iter().all(|(label, x)| {
            op.0.iter().zip(args).any(|(a, ys)| a == label && ys.contains(*x))
        });
        covered
            && op.0.iter().zip(args).all(|(a, ys)| {
                t.0.iter().any(|(label, x)| a == label && ys.contains(*x))
            })
    }

    fn decompose(&self, t: &LtsValue) -> (LtsModality, Vec<StateId>) {
        let labels = t.0.iter().map(|(l, _)| l.clone()).collect();
        let states = t.0.iter().map(|&(_, x)| x).collect();
        (LtsModality(labels), states)
    }

    fn raw_map(&self, t: &LtsValue, f: &[StateId]) -> LtsValue {
        LtsValue::new(t.0.iter().map(|(l, x)| (l.clone(), f[*x])))
    }

    fn parse_modality(&self, payload: &str) -> Result<LtsModality, String> {
        let payload = payload.trim();
        if payload.is_empty() {
            return Ok(LtsModality(Vec::new()));
        }
        let labels: Vec<String> = payload.split(',').map(|l| l.trim().to_string()).collect();
        for l in &labels {
            self.check_label(l)?;
        }
        Ok(LtsModality(labels))
    }

    fn format_modality(&self, op: &LtsModality) -> String {
        op.0.join(",")
    }
}
