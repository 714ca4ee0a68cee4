//! JSON coalgebra files.
//!
//! ```text
//! {
//!   "functor": "dfa",
//!   "alphabet": ["a","b"],
//!   "states": ["x1","x2"],
//!   "initial": "x1",
//!   "transitions": {
//!     "x1": {"out":1,"next":{"a":"x1","b":"x2"}},
//!     "x2": {"out":0,"next":{"a":"x2","b":"x1"}}
//!   }
//! }
//! ```
//!
//! LTS transitions are lists of `[label, state]` (with an optional `labels`
//! declaration), distributions lists of `["p/q", state]`, neighbourhoods
//! lists of state lists. Anything that normalizes (duplicate pairs, merged
//! weights, non-minimal sets) is normalized on load, so writing a loaded
//! file gives its canonical form.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::coalgebra::{Coalgebra, CoalgebraError};
use crate::functors::dist::{format_rational, parse_rational};
use crate::functors::{Dfa, DfaValue, Dist, DistValue, Lts, LtsValue, Mon, MonValue};
use crate::signature::{FunctorTag, SignatureError};
use crate::state::{Carrier, StateId};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Invalid(msg.into()))
}

/// A functor instance of any of the supported kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFunctor {
    Dfa(Dfa),
    Lts(Lts),
    Dist(Dist),
    Mon(Mon),
}

impl AnyFunctor {
    /// `alphabet` is required for DFAs; `labels` restricts LTS labels.
    pub fn from_options(
        tag: FunctorTag,
        alphabet: Option<Vec<String>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, FormatError> {
        if alphabet.is_some() && tag != FunctorTag::Dfa {
            return invalid(format!("an alphabet only applies to dfa, not {tag}"));
        }
        if labels.is_some() && tag != FunctorTag::Lts {
            return invalid(format!("labels only apply to lts, not {tag}"));
        }
        Ok(match tag {
            FunctorTag::Dfa => match alphabet {
                Some(a) => AnyFunctor::Dfa(Dfa::new(a)?),
                None => return invalid("dfa needs an alphabet"),
            },
            FunctorTag::Lts => AnyFunctor::Lts(labels.map_or_else(Lts::open, Lts::with_labels)),
            FunctorTag::Dist => AnyFunctor::Dist(Dist),
            FunctorTag::Mon => AnyFunctor::Mon(Mon),
        })
    }

    pub fn tag(&self) -> FunctorTag {
        match self {
            AnyFunctor::Dfa(_) => FunctorTag::Dfa,
            AnyFunctor::Lts(_) => FunctorTag::Lts,
            AnyFunctor::Dist(_) => FunctorTag::Dist,
            AnyFunctor::Mon(_) => FunctorTag::Mon,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyCoalgebra {
    Dfa(Coalgebra<Dfa>),
    Lts(Coalgebra<Lts>),
    Dist(Coalgebra<Dist>),
    Mon(Coalgebra<Mon>),
}

impl AnyCoalgebra {
    pub fn functor(&self) -> AnyFunctor {
        match self {
            AnyCoalgebra::Dfa(c) => AnyFunctor::Dfa(c.functor().clone()),
            AnyCoalgebra::Lts(c) => AnyFunctor::Lts(c.functor().clone()),
            AnyCoalgebra::Dist(c) => AnyFunctor::Dist(*c.functor()),
            AnyCoalgebra::Mon(c) => AnyFunctor::Mon(*c.functor()),
        }
    }

    pub fn carrier(&self) -> &Carrier {
        match self {
            AnyCoalgebra::Dfa(c) => c.carrier(),
            AnyCoalgebra::Lts(c) => c.carrier(),
            AnyCoalgebra::Dist(c) => c.carrier(),
            AnyCoalgebra::Mon(c) => c.carrier(),
        }
    }
}

impl From<Coalgebra<Dfa>> for AnyCoalgebra {
    fn from(c: Coalgebra<Dfa>) -> Self {
        AnyCoalgebra::Dfa(c)
    }
}

impl From<Coalgebra<Lts>> for AnyCoalgebra {
    fn from(c: Coalgebra<Lts>) -> Self {
        AnyCoalgebra::Lts(c)
    }
}

impl From<Coalgebra<Dist>> for AnyCoalgebra {
    fn from(c: Coalgebra<Dist>) -> Self {
        AnyCoalgebra::Dist(c)
    }
}

impl From<Coalgebra<Mon>> for AnyCoalgebra {
    fn from(c: Coalgebra<Mon>) -> Self {
        AnyCoalgebra::Mon(c)
    }
}

/// Contents of a coalgebra file.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalgebraFile {
    pub coalgebra: AnyCoalgebra,
    pub initial: Option<StateId>,
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>, FormatError> {
    let Some(items) = v.as_array() else {
        return invalid(format!("{what} must be a list of strings"));
    };
    items
        .iter()
        .map(|s| match s.as_str() {
            Some(s) => Ok(s.to_string()),
            None => invalid(format!("{what} must be a list of strings")),
        })
        .collect()
}

fn state_ref(carrier: &Carrier, v: &Value, at: &str) -> Result<StateId, FormatError> {
    match v.as_str() {
        Some(name) => carrier
            .lookup(name)
            .map_err(|_| FormatError::Invalid(format!("{at}: unknown state `{name}`"))),
        None => invalid(format!("{at}: state names are strings")),
    }
}

fn list<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| FormatError::Invalid(format!("{at}: expected a list")))
}

fn pair<'a>(v: &'a Value, at: &str) -> Result<(&'a Value, &'a Value), FormatError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => invalid(format!("{at}: expected a two-element list")),
    }
}

fn build<F: crate::signature::Functor>(
    functor: F,
    carrier: Carrier,
    transitions: &Map<String, Value>,
    mut value: impl FnMut(&Carrier, &Value, &str) -> Result<F::Value, FormatError>,
) -> Result<Coalgebra<F>, FormatError> {
    if let Some(extra) = transitions.keys().find(|k| carrier.lookup(k).is_err()) {
        return invalid(format!("transitions given for unknown state `{extra}`"));
    }
    let structure = carrier
        .names()
        .iter()
        .map(|name| match transitions.get(name) {
            Some(v) => value(&carrier, v, &format!("state `{name}`")),
            None => invalid(format!("no transitions for state `{name}`")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coalgebra::new(functor, carrier, structure)?)
}

const KEYS: [&str; 6] = ["functor", "alphabet", "labels", "states", "initial", "transitions"];

pub fn read(text: &str) -> Result<CoalgebraFile, FormatError> {
    let doc: Value = serde_json::from_str(text)?;
    let Some(doc) = doc.as_object() else {
        return invalid("a coalgebra file is a JSON object");
    };
    if let Some(key) = doc.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return invalid(format!("unknown field `{key}`"));
    }
    let tag: FunctorTag = match doc.get("functor").and_then(Value::as_str) {
        Some(s) => s.parse().map_err(FormatError::Invalid)?,
        None => return invalid("missing field `functor`"),
    };
    let alphabet = doc.get("alphabet").map(|v| strings(v, "`alphabet`")).transpose()?;
    let labels = doc.get("labels").map(|v| strings(v, "`labels`")).transpose()?;
    let functor = AnyFunctor::from_options(tag, alphabet, labels)?;
    let states = match doc.get("states") {
        Some(v) => strings(v, "`states`")?,
        None => return invalid("missing field `states`"),
    };
    let carrier = Carrier::new(states).map_err(CoalgebraError::from)?;
    let initial = doc
        .get("initial")
        .map(|v| state_ref(&carrier, v, "`initial`"))
        .transpose()?;
    let Some(transitions) = doc.get("transitions").and_then(Value::as_object) else {
        return invalid("missing object field `transitions`");
    };
    let coalgebra = match functor {
        AnyFunctor::Dfa(dfa) => {
            let letters = dfa.alphabet().to_vec();
            AnyCoalgebra::Dfa(build(dfa, carrier, transitions, |carrier, v, at| {
                let Some(obj) = v.as_object() else {
                    return invalid(format!("{at}: expected {{\"out\": 0|1, \"next\": {{...}}}}"));
                };
                if let Some(key) = obj.keys().find(|k| *k != "out" && *k != "next") {
                    return invalid(format!("{at}: unknown field `{key}`"));
                }
                let output = match obj.get("out").and_then(Value::as_u64) {
                    Some(0) => false,
                    Some(1) => true,
                    _ => return invalid(format!("{at}: `out` must be 0 or 1")),
                };
                let Some(next) = obj.get("next").and_then(Value::as_object) else {
                    return invalid(format!("{at}: missing object field `next`"));
                };
                if let Some(extra) = next.keys().find(|k| !letters.contains(k)) {
                    return invalid(format!("{at}: `{extra}` is not in the alphabet"));
                }
                let next = letters
                    .iter()
                    .map(|a| match next.get(a) {
                        Some(s) => state_ref(carrier, s, at),
                        None => invalid(format!("{at}: no successor for letter `{a}`")),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(DfaValue { output, next })
            })?)
        }
        AnyFunctor::Lts(lts) => AnyCoalgebra::Lts(build(lts, carrier, transitions, |carrier, v, at| {
            let pairs = list(v, at)?
                .iter()
                .map(|p| {
                    let (label, state) = pair(p, at)?;
                    let Some(label) = label.as_str() else {
                        return invalid(format!("{at}: labels are strings"));
                    };
                    Ok((label.to_string(), state_ref(carrier, state, at)?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LtsValue::new(pairs))
        })?),
        AnyFunctor::Dist(dist) => AnyCoalgebra::Dist(build(dist, carrier, transitions, |carrier, v, at| {
            let weights = list(v, at)?
                .iter()
                .map(|p| {
                    let (w, state) = pair(p, at)?;
                    let Some(w) = w.as_str() else {
                        return invalid(format!("{at}: weights are strings \"p/q\""));
                    };
                    let w = parse_rational(w).map_err(|e| FormatError::Invalid(format!("{at}: {e}")))?;
                    Ok((state_ref(carrier, state, at)?, w))
                })
                .collect::<Result<Vec<_>, _>>()?;
            DistValue::new(weights).map_err(|e| FormatError::Invalid(format!("{at}: {e}")))
        })?),
        AnyFunctor::Mon(mon) => AnyCoalgebra::Mon(build(mon, carrier, transitions, |carrier, v, at| {
            let sets = list(v, at)?
                .iter()
                .map(|s| list(s, at)?.iter().map(|x| state_ref(carrier, x, at)).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Ok(MonValue::new(sets))
        })?),
    };
    Ok(CoalgebraFile { coalgebra, initial })
}

fn names(carrier: &Carrier, xs: impl IntoIterator<Item = StateId>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::from(carrier.name(x))).collect())
}

/// Canonical text of a coalgebra file: fixed field order, one state per
/// line in `transitions`.
pub fn write(file: &CoalgebraFile) -> String {
    let carrier = file.coalgebra.carrier();
    let compact = |v: &Value| serde_json::to_string(v).expect("JSON values serialize");
    let mut head: Vec<(&str, Value)> = vec![("functor", Value::from(file.coalgebra.functor().tag().as_str()))];
    let values: Vec<Value> = match &file.coalgebra {
        AnyCoalgebra::Dfa(c) => {
            let letters = c.functor().alphabet();
            head.push(("alphabet", letters.iter().map(|a| Value::from(a.as_str())).collect()));
            c.structure()
                .iter()
                .map(|t| {
                    let mut next = Map::new();
                    for (a, &y) in letters.iter().zip(&t.next) {
                        next.insert(a.clone(), Value::from(carrier.name(y)));
                    }
                    let mut obj = Map::new();
                    obj.insert("out".into(), Value::from(u8::from(t.output)));
                    obj.insert("next".into(), Value::Object(next));
                    Value::Object(obj)
                })
                .collect()
        }
        AnyCoalgebra::Lts(c) => {
            if let Some(labels) = c.functor().labels() {
                head.push(("labels", labels.iter().map(|a| Value::from(a.as_str())).collect()));
            }
            c.structure()
                .iter()
                .map(|t| {
                    t.pairs()
                        .iter()
                        .map(|(a, y)| Value::Array(vec![Value::from(a.as_str()), Value::from(carrier.name(*y))]))
                        .collect()
                })
                .collect()
        }
        AnyCoalgebra::Dist(c) => c
            .structure()
            .iter()
            .map(|t| {
                t.weights()
                    .iter()
                    .map(|(y, w)| Value::Array(vec![Value::from(format_rational(w)), Value::from(carrier.name(*y))]))
                    .collect()
            })
            .collect(),
        AnyCoalgebra::Mon(c) => c
            .structure()
            .iter()
            .map(|t| t.minimal_sets().iter().map(|s| names(carrier, s.iter().copied())).collect())
            .collect(),
    };
    head.push(("states", names(carrier, carrier.states())));
    if let Some(x) = file.initial {
        head.push(("initial", Value::from(carrier.name(x))));
    }
    let mut out = String::from("{\n");
    for (key, v) in head {
        out.push_str(&format!("  {}: {},\n", compact(&Value::from(key)), compact(&v)));
    }
    out.push_str("  \"transitions\": {");
    for (i, (name, v)) in carrier.names().iter().zip(&values).enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&format!("    {}: {}", compact(&Value::from(name.as_str())), compact(v)));
    }
    out.push_str(if values.is_empty() { "}\n}\n" } else { "\n  }\n}\n" });
    out
}
