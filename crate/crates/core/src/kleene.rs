//! Both directions of the correspondence between expressions and finite
//! pointed coalgebras, and the coalgebra structure on expressions.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::coalgebra::{Coalgebra, Pointed};
use crate::expr::{Expr, Term, WellFormed};
use crate::semantics::flatten;
use crate::signature::{Functor, SignatureError};
use crate::state::{Carrier, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KleeneError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("expression is not closed and guarded")]
    NotWellFormed,
    #[error("successor {0} is not in the given carrier")]
    NotInCarrier(String),
}

/// A finite pointed coalgebra whose point is described by `e`: one state
/// per variable of the flattened system, `ξ(z_i)` the singleton application
/// of `L_i`, point `z_0`.
pub fn synthesize<F: Functor>(f: &F, e: &WellFormed<F::Modality>) -> Result<Pointed<F>, KleeneError> {
    let system = flatten(e);
    let n = system.len();
    let structure = system
        .equations
        .iter()
        .map(|(op, args)| f.singleton_apply(op, args, n))
        .collect::<Result<Vec<_>, _>>()?;
    let carrier = Carrier::new(system.vars).expect("flattening yields distinct names");
    let coalgebra = Coalgebra::new(f.clone(), carrier, structure).expect("values built by the functor");
    Ok(Pointed { coalgebra, state: 0 })
}

/// Binder names for extraction: state names that are identifiers, `s<i>`
/// for the rest.
fn binder_names(carrier: &Carrier, states: &[StateId]) -> Vec<String> {
    let valid: BTreeSet<&str> = states
        .iter()
        .map(|&s| carrier.name(s))
        .filter(|n| crate::expr::is_ident(n))
        .collect();
    let mut taken: BTreeSet<String> = valid.iter().map(|s| s.to_string()).collect();
    states
        .iter()
        .map(|&s| {
            let name = carrier.name(s);
            if valid.contains(name) {
                return name.to_string();
            }
            let mut fresh = format!("s{s}");
            while taken.contains(&fresh) {
                fresh.push('\'');
            }
            taken.insert(fresh.clone());
            fresh
        })
        .collect()
}

/// Replaces free occurrences of `var`. Callers guarantee that no binder in
/// `e` captures a free variable of `replacement`.
fn replace<M: Clone>(e: &Expr<M>, var: &str, replacement: &Expr<M>) -> Expr<M> {
    match e {
        Expr::Var(z) if z == var => replacement.clone(),
        Expr::Var(_) => e.clone(),
        Expr::Nu(z, _) if z == var => e.clone(),
        Expr::Nu(z, body) => Expr::nu(z.clone(), replace(body, var, replacement)),
        Expr::Modal(op, args) => {
            Expr::Modal(op.clone(), args.iter().map(|a| replace(a, var, replacement)).collect())
        }
    }
}

fn mentions<M>(e: &Expr<M>, var: &str) -> bool {
    match e {
        Expr::Var(z) => z == var,
        Expr::Nu(z, body) => z != var && mentions(body, var),
        Expr::Modal(_, args) => args.iter().any(|a| mentions(a, var)),
    }
}

/// A characteristic expression for `x`.
///
/// Every reachable state `x_i` contributes the flat equation
/// `x_i = L_i(x_j, ...)` from the decomposition of `ξ(x_i)`; `x` comes
/// first, the others follow in carrier order. Variables are then eliminated
/// from the last to the first by substituting `ν x_i. φ_i` (or `φ_i` when
/// `x_i` does not occur in it) into the earlier equations.
pub fn extract<F: Functor>(c: &Coalgebra<F>, x: StateId) -> WellFormed<F::Modality> {
    let f = c.functor();
    let mut states = c.reachable(x);
    states[1..].sort_unstable();
    let position: HashMap<StateId, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let names = binder_names(c.carrier(), &states);
    let mut bodies: Vec<Expr<F::Modality>> = states
        .iter()
        .map(|&s| {
            let (op, args) = f.decompose(c.step(s));
            let args = args.iter().map(|a| Expr::Var(names[position[a]].clone())).collect();
            Expr::Modal(op, args)
        })
        .collect();
    let close = |name: &str, body: Expr<F::Modality>| {
        if mentions(&body, name) {
            Expr::nu(name, body)
        } else {
            body
        }
    };
    while bodies.len() > 1 {
        let i = bodies.len() - 1;
        let closed = close(&names[i], bodies.pop().expect("nonempty"));
        for body in bodies.iter_mut() {
            if mentions(body, &names[i]) {
                *body = replace(body, &names[i], &closed);
            }
        }
    }
    let root = close(&names[0], bodies.pop().expect("nonempty"));
    WellFormed::new(root).expect("elimination yields a closed guarded expression")
}

/// `ε(e)` over a carrier of closed terms: unfold top-level fixpoints, then
/// apply the exposed modality to the positions of its arguments.
pub fn epsilon_step<F: Functor>(
    f: &F,
    e: &Term<F::Modality>,
    carrier: &[Term<F::Modality>],
) -> Result<F::Value, KleeneError> {
    let (op, args) = e.head().ok_or(KleeneError::NotWellFormed)?;
    let ids = args
        .iter()
        .map(|a| {
            carrier
                .iter()
                .position(|t| t == a)
                .ok_or_else(|| KleeneError::NotInCarrier(a.to_expr().display(f).to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(f.singleton_apply(&op, &ids, carrier.len())?)
}

/// A coalgebra of expressions with the terms its states stand for.
pub type Generated<F> = (Pointed<F>, Vec<Term<<F as Functor>::Modality>>);

/// The subcoalgebra of the expression coalgebra generated by `e`, with the
/// terms it consists of. States are named by their printed expressions;
/// `e` itself is state 0.
pub fn generate_subcoalgebra<F: Functor>(
    f: &F,
    e: &WellFormed<F::Modality>,
) -> Result<Generated<F>, KleeneError> {
    let root = e.term();
    let mut terms = vec![root.clone()];
    let mut index: HashMap<Term<F::Modality>, StateId> = HashMap::from([(root, 0)]);
    let mut steps: Vec<(F::Modality, Vec<StateId>)> = Vec::new();
    while steps.len() < terms.len() {
        let (op, args) = terms[steps.len()].head().ok_or(KleeneError::NotWellFormed)?;
        f.check_args(&op, args.len())?;
        let ids = args
            .into_iter()
            .map(|a| {
                *index.entry(a.clone()).or_insert_with(|| {
                    terms.push(a);
                    terms.len() - 1
                })
            })
            .collect();
        steps.push((op, ids));
    }
    let structure = steps.iter().map(|(op, ids)| f.raw_apply(op, ids)).collect();
    let names: Vec<String> = terms.iter().map(|t| t.to_expr().display(f).to_string()).collect();
    let carrier = Carrier::new(names).expect("distinct terms print distinctly");
    let coalgebra = Coalgebra::new(f.clone(), carrier, structure).expect("values built by the functor");
    Ok((Pointed { coalgebra, state: 0 }, terms))
}
