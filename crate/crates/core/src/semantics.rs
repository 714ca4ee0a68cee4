//! Greatest-fixpoint semantics over finite coalgebras, flattening into
//! systems of flat equations, and the semantics of such systems.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::coalgebra::Coalgebra;
use crate::expr::{Expr, Term, WellFormed};
use crate::signature::{Functor, SignatureError};
use crate::state::StateSet;

/// Interpretation of free variables.
pub type Valuation = BTreeMap<String, StateSet>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("variable {var} is valued over {found} state(s), the coalgebra has {expected}")]
    ValuationSize { var: String, expected: usize, found: usize },
    #[error("expression does not match the coalgebra's functor: {0}")]
    Functor(#[from] SignatureError),
}

fn check_modalities<F: Functor>(f: &F, t: &Term<F::Modality>) -> Result<(), SignatureError> {
    match t {
        Term::Bound(_) | Term::Free(_) => Ok(()),
        Term::Nu(body) => check_modalities(f, body),
        Term::Modal(op, args) => {
            f.check_args(op, args.len())?;
            args.iter().try_for_each(|a| check_modalities(f, a))
        }
    }
}

/// `⟦e⟧` in `c` under `valuation`.
pub fn eval<F: Functor>(
    e: &Expr<F::Modality>,
    c: &Coalgebra<F>,
    valuation: &Valuation,
) -> Result<StateSet, EvalError> {
    eval_term(&Term::from_expr(e), c, valuation)
}

/// `⟦e⟧` for a closed expression.
pub fn eval_closed<F: Functor>(e: &WellFormed<F::Modality>, c: &Coalgebra<F>) -> Result<StateSet, EvalError> {
    eval(e.expr(), c, &Valuation::new())
}

pub fn eval_term<F: Functor>(
    t: &Term<F::Modality>,
    c: &Coalgebra<F>,
    valuation: &Valuation,
) -> Result<StateSet, EvalError> {
    check_modalities(c.functor(), t)?;
    for (var, set) in valuation {
        if set.universe() != c.len() {
            return Err(EvalError::ValuationSize {
                var: var.clone(),
                expected: c.len(),
                found: set.universe(),
            });
        }
    }
    let mut evaluator = Evaluator {
        coalgebra: c,
        valuation,
        escape: HashMap::new(),
        memo: HashMap::new(),
    };
    evaluator.index(t);
    evaluator.eval(t, &mut Vec::new())
}

type NodeId = *const ();

fn node_id<M>(t: &Term<M>) -> NodeId {
    t as *const Term<M> as *const ()
}

/// Nested Knaster-Tarski iteration from the top element. Fixpoint nodes are
/// memoized by the values of the binders they reach out to.
struct Evaluator<'a, F: Functor> {
    coalgebra: &'a Coalgebra<F>,
    valuation: &'a Valuation,
    escape: HashMap<NodeId, usize>,
    memo: HashMap<(NodeId, Vec<StateSet>), StateSet>,
}

impl<F: Functor> Evaluator<'_, F> {
    fn index(&mut self, t: &Term<F::Modality>) -> usize {
        let depth = match t {
            Term::Bound(i) => i + 1,
            Term::Free(_) => 0,
            Term::Nu(body) => self.index(body).saturating_sub(1),
            Term::Modal(_, args) => args.iter().map(|a| self.index(a)).max().unwrap_or(0),
        };
        if matches!(t, Term::Nu(_)) {
            self.escape.insert(node_id(t), depth);
        }
        depth
    }

    fn eval(&mut self, t: &Term<F::Modality>, env: &mut Vec<StateSet>) -> Result<StateSet, EvalError> {
        let c = self.coalgebra;
        match t {
            Term::Bound(i) => Ok(env[env.len() - 1 - i].clone()),
            Term::Free(z) => self
                .valuation
                .get(z)
                .cloned()
                .ok_or_else(|| EvalError::Unbound(z.clone())),
            Term::Modal(op, args) => {
                let sets = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let f = c.functor();
                Ok(StateSet::from_states(
                    c.len(),
                    c.carrier().states().filter(|&x| f.raw_contains(op, c.step(x), &sets)),
                ))
            }
            Term::Nu(body) => {
                let reach = self.escape[&node_id(t)];
                let key = (node_id(t), env[env.len() - reach..].to_vec());
                if let Some(hit) = self.memo.get(&key) {
                    return Ok(hit.clone());
                }
                let mut current = StateSet::full(c.len());
                loop {
                    env.push(current.clone());
                    let next = self.eval(body, env);
                    env.pop();
                    let next = next?;
                    if next == current {
                        break;
                    }
                    current = next;
                }
                self.memo.insert(key, current.clone());
                Ok(current)
            }
        }
    }
}

/// A system `z_i = L_i(z_j1, ..., z_jn)` of flat equations; `z_0` is the
/// distinguished variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSystem<M> {
    pub vars: Vec<String>,
    pub equations: Vec<(M, Vec<usize>)>,
}

impl<M> FlatSystem<M> {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn display<'a, F: Functor<Modality = M>>(&'a self, functor: &'a F) -> DisplaySystem<'a, F> {
        DisplaySystem { system: self, functor }
    }
}

pub struct DisplaySystem<'a, F: Functor> {
    system: &'a FlatSystem<F::Modality>,
    functor: &'a F,
}

impl<F: Functor> fmt::Display for DisplaySystem<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.system;
        for (var, (op, args)) in s.vars.iter().zip(&s.equations) {
            write!(f, "{var} = [{}]", self.functor.format_modality(op))?;
            if !args.is_empty() {
                let names: Vec<&str> = args.iter().map(|&j| s.vars[j].as_str()).collect();
                write!(f, "({})", names.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Prefix of generated variable names.
pub const FRESH_PREFIX: &str = "_";

/// Bekič flattening: every modality gets its own variable. A fixpoint names
/// the modality directly beneath it (chains of binders share one variable);
/// other modalities get fresh `_1, _2, ...` variables. Variables are
/// numbered in preorder, so the root is `z_0`.
pub fn flatten<M: Clone>(e: &WellFormed<M>) -> FlatSystem<M> {
    struct Builder<M> {
        vars: Vec<String>,
        equations: Vec<Option<(M, Vec<usize>)>>,
        fresh: usize,
    }

    impl<M: Clone> Builder<M> {
        fn alloc(&mut self, name: Option<&str>) -> usize {
            let mut name = match name {
                Some(n) => n.to_string(),
                None => loop {
                    self.fresh += 1;
                    let candidate = format!("{FRESH_PREFIX}{}", self.fresh);
                    if !self.vars.contains(&candidate) {
                        break candidate;
                    }
                },
            };
            while self.vars.contains(&name) {
                name.push('\'');
            }
            self.vars.push(name);
            self.equations.push(None);
            self.vars.len() - 1
        }

        fn node(&mut self, e: &Expr<M>, env: &mut Vec<(String, usize)>) -> usize {
            let lookup = |env: &Vec<(String, usize)>, z: &str| {
                env.iter()
                    .rev()
                    .find(|(n, _)| n == z)
                    .map(|&(_, id)| id)
                    .expect("closed expression")
            };
            match e {
                Expr::Var(z) => lookup(env, z),
                Expr::Nu(z, body) => {
                    let mut binders = vec![z.as_str()];
                    let mut inner = body.as_ref();
                    while let Expr::Nu(z, b) = inner {
                        binders.push(z);
                        inner = b;
                    }
                    match inner {
                        // guardedness: the variable is bound further out
                        Expr::Var(y) => lookup(env, y),
                        Expr::Modal(op, args) => {
                            let id = self.alloc(Some(z));
                            for b in &binders {
                                env.push((b.to_string(), id));
                            }
                            let args = args.iter().map(|a| self.node(a, env)).collect();
                            env.truncate(env.len() - binders.len());
                            self.equations[id] = Some((op.clone(), args));
                            id
                        }
                        Expr::Nu(..) => unreachable!(),
                    }
                }
                Expr::Modal(op, args) => {
                    let id = self.alloc(None);
                    let args = args.iter().map(|a| self.node(a, env)).collect();
                    self.equations[id] = Some((op.clone(), args));
                    id
                }
            }
        }
    }

    let mut b = Builder { vars: Vec::new(), equations: Vec::new(), fresh: 0 };
    let root = b.node(e.expr(), &mut Vec::new());
    debug_assert_eq!(root, 0);
    FlatSystem {
        vars: b.vars,
        equations: b.equations.into_iter().map(|eq| eq.expect("every variable defined")).collect(),
    }
}

/// Greatest fixpoint of the simultaneous map
/// `(X_1, ..., X_k) ↦ (ξ⁻¹[λ_1(...)], ..., ξ⁻¹[λ_k(...)])`, iterated from
/// the top tuple.
pub fn eval_system<F: Functor>(
    system: &FlatSystem<F::Modality>,
    c: &Coalgebra<F>,
) -> Result<Vec<StateSet>, EvalError> {
    let f = c.functor();
    for (op, args) in &system.equations {
        f.check_args(op, args.len())?;
    }
    let mut current = vec![StateSet::full(c.len()); system.len()];
    loop {
        let next: Vec<StateSet> = system
            .equations
            .iter()
            .map(|(op, args)| {
                let sets: Vec<StateSet> = args.iter().map(|&j| current[j].clone()).collect();
                StateSet::from_states(
                    c.len(),
                    c.carrier().states().filter(|&x| f.raw_contains(op, c.step(x), &sets)),
                )
            })
            .collect();
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}
