//! Expressions `φ ::= z | ν z. φ | L(φ_1, ..., φ_n)` with named binders.
//!
//! Named expressions are the surface form; [`Term`] is the de Bruijn form
//! used for α-equivalence and for expressions-as-states.

mod parse;
mod term;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::signature::Functor;

pub use parse::{is_ident, parse, parse_wellformed, ParseError, ParseErrorKind, Parsed, Position};
pub use term::{alpha_eq, fischer_ladner, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr<M> {
    Var(String),
    Nu(String, Box<Expr<M>>),
    Modal(M, Vec<Expr<M>>),
}

/// Child indices from the root; the body of `ν` is child 0.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormedError {
    #[error("unbound variable {var}")]
    Unbound { var: String, path: Path },
    #[error("unguarded variable {var}")]
    Unguarded { var: String, path: Path },
}

impl WellFormedError {
    pub fn path(&self) -> &Path {
        match self {
            WellFormedError::Unbound { path, .. } | WellFormedError::Unguarded { path, .. } => path,
        }
    }
}

/// Result of checking an expression for membership in `E₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wellformedness {
    pub closed: bool,
    pub guarded: bool,
    /// First offending occurrence in left-to-right order.
    pub violation: Option<WellFormedError>,
}

/// A closed and guarded expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WellFormed<M>(Expr<M>);

impl<M> WellFormed<M> {
    pub fn expr(&self) -> &Expr<M> {
        &self.0
    }

    pub fn into_expr(self) -> Expr<M> {
        self.0
    }
}

impl<M: Clone> WellFormed<M> {
    pub fn new(expr: Expr<M>) -> Result<Self, WellFormedError> {
        match check_wellformed(&expr).violation {
            Some(err) => Err(err),
            None => Ok(WellFormed(expr)),
        }
    }

    pub fn term(&self) -> Term<M> {
        Term::from_expr(&self.0)
    }
}

/// Computes both flags of `E₀` membership.
pub fn check_wellformed<M>(e: &Expr<M>) -> Wellformedness {
    fn walk<M>(
        e: &Expr<M>,
        env: &mut Vec<(String, bool)>,
        path: &mut Path,
        out: &mut Wellformedness,
    ) {
        match e {
            Expr::Var(z) => match env.iter().rev().find(|(name, _)| name == z) {
                None => {
                    out.closed = false;
                    out.violation.get_or_insert(WellFormedError::Unbound {
                        var: z.clone(),
                        path: path.clone(),
                    });
                }
                Some((_, false)) => {
                    out.guarded = false;
                    out.violation.get_or_insert(WellFormedError::Unguarded {
                        var: z.clone(),
                        path: path.clone(),
                    });
                }
                Some(_) => {}
            },
            Expr::Nu(z, body) => {
                env.push((z.clone(), false));
                path.push(0);
                walk(body, env, path, out);
                path.pop();
                env.pop();
            }
            Expr::Modal(_, args) => {
                let mut inner: Vec<(String, bool)> =
                    env.iter().map(|(z, _)| (z.clone(), true)).collect();
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    walk(a, &mut inner, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Wellformedness {
        closed: true,
        guarded: true,
        violation: None,
    };
    walk(e, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

impl<M> Expr<M> {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn nu(binder: impl Into<String>, body: Expr<M>) -> Self {
        Expr::Nu(binder.into(), Box::new(body))
    }

    pub fn modal(op: M, args: Vec<Expr<M>>) -> Self {
        Expr::Modal(op, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn walk<M>(e: &Expr<M>, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match e {
                Expr::Var(z) => {
                    if !bound.contains(z) {
                        out.insert(z.clone());
                    }
                }
                Expr::Nu(z, body) => {
                    bound.push(z.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                Expr::Modal(_, args) => args.iter().for_each(|a| walk(a, bound, out)),
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Nu(_, body) => 1 + body.size(),
            Expr::Modal(_, args) => 1 + args.iter().map(Expr::size).sum::<usize>(),
        }
    }

    pub fn binder_count(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Nu(_, body) => 1 + body.binder_count(),
            Expr::Modal(_, args) => args.iter().map(Expr::binder_count).sum(),
        }
    }

    /// The node at `path`, if any.
    pub fn at(&self, path: &[usize]) -> Option<&Expr<M>> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(self);
        };
        match self {
            Expr::Var(_) => None,
            Expr::Nu(_, body) if first == 0 => body.at(rest),
            Expr::Nu(..) => None,
            Expr::Modal(_, args) => args.get(first)?.at(rest),
        }
    }

    pub fn display<'a, F>(&'a self, functor: &'a F) -> DisplayExpr<'a, F>
    where
        F: Functor<Modality = M>,
    {
        DisplayExpr { expr: self, functor }
    }
}

impl<M: Clone> Expr<M> {
    /// Capture-avoiding `self[replacement / var]`.
    pub fn substitute(&self, var: &str, replacement: &Expr<M>) -> Expr<M> {
        let repl_free = replacement.free_vars();
        self.subst(var, replacement, &repl_free)
    }

    fn subst(&self, var: &str, replacement: &Expr<M>, repl_free: &BTreeSet<String>) -> Expr<M> {
        match self {
            Expr::Var(z) if z == var => replacement.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Modal(op, args) => Expr::Modal(
                op.clone(),
                args.iter().map(|a| a.subst(var, replacement, repl_free)).collect(),
            ),
            Expr::Nu(z, _) if z == var => self.clone(),
            Expr::Nu(z, body) => {
                let body_free = body.free_vars();
                if !body_free.contains(var) {
                    return self.clone();
                }
                if repl_free.contains(z) {
                    let mut fresh = format!("{z}'");
                    while repl_free.contains(&fresh) || body_free.contains(&fresh) || fresh == var
                    {
                        fresh.push('\'');
                    }
                    let renamed = body.subst(z, &Expr::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                    Expr::nu(fresh, renamed.subst(var, replacement, repl_free))
                } else {
                    Expr::nu(z.clone(), body.subst(var, replacement, repl_free))
                }
            }
        }
    }

    /// `φ[νz.φ / z]` for `self = νz.φ`; `None` for other shapes.
    pub fn unfold(&self) -> Option<Expr<M>> {
        match self {
            Expr::Nu(z, body) => Some(body.substitute(z, self)),
            _ => None,
        }
    }
}

/// Concrete syntax: `nu x. [payload](arg, ...)`, nullary modalities without
/// parentheses.
pub struct DisplayExpr<'a, F: Functor> {
    expr: &'a Expr<F::Modality>,
    functor: &'a F,
}

impl<F: Functor> fmt::Display for DisplayExpr<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Var(z) => f.write_str(z),
            Expr::Nu(z, body) => write!(f, "nu {z}. {}", body.display(self.functor)),
            Expr::Modal(op, args) => {
                write!(f, "[{}]", self.functor.format_modality(op))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", a.display(self.functor))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}
