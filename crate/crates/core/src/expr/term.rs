//! De Bruijn terms: α-equivalent expressions have equal terms.

use std::collections::{HashSet, VecDeque};

use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term<M> {
    /// Index 0 is the innermost enclosing binder.
    Bound(usize),
    Free(String),
    Nu(Box<Term<M>>),
    Modal(M, Vec<Term<M>>),
}

impl<M: Clone> Term<M> {
    pub fn from_expr(e: &Expr<M>) -> Self {
        fn go<M: Clone>(e: &Expr<M>, env: &mut Vec<String>) -> Term<M> {
            match e {
                Expr::Var(z) => match env.iter().rev().position(|b| b == z) {
                    Some(i) => Term::Bound(i),
                    None => Term::Free(z.clone()),
                },
                Expr::Nu(z, body) => {
                    env.push(z.clone());
                    let body = go(body, env);
                    env.pop();
                    Term::Nu(Box::new(body))
                }
                Expr::Modal(op, args) => {
                    Term::Modal(op.clone(), args.iter().map(|a| go(a, env)).collect())
                }
            }
        }
        go(e, &mut Vec::new())
    }

    /// Named form; the binder at nesting depth `d` is called `x{d}` (primed
    /// if that clashes with a free variable).
    pub fn to_expr(&self) -> Expr<M> {
        fn go<M: Clone>(t: &Term<M>, names: &mut Vec<String>, free: &HashSet<String>) -> Expr<M> {
            match t {
                Term::Bound(i) => Expr::Var(names[names.len() - 1 - i].clone()),
                Term::Free(z) => Expr::Var(z.clone()),
                Term::Nu(body) => {
                    let mut name = format!("x{}", names.len());
                    while free.contains(&name) {
                        name.push('\'');
                    }
                    names.push(name.clone());
                    let body = go(body, names, free);
                    names.pop();
                    Expr::nu(name, body)
                }
                Term::Modal(op, args) => {
                    Expr::Modal(op.clone(), args.iter().map(|a| go(a, names, free)).collect())
                }
            }
        }
        let mut free = HashSet::new();
        self.collect_free(&mut free);
        go(self, &mut Vec::new(), &free)
    }

    fn collect_free(&self, out: &mut HashSet<String>) {
        match self {
            Term::Free(z) => {
                out.insert(z.clone());
            }
            Term::Bound(_) => {}
            Term::Nu(body) => body.collect_free(out),
            Term::Modal(_, args) => args.iter().for_each(|a| a.collect_free(out)),
        }
    }

    /// Number of enclosing binders this term reaches out to.
    pub fn escape_depth(&self) -> usize {
        match self {
            Term::Bound(i) => i + 1,
            Term::Free(_) => 0,
            Term::Nu(body) => body.escape_depth().saturating_sub(1),
            Term::Modal(_, args) => args.iter().map(Term::escape_depth).max().unwrap_or(0),
        }
    }

    pub fn is_closed(&self) -> bool {
        let mut free = HashSet::new();
        self.collect_free(&mut free);
        free.is_empty() && self.escape_depth() == 0
    }

    /// Replaces the index bound `depth` levels up by `replacement`, which
    /// must have escape depth 0, and closes the gap in the indices above.
    fn instantiate(&self, depth: usize, replacement: &Term<M>) -> Term<M> {
        match self {
            Term::Bound(i) if *i == depth => replacement.clone(),
            Term::Bound(i) if *i > depth => Term::Bound(i - 1),
            Term::Bound(_) | Term::Free(_) => self.clone(),
            Term::Nu(body) => Term::Nu(Box::new(body.instantiate(depth + 1, replacement))),
            Term::Modal(op, args) => Term::Modal(
                op.clone(),
                args.iter().map(|a| a.instantiate(depth, replacement)).collect(),
            ),
        }
    }

    /// `φ[νφ / 0]` for `self = νφ` with escape depth 0.
    pub fn unfold(&self) -> Option<Term<M>> {
        match self {
            Term::Nu(body) => Some(body.instantiate(0, self)),
            _ => None,
        }
    }

    /// Unfolds top-level fixpoints until a modality is exposed. Guardedness
    /// makes this terminate; returns `None` for a bare variable.
    pub fn head(&self) -> Option<(M, Vec<Term<M>>)> {
        let mut t = self.clone();
        loop {
            match t {
                Term::Modal(op, args) => return Some((op, args)),
                Term::Nu(_) => t = t.unfold().expect("fixpoint"),
                Term::Bound(_) | Term::Free(_) => return None,
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Bound(_) | Term::Free(_) => 1,
            Term::Nu(body) => 1 + body.size(),
            Term::Modal(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

pub fn alpha_eq<M: Clone + Eq>(a: &Expr<M>, b: &Expr<M>) -> bool {
    Term::from_expr(a) == Term::from_expr(b)
}

/// Least set of closed terms containing `root` and closed under taking the
/// arguments of modal terms and unfolding fixpoints, in discovery order.
pub fn fischer_ladner<M>(root: &Term<M>) -> Vec<Term<M>>
where
    M: Clone + Eq + std::hash::Hash,
{
    let mut seen: HashSet<Term<M>> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(t) = queue.pop_front() {
        if !seen.insert(t.clone()) {
            continue;
        }
        match &t {
            Term::Nu(_) => queue.push_back(t.unfold().expect("fixpoint")),
            Term::Modal(_, args) => queue.extend(args.iter().cloned()),
            Term::Bound(_) | Term::Free(_) => {}
        }
        order.push(t);
    }
    order
}
