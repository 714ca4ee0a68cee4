//! Behavioural equivalence by partition refinement, a brute-force
//! Λ-bisimulation check for small carriers, and expression equivalence.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::coalgebra::{Coalgebra, CoalgebraError};
use crate::expr::WellFormed;
use crate::kleene::{synthesize, KleeneError};
use crate::semantics::{eval_closed, EvalError};
use crate::signature::Functor;
use crate::state::{StateId, StateSet};

/// A partition of a carrier, as a block id per state. Ids are numbered by
/// first occurrence in carrier order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<usize>,
    count: usize,
}

impl Partition {
    /// All states in one block.
    pub fn trivial(n: usize) -> Self {
        Partition { blocks: vec![0; n], count: usize::from(n > 0) }
    }

    /// Renumbers arbitrary labels into block ids.
    pub fn from_labels<K: Eq + std::hash::Hash>(labels: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let blocks = labels
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { blocks, count: ids.len() }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, x: StateId) -> usize {
        self.blocks[x]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.count
    }

    pub fn same_block(&self, x: StateId, y: StateId) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    /// The blocks as state lists, in block-id order.
    pub fn classes(&self) -> Vec<Vec<StateId>> {
        let mut classes = vec![Vec::new(); self.count];
        for (x, &b) in self.blocks.iter().enumerate() {
            classes[b].push(x);
        }
        classes
    }

    /// The equivalence relation induced on the carrier.
    pub fn to_relation(&self) -> Relation {
        let mut r = Relation::new(self.len(), self.len());
        for class in self.classes() {
            for &x in &class {
                for &y in &class {
                    r.insert(x, y);
                }
            }
        }
        r
    }
}

/// Splits every block by the image of the one-step behaviour under the
/// current quotient map.
pub fn refine_once<F: Functor>(c: &Coalgebra<F>, p: &Partition) -> Partition {
    let f = c.functor();
    Partition::from_labels(
        c.carrier()
            .states()
            .map(|x| (p.block(x), f.raw_map(c.step(x), p.block_ids()))),
    )
}

/// The coarsest partition stable under [`refine_once`]; two states are
/// behaviourally equivalent iff they share a block.
pub fn behavioural_equivalence<F: Functor>(c: &Coalgebra<F>) -> Partition {
    let mut p = Partition::trivial(c.len());
    loop {
        let next = refine_once(c, &p);
        if next.block_count() == p.block_count() {
            return next;
        }
        p = next;
    }
}

/// Whether `x` in `c1` and `y` in `c2` are behaviourally equivalent,
/// decided on the coproduct.
pub fn equivalent<F: Functor>(
    c1: &Coalgebra<F>,
    x: StateId,
    c2: &Coalgebra<F>,
    y: StateId,
) -> Result<bool, CoalgebraError> {
    let sum = c1.coproduct(c2)?;
    Ok(behavioural_equivalence(&sum).same_block(x, c1.len() + y))
}

/// A relation between the carriers of two coalgebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(StateId, StateId)>,
}

impl Relation {
    pub fn new(left: usize, right: usize) -> Self {
        Relation { left, right, pairs: BTreeSet::new() }
    }

    pub fn full(left: usize, right: usize) -> Self {
        let mut r = Relation::new(left, right);
        for x in 0..left {
            for y in 0..right {
                r.insert(x, y);
            }
        }
        r
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::new(n, n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn insert(&mut self, x: StateId, y: StateId) {
        assert!(x < self.left && y < self.right, "pair ({x}, {y}) outside {}x{}", self.left, self.right);
        self.pairs.insert((x, y));
    }

    pub fn remove(&mut self, x: StateId, y: StateId) {
        self.pairs.remove(&(x, y));
    }

    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `S[A]`
    pub fn image(&self, a: &StateSet) -> StateSet {
        StateSet::from_states(self.right, self.pairs().filter(|&(x, _)| a.contains(x)).map(|(_, y)| y))
    }

    /// `S⁻¹[B]`
    pub fn preimage(&self, b: &StateSet) -> StateSet {
        StateSet::from_states(self.left, self.pairs().filter(|&(_, y)| b.contains(y)).map(|(x, _)| x))
    }

    pub fn converse(&self) -> Relation {
        Relation {
            left: self.right,
            right: self.left,
            pairs: self.pairs().map(|(x, y)| (y, x)).collect(),
        }
    }
}

/// Largest combined carrier size the oracle accepts by default.
pub const ORACLE_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("carriers of {size} states exceed the oracle limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("relation is over {found:?}, the coalgebras have {expected:?} states")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
}

type Tuple = Vec<StateSet>;

/// Exhaustive Λ-bisimulation checking restricted to the modalities that
/// decompose some value of either coalgebra.
///
/// Two reductions keep the enumeration small, neither changes the verdict:
/// membership of `ξ(x)` in a lifting only depends on the arguments
/// intersected with the support of `ξ(x)`, and the transferred side is
/// monotone, so only the minimal argument tuples below the support need to
/// be tried. The enumeration is exponential in `arity × |support|`.
pub struct LambdaOracle<'a, F: Functor> {
    c1: &'a Coalgebra<F>,
    c2: &'a Coalgebra<F>,
    /// `minimal1[x][k]`: minimal tuples `X⃗` with `ξ(x) ∈ λ_k(X⃗)`.
    minimal1: Vec<Vec<Vec<Tuple>>>,
    minimal2: Vec<Vec<Vec<Tuple>>>,
    modalities: Vec<F::Modality>,
}

impl<'a, F: Functor> LambdaOracle<'a, F> {
    pub fn new(c1: &'a Coalgebra<F>, c2: &'a Coalgebra<F>) -> Result<Self, OracleError> {
        Self::with_limit(c1, c2, ORACLE_LIMIT)
    }

    pub fn with_limit(c1: &'a Coalgebra<F>, c2: &'a Coalgebra<F>, limit: usize) -> Result<Self, OracleError> {
        let size = c1.len() + c2.len();
        if size > limit {
            return Err(OracleError::TooLarge { size, limit });
        }
        if c1.functor() != c2.functor() {
            return Err(CoalgebraError::FunctorMismatch.into());
        }
        let f = c1.functor();
        let modalities: Vec<F::Modality> = c1
            .structure()
            .iter()
            .chain(c2.structure())
            .map(|t| f.decompose(t).0)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let minimal = |c: &Coalgebra<F>| -> Vec<Vec<Vec<Tuple>>> {
            c.structure()
                .iter()
                .map(|t| modalities.iter().map(|op| minimal_tuples(f, op, t, c.len())).collect())
                .collect()
        };
        let minimal1 = minimal(c1);
        let minimal2 = minimal(c2);
        Ok(LambdaOracle { c1, c2, minimal1, minimal2, modalities })
    }

    fn transfers(&self, x: StateId, y: StateId, s: &Relation) -> bool {
        let f = self.c1.functor();
        let zeta = self.c2.step(y);
        let xi = self.c1.step(x);
        self.modalities.iter().enumerate().all(|(k, op)| {
            self.minimal1[x][k].iter().all(|tuple| {
                let image: Vec<StateSet> = tuple.iter().map(|a| s.image(a)).collect();
                f.raw_contains(op, zeta, &image)
            }) && self.minimal2[y][k].iter().all(|tuple| {
                let image: Vec<StateSet> = tuple.iter().map(|b| s.preimage(b)).collect();
                f.raw_contains(op, xi, &image)
            })
        })
    }

    fn check_shape(&self, s: &Relation) -> Result<(), OracleError> {
        let expected = (self.c1.len(), self.c2.len());
        if (s.left, s.right) != expected {
            return Err(OracleError::Shape { expected, found: (s.left, s.right) });
        }
        Ok(())
    }

    /// Whether `s` is a Λ-bisimulation.
    pub fn is_bisimulation(&self, s: &Relation) -> Result<bool, OracleError> {
        self.check_shape(s)?;
        Ok(s.pairs().all(|(x, y)| self.transfers(x, y, s)))
    }

    /// The largest Λ-bisimulation, by removing failing pairs from `X × Y`.
    pub fn bisimilarity(&self) -> Relation {
        let mut s = Relation::full(self.c1.len(), self.c2.len());
        loop {
            let failing: Vec<_> = s.pairs().filter(|&(x, y)| !self.transfers(x, y, &s)).collect();
            if failing.is_empty() {
                return s;
            }
            for (x, y) in failing {
                s.remove(x, y);
            }
        }
    }
}

/// Minimal tuples of subsets of `supp(t)` whose lifting contains `t`.
fn minimal_tuples<F: Functor>(f: &F, op: &F::Modality, t: &F::Value, n: usize) -> Vec<Tuple> {
    let support = f.support(t);
    let arity = f.arity(op);
    let width = support.len() * arity;
    assert!(width < 32, "oracle enumeration too wide: {width} bits");
    let decode = |mask: u32| -> Tuple {
        (0..arity)
            .map(|i| {
                let bits = mask >> (i * support.len());
                StateSet::from_states(
                    n,
                    support.iter().enumerate().filter(|&(j, _)| bits >> j & 1 == 1).map(|(_, &s)| s),
                )
            })
            .collect()
    };
    let members: Vec<u32> = (0..1u32 << width).filter(|&m| f.raw_contains(op, t, &decode(m))).collect();
    members
        .iter()
        .filter(|&&m| !members.iter().any(|&other| other != m && other & m == other))
        .map(|&m| decode(m))
        .collect()
}

/// [`LambdaOracle::is_bisimulation`] with the default size limit.
pub fn check_lambda_bisimulation<F: Functor>(
    c1: &Coalgebra<F>,
    c2: &Coalgebra<F>,
    s: &Relation,
) -> Result<bool, OracleError> {
    LambdaOracle::new(c1, c2)?.is_bisimulation(s)
}

/// [`LambdaOracle::bisimilarity`] with the default size limit.
pub fn lambda_bisimilarity<F: Functor>(c1: &Coalgebra<F>, c2: &Coalgebra<F>) -> Result<Relation, OracleError> {
    Ok(LambdaOracle::new(c1, c2)?.bisimilarity())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error(transparent)]
    Kleene(#[from] KleeneError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Whether `e1` and `e2` denote the same behaviour: the point of a model
/// synthesized from either satisfies the other.
pub fn expr_equiv<F: Functor>(
    f: &F,
    e1: &WellFormed<F::Modality>,
    e2: &WellFormed<F::Modality>,
) -> Result<bool, EquivError> {
    let satisfies = |a: &WellFormed<F::Modality>, b: &WellFormed<F::Modality>| -> Result<bool, EquivError> {
        let model = synthesize(f, a)?;
        Ok(eval_closed(b, &model.coalgebra)?.contains(model.state))
    };
    Ok(satisfies(e1, e2)? && satisfies(e2, e1)?)
}
