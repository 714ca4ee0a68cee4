//! Enumeration and random generation of functor values, modalities,
//! coalgebras and expressions, for exhaustive and randomized checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::coalgebra::Coalgebra;
use crate::expr::{Expr, WellFormed};
use crate::functors::{Dfa, DfaModality, DfaValue, Dist, DistModality, DistValue, Lts, LtsModality, LtsValue};
use crate::functors::{Mon, MonModality, MonValue};
use crate::signature::Functor;
use crate::state::{Carrier, StateId};

/// Size limits for generated values and modalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Largest modality arity, and largest decomposition arity of values.
    /// Does not restrict DFA values, whose arity is the alphabet size.
    pub max_arity: usize,
    /// Largest denominator of any distribution weight.
    pub max_denominator: u32,
    /// Labels used for LTS instances that do not declare their own.
    pub labels: Vec<String>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_arity: 3, max_denominator: 6, labels: vec!["a".into(), "b".into()] }
    }
}

pub trait Sample: Functor {
    /// Every value over a carrier of `n` states within `bounds`.
    fn enumerate_values(&self, n: usize, bounds: &Bounds) -> Vec<Self::Value>;

    fn enumerate_modalities(&self, bounds: &Bounds) -> Vec<Self::Modality>;

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, bounds: &Bounds) -> Self::Value;

    fn random_modality<R: Rng + ?Sized>(&self, rng: &mut R, bounds: &Bounds) -> Self::Modality;
}

/// Fractions `p/q` in `(0, 1]` with `q <= d`, ascending.
pub fn fractions(d: u32) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = (1..=d)
        .flat_map(|q| (1..=q).map(move |p| BigRational::new(BigInt::from(p), BigInt::from(q))))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Sequences of fractions from `weights` of length `1..=max_len` summing to 1.
fn weight_tuples(weights: &[BigRational], max_len: usize) -> Vec<Vec<BigRational>> {
    fn go(weights: &[BigRational], left: &BigRational, room: usize, prefix: &mut Vec<BigRational>, out: &mut Vec<Vec<BigRational>>) {
        if left.is_zero() {
            out.push(prefix.clone());
            return;
        }
        if room == 0 {
            return;
        }
        for w in weights.iter().filter(|w| *w <= left) {
            prefix.push(w.clone());
            go(weights, &(left - w), room - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, &BigRational::one(), max_len, &mut Vec::new(), &mut out);
    out
}

/// Random composition of `q` into `k` positive parts, as fractions of `q`.
fn random_weights<R: Rng + ?Sized>(rng: &mut R, k: usize, max_denominator: u32) -> Vec<BigRational> {
    let k32 = u32::try_from(k).expect("small arity");
    let q = rng.gen_range(k32.max(1)..=max_denominator.max(k32));
    let mut cuts: Vec<u32> = (1..q).collect::<Vec<_>>().choose_multiple(rng, k - 1).copied().collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(q);
    cuts.windows(2)
        .map(|w| BigRational::new(BigInt::from(w[1] - w[0]), BigInt::from(q)))
        .collect()
}

fn tuples<T: Clone>(alphabet: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a.clone());
                    v
                })
            })
            .collect();
    }
    out
}

impl Sample for Dfa {
    fn enumerate_values(&self, n: usize, _bounds: &Bounds) -> Vec<DfaValue> {
        let states: Vec<StateId> = (0..n).collect();
        let nexts = tuples(&states, self.alphabet().len());
        [false, true]
            .into_iter()
            .flat_map(|output| nexts.iter().map(move |next| DfaValue { output, next: next.clone() }))
            .collect()
    }

    fn enumerate_modalities(&self, _bounds: &Bounds) -> Vec<DfaModality> {
        vec![DfaModality(false), DfaModality(true)]
    }

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, _bounds: &Bounds) -> DfaValue {
        DfaValue {
            output: rng.gen(),
            next: (0..self.alphabet().len()).map(|_| rng.gen_range(0..n)).collect(),
        }
    }

    fn random_modality<R: Rng + ?Sized>(&self, rng: &mut R, _bounds: &Bounds) -> DfaModality {
        DfaModality(rng.gen())
    }
}

fn lts_labels(lts: &Lts, bounds: &Bounds) -> Vec<String> {
    lts.labels().map_or_else(|| bounds.labels.clone(), <[String]>::to_vec)
}

impl Sample for Lts {
    fn enumerate_values(&self, n: usize, bounds: &Bounds) -> Vec<LtsValue> {
        let pairs: Vec<(String, StateId)> =
            lts_labels(self, bounds).into_iter().flat_map(|a| (0..n).map(move |x| (a.clone(), x))).collect();
        assert!(pairs.len() < 32, "too many transitions to enumerate");
        (0..1u32 << pairs.len())
            .filter(|m| m.count_ones() as usize <= bounds.max_arity)
            .map(|m| LtsValue::new(pairs.iter().enumerate().filter(|&(i, _)| m >> i & 1 == 1).map(|(_, p)| p.clone())))
            .collect()
    }

    fn enumerate_modalities(&self, bounds: &Bounds) -> Vec<LtsModality> {
        let labels = lts_labels(self, bounds);
        (0..=bounds.max_arity).flat_map(|k| tuples(&labels, k)).map(LtsModality).collect()
    }

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, bounds: &Bounds) -> LtsValue {
        let labels = lts_labels(self, bounds);
        let k = rng.gen_range(0..=bounds.max_arity);
        LtsValue::new((0..k).map(|_| (labels.choose(rng).expect("labels").clone(), rng.gen_range(0..n))))
    }

    fn random_modality<R: Rng + ?Sized>(&self, rng: &mut R, bounds: &Bounds) -> LtsModality {
        let labels = lts_labels(self, bounds);
        let k = rng.gen_range(0..=bounds.max_arity);
        LtsModality((0..k).map(|_| labels.choose(rng).expect("labels").clone()).collect())
    }
}

impl Sample for Dist {
    fn enumerate_values(&self, n: usize, bounds: &Bounds) -> Vec<DistValue> {
        fn go(
            weights: &[BigRational],
            state: usize,
            n: usize,
            left: &BigRational,
            room: usize,
            prefix: &mut Vec<(StateId, BigRational)>,
            out: &mut Vec<DistValue>,
        ) {
            if left.is_zero() {
                out.push(DistValue::new(prefix.iter().cloned()).expect("sums to one"));
                return;
            }
            if state == n || room == 0 {
                return;
            }
            go(weights, state + 1, n, left, room, prefix, out);
            for w in weights.iter().filter(|w| *w <= left) {
                prefix.push((state, w.clone()));
                go(weights, state + 1, n, &(left - w), room - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        let weights = fractions(bounds.max_denominator);
        go(&weights, 0, n, &BigRational::one(), bounds.max_arity, &mut Vec::new(), &mut out);
        out
    }

    fn enumerate_modalities(&self, bounds: &Bounds) -> Vec<DistModality> {
        weight_tuples(&fractions(bounds.max_denominator), bounds.max_arity)
            .into_iter()
            .map(DistModality)
            .collect()
    }

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, bounds: &Bounds) -> DistValue {
        let k = rng.gen_range(1..=bounds.max_arity.min(n));
        let states: Vec<StateId> = (0..n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
        let weights = random_weights(rng, k, bounds.max_denominator);
        DistValue::new(states.into_iter().zip(weights)).expect("sums to one")
    }

    fn random_modality<R: Rng + ?Sized>(&self, rng: &mut R, bounds: &Bounds) -> DistModality {
        let k = rng.gen_range(1..=bounds.max_arity);
        DistModality(random_weights(rng, k, bounds.max_denominator))
    }
}

fn mon_arity(t: &MonValue) -> usize {
    t.minimal_sets().iter().map(Vec::len).sum()
}

impl Sample for Mon {
    fn enumerate_values(&self, n: usize, bounds: &Bounds) -> Vec<MonValue> {
        assert!(n <= 4, "antichain enumeration beyond 4 states");
        let subsets: Vec<Vec<StateId>> =
            (0..1u32 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        let mut out: Vec<MonValue> = (0..1u64 << subsets.len())
            .filter_map(|family| {
                let sets: Vec<Vec<StateId>> = subsets
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| family >> i & 1 == 1)
                    .map(|(_, s)| s.clone())
                    .collect();
                let value = MonValue::new(sets.iter().cloned());
                // count each antichain once, from its own family
                (value.minimal_sets().len() == sets.len() && mon_arity(&value) <= bounds.max_arity).then_some(value)
            })
            .collect();
        out.sort();
        out
    }

    fn enumerate_modalities(&self, bounds: &Bounds) -> Vec<MonModality> {
        let sizes: Vec<usize> = (0..=bounds.max_arity).collect();
        (0..=bounds.max_arity)
            .flat_map(|k| tuples(&sizes, k))
            .filter(|g| g.iter().sum::<usize>() <= bounds.max_arity)
            .map(MonModality)
            .collect()
    }

    fn random_value<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, bounds: &Bounds) -> MonValue {
        loop {
            let count = rng.gen_range(0..=3);
            let sets: Vec<Vec<StateId>> = (0..count)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
                .collect();
            let value = MonValue::new(sets);
            if mon_arity(&value) <= bounds.max_arity {
                return value;
            }
        }
    }

    fn random_modality<R: Rng + ?Sized>(&self, rng: &mut R, bounds: &Bounds) -> MonModality {
        let mut left = bounds.max_arity;
        let groups = rng.gen_range(0..=bounds.max_arity);
        MonModality(
            (0..groups)
                .map(|_| {
                    let k = rng.gen_range(0..=left);
                    left -= k;
                    k
                })
                .collect(),
        )
    }
}

pub fn random_coalgebra<F: Sample, R: Rng + ?Sized>(f: &F, rng: &mut R, n: usize, bounds: &Bounds) -> Coalgebra<F> {
    let structure = (0..n).map(|_| f.random_value(rng, n, bounds)).collect();
    Coalgebra::new(f.clone(), Carrier::numbered(n), structure).expect("generated values are valid")
}

/// Limits for random expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprBounds {
    pub max_binders: usize,
    pub max_depth: usize,
    /// Binder names are drawn from this pool, so shadowing happens.
    pub names: Vec<String>,
}

impl Default for ExprBounds {
    fn default() -> Self {
        ExprBounds { max_binders: 3, max_depth: 4, names: vec!["x".into(), "y".into(), "z".into()] }
    }
}

struct ExprGen<'a, F: Sample, R: Rng + ?Sized> {
    f: &'a F,
    rng: &'a mut R,
    bounds: &'a Bounds,
    names: &'a [String],
    binders_left: usize,
    nullary: Vec<F::Modality>,
}

impl<F: Sample, R: Rng + ?Sized> ExprGen<'_, F, R> {
    /// Visible variables; the flag says whether a modality separates the
    /// current position from the binder.
    fn visible(env: &[(String, bool)]) -> Vec<usize> {
        (0..env.len()).filter(|&i| env[i + 1..].iter().all(|(n, _)| *n != env[i].0)).collect()
    }

    fn binder(&mut self, env: &mut Vec<(String, bool)>, depth: usize) -> Expr<F::Modality> {
        self.binders_left -= 1;
        let name = self.names.choose(self.rng).expect("names").clone();
        env.push((name.clone(), false));
        let body = self.body(env, depth);
        env.pop();
        Expr::nu(name, body)
    }

    /// A term in a position that must not be an unguarded variable.
    fn body(&mut self, env: &mut Vec<(String, bool)>, depth: usize) -> Expr<F::Modality> {
        let guarded: Vec<usize> = Self::visible(env).into_iter().filter(|&i| env[i].1).collect();
        if self.binders_left > 0 && self.rng.gen_bool(0.3) {
            return self.binder(env, depth);
        }
        if !guarded.is_empty() && self.rng.gen_bool(0.1) {
            return Expr::var(env[*guarded.choose(self.rng).expect("nonempty")].0.clone());
        }
        self.modal(env, depth)
    }

    fn modal(&mut self, env: &mut Vec<(String, bool)>, depth: usize) -> Expr<F::Modality> {
        let op = if depth == 0 && env.is_empty() && !self.nullary.is_empty() {
            self.nullary.choose(self.rng).expect("nonempty").clone()
        } else {
            self.f.random_modality(self.rng, self.bounds)
        };
        let saved: Vec<bool> = env.iter().map(|e| e.1).collect();
        env.iter_mut().for_each(|e| e.1 = true);
        let args = (0..self.f.arity(&op)).map(|_| self.arg(env, depth)).collect();
        env.iter_mut().zip(saved).for_each(|(e, g)| e.1 = g);
        Expr::modal(op, args)
    }

    fn arg(&mut self, env: &mut Vec<(String, bool)>, depth: usize) -> Expr<F::Modality> {
        let visible = Self::visible(env);
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf && !visible.is_empty() {
            return Expr::var(env[*visible.choose(self.rng).expect("nonempty")].0.clone());
        }
        if leaf && !self.nullary.is_empty() {
            return Expr::modal(self.nullary.choose(self.rng).expect("nonempty").clone(), Vec::new());
        }
        if depth == 0 {
            // no leaf available: bind one; the generator ensures this only
            // happens with a binder to spare
            return self.binder(env, 0);
        }
        self.body(env, depth - 1)
    }
}

/// A random closed guarded expression. Functors without nullary modalities
/// always get a binder at the root.
pub fn random_expr<F: Sample, R: Rng + ?Sized>(
    f: &F,
    rng: &mut R,
    bounds: &Bounds,
    shape: &ExprBounds,
) -> WellFormed<F::Modality> {
    let nullary: Vec<F::Modality> =
        f.enumerate_modalities(bounds).into_iter().filter(|op| f.arity(op) == 0).collect();
    assert!(shape.max_binders > 0 || !nullary.is_empty(), "no closed expressions without binders");
    let mut gen = ExprGen { f, rng, bounds, names: &shape.names, binders_left: shape.max_binders, nullary };
    let mut env = Vec::new();
    let e = if gen.nullary.is_empty() || gen.rng.gen_bool(0.8) && shape.max_binders > 0 {
        gen.binder(&mut env, shape.max_depth)
    } else {
        gen.modal(&mut env, shape.max_depth)
    };
    WellFormed::new(e).expect("generator produces closed guarded expressions")
}
