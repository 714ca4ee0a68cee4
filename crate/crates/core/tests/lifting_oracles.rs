//! Membership in each lifting against a literal reading of its definition.

mod common;

use std::collections::BTreeSet;

use coalgex::functors::{Dfa, DfaModality, DfaValue, Dist, DistModality, DistValue, Lts, LtsModality, LtsValue};
use coalgex::functors::{Mon, MonModality, MonValue};
use coalgex::sample::{Bounds, Sample};
use coalgex::{Functor, StateId, StateSet};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn random_args<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<StateSet> {
    (0..k).map(|_| StateSet::from_mask(n, rng.gen_range(0..1u64 << n))).collect()
}

fn dfa_oracle(op: &DfaModality, t: &DfaValue, args: &[StateSet]) -> bool {
    t.output == op.0 && t.next.iter().zip(args).all(|(&y, a)| a.contains(y))
}

fn lts_oracle(op: &LtsModality, t: &LtsValue, args: &[StateSet]) -> bool {
    let allowed: BTreeSet<(String, StateId)> = op
        .0
        .iter()
        .zip(args)
        .flat_map(|(a, ys)| ys.iter().map(move |y| (a.clone(), y)))
        .collect();
    let z: BTreeSet<(String, StateId)> = t.pairs().iter().cloned().collect();
    z.is_subset(&allowed)
        && op.0.iter().zip(args).all(|(a, ys)| z.iter().any(|(b, y)| a == b && ys.contains(*y)))
}

/// Hall's condition: some coupling of `p` and `mu` lives on `⋃ {i} × A_i`
/// iff every set of indices carries at most the mass of its neighbourhood.
fn dist_oracle(op: &DistModality, t: &DistValue, args: &[StateSet], n: usize) -> bool {
    let k = op.0.len();
    let everything = args.iter().fold(StateSet::empty(n), |acc, a| acc.union(a));
    t.mass(&everything).is_one()
        && (0..1u32 << k).all(|mask| {
            let chosen = (0..k).filter(|i| mask >> i & 1 == 1);
            let mut nbhd = StateSet::empty(n);
            let mut demand = BigRational::zero();
            for i in chosen {
                nbhd.union_with(&args[i]);
                demand += &op.0[i];
            }
            t.mass(&nbhd) >= demand
        })
}

/// The family as every subset of the carrier above some minimal set.
fn upward_closure(t: &MonValue, n: usize) -> Vec<StateSet> {
    (0..1u64 << n)
        .map(|m| StateSet::from_mask(n, m))
        .filter(|b| t.minimal_sets().iter().any(|s| s.iter().all(|&x| b.contains(x))))
        .collect()
}

fn mon_oracle(op: &MonModality, t: &MonValue, args: &[StateSet], n: usize) -> bool {
    let family = upward_closure(t, n);
    let mut groups = Vec::new();
    let mut start = 0;
    for &k in &op.0 {
        groups.push(&args[start..start + k]);
        start += k;
    }
    let unions_belong = groups.iter().all(|g| {
        let union = g.iter().fold(StateSet::empty(n), |acc, a| acc.union(a));
        family.contains(&union)
    });
    unions_belong && family.iter().all(|b| groups.iter().any(|g| g.iter().all(|a| a.intersects(b))))
}

fn wide() -> Bounds {
    Bounds { max_arity: 4, labels: vec!["a".into(), "b".into(), "c".into()], ..Bounds::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dfa_matches_definition(seed: u64, n in 1usize..=4) {
        let mut rng = rng(seed);
        let f = Dfa::new(["a", "b", "c"]).unwrap();
        let t = f.random_value(&mut rng, n, &wide());
        let op = f.random_modality(&mut rng, &wide());
        let args = random_args(&mut rng, n, 3);
        prop_assert_eq!(f.lifting_contains(&op, &t, &args).unwrap(), dfa_oracle(&op, &t, &args));
    }

    #[test]
    fn lts_matches_definition(seed: u64, n in 1usize..=4) {
        let mut rng = rng(seed);
        let f = Lts::open();
        let t = f.random_value(&mut rng, n, &wide());
        let op = f.random_modality(&mut rng, &wide());
        let args = random_args(&mut rng, n, op.0.len());
        prop_assert_eq!(f.lifting_contains(&op, &t, &args).unwrap(), lts_oracle(&op, &t, &args));
    }

    #[test]
    fn lts_singletons_hit_decomposition(seed: u64, n in 1usize..=4) {
        // random tuples rarely land inside the lifting; aim at it directly
        let mut rng = rng(seed);
        let f = Lts::open();
        let t = f.random_value(&mut rng, n, &wide());
        let (op, xs) = f.decompose(&t);
        let mut args: Vec<StateSet> = xs.iter().map(|&x| StateSet::singleton(n, x)).collect();
        for a in &mut args {
            a.union_with(&StateSet::from_mask(n, rng.gen_range(0..1u64 << n)));
        }
        prop_assert_eq!(f.lifting_contains(&op, &t, &args).unwrap(), lts_oracle(&op, &t, &args));
        prop_assert!(lts_oracle(&op, &t, &args));
    }

    #[test]
    fn dist_matches_hall_condition(seed: u64, n in 1usize..=4) {
        let mut rng = rng(seed);
        let bounds = Bounds { max_arity: 4, max_denominator: 12, ..Bounds::default() };
        let t = Dist.random_value(&mut rng, n, &bounds);
        let op = Dist.random_modality(&mut rng, &bounds);
        let mut args = random_args(&mut rng, n, op.0.len());
        // bias towards covering the support so that both verdicts occur
        if rng.gen_bool(0.5) {
            let support = StateSet::from_states(n, Dist.support(&t));
            for a in &mut args {
                if rng.gen_bool(0.5) {
                    a.union_with(&support);
                }
            }
        }
        prop_assert_eq!(Dist.lifting_contains(&op, &t, &args).unwrap(), dist_oracle(&op, &t, &args, n));
    }

    #[test]
    fn mon_matches_upward_closure(seed: u64, n in 1usize..=4) {
        let mut rng = rng(seed);
        let t = Mon.random_value(&mut rng, n, &wide());
        let op = if rng.gen_bool(0.5) { Mon.decompose(&t).0 } else { Mon.random_modality(&mut rng, &wide()) };
        let args = random_args(&mut rng, n, Mon.arity(&op));
        prop_assert_eq!(Mon.lifting_contains(&op, &t, &args).unwrap(), mon_oracle(&op, &t, &args, n));
    }
}

#[test]
fn worked_membership_examples() {
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let half = DistModality::new(vec![q(1, 2), q(1, 2)]).unwrap();
    let mu = DistValue::new([(0, q(1, 2)), (1, q(1, 2))]).unwrap();
    let args = [StateSet::from_states(2, [0, 1]), StateSet::singleton(2, 1)];
    assert!(Dist.lifting_contains(&half, &mu, &args).unwrap());
    assert!(dist_oracle(&half, &mu, &args, 2));
    let skewed = DistModality::new(vec![q(1, 3), q(2, 3)]).unwrap();
    assert!(!Dist.lifting_contains(&skewed, &mu, &args).unwrap());
    assert!(!dist_oracle(&skewed, &mu, &args, 2));

    let lts = Lts::open();
    let aba = LtsModality(vec!["a".into(), "b".into(), "a".into()]);
    let t = LtsValue::new([("a", 0), ("a", 2), ("b", 1)]);
    let args = [StateSet::singleton(3, 0), StateSet::singleton(3, 1), StateSet::singleton(3, 2)];
    assert!(lts.lifting_contains(&aba, &t, &args).unwrap());
    assert!(lts_oracle(&aba, &t, &args));

    let t = MonValue::new([vec![0], vec![1, 2]]);
    let (op, xs) = Mon.decompose(&t);
    let args: Vec<StateSet> = xs.iter().map(|&x| StateSet::singleton(3, x)).collect();
    assert!(mon_oracle(&op, &t, &args, 3));
    assert_eq!(Mon.singleton_apply(&op, &xs, 3).unwrap(), t);
}
