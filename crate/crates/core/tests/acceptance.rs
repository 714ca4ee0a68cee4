//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p coalgex --test acceptance`.
#![allow(clippy::needless_range_loop)]

mod common;

use std::time::{Duration, Instant};

use coalgex::coalgebra::Coalgebra;
use coalgex::equivalence::{behavioural_equivalence, equivalent, LambdaOracle};
use coalgex::expr::{alpha_eq, parse_wellformed, Expr};
use coalgex::format::{self, AnyCoalgebra, CoalgebraFile};
use coalgex::functors::{Dist, DistModality, DistValue, Lts, Mon};
use coalgex::kleene::{extract, generate_subcoalgebra, synthesize};
use coalgex::sample::{fractions, random_coalgebra, Bounds, Sample};
use coalgex::semantics::{eval, eval_closed, eval_system, flatten, FlatSystem, Valuation};
use coalgex::{Functor, StateId, StateSet, WellFormed};
use num_traits::{One, Zero};
use rand::Rng;

use common::*;

const FAST: Duration = Duration::from_secs(1);
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(60);
const SIGNATURE_BUDGET: Duration = Duration::from_secs(120);

const ROUND_TRIP_COALGEBRAS: usize = 200;
const FLATTEN_EXPRESSIONS: usize = 200;
const FLAT_SYSTEMS: usize = 200;
const ORACLE_COALGEBRAS: usize = 100;
const RANDOM_CORPUS: usize = 100;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    ensure(took <= budget, || format!("{detail}; took {took:.2?}, budget {budget:.0?}"))?;
    Ok(format!("{detail}; {took:.2?}"))
}

fn load(name: &str) -> CoalgebraFile {
    format::read(&read_data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let file = load("even_b.json");
    let AnyCoalgebra::Dfa(c) = file.coalgebra else { return Err("golden file is not a DFA".into()) };
    let x1 = c.carrier().lookup("x1").map_err(|e| e.to_string())?;
    let e = extract(&c, x1);
    let expected = parse_wellformed("nu x1. [1](x1, nu x2. [0](x2, x1))", &ab()).map_err(|e| e.to_string())?;
    let shown = e.expr().display(c.functor()).to_string();
    ensure(alpha_eq(e.expr(), expected.expr()), || format!("extracted {shown}"))?;
    let sat = eval_closed(&e, &c).map_err(|e| e.to_string())?;
    ensure(sat == StateSet::singleton(2, x1), || format!("eval gave {sat:?}"))?;
    within(start, FAST, format!("extract = {shown}, eval = {{x1}}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let lts = Lts::open();
    let e = parse_wellformed("nu x. [a]([a,b,a](x, [], []))", &lts).map_err(|e| e.to_string())?;
    let model = synthesize(&lts, &e).map_err(|e| e.to_string())?;
    ensure(model.coalgebra.len() == 4, || format!("{} states", model.coalgebra.len()))?;
    let file = load("lts_four_states.json");
    let AnyCoalgebra::Lts(golden) = file.coalgebra else { return Err("golden file is not an LTS".into()) };
    let x = golden.carrier().lookup("x").map_err(|e| e.to_string())?;
    let same = equivalent(&model.coalgebra, model.state, &golden, x).map_err(|e| e.to_string())?;
    ensure(same, || "distinguished state not equivalent to x".into())?;
    within(start, FAST, "4 states, distinguished state ~ x".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let text = "nu x. [2/3,1/3](x, nu y. [1/6,1/3,1/2](x, y, nu z. [1/4,3/4](x, z)))";
    let e = parse_wellformed(text, &Dist).map_err(|e| e.to_string())?;
    let model = synthesize(&Dist, &e).map_err(|e| e.to_string())?;
    let written = format::write(&CoalgebraFile {
        coalgebra: AnyCoalgebra::Dist(model.coalgebra.clone()),
        initial: Some(model.state),
    });
    let golden = read_data("markov_chain.json");
    let canonical = format::write(&load("markov_chain.json"));
    ensure(canonical == golden, || "golden file is not canonical".into())?;
    ensure(written == golden, || format!("synthesized:\n{written}"))?;
    let sat = eval_closed(&e, &model.coalgebra).map_err(|e| e.to_string())?;
    ensure(sat.contains(model.state), || format!("eval gave {sat:?}"))?;
    within(start, FAST, "byte-equal to golden chain, point satisfies e".into())
}

/// Round trips for every state of `count` random coalgebras.
fn round_trips<F: Sample>(f: &F, max_states: usize, count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    let mut states = 0;
    for _ in 0..count {
        let n = rng.gen_range(1..=max_states);
        let c = random_coalgebra(f, &mut rng, n, &bounds);
        for x in c.carrier().states() {
            let e = extract(&c, x);
            let shown = || format!("{:?}, state {x}: {}", c.structure(), e.expr().display(f));
            let sat = eval_closed(&e, &c).map_err(|e| e.to_string())?;
            ensure(sat.contains(x), || format!("not self-satisfying: {}", shown()))?;
            let model = synthesize(f, &e).map_err(|e| e.to_string())?;
            let same = equivalent(&c, x, &model.coalgebra, model.state).map_err(|e| e.to_string())?;
            ensure(same, || format!("synthesized model not equivalent: {}", shown()))?;
            states += 1;
        }
    }
    Ok(states)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let n = ROUND_TRIP_COALGEBRAS;
    let counts = [
        round_trips(&ab(), 5, n, 41)?,
        round_trips(&Lts::open(), 5, n, 42)?,
        round_trips(&Dist, 5, n, 43)?,
        round_trips(&Mon, 3, n, 44)?,
    ];
    within(start, ROUND_TRIP_BUDGET, format!("{n} coalgebras per functor, {counts:?} states"))
}

fn flattening<F: Sample>(corpus: &[WellFormed<F::Modality>], f: &F, seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    let mut checks = 0;
    for e in corpus {
        let system = flatten(e);
        for _ in 0..3 {
            let n = rng.gen_range(1..=4);
            let c = random_coalgebra(f, &mut rng, n, &bounds);
            let direct = eval_closed(e, &c).map_err(|e| e.to_string())?;
            let flat = eval_system(&system, &c).map_err(|e| e.to_string())?;
            ensure(flat[0] == direct, || {
                format!("{}: direct {direct:?}, flat {:?}", e.expr().display(f), flat[0])
            })?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn random_only<F: Sample>(f: &F, count: usize, seed: u64) -> Vec<WellFormed<F::Modality>> {
    let mut rng = rng(seed);
    let shape = coalgex::sample::ExprBounds::default();
    (0..count).map(|_| coalgex::sample::random_expr(f, &mut rng, &Bounds::default(), &shape)).collect()
}

fn criterion_5() -> Outcome {
    let n = FLATTEN_EXPRESSIONS;
    let checks = [
        flattening(&random_only(&ab(), n, 51), &ab(), 52)?,
        flattening(&random_only(&Lts::open(), n, 53), &Lts::open(), 54)?,
        flattening(&random_only(&Dist, n, 55), &Dist, 56)?,
        flattening(&random_only(&Mon, n, 57), &Mon, 58)?,
    ];
    Ok(format!("{n} expressions per functor, {checks:?} comparisons"))
}

fn random_system<F: Sample, R: Rng>(f: &F, rng: &mut R, bounds: &Bounds) -> FlatSystem<F::Modality> {
    let k = rng.gen_range(1..=4);
    let equations = (0..k)
        .map(|_| {
            let op = f.random_modality(rng, bounds);
            let args = (0..f.arity(&op)).map(|_| rng.gen_range(0..k)).collect();
            (op, args)
        })
        .collect();
    FlatSystem { vars: (0..k).map(|i| format!("z{i}")).collect(), equations }
}

fn gfp_classes<F: Sample>(f: &F, count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    for _ in 0..count {
        let system = random_system(f, &mut rng, &bounds);
        let n = rng.gen_range(1..=4);
        let c = random_coalgebra(f, &mut rng, n, &bounds);
        let p = behavioural_equivalence(&c);
        let gfp = eval_system(&system, &c).map_err(|e| e.to_string())?;
        let show = || format!("{}on {:?}: {gfp:?}", system.display(f), c.structure());
        for (i, a) in gfp.iter().enumerate() {
            let members: Vec<StateId> = a.iter().collect();
            ensure(members.iter().all(|&x| p.same_block(x, members[0])), || format!("component {i} mixes classes: {}", show()))?;
            for b in &gfp[i + 1..] {
                ensure(a == b || !a.intersects(b), || format!("overlapping components: {}", show()))?;
            }
        }
    }
    Ok(count)
}

fn criterion_6() -> Outcome {
    let n = FLAT_SYSTEMS;
    let counts = [
        gfp_classes(&ab(), n, 61)?,
        gfp_classes(&Lts::open(), n, 62)?,
        gfp_classes(&Dist, n, 63)?,
        gfp_classes(&Mon, n, 64)?,
    ];
    Ok(format!("{counts:?} systems"))
}

fn truth<F: Sample>(f: &F, corpus: &[WellFormed<F::Modality>]) -> Result<usize, String> {
    for e in corpus {
        let (model, _) = generate_subcoalgebra(f, e).map_err(|e| e.to_string())?;
        let sat = eval_closed(e, &model.coalgebra).map_err(|e| e.to_string())?;
        ensure(sat.contains(model.state), || format!("{} fails on its own state", e.expr().display(f)))?;
    }
    Ok(corpus.len())
}

fn criterion_7() -> Outcome {
    let r = RANDOM_CORPUS;
    let counts = [
        truth(&ab(), &dfa_corpus(r))?,
        truth(&Lts::open(), &lts_corpus(r))?,
        truth(&Dist, &dist_corpus(r))?,
        truth(&Mon, &mon_corpus(r))?,
    ];
    Ok(format!("{counts:?} corpus expressions"))
}

/// Every modality, value and argument tuple on carriers of at most 3 states.
fn signature_suite<F: Sample>(f: &F, bounds: &Bounds) -> Result<usize, String> {
    let modalities = f.enumerate_modalities(bounds);
    let values: Vec<Vec<F::Value>> = (0..=3).map(|n| f.enumerate_values(n, bounds)).collect();
    let mut checks = 0usize;
    let subsets = |n: usize| -> Vec<StateSet> { (0..1u64 << n).map(|m| StateSet::from_mask(n, m)).collect() };
    let all_tuples = |n: usize, k: usize| -> Vec<Vec<StateSet>> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p: Vec<StateSet>| {
                    subsets(n).into_iter().map(move |s| {
                        let mut q = p.clone();
                        q.push(s);
                        q
                    })
                })
                .collect();
        }
        out
    };
    for n in 1..=3 {
        for op in &modalities {
            let k = f.arity(op);
            let tuples = all_tuples(n, k);
            // singleton preservation and the round trip through decompose
            for xs in state_tuples(n, k) {
                let sa = f.singleton_apply(op, &xs, n).map_err(|e| e.to_string())?;
                let singletons: Vec<StateSet> = xs.iter().map(|&x| StateSet::singleton(n, x)).collect();
                let mut members = values[n].iter().filter(|t| f.raw_contains(op, t, &singletons)).count();
                if !values[n].contains(&sa) {
                    members += usize::from(f.raw_contains(op, &sa, &singletons));
                }
                ensure(members == 1 && f.raw_contains(op, &sa, &singletons), || {
                    format!("{op:?}{xs:?}: {members} members")
                })?;
                let (op2, xs2) = f.decompose(&sa);
                ensure(f.raw_apply(&op2, &xs2) == sa, || format!("decompose of {sa:?}"))?;
                checks += 1;
            }
            // monotonicity: membership survives adding one state to one argument
            for t in &values[n] {
                for tuple in tuples.iter().filter(|a| f.raw_contains(op, t, a)) {
                    for i in 0..k {
                        for x in 0..n {
                            let mut bigger = tuple.clone();
                            bigger[i].insert(x);
                            ensure(f.raw_contains(op, t, &bigger), || format!("{op:?} not monotone at {t:?}"))?;
                            checks += 1;
                        }
                    }
                }
            }
        }
        for t in &values[n] {
            let (op, xs) = f.decompose(t);
            ensure(f.raw_apply(&op, &xs) == *t, || format!("decompose of {t:?}"))?;
            // separation: the decomposition of t excludes every other value
            let singletons: Vec<StateSet> = xs.iter().map(|&x| StateSet::singleton(n, x)).collect();
            for u in values[n].iter().filter(|u| *u != t) {
                ensure(!f.raw_contains(&op, u, &singletons), || format!("{t:?} and {u:?} not separated"))?;
                checks += 1;
            }
        }
    }
    // naturality: t ∈ λ(g⁻¹[B⃗]) iff Tg(t) ∈ λ(B⃗), for every g: m → n
    for m in 1..=3 {
        for n in 1..=3 {
            for g in state_tuples(n, m) {
                for op in &modalities {
                    let tuples = all_tuples(n, f.arity(op));
                    for t in &values[m] {
                        let image = f.raw_map(t, &g);
                        for b in &tuples {
                            let pre: Vec<StateSet> = b.iter().map(|s| s.preimage(&g)).collect();
                            ensure(f.raw_contains(op, t, &pre) == f.raw_contains(op, &image, b), || {
                                format!("naturality fails for {op:?}, {t:?} along {g:?}")
                            })?;
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(checks)
}

fn state_tuples(n: usize, k: usize) -> Vec<Vec<StateId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<StateId>| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let b = Bounds::default();
    let small_dist = Bounds { max_denominator: 4, ..Bounds::default() };
    let counts = [
        signature_suite(&ab(), &b)?,
        signature_suite(&Lts::open(), &b)?,
        signature_suite(&Dist, &small_dist)?,
        signature_suite(&Mon, &b)?,
    ];
    within(start, SIGNATURE_BUDGET, format!("{counts:?} checks"))
}

fn criterion_9() -> Outcome {
    let weights = fractions(6);
    let bounds = Bounds { max_arity: 3, max_denominator: 6, labels: vec![] };
    let mut instances = 0;
    for n in 1..=3 {
        let sets: Vec<StateSet> = (0..1u64 << n).map(|m| StateSet::from_mask(n, m)).collect();
        let mus: Vec<DistValue> = Dist.enumerate_values(n, &bounds);
        for p1 in weights.iter().filter(|w| !w.is_one()) {
            let p2 = num_rational::BigRational::one() - p1;
            let op = DistModality::new(vec![p1.clone(), p2.clone()]).map_err(|e| e.to_string())?;
            for mu in &mus {
                for a1 in &sets {
                    for a2 in &sets {
                        let closed = mu.mass(a1) >= *p1 && mu.mass(a2) >= p2 && mu.mass(&a1.union(a2)).is_one();
                        let args = [a1.clone(), a2.clone()];
                        let flow = Dist.lifting_contains(&op, mu, &args).map_err(|e| e.to_string())?;
                        ensure(flow == closed, || format!("{op:?} {mu:?} {a1:?} {a2:?}: flow {flow}, closed form {closed}"))?;
                        instances += 1;
                    }
                }
            }
        }
    }
    debug_assert!(!weights.iter().any(Zero::is_zero));
    Ok(format!("{instances} instances agree"))
}

fn oracle_agreement<F: Sample>(f: &F, count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=4);
        let c = random_coalgebra(f, &mut rng, n, &bounds);
        let p = behavioural_equivalence(&c);
        let oracle = LambdaOracle::new(&c, &c).map_err(|e| e.to_string())?;
        let largest = oracle.bisimilarity();
        let blocks = p.to_relation();
        ensure(largest == blocks, || format!("{:?}: refinement {:?}, oracle {largest:?}", c.structure(), p.classes()))?;
        ensure(oracle.is_bisimulation(&blocks).map_err(|e| e.to_string())?, || "block relation rejected".into())?;
    }
    Ok(count)
}

fn criterion_10() -> Outcome {
    let n = ORACLE_COALGEBRAS;
    let counts = [
        oracle_agreement(&ab(), n, 101)?,
        oracle_agreement(&Lts::open(), n, 102)?,
        oracle_agreement(&Dist, n, 103)?,
        oracle_agreement(&Mon, n, 104)?,
    ];
    Ok(format!("{counts:?} coalgebras agree"))
}

/// Subexpressions rooted at a binder.
fn binders<M: Clone>(e: &Expr<M>, out: &mut Vec<Expr<M>>) {
    match e {
        Expr::Var(_) => {}
        Expr::Nu(_, body) => {
            out.push(e.clone());
            binders(body, out);
        }
        Expr::Modal(_, args) => args.iter().for_each(|a| binders(a, out)),
    }
}

fn invariance<F: Sample>(f: &F, corpus: &[WellFormed<F::Modality>], seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    let coalgebras: Vec<Coalgebra<F>> =
        (0..10)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                random_coalgebra(f, &mut rng, n, &bounds)
            })
            .collect();
    let mut checks = 0;
    for c in &coalgebras {
        let p = behavioural_equivalence(c);
        for e in corpus {
            let mut subs = Vec::new();
            binders(e.expr(), &mut subs);
            for s in subs {
                let valuation: Valuation = s
                    .free_vars()
                    .into_iter()
                    .map(|v| (v, StateSet::from_mask(c.len(), rng.gen_range(0..1u64 << c.len()))))
                    .collect();
                let lhs = eval(&s, c, &valuation).map_err(|e| e.to_string())?;
                let rhs = eval(&s.unfold().expect("binder"), c, &valuation).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("unfolding changes {}", s.display(f)))?;
                checks += 1;
            }
            let sat = eval_closed(e, c).map_err(|e| e.to_string())?;
            let closed = c.carrier().states().all(|x| c.carrier().states().all(|y| !p.same_block(x, y) || sat.contains(x) == sat.contains(y)));
            ensure(closed, || format!("{} separates equivalent states", e.expr().display(f)))?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn criterion_11() -> Outcome {
    let r = RANDOM_CORPUS;
    let counts = [
        invariance(&ab(), &dfa_corpus(r), 111)?,
        invariance(&Lts::open(), &lts_corpus(r), 112)?,
        invariance(&Dist, &dist_corpus(r), 113)?,
        invariance(&Mon, &mon_corpus(r), 114)?,
    ];
    Ok(format!("{counts:?} checks"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("even-b extraction", criterion_1),
        ("LTS synthesis", criterion_2),
        ("Markov chain synthesis", criterion_3),
        ("Kleene round trips", criterion_4),
        ("flattening", criterion_5),
        ("gfp components are classes", criterion_6),
        ("truth lemma", criterion_7),
        ("effect-signature properties", criterion_8),
        ("Dist lifting closed form", criterion_9),
        ("refinement vs oracle", criterion_10),
        ("unfolding and invariance", criterion_11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
