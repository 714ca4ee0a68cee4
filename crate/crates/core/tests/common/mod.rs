#![allow(dead_code)]

use std::path::PathBuf;

use coalgex::expr::parse_wellformed;
use coalgex::functors::{Dfa, Dist, Lts, Mon};
use coalgex::sample::{random_expr, Bounds, ExprBounds, Sample};
use coalgex::WellFormed;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn ab() -> Dfa {
    Dfa::new(["a", "b"]).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Hand-written expressions followed by `random` seeded random ones.
pub fn corpus<F: Sample>(f: &F, file: &str, random: usize, seed: u64) -> Vec<WellFormed<F::Modality>> {
    let mut out: Vec<_> = read_data(file)
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| parse_wellformed(l, f).unwrap_or_else(|e| panic!("{file}: {l}: {e}")))
        .collect();
    let mut rng = rng(seed);
    let bounds = Bounds::default();
    let shape = ExprBounds::default();
    out.extend((0..random).map(|_| random_expr(f, &mut rng, &bounds, &shape)));
    out
}

pub fn dfa_corpus(random: usize) -> Vec<WellFormed<<Dfa as coalgex::Functor>::Modality>> {
    corpus(&ab(), "corpus_dfa.txt", random, 1)
}

pub fn lts_corpus(random: usize) -> Vec<WellFormed<<Lts as coalgex::Functor>::Modality>> {
    corpus(&Lts::open(), "corpus_lts.txt", random, 2)
}

pub fn dist_corpus(random: usize) -> Vec<WellFormed<<Dist as coalgex::Functor>::Modality>> {
    corpus(&Dist, "corpus_dist.txt", random, 3)
}

pub fn mon_corpus(random: usize) -> Vec<WellFormed<<Mon as coalgex::Functor>::Modality>> {
    corpus(&Mon, "corpus_mon.txt", random, 4)
}
