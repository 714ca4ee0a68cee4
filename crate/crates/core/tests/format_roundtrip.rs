mod common;

use coalgex::format::{read, write, AnyCoalgebra, CoalgebraFile};
use coalgex::functors::{Dist, Lts, Mon};
use coalgex::kleene::synthesize;
use coalgex::sample::{random_coalgebra, Bounds};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn round_trip(file: CoalgebraFile) -> Result<(), TestCaseError> {
    let text = write(&file);
    let back = read(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, &file);
    prop_assert_eq!(write(&back), text);
    Ok(())
}

proptest! {
    #[test]
    fn files_round_trip(seed: u64, n in 0usize..=6, kind in 0usize..4) {
        let mut rng = rng(seed);
        let bounds = Bounds::default();
        let coalgebra: AnyCoalgebra = match kind {
            0 => random_coalgebra(&ab(), &mut rng, n.max(1), &bounds).into(),
            1 => random_coalgebra(&Lts::with_labels(["a", "b"]), &mut rng, n, &bounds).into(),
            2 => random_coalgebra(&Dist, &mut rng, n.max(1), &bounds).into(),
            _ => random_coalgebra(&Mon, &mut rng, n, &bounds).into(),
        };
        let len = coalgebra.carrier().len();
        let initial = (len > 0 && rng.gen_bool(0.5)).then(|| rng.gen_range(0..len));
        round_trip(CoalgebraFile { coalgebra, initial })?;
    }
}

#[test]
fn golden_files_are_canonical() {
    for name in ["even_b.json", "lts_four_states.json", "markov_chain.json"] {
        let text = read_data(name);
        assert_eq!(write(&read(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn synthesized_files_are_deterministic() {
    for e in lts_corpus(30) {
        let a = synthesize(&Lts::open(), &e).unwrap();
        let b = synthesize(&Lts::open(), &e).unwrap();
        let file = |p: coalgex::Pointed<Lts>| write(&CoalgebraFile { coalgebra: p.coalgebra.into(), initial: Some(p.state) });
        assert_eq!(file(a), file(b));
    }
}
