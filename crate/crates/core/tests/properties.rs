use std::collections::BTreeSet;

use proptest::prelude::*;

use dagproof::compress::{compress_levels, compress_proof, DEFAULT_THREAD_CAP};
use dagproof::encode::statman_translate;
use dagproof::formula::{parse_formula, Formula, Sequent};
use dagproof::hsc::{check_sc_proof, nd_height_bound, prove_lm, sc_to_nd};
use dagproof::nd::{check_local_correctness, measures, proves, proves_modified, unfold};

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::var)
}

fn implicational() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(5, 24, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b))
    })
}

fn full_language() -> impl Strategy<Value = Formula> {
    prop_oneof![4 => atom(), 1 => Just(Formula::Falsum)].prop_recursive(4, 16, 2, |inner| {
        (inner.clone(), inner, 0..3u8).prop_map(|(a, b, c)| match c {
            0 => Formula::imp(a, b),
            1 => Formula::and(a, b),
            _ => Formula::or(a, b),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed),
        cases: 512,
        ..ProptestConfig::default()
    })]

    #[test]
    fn printing_round_trips(f in full_language()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn weight_is_additive(a in full_language(), b in full_language()) {
        let w = a.weight() + b.weight() + 1;
        prop_assert_eq!(Formula::imp(a.clone(), b.clone()).weight(), w);
        prop_assert_eq!(Formula::and(a.clone(), b.clone()).weight(), w);
        prop_assert_eq!(Formula::or(a, b).weight(), w);
    }

    #[test]
    fn subformulas_are_bounded_by_weight(f in full_language()) {
        prop_assert!(f.subformulas().len() <= f.weight());
    }

    #[test]
    fn statman_output_is_implicational(f in full_language()) {
        let t = statman_translate(&f);
        prop_assert!(t.is_purely_implicational());
        prop_assert!(t.weight() <= f.weight().pow(3));
    }

    #[test]
    fn prover_output_survives_the_pipeline(f in implicational()) {
        let Some(pr) = prove_lm(&Sequent::goal(f.clone())) else {
            return Ok(());
        };
        prop_assert!(check_sc_proof(&pr));
        let t = sc_to_nd(&pr).unwrap();
        prop_assert_eq!(t.root_formula(), &f);
        prop_assert!(t.is_tree_like());
        prop_assert!(check_local_correctness(&t).is_ok());
        prop_assert!(proves(&t).unwrap());
        prop_assert!(t.height() <= nd_height_bound(&pr));

        let m = measures(&t);
        let heaviest = t.nodes().iter().map(|n| n.formula.weight()).max().unwrap();
        prop_assert!(m.phi <= m.weight);
        prop_assert!(m.weight <= t.len() * heaviest);

        let lc = compress_levels(&t).unwrap();
        for level in 0..=t.height() {
            let tree: BTreeSet<_> = (0..t.len()).filter(|&i| t.level(i) == level).map(|i| &t.node(i).formula).collect();
            let prime: Vec<_> = (0..lc.prime.len()).filter(|&i| lc.prime.level(i) == level).map(|i| &lc.prime.node(i).formula).collect();
            prop_assert_eq!(prime.len(), tree.len());
            prop_assert_eq!(prime.into_iter().collect::<BTreeSet<_>>(), tree);
        }

        let trace = compress_proof(&t, DEFAULT_THREAD_CAP).unwrap();
        let star = &trace.star;
        prop_assert!(proves_modified(star).is_proved());
        prop_assert_eq!(proves(&unfold(star, 1_000_000).unwrap().tree).unwrap(), proves(star).unwrap());
    }
}
