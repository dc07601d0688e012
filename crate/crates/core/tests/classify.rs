mod common;

use common::*;
use proptest::prelude::*;
use structctl::cases;
use structctl::classify::{classify, is_input_accessible, Label};
use structctl::model::StructuredNetwork;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn labels_follow_the_definitions(seed in any::<u64>()) {
        let net = random_accessible(&mut rng(seed), 8, 3);
        let c = classify(&graph(&net)).unwrap();
        if c.label == Label::StructurallyControllable {
            prop_assert_eq!(brute_force_dc(&net), net.n());
            return Ok(());
        }
        let expected = match definitional_class(&net) {
            DefinitionalClass::X => Label::X,
            DefinitionalClass::Y => Label::Y,
            DefinitionalClass::Neither => Label::Mixed,
        };
        prop_assert_eq!(c.label, expected);
    }

    #[test]
    fn x_witnesses_are_valid(seed in any::<u64>()) {
        let net = random_accessible(&mut rng(seed), 8, 3);
        let g = graph(&net);
        let c = classify(&g).unwrap();
        if c.label == Label::X {
            let w = c.witness.unwrap();
            w.validate(&g).unwrap();
            prop_assert!(w.covers_all(net.n()));
            prop_assert!(!w.vertex_disjoint());
            let mut inputs: Vec<_> = w.stems.iter().map(|s| s.input).collect();
            inputs.sort_unstable();
            inputs.dedup();
            prop_assert_eq!(inputs.len(), w.stems.len());
        }
        if c.label == Label::Y {
            prop_assert!(c.diagnostics.acyclic);
            prop_assert!(c.d_c.unwrap() < net.n());
        }
    }
}

#[test]
fn figure_labels() {
    for (net, label) in [
        (cases::fig2a(), Label::X),
        (cases::fig2b(), Label::X),
        (cases::fig2c(), Label::X),
        (cases::fig2d(), Label::Y),
    ] {
        assert_eq!(classify(&graph(&net)).unwrap().label, label);
    }
}

#[test]
fn families_are_y() {
    for h in 1..=4 {
        assert_eq!(classify(&graph(&cases::binary_tree(h).unwrap())).unwrap().label, Label::Y);
    }
    for h in [2, 4, 6] {
        assert_eq!(classify(&graph(&cases::bifurcation(h).unwrap())).unwrap().label, Label::Y);
    }
}

#[test]
fn accessibility() {
    assert!(is_input_accessible(&graph(&cases::fig1a())).0);
    assert!(is_input_accessible(&graph(&cases::fig2c())).0);
    let extra = StructuredNetwork::new(4, 1, [(0, 1), (0, 2)], [(0, 0)]).unwrap();
    assert_eq!(is_input_accessible(&graph(&extra)), (false, vec![3]));
    assert_eq!(classify(&graph(&extra)).unwrap().label, Label::NotInputAccessible);
}
