mod common;

use common::*;
use proptest::prelude::*;
use structctl::cases;
use structctl::classify::{classify, Label};
use structctl::cover::generic_dimension;
use structctl::extend::{extend_general, extend_x_network, first_order_minimum, heterogeneity_bounds};
use structctl::graph::SystemGraph;
use structctl::verify::generic_rank_controllability;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn general_procedure_reaches_full_rank(seed in any::<u64>()) {
        let net = random_accessible(&mut rng(seed), 7, 2);
        let g = graph(&net);
        prop_assume!(generic_dimension(&g).unwrap().d_c < net.n());
        let plan = extend_general(&net, None).unwrap();
        prop_assert!(plan.structurally_controllable);
        let n_hat = plan.result.n_hat();
        prop_assert!(plan.certificate.covers_all(n_hat));
        prop_assert!(plan.certificate.vertex_disjoint());
        let d = generic_dimension(&SystemGraph::expanded(&plan.result)).unwrap().d_c;
        prop_assert_eq!(d, n_hat);
        let rank = generic_rank_controllability(&plan.result, 2, seed).unwrap();
        prop_assert_eq!(rank.rank, n_hat);
    }

    #[test]
    fn x_networks_need_only_homogeneous_copies(seed in any::<u64>()) {
        let net = random_accessible(&mut rng(seed), 8, 3);
        let c = classify(&graph(&net)).unwrap();
        prop_assume!(c.label == Label::X);
        let plan = extend_x_network(&net, c.witness.as_ref().unwrap()).unwrap();
        prop_assert!(plan.result.heterogeneous().iter().all(|h| !h));
        prop_assert!(plan.structurally_controllable);
    }
}

#[test]
fn first_order_minimum_on_families() {
    for h in 1..=5 {
        let m = cases::expected_metrics(cases::CaseStudyId::new(cases::Family::BinaryTree, h, false).unwrap()).unwrap();
        assert_eq!(first_order_minimum(&cases::binary_tree(h).unwrap()).unwrap(), m.s);
    }
    for h in [2, 4, 6] {
        assert_eq!(first_order_minimum(&cases::bifurcation(h).unwrap()).unwrap(), h);
    }
}

#[test]
fn figure_extensions() {
    for (net, cover, shared, n_hat) in [
        (cases::fig2a(), cases::fig2a_cover(), 2, 8),
        (cases::fig2b(), cases::fig2b_cover(), 1, 7),
        (cases::fig2c(), cases::fig2c_cover(), 4, 8),
    ] {
        let plan = extend_x_network(&net, &cover).unwrap();
        let mut orders = vec![1; net.n()];
        orders[shared] = 2;
        assert_eq!(plan.result.orders(), orders.as_slice());
        assert_eq!(plan.result.n_hat(), n_hat);
        assert_eq!(plan.s_hat, 1);
        assert!(plan.structurally_controllable);
    }
}

#[test]
fn bounds_rejects_non_y() {
    assert!(heterogeneity_bounds(&cases::fig2a(), 2).is_err());
    assert!(heterogeneity_bounds(&cases::fig2d(), 0).is_err());
    let b = heterogeneity_bounds(&cases::bifurcation(6).unwrap(), 2).unwrap();
    assert_eq!((b.lower, b.upper), (3, 6));
}
