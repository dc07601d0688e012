mod common;

use common::*;
use structctl::cases::*;
use structctl::cover::generic_dimension;
use structctl::extend::ExtensionPlan;

#[test]
fn metrics_match_computation() {
    for h in 1..=5 {
        let id = CaseStudyId::new(Family::BinaryTree, h, true).unwrap();
        let m = expected_metrics(id).unwrap();
        assert_eq!(generic_dimension(&graph(&binary_tree(h).unwrap())).unwrap().d_c, m.d_c);
        let plan = case_plan(id).unwrap();
        assert_eq!((plan.s_first_order, plan.s_hat, plan.delta), (m.s, m.s_hat, m.delta));
    }
    for h in [2, 4, 6] {
        let id = CaseStudyId::new(Family::Bifurcation, h, true).unwrap();
        let m = expected_metrics(id).unwrap();
        assert_eq!(generic_dimension(&graph(&bifurcation(h).unwrap())).unwrap().d_c, m.d_c);
        let plan = case_plan(id).unwrap();
        assert_eq!((plan.s_first_order, plan.s_hat, plan.delta), (m.s, m.s_hat, m.delta));
    }
}

#[test]
fn generated_json_round_trips() {
    for f in Family::ALL {
        let id = CaseStudyId::new(f, if f.takes_height() { 2 } else { 0 }, false).unwrap();
        let text = generate(id).unwrap().to_json_string();
        let back = structctl::model::AnyNetwork::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
    }
    let ext = generate(CaseStudyId::new(Family::BinaryTree, 2, true).unwrap()).unwrap();
    let Generated::Extended(e) = &ext else { panic!() };
    assert_eq!(structctl::model::ExtendedNetwork::from_json_str(&e.to_json_string()).unwrap(), *e);
}

#[test]
fn extended_fixtures_are_plans() {
    let plan = ExtensionPlan::evaluate(fig3b().unwrap(), None, None).unwrap();
    assert!(plan.structurally_controllable);
    assert_eq!(plan.result.n_hat(), 7);
}
