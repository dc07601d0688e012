mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use structctl::cases::{self, CaseStudyId, Family};
use structctl::classify::{classify, Label};
use structctl::cover::{generic_dimension, PathCycleCover, Stem};
use structctl::extend::{extend_x_network, first_order_minimum, heterogeneity_bounds};
use structctl::graph::SystemGraph;
use structctl::model::{ExtendedNetwork, StructuredNetwork};
use structctl::verify::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: ok,
        detail: detail.into(),
    }
}

fn run(results: &mut Vec<bool>, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        check(false, format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = outcome.pass && in_time;
    let budget = limit.map(|l| format!(" (limit {:.0?})", l)).unwrap_or_default();
    println!(
        "{} {name}: {} [{:.2?}{budget}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed
    );
    results.push(pass);
}

fn tree_reproduction() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for h in 1..=4usize {
        let base = cases::binary_tree(h).unwrap();
        let d_c = generic_dimension(&SystemGraph::of_network(&base)).unwrap().d_c;
        let plan = cases::case_plan(CaseStudyId::new(Family::BinaryTree, h, true).unwrap()).unwrap();
        let p = 1i64 << h;
        let n = (2 * p - 1) as usize;
        let est = generic_rank_output_controllability(&plan.result, 5, h as u64).unwrap();
        let row = (
            d_c,
            plan.s_first_order as i64,
            plan.s_hat as i64,
            plan.delta,
            est.full_trials() >= 1 && est.rank == n,
        );
        let want = (h + 1, 2 * p - (h as i64 + 2), p - 1, p - (h as i64 + 1), true);
        ok &= row == want;
        notes.push(format!(
            "h={h}: d_c={} S={} S_hat={} delta={} rank={}/{} in {}/5",
            row.0,
            row.1,
            row.2,
            row.3,
            est.rank,
            n,
            est.full_trials()
        ));
    }
    check(ok, notes.join("; "))
}

fn bifurcation_reproduction() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for h in [2usize, 4, 6] {
        let base = cases::bifurcation(h).unwrap();
        let plan = cases::case_plan(CaseStudyId::new(Family::Bifurcation, h, true).unwrap()).unwrap();
        let bounds = heterogeneity_bounds(&base, 2).unwrap();
        let report = pbh_output_test(&bifurcation_witness(h).unwrap(), PbhMode::Rational).unwrap();
        let row_ok = plan.s_first_order == h
            && first_order_minimum(&base).unwrap() == h
            && plan.s_hat == h / 2
            && plan.delta == (h / 2) as i64
            && bounds.lower == plan.s_hat
            && report.which_test == Some(WhichTest::SingleEigenvalue)
            && report.verdict == Verdict::OutputControllable;
        ok &= row_ok;
        notes.push(format!(
            "h={h}: S={} S_hat={} delta={} lower={} single-eigenvalue rank {:?}/{:?} {}",
            plan.s_first_order,
            plan.s_hat,
            plan.delta,
            bounds.lower,
            report.achieved_rank,
            report.required_rank,
            report.verdict.as_str()
        ));
    }
    check(ok, notes.join("; "))
}

fn figure_fixtures() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, net, label) in [
        ("2a", cases::fig2a(), Label::X),
        ("2b", cases::fig2b(), Label::X),
        ("2c", cases::fig2c(), Label::X),
        ("2d", cases::fig2d(), Label::Y),
    ] {
        let got = classify(&SystemGraph::of_network(&net)).unwrap().label;
        ok &= got == label;
        notes.push(format!("fig{name}={got}"));
    }
    // Shared node (0-based) and total state count of each expanded figure.
    for (name, net, cover, shared, n_hat) in [
        ("3a", cases::fig2a(), cases::fig2a_cover(), 2, 8),
        ("3b", cases::fig2b(), cases::fig2b_cover(), 1, 7),
        ("3c", cases::fig2c(), cases::fig2c_cover(), 4, 8),
    ] {
        let plan = extend_x_network(&net, &cover).unwrap();
        let mut orders = vec![1; net.n()];
        orders[shared] = 2;
        let d = generic_dimension(&SystemGraph::expanded(&plan.result)).unwrap().d_c;
        ok &= plan.result.orders() == orders.as_slice()
            && plan.result.n_hat() == n_hat
            && d == n_hat
            && plan.result.heterogeneous().iter().all(|h| !h);
        notes.push(format!("fig{name}: n_hat={} d_c={d}", plan.result.n_hat()));
    }
    check(ok, notes.join(", "))
}

/// Stem `a -> z -> b_1 .. b_k` and cycle `z -> c_1 .. c_k -> z`.
fn stem_and_cycle(n: usize) -> (StructuredNetwork, PathCycleCover) {
    let k = (n - 2) / 2;
    let (a, z) = (0, 1);
    let b: Vec<usize> = (2..2 + k).collect();
    let c: Vec<usize> = (2 + k..2 + 2 * k).collect();
    let mut edges = vec![(a, z), (z, b[0]), (z, c[0]), (c[k - 1], z)];
    edges.extend(b.windows(2).map(|w| (w[0], w[1])));
    edges.extend(c.windows(2).map(|w| (w[0], w[1])));
    let net = StructuredNetwork::new(n, 1, edges, [(0, a)]).unwrap();
    let mut stem_nodes = vec![a, z];
    stem_nodes.extend(&b);
    let mut cycle = vec![z];
    cycle.extend(&c);
    let cover = PathCycleCover {
        stems: vec![Stem {
            input: 0,
            nodes: stem_nodes,
        }],
        cycles: vec![cycle],
    };
    (net, cover)
}

fn stem_cycle_scaling() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut last = i64::MIN;
    for n in [10usize, 20, 40] {
        let (net, cover) = stem_and_cycle(n);
        let plan = extend_x_network(&net, &cover).unwrap();
        let k = ((n - 2) / 2) as i64;
        // Either the whole stem or the first stem node plus the cycle.
        let z_size = (k + 2) as usize;
        let s = (n - z_size) as i64;
        ok &= plan.s_hat == 1
            && plan.s_first_order as i64 == s
            && plan.delta == s - 1
            && plan.delta > last
            && plan.structurally_controllable;
        last = plan.delta;
        notes.push(format!("n={n}: S_hat={} S={} delta={}", plan.s_hat, plan.s_first_order, plan.delta));
    }
    check(ok, notes.join("; "))
}

fn eigenvalue_wise_counterexample() -> Outcome {
    let q = |v: i64| <num_rational::BigRational as Field>::from_i64(v);
    let a = Mat::from_fn(2, 2, |r, c| q((r == 0 && c == 0) as i64));
    let b = Mat::zeros(2, 1);
    let c = Mat::from_fn(1, 2, |_, _| q(1));
    let r = pbh_rational(&a, &b, &c).unwrap();
    let naive: Vec<usize> = r.eigenvalues.iter().map(|e| e.output_rank).collect();
    let ok = r.verdict == Verdict::NotOutputControllable
        && r.which_test == Some(WhichTest::Blocks)
        && r.eigenvalue_wise_passes
        && naive == vec![1, 1];
    check(
        ok,
        format!(
            "verdict={} block rank {:?}/{:?}, eigenvalue-wise ranks {naive:?}",
            r.verdict.as_str(),
            r.achieved_rank,
            r.required_rank
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(2024);
    let (mut dc_eq, mut rank_eq, mut class_eq) = (0, 0, 0);
    let mut labels = std::collections::BTreeMap::new();
    for k in 0..200u64 {
        let net = random_accessible(&mut r, 8, 3);
        let g = SystemGraph::of_network(&net);
        let d_c = generic_dimension(&g).unwrap().d_c;
        dc_eq += (d_c == brute_force_dc(&net)) as usize;
        let rank = generic_rank_controllability(&ExtendedNetwork::identity(net.clone()), 1, k).unwrap().rank;
        rank_eq += (rank == d_c) as usize;
        let label = classify(&g).unwrap().label;
        *labels.entry(label.as_str()).or_insert(0) += 1;
        let agrees = match label {
            Label::StructurallyControllable => d_c == net.n(),
            other => {
                let expected = match definitional_class(&net) {
                    DefinitionalClass::X => Label::X,
                    DefinitionalClass::Y => Label::Y,
                    DefinitionalClass::Neither => Label::Mixed,
                };
                d_c < net.n() && other == expected
            }
        };
        class_eq += agrees as usize;
    }
    check(
        dc_eq == 200 && rank_eq >= 198 && class_eq == 200,
        format!("d_c oracle {dc_eq}/200, prime rank {rank_eq}/200, labels {class_eq}/200 {labels:?}"),
    )
}

fn homogeneous_y_extensions() -> Outcome {
    let fixtures = [
        cases::fig2d(),
        cases::binary_tree(2).unwrap(),
        cases::binary_tree(3).unwrap(),
        cases::bifurcation(2).unwrap(),
        cases::bifurcation(4).unwrap(),
    ];
    let mut r = rng(77);
    let mut below = 0;
    let mut total = 0;
    for net in &fixtures {
        assert_eq!(classify(&SystemGraph::of_network(net)).unwrap().label, Label::Y);
        for _ in 0..20 {
            let ext = random_extension(&mut r, net, 3, false);
            let est = generic_rank_output_controllability(&ext, 1, r.random()).unwrap();
            below += (est.rank < net.n()) as usize;
            total += 1;
        }
    }
    check(below == 100 && total == 100, format!("output rank < n in {below}/{total} trials"))
}

fn inaccessible_extensions() -> Outcome {
    let mut r = rng(99);
    let mut below = 0;
    let mut total = 0;
    let mut nets = 0;
    while nets < 20 {
        let n = r.random_range(2..=8);
        let m = r.random_range(1..=2);
        let net = random_network(&mut r, n, m, 0.25, 0.25);
        if accessible(&net) {
            continue;
        }
        nets += 1;
        for _ in 0..3 {
            let ext = random_extension(&mut r, &net, 3, true);
            let est = generic_rank_output_controllability(&ext, 2, r.random()).unwrap();
            below += (est.rank < net.n()) as usize;
            total += 1;
        }
    }
    check(below == total, format!("{nets} networks, output rank < n in {below}/{total} extensions"))
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    run(&mut results, "1 binary tree", Some(Duration::from_secs(10)), tree_reproduction);
    run(&mut results, "2 bifurcation", Some(Duration::from_secs(5)), bifurcation_reproduction);
    run(&mut results, "3 figure fixtures", None, figure_fixtures);
    run(&mut results, "4 stem and cycle scaling", None, stem_cycle_scaling);
    run(&mut results, "5 eigenvalue-wise counterexample", None, eigenvalue_wise_counterexample);
    run(&mut results, "6 oracle equivalence", Some(Duration::from_secs(60)), oracle_equivalence);
    run(&mut results, "7 homogeneous Y extensions", None, homogeneous_y_extensions);
    run(&mut results, "8 inaccessible nodes", None, inaccessible_extensions);
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
