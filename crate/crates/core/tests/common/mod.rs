#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structctl::graph::SystemGraph;
use structctl::model::{ExtendedNetwork, StructuredNetwork};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random network with `n` states and `m` inputs; no self-loops.
pub fn random_network(r: &mut ChaCha8Rng, n: usize, m: usize, p_state: f64, p_input: f64) -> StructuredNetwork {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && r.random_bool(p_state) {
                edges.push((a, b));
            }
        }
    }
    let mut inputs = Vec::new();
    for s in 0..m {
        for v in 0..n {
            if r.random_bool(p_input) {
                inputs.push((s, v));
            }
        }
    }
    StructuredNetwork::new(n, m, edges, inputs).unwrap()
}

pub fn accessible(net: &StructuredNetwork) -> bool {
    let n = net.n();
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = net.input_edges().iter().map(|&(_, v)| v).collect();
    while let Some(v) = stack.pop() {
        if !seen[v] {
            seen[v] = true;
            stack.extend(net.state_edges().iter().filter(|e| e.0 == v).map(|e| e.1));
        }
    }
    seen.into_iter().all(|s| s)
}

/// Rejection-samples an input-accessible network.
pub fn random_accessible(r: &mut ChaCha8Rng, n_max: usize, m_max: usize) -> StructuredNetwork {
    loop {
        let n = r.random_range(1..=n_max);
        let m = r.random_range(1..=m_max);
        let net = random_network(r, n, m, 0.25, 0.3);
        if accessible(&net) {
            return net;
        }
    }
}

pub fn random_extension(r: &mut ChaCha8Rng, net: &StructuredNetwork, max_order: usize, heterogeneous: bool) -> ExtendedNetwork {
    let n = net.n();
    let orders = (0..n).map(|_| r.random_range(1..=max_order)).collect();
    let het = (0..n).map(|_| heterogeneous && r.random_bool(0.5)).collect();
    ExtendedNetwork::new(net.clone(), orders, het).unwrap()
}

fn preds(net: &StructuredNetwork) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let n = net.n();
    let mut sp = vec![Vec::new(); n];
    let mut ip = vec![Vec::new(); n];
    for &(a, b) in net.state_edges() {
        sp[b].push(a);
    }
    for &(s, v) in net.input_edges() {
        ip[v].push(s);
    }
    (sp, ip)
}

/// Largest set of nodes that can be given distinct predecessors (states or
/// inputs) inside the set itself. Such an assignment is exactly a family of
/// disjoint stems and cycles, so the optimum is the generic dimension.
pub fn brute_force_dc(net: &StructuredNetwork) -> usize {
    let n = net.n();
    let (sp, ip) = preds(net);
    // pred[v]: None = not covered, Some(Ok(u)) state, Some(Err(s)) input
    fn go(
        v: usize,
        n: usize,
        sp: &[Vec<usize>],
        ip: &[Vec<usize>],
        pred: &mut Vec<Option<Result<usize, usize>>>,
        used_state: &mut Vec<bool>,
        used_input: &mut Vec<bool>,
        best: &mut usize,
    ) {
        if v == n {
            let covered: Vec<bool> = pred.iter().map(Option::is_some).collect();
            let ok = pred.iter().all(|p| match p {
                Some(Ok(u)) => covered[*u],
                _ => true,
            });
            if ok {
                *best = (*best).max(covered.iter().filter(|&&c| c).count());
            }
            return;
        }
        let remaining = n - v;
        let current = pred.iter().filter(|p| p.is_some()).count();
        if current + remaining <= *best {
            return;
        }
        for &u in &sp[v] {
            if !used_state[u] {
                used_state[u] = true;
                pred[v] = Some(Ok(u));
                go(v + 1, n, sp, ip, pred, used_state, used_input, best);
                pred[v] = None;
                used_state[u] = false;
            }
        }
        for &s in &ip[v] {
            if !used_input[s] {
                used_input[s] = true;
                pred[v] = Some(Err(s));
                go(v + 1, n, sp, ip, pred, used_state, used_input, best);
                pred[v] = None;
                used_input[s] = false;
            }
        }
        go(v + 1, n, sp, ip, pred, used_state, used_input, best);
    }
    let mut best = 0;
    go(
        0,
        n,
        &sp,
        &ip,
        &mut vec![None; n],
        &mut vec![false; n],
        &mut vec![false; net.m()],
        &mut best,
    );
    best
}

/// Every stem (input, node mask) and every elementary cycle (node mask).
pub fn path_catalog(net: &StructuredNetwork) -> (Vec<(usize, u64)>, Vec<u64>) {
    let n = net.n();
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in net.state_edges() {
        succ[a].push(b);
    }
    let mut stems = Vec::new();
    fn extend(v: usize, input: usize, mask: u64, succ: &[Vec<usize>], out: &mut Vec<(usize, u64)>) {
        out.push((input, mask));
        for &w in &succ[v] {
            if mask & (1 << w) == 0 {
                extend(w, input, mask | 1 << w, succ, out);
            }
        }
    }
    for &(s, v) in net.input_edges() {
        extend(v, s, 1 << v, &succ, &mut stems);
    }
    let mut cycles = Vec::new();
    fn close(start: usize, v: usize, mask: u64, succ: &[Vec<usize>], out: &mut Vec<u64>) {
        for &w in &succ[v] {
            if w == start {
                out.push(mask);
            } else if w > start && mask & (1 << w) == 0 {
                close(start, w, mask | 1 << w, succ, out);
            }
        }
    }
    for s in 0..n {
        close(s, s, 1 << s, &succ, &mut cycles);
    }
    (stems, cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefinitionalClass {
    X,
    Y,
    Neither,
}

/// Evaluates the X and Y definitions of an input-accessible network that is
/// not structurally controllable, straight from the catalog of stems and
/// cycles. Any set of catalog paths extends to a cover, so a forbidden
/// intersection between two catalog paths appears in some cover.
pub fn definitional_class(net: &StructuredNetwork) -> DefinitionalClass {
    let n = net.n();
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let (stems, cycles) = path_catalog(net);
    let cycle_union = cycles.iter().fold(0, |a, c| a | c);
    // Covers with at most one stem per input.
    let mut reachable = std::collections::BTreeSet::from([cycle_union]);
    for s in 0..net.m() {
        let options: std::collections::BTreeSet<u64> = stems.iter().filter(|p| p.0 == s).map(|p| p.1).collect();
        let mut next = reachable.clone();
        for &r in &reachable {
            for &o in &options {
                next.insert(r | o);
            }
        }
        reachable = next;
    }
    let distinct_input_cover = reachable.contains(&full);

    let mut forbidden = false;
    'outer: for (i, &(si, a)) in stems.iter().enumerate() {
        for &c in &cycles {
            if a & c != 0 {
                forbidden = true;
                break 'outer;
            }
        }
        for &(sj, b) in &stems[i + 1..] {
            if si != sj && a & b != 0 {
                forbidden = true;
                break 'outer;
            }
        }
    }
    for (i, &a) in cycles.iter().enumerate() {
        for &b in &cycles[i + 1..] {
            if a & b != 0 {
                forbidden = true;
            }
        }
    }
    if distinct_input_cover {
        DefinitionalClass::X
    } else if !forbidden {
        DefinitionalClass::Y
    } else {
        DefinitionalClass::Neither
    }
}

pub fn graph(net: &StructuredNetwork) -> SystemGraph {
    SystemGraph::of_network(net)
}
