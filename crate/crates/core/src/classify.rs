//! Input accessibility, structural controllability, and the X / Y classes.
//!
//! A network is an X-network when it is input-accessible, not structurally
//! controllable, and some cover of its state nodes uses at most one stem per
//! input. It is a Y-network when every cover needs two stems from one input
//! and no cover has paths meeting at a state node.
//!
//! Y is decided without enumerating covers. If the graph is acyclic there are
//! no cycles to touch, and if the reachable sets of distinct inputs are
//! disjoint, stems of distinct inputs never meet. With both, a cover of an
//! uncontrollable network can only fail to be disjoint through two stems of
//! the same input. Conversely a cycle, or a node reachable from two inputs,
//! yields a pair of elementary paths meeting at a state node, and that pair
//! extends to a cover. The test suite checks this against brute force.
//!
//! X is decided by a search over the nodes that lie on no cycle. Nodes on a
//! cycle can always be covered by an elementary cycle. The other nodes are
//! ordered by reachability, and one stem covers exactly a chain of that
//! order: shortest paths between consecutive chain nodes never overlap,
//! since an overlap would put a chain node on a closed walk.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::cover::{generic_dimension, PathCycleCover, Stem};
use crate::error::{Error, Result};
use crate::graph::SystemGraph;

/// Size guard of [`exists_distinct_input_cover`].
pub const MAX_X_SEARCH_NODES: usize = 24;

/// State nodes that no input reaches, ascending.
pub fn inaccessible_nodes(g: &SystemGraph) -> Vec<usize> {
    let mut seen = vec![false; g.n_states()];
    for s in 0..g.n_inputs() {
        for v in g.reachable_from_input(s) {
            seen[v] = true;
        }
    }
    (0..g.n_states()).filter(|&v| !seen[v]).collect()
}

/// Whether every state node is reachable from some input, with the
/// offending nodes otherwise.
pub fn is_input_accessible(g: &SystemGraph) -> (bool, Vec<usize>) {
    let missing = inaccessible_nodes(g);
    (missing.is_empty(), missing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    NotInputAccessible,
    StructurallyControllable,
    X,
    Y,
    Mixed,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::NotInputAccessible => "NotInputAccessible",
            Label::StructurallyControllable => "StructurallyControllable",
            Label::X => "X",
            Label::Y => "Y",
            Label::Mixed => "Mixed",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two inputs whose reachable sets intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachOverlap {
    pub inputs: (usize, usize),
    pub shared: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub inaccessible: Vec<usize>,
    pub reach_overlaps: Vec<ReachOverlap>,
    pub acyclic: bool,
    /// Strongly connected components that contain a cycle.
    pub cyclic_components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabel {
    pub label: Label,
    /// `None` when the network is not input-accessible.
    pub d_c: Option<usize>,
    /// Distinct-input cover for X, disjoint full cover when controllable.
    pub witness: Option<PathCycleCover>,
    pub diagnostics: Diagnostics,
}

impl ClassLabel {
    pub fn to_json(&self) -> Value {
        let d = &self.diagnostics;
        json!({
            "label": self.label.as_str(),
            "d_c": self.d_c,
            "witness": self.witness.as_ref().map(PathCycleCover::to_json),
            "diagnostics": {
                "inaccessible": d.inaccessible.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "acyclic": d.acyclic,
                "cyclic_components": d.cyclic_components.iter()
                    .map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "reach_overlaps": d.reach_overlaps.iter().map(|o| json!({
                    "inputs": [o.inputs.0 + 1, o.inputs.1 + 1],
                    "shared": o.shared.iter().map(|v| v + 1).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            },
        })
    }
}

fn diagnostics(g: &SystemGraph) -> Diagnostics {
    let reach: Vec<BTreeSet<usize>> = (0..g.n_inputs()).map(|s| g.reachable_from_input(s)).collect();
    let mut reach_overlaps = Vec::new();
    for a in 0..reach.len() {
        for b in a + 1..reach.len() {
            let shared: Vec<usize> = reach[a].intersection(&reach[b]).copied().collect();
            if !shared.is_empty() {
                reach_overlaps.push(ReachOverlap { inputs: (a, b), shared });
            }
        }
    }
    let cyclic_components: Vec<Vec<usize>> = g
        .sccs()
        .into_iter()
        .filter(|c| c.len() > 1 || g.has_edge(c[0], c[0]))
        .collect();
    Diagnostics {
        inaccessible: inaccessible_nodes(g),
        reach_overlaps,
        acyclic: cyclic_components.is_empty(),
        cyclic_components,
    }
}

/// Assigns exactly one label to the graph.
///
/// Fails only when deciding X would exceed [`MAX_X_SEARCH_NODES`].
pub fn classify(g: &SystemGraph) -> Result<ClassLabel> {
    let diagnostics = diagnostics(g);
    if !diagnostics.inaccessible.is_empty() {
        return Ok(ClassLabel {
            label: Label::NotInputAccessible,
            d_c: None,
            witness: None,
            diagnostics,
        });
    }
    let report = generic_dimension(g)?;
    let d_c = Some(report.d_c);
    if report.is_structurally_controllable {
        return Ok(ClassLabel {
            label: Label::StructurallyControllable,
            d_c,
            witness: Some(report.witness),
            diagnostics,
        });
    }
    if diagnostics.acyclic && diagnostics.reach_overlaps.is_empty() {
        return Ok(ClassLabel {
            label: Label::Y,
            d_c,
            witness: None,
            diagnostics,
        });
    }
    let (label, witness) = match exists_distinct_input_cover(g)? {
        Some(w) => (Label::X, Some(w)),
        None => (Label::Mixed, None),
    };
    Ok(ClassLabel {
        label,
        d_c,
        witness,
        diagnostics,
    })
}

/// A cover of all state nodes by cycles and at most one stem per input.
///
/// Requires an input-accessible graph that is not structurally controllable,
/// with at most [`MAX_X_SEARCH_NODES`] state nodes.
pub fn exists_distinct_input_cover(g: &SystemGraph) -> Result<Option<PathCycleCover>> {
    let n = g.n_states();
    if n > MAX_X_SEARCH_NODES {
        return Err(Error::SizeLimit {
            size: n,
            limit: MAX_X_SEARCH_NODES,
        });
    }
    let missing = inaccessible_nodes(g);
    if !missing.is_empty() {
        return Err(Error::NotInputAccessible {
            nodes: missing.into_iter().map(|v| v + 1).collect(),
        });
    }
    if generic_dimension(g)?.is_structurally_controllable {
        return Err(Error::Precondition("network is structurally controllable".into()));
    }

    let on_cycle = g.on_cycle();
    let rest: Vec<usize> = (0..n).filter(|&v| !on_cycle[v]).collect();
    let bit_of = |v: usize| rest.iter().position(|&r| r == v);
    let full: u32 = if rest.len() == 32 { u32::MAX } else { (1u32 << rest.len()) - 1 };

    // reaches[a] has bit b when rest[a] reaches rest[b] by a nonempty path.
    let reaches: Vec<u32> = rest
        .iter()
        .map(|&v| {
            g.reachable_from_state(v)
                .into_iter()
                .filter_map(bit_of)
                .fold(0, |m, b| m | (1 << b))
        })
        .collect();
    let chains: Vec<Vec<u32>> = (0..g.n_inputs())
        .map(|s| {
            let allowed = g
                .reachable_from_input(s)
                .into_iter()
                .filter_map(bit_of)
                .fold(0u32, |m, b| m | (1 << b));
            maximal_chains(&reaches, allowed)
        })
        .collect();

    let mut memo = HashMap::new();
    let Some(choice) = assign_chains(&chains, 0, full, &mut memo) else {
        return Ok(None);
    };

    let mut cover = PathCycleCover::default();
    let mut covered = vec![false; n];
    for (s, mask) in choice.into_iter().enumerate() {
        if mask == 0 {
            continue;
        }
        let mut order: Vec<usize> = (0..rest.len()).filter(|&b| mask & (1 << b) != 0).collect();
        // In a chain, earlier nodes reach more chain members.
        order.sort_by_key(|&b| std::cmp::Reverse((reaches[b] & mask).count_ones()));
        let nodes = stem_through(g, s, order.iter().map(|&b| rest[b]))
            .ok_or_else(|| Error::Internal("chain is not realizable as a stem".into()))?;
        for &v in &nodes {
            covered[v] = true;
        }
        cover.stems.push(Stem { input: s, nodes });
    }
    for v in 0..n {
        if covered[v] {
            continue;
        }
        let cycle = shortest_cycle_through(g, v)
            .ok_or_else(|| Error::Internal(format!("node {} is neither on a chain nor a cycle", v + 1)))?;
        for &w in &cycle {
            covered[w] = true;
        }
        cover.cycles.push(cycle);
    }
    cover.canonicalize();
    if cover.vertex_disjoint() {
        return Err(Error::Internal("distinct-input cover of an uncontrollable network is disjoint".into()));
    }
    Ok(Some(cover))
}

/// Maximal chains, as bitmasks, of the reachability order restricted to `allowed`.
fn maximal_chains(reaches: &[u32], allowed: u32) -> Vec<u32> {
    let members: Vec<usize> = (0..reaches.len()).filter(|&b| allowed & (1 << b) != 0).collect();
    let reached_by_member = members.iter().fold(0u32, |m, &a| m | (reaches[a] & allowed));
    // Immediate successors inside `allowed`.
    let cover_succ = |a: usize| -> Vec<usize> {
        let above = reaches[a] & allowed;
        members
            .iter()
            .copied()
            .filter(|&b| above & (1 << b) != 0)
            .filter(|&b| !members.iter().any(|&c| above & (1 << c) != 0 && reaches[c] & (1 << b) != 0))
            .collect()
    };
    let succ: HashMap<usize, Vec<usize>> = members.iter().map(|&a| (a, cover_succ(a))).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32)> = members
        .iter()
        .filter(|&&a| reached_by_member & (1 << a) == 0)
        .map(|&a| (a, 1u32 << a))
        .collect();
    while let Some((a, mask)) = stack.pop() {
        let next = &succ[&a];
        if next.is_empty() {
            out.push(mask);
        }
        for &b in next {
            stack.push((b, mask | (1 << b)));
        }
    }
    out
}

/// Picks one chain (or none) per input from `k` on so that `uncovered` is
/// covered. Returns the chosen mask per input.
fn assign_chains(
    chains: &[Vec<u32>],
    k: usize,
    uncovered: u32,
    memo: &mut HashMap<(usize, u32), Option<Vec<u32>>>,
) -> Option<Vec<u32>> {
    if uncovered == 0 {
        return Some(vec![0; chains.len() - k]);
    }
    if k == chains.len() {
        return None;
    }
    // Bound: the remaining inputs must be able to cover what is left at all.
    let reachable = chains[k..].iter().flatten().fold(0u32, |m, c| m | c);
    if uncovered & !reachable != 0 {
        return None;
    }
    if let Some(r) = memo.get(&(k, uncovered)) {
        return r.clone();
    }
    let mut result = None;
    let mut tried = BTreeSet::new();
    for &c in chains[k].iter().chain(std::iter::once(&0)) {
        let rest = uncovered & !c;
        if !tried.insert(rest) {
            continue;
        }
        if let Some(mut tail) = assign_chains(chains, k + 1, rest, memo) {
            tail.insert(0, c & uncovered);
            result = Some(tail);
            break;
        }
    }
    memo.insert((k, uncovered), result.clone());
    result
}

/// An elementary stem from input `s` visiting `targets` in order, built from
/// shortest paths.
fn stem_through(g: &SystemGraph, s: usize, targets: impl Iterator<Item = usize>) -> Option<Vec<usize>> {
    let none = vec![false; g.n_states()];
    let mut nodes: Vec<usize> = Vec::new();
    for t in targets {
        let segment = match nodes.last() {
            Some(&last) => g.shortest_path(last, t, &none)?.split_off(1),
            None => g
                .input_successors(s)
                .iter()
                .filter_map(|&v| g.shortest_path(v, t, &none))
                .min_by_key(Vec::len)?,
        };
        nodes.extend(segment);
    }
    let distinct: BTreeSet<_> = nodes.iter().collect();
    (distinct.len() == nodes.len()).then_some(nodes)
}

/// Shortest elementary cycle through `v`, starting at `v`.
pub(crate) fn shortest_cycle_through(g: &SystemGraph, v: usize) -> Option<Vec<usize>> {
    if g.has_edge(v, v) {
        return Some(vec![v]);
    }
    let none = vec![false; g.n_states()];
    g.successors(v)
        .iter()
        .filter_map(|&w| g.shortest_path(w, v, &none))
        .min_by_key(Vec::len)
        .map(|mut p| {
            p.pop();
            p.insert(0, v);
            p
        })
}
