//! Stem/cycle covers and the generic dimension of the controllable subspace.
//!
//! The generic dimension equals the largest number of state nodes that
//! vertex-disjoint stems and elementary cycles can cover. It is computed as a
//! minimum-cost circulation on a split graph:
//!
//! ```text
//!   S --(1,0)--> u_s --(1,0)--> v_in --(1,-1)--> v_out --(1,0)--> w_in   for edge v->w
//!                                                v_out --(1,0)--> T
//!   T --(m,0)--> S
//! ```
//!
//! Every state node can absorb one unit and pass it on at most once, flow only
//! enters the state layer through inputs (one unit per input), and closed
//! circulations inside the state layer are cycles. Minimum cost is therefore
//! minus the best disjoint coverage. A plain bipartite matching would also
//! accept chains that start at an unmatched state node, which are not stems.

mod circulation;
pub mod enumerate;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::classify::inaccessible_nodes;
use crate::error::{Error, Result};
use crate::graph::SystemGraph;

pub use circulation::Circulation;
pub use enumerate::{all_cycles, all_stems, enumerate_covers, CoverStream, DEFAULT_MAX_NODES};

/// A directed path from an input through distinct state nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stem {
    pub input: usize,
    pub nodes: Vec<usize>,
}

/// A family of stems and elementary cycles. Cycles list their nodes once,
/// without repeating the first node at the end.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PathCycleCover {
    pub stems: Vec<Stem>,
    pub cycles: Vec<Vec<usize>>,
}

impl PathCycleCover {
    /// Node sequences of all paths, stems first. Path indices used elsewhere
    /// refer to this order.
    pub fn paths(&self) -> impl Iterator<Item = &[usize]> {
        self.stems
            .iter()
            .map(|s| s.nodes.as_slice())
            .chain(self.cycles.iter().map(Vec::as_slice))
    }

    pub fn path_count(&self) -> usize {
        self.stems.len() + self.cycles.len()
    }

    pub fn covered(&self) -> BTreeSet<usize> {
        self.paths().flatten().copied().collect()
    }

    /// True iff no state node lies on two paths and no input starts two stems.
    pub fn vertex_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        let total: usize = self.paths().map(<[usize]>::len).sum();
        for &v in self.paths().flatten() {
            seen.insert(v);
        }
        let inputs: BTreeSet<usize> = self.stems.iter().map(|s| s.input).collect();
        seen.len() == total && inputs.len() == self.stems.len()
    }

    pub fn covers_all(&self, n_states: usize) -> bool {
        self.covered().len() == n_states
    }

    /// Checks that every stem and cycle is an elementary path of `g`.
    pub fn validate(&self, g: &SystemGraph) -> Result<()> {
        let n = g.n_states();
        for (k, stem) in self.stems.iter().enumerate() {
            if stem.input >= g.n_inputs() {
                return Err(Error::InvalidCover(format!("stem {k} starts at unknown input")));
            }
            let Some(&first) = stem.nodes.first() else {
                return Err(Error::InvalidCover(format!("stem {k} has no state node")));
            };
            if stem.nodes.iter().any(|&v| v >= n) {
                return Err(Error::InvalidCover(format!("stem {k} leaves the graph")));
            }
            if !g.has_input_edge(stem.input, first) {
                return Err(Error::InvalidCover(format!(
                    "stem {k}: no edge from input {} to its first node",
                    stem.input + 1
                )));
            }
            check_walk(g, &stem.nodes, false).map_err(|e| Error::InvalidCover(format!("stem {k}: {e}")))?;
        }
        for (k, cycle) in self.cycles.iter().enumerate() {
            if cycle.is_empty() || cycle.iter().any(|&v| v >= n) {
                return Err(Error::InvalidCover(format!("cycle {k} is empty or leaves the graph")));
            }
            check_walk(g, cycle, true).map_err(|e| Error::InvalidCover(format!("cycle {k}: {e}")))?;
        }
        Ok(())
    }

    /// Sorts stems (longest first, then lexicographically) and rotates every
    /// cycle to start at its smallest node before sorting.
    pub fn canonicalize(&mut self) {
        self.stems
            .sort_by(|a, b| b.nodes.len().cmp(&a.nodes.len()).then_with(|| a.cmp(b)));
        for c in &mut self.cycles {
            if let Some(pos) = c.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i) {
                c.rotate_left(pos);
            }
        }
        self.cycles.sort();
    }

    /// `{"stems":[{"input":s,"nodes":[…]}],"cycles":[[…]]}` with 1-based indices.
    pub fn to_json(&self) -> Value {
        json!({
            "stems": self.stems.iter().map(|s| json!({
                "input": s.input + 1,
                "nodes": s.nodes.iter().map(|v| v + 1).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "cycles": self.cycles.iter()
                .map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Parses the 1-based JSON form produced by [`PathCycleCover::to_json`].
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = || Error::InvalidCover("malformed cover document".into());
        let idx = |v: &Value| -> Result<usize> {
            match v.as_u64() {
                Some(k) if k >= 1 => Ok(k as usize - 1),
                _ => Err(bad()),
            }
        };
        let mut cover = PathCycleCover::default();
        for s in value.get("stems").and_then(Value::as_array).ok_or_else(bad)? {
            let input = idx(s.get("input").ok_or_else(bad)?)?;
            let nodes = s
                .get("nodes")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(idx)
                .collect::<Result<Vec<_>>>()?;
            cover.stems.push(Stem { input, nodes });
        }
        if let Some(cycles) = value.get("cycles") {
            for c in cycles.as_array().ok_or_else(bad)? {
                let nodes = c.as_array().ok_or_else(bad)?.iter().map(idx).collect::<Result<Vec<_>>>()?;
                cover.cycles.push(nodes);
            }
        }
        Ok(cover)
    }
}

fn check_walk(g: &SystemGraph, nodes: &[usize], closed: bool) -> std::result::Result<(), String> {
    let distinct: BTreeSet<_> = nodes.iter().collect();
    if distinct.len() != nodes.len() {
        return Err("repeats a node".into());
    }
    for w in nodes.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(format!("missing edge {}->{}", w[0] + 1, w[1] + 1));
        }
    }
    if closed {
        let (first, last) = (nodes[0], nodes[nodes.len() - 1]);
        if !g.has_edge(last, first) {
            return Err(format!("missing closing edge {}->{}", last + 1, first + 1));
        }
    }
    Ok(())
}

/// Generic dimension of the controllable subspace together with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericDimensionReport {
    pub d_c: usize,
    pub witness: PathCycleCover,
    pub is_structurally_controllable: bool,
}

/// Maximum disjoint stem/cycle coverage of an input-accessible graph.
pub fn generic_dimension(g: &SystemGraph) -> Result<GenericDimensionReport> {
    let missing = inaccessible_nodes(g);
    if !missing.is_empty() {
        return Err(Error::NotInputAccessible {
            nodes: missing.into_iter().map(|v| v + 1).collect(),
        });
    }
    let witness = max_disjoint_cover(g, true);
    let d_c = witness.covered().len();
    Ok(GenericDimensionReport {
        d_c,
        is_structurally_controllable: d_c == g.n_states(),
        witness,
    })
}

/// Vertex-disjoint stems of an acyclic graph covering as many state nodes as
/// possible, at most one per input.
pub fn max_disjoint_stems(g: &SystemGraph) -> Result<PathCycleCover> {
    if !g.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    Ok(max_disjoint_cover(g, false))
}

/// Solves the circulation and decomposes the optimal flow. With
/// `allow_cycles` false, state-to-state arcs are still present but an
/// acyclic graph cannot carry closed flow, so only stems appear.
fn max_disjoint_cover(g: &SystemGraph, allow_cycles: bool) -> PathCycleCover {
    let n = g.n_states();
    let m = g.n_inputs();
    // Layout: 0 = S, 1 = T, inputs 2.., then v_in, v_out.
    let src = 0;
    let sink = 1;
    let input = |s: usize| 2 + s;
    let v_in = |v: usize| 2 + m + 2 * v;
    let v_out = |v: usize| 2 + m + 2 * v + 1;
    let mut c = Circulation::new(2 + m + 2 * n);

    for s in 0..m {
        c.add_arc(src, input(s), 1, 0);
    }
    let mut input_arcs = Vec::new();
    for (s, v) in g.input_edges() {
        input_arcs.push((s, v, c.add_arc(input(s), v_in(v), 1, 0)));
    }
    for v in 0..n {
        c.add_arc(v_in(v), v_out(v), 1, -1);
    }
    let mut state_arcs = Vec::new();
    for (a, b) in g.state_edges() {
        if !allow_cycles && a == b {
            continue;
        }
        state_arcs.push((a, b, c.add_arc(v_out(a), v_in(b), 1, 0)));
    }
    for v in 0..n {
        c.add_arc(v_out(v), sink, 1, 0);
    }
    c.add_arc(sink, src, m as i64, 0);
    c.solve();

    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut has_pred = vec![false; n];
    for &(a, b, id) in &state_arcs {
        if c.flow(id) > 0 {
            next[a] = Some(b);
            has_pred[b] = true;
        }
    }
    let mut used = vec![false; n];
    let mut cover = PathCycleCover::default();
    for &(s, v, id) in &input_arcs {
        if c.flow(id) > 0 {
            let mut nodes = vec![v];
            used[v] = true;
            let mut cur = v;
            while let Some(w) = next[cur] {
                nodes.push(w);
                used[w] = true;
                cur = w;
            }
            cover.stems.push(Stem { input: s, nodes });
        }
    }
    for v in 0..n {
        if !used[v] && has_pred[v] {
            let mut nodes = vec![v];
            used[v] = true;
            let mut cur = next[v].expect("cycle node has a successor");
            while cur != v {
                nodes.push(cur);
                used[cur] = true;
                cur = next[cur].expect("cycle node has a successor");
            }
            cover.cycles.push(nodes);
        }
    }
    cover.canonicalize();
    cover
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> SystemGraph {
        SystemGraph::from_edges(n, 1, (0..n - 1).map(|i| (i, i + 1)), [(0, 0)])
    }

    fn binary_tree(h: u32) -> SystemGraph {
        let n = (1usize << (h + 1)) - 1;
        let edges = (1..n).map(|c| ((c - 1) / 2, c));
        SystemGraph::from_edges(n, 1, edges, [(0, 0)])
    }

    #[test]
    fn single_driven_node() {
        let g = SystemGraph::from_edges(1, 1, [], [(0, 0)]);
        let r = generic_dimension(&g).unwrap();
        assert_eq!(r.d_c, 1);
        assert!(r.is_structurally_controllable);
        assert_eq!(r.witness.stems, vec![Stem { input: 0, nodes: vec![0] }]);
    }

    #[test]
    fn binary_tree_height_two_has_one_long_stem() {
        let r = generic_dimension(&binary_tree(2)).unwrap();
        assert_eq!(r.d_c, 3);
        assert_eq!(r.witness.stems.len(), 1);
        assert_eq!(r.witness.stems[0].nodes.len(), 3);
        assert!(r.witness.cycles.is_empty());
        r.witness.validate(&binary_tree(2)).unwrap();
    }

    #[test]
    fn path_is_controllable() {
        let r = generic_dimension(&path_graph(5)).unwrap();
        assert_eq!(r.d_c, 5);
        assert!(r.is_structurally_controllable);
    }

    #[test]
    fn stem_plus_disjoint_cycle() {
        // u -> 0 -> 1, and a 3-cycle 2 -> 3 -> 4 -> 2 entered from 1.
        let g = SystemGraph::from_edges(5, 1, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)], [(0, 0)]);
        let r = generic_dimension(&g).unwrap();
        assert_eq!(r.d_c, 5);
        assert!(r.witness.vertex_disjoint());
        r.witness.validate(&g).unwrap();
    }

    #[test]
    fn self_loops_count_as_cycles() {
        // Star hub 0 with leaves 1, 2; leaf 2 has a self-loop.
        let g = SystemGraph::from_edges(3, 1, [(0, 1), (0, 2), (2, 2)], [(0, 0)]);
        let r = generic_dimension(&g).unwrap();
        assert_eq!(r.d_c, 3);
        assert_eq!(r.witness.cycles, vec![vec![2]]);
    }

    #[test]
    fn refuses_inaccessible_graph() {
        let g = SystemGraph::from_edges(2, 1, [], [(0, 0)]);
        assert!(matches!(
            generic_dimension(&g),
            Err(Error::NotInputAccessible { nodes }) if nodes == vec![2]
        ));
    }

    #[test]
    fn max_stems_on_trees_and_stars() {
        let s = max_disjoint_stems(&binary_tree(3)).unwrap();
        assert_eq!(s.covered().len(), 4);
        assert!(s.cycles.is_empty());
        // Hub 0 with four leaves: one stem hub -> leaf.
        let star = SystemGraph::from_edges(5, 1, (1..5).map(|l| (0, l)), [(0, 0)]);
        let s = max_disjoint_stems(&star).unwrap();
        assert_eq!(s.stems.len(), 1);
        assert_eq!(s.stems[0].nodes.len(), 2);
        let cyclic = SystemGraph::from_edges(2, 1, [(0, 1), (1, 0)], [(0, 0)]);
        assert!(matches!(max_disjoint_stems(&cyclic), Err(Error::NotAcyclic)));
    }

    #[test]
    fn cover_json_round_trip() {
        let cover = PathCycleCover {
            stems: vec![Stem { input: 0, nodes: vec![0, 1] }],
            cycles: vec![vec![2, 3]],
        };
        let v = cover.to_json();
        assert_eq!(v["stems"][0]["nodes"], json!([1, 2]));
        assert_eq!(PathCycleCover::from_json(&v).unwrap(), cover);
    }

    #[test]
    fn validation_catches_broken_paths() {
        let g = path_graph(3);
        let bad = PathCycleCover {
            stems: vec![Stem { input: 0, nodes: vec![0, 2] }],
            cycles: vec![],
        };
        assert!(bad.validate(&g).is_err());
        let not_rooted = PathCycleCover {
            stems: vec![Stem { input: 0, nodes: vec![1, 2] }],
            cycles: vec![],
        };
        assert!(not_rooted.validate(&g).is_err());
        let bad_cycle = PathCycleCover {
            stems: vec![],
            cycles: vec![vec![0, 1]],
        };
        assert!(bad_cycle.validate(&g).is_err());
    }
}
