//! Directed graph view of a (possibly extended) network: state nodes,
//! input nodes, and the edges allowed by the sparsity pattern.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::model::{CopyId, ExtendedNetwork, StructuredNetwork};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemGraph {
    state_succ: Vec<Vec<usize>>,
    input_succ: Vec<Vec<usize>>,
    /// Subsystem and copy of every state node.
    copy_of: Vec<CopyId>,
    /// Order of every subsystem; all ones for an unextended network.
    orders: Vec<usize>,
}

impl SystemGraph {
    /// Builds a graph from raw edge lists. Inputs never receive edges.
    pub fn from_edges(
        n_states: usize,
        n_inputs: usize,
        state_edges: impl IntoIterator<Item = (usize, usize)>,
        input_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut state_succ = vec![Vec::new(); n_states];
        for (a, b) in state_edges {
            state_succ[a].push(b);
        }
        let mut input_succ = vec![Vec::new(); n_inputs];
        for (s, b) in input_edges {
            input_succ[s].push(b);
        }
        for l in state_succ.iter_mut().chain(input_succ.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        Self {
            state_succ,
            input_succ,
            copy_of: (0..n_states).map(|i| CopyId::new(i, 0)).collect(),
            orders: vec![1; n_states],
        }
    }

    /// The graph of an unextended network.
    pub fn of_network(net: &StructuredNetwork) -> Self {
        Self::from_edges(
            net.n(),
            net.m(),
            net.state_edges().iter().copied(),
            net.input_edges().iter().copied(),
        )
    }

    /// The graph of an extended network: one state node per copy, with the
    /// edges given by the free entries of the block state and input matrices.
    pub fn expanded(net: &ExtendedNetwork) -> Self {
        let mut g = Self::from_edges(
            net.n_hat(),
            net.m(),
            net.state_positions().into_iter().map(|(to, from)| (from, to)),
            net.input_positions().into_iter().map(|(to, s)| (s, to)),
        );
        g.copy_of = (0..net.n_hat()).map(|v| net.copy_at(v)).collect();
        g.orders = net.orders().to_vec();
        g
    }

    pub fn n_states(&self) -> usize {
        self.state_succ.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.input_succ.len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.state_succ[v]
    }

    pub fn input_successors(&self, s: usize) -> &[usize] {
        &self.input_succ[s]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.state_succ[from].binary_search(&to).is_ok()
    }

    pub fn has_input_edge(&self, s: usize, to: usize) -> bool {
        self.input_succ[s].binary_search(&to).is_ok()
    }

    pub fn copy_of(&self, v: usize) -> CopyId {
        self.copy_of[v]
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn state_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.state_succ
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (a, b)))
    }

    pub fn input_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.input_succ
            .iter()
            .enumerate()
            .flat_map(|(s, l)| l.iter().map(move |&b| (s, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.state_succ.iter().chain(&self.input_succ).map(Vec::len).sum()
    }

    /// State nodes reachable from input `s`.
    pub fn reachable_from_input(&self, s: usize) -> BTreeSet<usize> {
        self.bfs_from(self.input_succ[s].iter().copied())
    }

    /// State nodes reachable from state `v` by a path of length at least one.
    pub fn reachable_from_state(&self, v: usize) -> BTreeSet<usize> {
        self.bfs_from(self.state_succ[v].iter().copied())
    }

    fn bfs_from(&self, start: impl Iterator<Item = usize>) -> BTreeSet<usize> {
        let mut seen = vec![false; self.n_states()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in start {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.state_succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..self.n_states()).filter(|&v| seen[v]).collect()
    }

    /// Shortest state path `from -> ... -> to` (both included) avoiding `blocked`.
    pub(crate) fn shortest_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let mut prev = vec![usize::MAX; self.n_states()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            for &w in &self.state_succ[v] {
                if prev[w] == usize::MAX && !blocked[w] {
                    prev[w] = v;
                    if w == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = prev[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Strongly connected components, each sorted ascending.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.n_states(), 0);
        let nodes: Vec<_> = (0..self.n_states()).map(|_| g.add_node(())).collect();
        for (a, b) in self.state_edges() {
            g.add_edge(nodes[a], nodes[b], ());
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// Per state node: does it lie on some elementary cycle (self-loops included)?
    pub fn on_cycle(&self) -> Vec<bool> {
        let mut flags = vec![false; self.n_states()];
        for comp in self.sccs() {
            let cyclic = comp.len() > 1 || self.has_edge(comp[0], comp[0]);
            if cyclic {
                for v in comp {
                    flags[v] = true;
                }
            }
        }
        flags
    }

    pub fn is_acyclic(&self) -> bool {
        !self.on_cycle().into_iter().any(|c| c)
    }

    /// Display name of a state node: `x3` for first-order subsystems, `x3_2`
    /// for copy 2 of a higher-order one.
    pub fn state_name(&self, v: usize) -> String {
        let c = self.copy_of[v];
        if self.orders[c.subsystem] > 1 {
            format!("x{}_{}", c.subsystem + 1, c.copy + 1)
        } else {
            format!("x{}", c.subsystem + 1)
        }
    }

    /// Graphviz rendering. Output is deterministic; copies of a higher-order
    /// subsystem are grouped in a cluster.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph G {\n");
        out.push_str("  node [shape=circle];\n");
        for s in 0..self.n_inputs() {
            let _ = writeln!(out, "  u{} [style=filled, fillcolor=violet];", s + 1);
        }
        let mut v = 0;
        while v < self.n_states() {
            let sub = self.copy_of[v].subsystem;
            let order = self.orders[sub];
            if order > 1 {
                let _ = writeln!(out, "  subgraph cluster_subsys_{} {{", sub + 1);
                let _ = writeln!(out, "    label=\"subsys_{}\";", sub + 1);
                out.push_str("    color=red;\n");
                for w in v..v + order {
                    let _ = writeln!(out, "    {};", self.state_name(w));
                }
                out.push_str("  }\n");
                v += order;
            } else {
                let _ = writeln!(out, "  {};", self.state_name(v));
                v += 1;
            }
        }
        for (s, b) in self.input_edges() {
            let _ = writeln!(out, "  u{} -> {};", s + 1, self.state_name(b));
        }
        for (a, b) in self.state_edges() {
            let _ = writeln!(out, "  {} -> {};", self.state_name(a), self.state_name(b));
        }
        out.push_str("}\n");
        out
    }
}

/// Graph of an extended network.
pub fn expanded_graph(net: &ExtendedNetwork) -> SystemGraph {
    SystemGraph::expanded(net)
}

/// Graphviz text for a graph.
pub fn export_dot(g: &SystemGraph) -> String {
    g.to_dot()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> StructuredNetwork {
        StructuredNetwork::new(3, 1, [(0, 1), (0, 2)], [(0, 0)]).unwrap()
    }

    #[test]
    fn homogeneous_copies_are_unconnected() {
        let ext = ExtendedNetwork::new(fig1a(), vec![1, 1, 2], vec![false; 3]).unwrap();
        let g = expanded_graph(&ext);
        assert_eq!(g.n_states(), 4);
        let edges: Vec<_> = g.state_edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (0, 3)]);
        assert!(!g.has_edge(2, 3) && !g.has_edge(3, 2));
        assert_eq!(g.input_edges().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn identity_extension_matches_base_graph() {
        let net = fig1a();
        let g = expanded_graph(&ExtendedNetwork::identity(net.clone()));
        assert_eq!(g, SystemGraph::of_network(&net));
    }

    #[test]
    fn heterogeneous_copies_are_fully_interconnected() {
        let ext = ExtendedNetwork::new(fig1a(), vec![1, 1, 3], vec![false, false, true]).unwrap();
        let g = expanded_graph(&ext);
        assert_eq!(g.n_states(), 5);
        for a in 2..5 {
            assert!(g.has_edge(0, a));
            for b in 2..5 {
                assert!(g.has_edge(a, b), "missing {a}->{b}");
            }
        }
        assert_eq!(g.edge_count(), 1 + 1 + 3 + 9);
    }

    #[test]
    fn input_edges_reach_every_copy() {
        let ext = ExtendedNetwork::new(fig1a(), vec![2, 1, 1], vec![false; 3]).unwrap();
        let g = expanded_graph(&ext);
        assert_eq!(g.input_successors(0), &[0, 1]);
    }

    #[test]
    fn dot_for_fig1a() {
        let dot = export_dot(&SystemGraph::of_network(&fig1a()));
        assert_eq!(
            dot,
            "digraph G {\n  node [shape=circle];\n  u1 [style=filled, fillcolor=violet];\n  x1;\n  x2;\n  x3;\n  u1 -> x1;\n  x1 -> x2;\n  x1 -> x3;\n}\n"
        );
    }

    #[test]
    fn dot_with_isolated_nodes() {
        let net = StructuredNetwork::new(2, 1, [], []).unwrap();
        let dot = export_dot(&SystemGraph::of_network(&net));
        assert!(dot.contains("  x1;\n  x2;\n"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn cycles_and_sccs() {
        let g = SystemGraph::from_edges(4, 1, [(0, 1), (1, 2), (2, 1), (3, 3)], [(0, 0)]);
        assert_eq!(g.on_cycle(), vec![false, true, true, true]);
        assert!(!g.is_acyclic());
        assert_eq!(g.shortest_path(0, 2, &[false; 4]), Some(vec![0, 1, 2]));
        assert_eq!(g.reachable_from_input(0), BTreeSet::from([0, 1, 2]));
    }
}
