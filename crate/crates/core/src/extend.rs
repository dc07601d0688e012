//! Higher-order extensions that restore structural controllability.
//!
//! Shared-node splitting: given a cover `P` of the state nodes, every node
//! lying on `q >= 2` paths becomes a homogeneous subsystem of order `q`, one
//! copy per sharing path (copies ordered by path index). Each path is rewritten
//! onto its own copies, so the rewritten paths are vertex-disjoint, and the
//! extended graph keeps every copy-to-copy edge whose subsystems were adjacent.
//!
//! When stems from one input remain after splitting, only the longest stem of
//! each input is kept. Nodes of the other stems become heterogeneous, which
//! gives them a self-loop in the extended graph.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::classify::{classify, inaccessible_nodes, shortest_cycle_through, Label};
use crate::cover::{generic_dimension, max_disjoint_stems, PathCycleCover, Stem};
use crate::error::{Error, Result};
use crate::graph::SystemGraph;
use crate::model::{CopyId, ExtendedNetwork, StructuredNetwork};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPlan {
    pub result: ExtendedNetwork,
    pub modified_subsystems: BTreeSet<usize>,
    pub s_hat: usize,
    /// Minimum number of first-order heterogeneous replacements, `n - d_c`.
    pub s_first_order: usize,
    pub delta: i64,
    /// Disjoint stems and cycles on the expanded graph. Covers every copy
    /// exactly when `structurally_controllable` holds.
    pub certificate: PathCycleCover,
    /// Cover of the base network the plan was derived from, if any.
    pub source_cover: Option<PathCycleCover>,
    pub structurally_controllable: bool,
}

impl ExtensionPlan {
    /// Evaluates an arbitrary extension. Without a certificate, a maximum
    /// disjoint cover of the expanded graph is used.
    pub fn evaluate(
        result: ExtendedNetwork,
        source_cover: Option<PathCycleCover>,
        certificate: Option<PathCycleCover>,
    ) -> Result<Self> {
        let base = SystemGraph::of_network(result.base());
        let s_first_order = result.n() - generic_dimension(&base)?.d_c;
        let expanded = SystemGraph::expanded(&result);
        let certificate = match certificate {
            Some(c) => {
                c.validate(&expanded)?;
                if !c.vertex_disjoint() {
                    return Err(Error::InvalidCover("certificate is not vertex-disjoint".into()));
                }
                c
            }
            None => generic_dimension(&expanded)?.witness,
        };
        let modified_subsystems = result.modified_subsystems();
        let s_hat = modified_subsystems.len();
        Ok(Self {
            structurally_controllable: certificate.covers_all(result.n_hat()),
            delta: s_first_order as i64 - s_hat as i64,
            result,
            modified_subsystems,
            s_hat,
            s_first_order,
            certificate,
            source_cover,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_hat": self.result.n_hat(),
            "orders": self.result.orders(),
            "heterogeneous": self.result.heterogeneous(),
            "modified_subsystems": self.modified_subsystems.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "S": self.s_first_order,
            "S_hat": self.s_hat,
            "delta": self.delta,
            "structurally_controllable": self.structurally_controllable,
            "certificate": self.certificate.to_json(),
            "cover": self.source_cover.as_ref().map(PathCycleCover::to_json),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeterogeneityBounds {
    pub lower: usize,
    pub upper: usize,
    pub n_hat_max: usize,
    pub z_size: usize,
}

/// Result of splitting the shared nodes of a cover.
struct Split {
    ext: ExtendedNetwork,
    /// The rewritten paths, in the cover's path order, as global indices.
    stems: Vec<Stem>,
    cycles: Vec<Vec<usize>>,
}

fn split_shared_nodes(net: &StructuredNetwork, cover: &PathCycleCover) -> Result<Split> {
    let n = net.n();
    let mut sharing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, path) in cover.paths().enumerate() {
        for &v in path {
            sharing[v].push(k);
        }
    }
    let orders: Vec<usize> = sharing.iter().map(|l| l.len().max(1)).collect();
    let ext = ExtendedNetwork::new(net.clone(), orders, vec![false; n])?;
    let rewrite = |k: usize, path: &[usize]| -> Vec<usize> {
        path.iter()
            .map(|&v| {
                let copy = sharing[v].iter().position(|&j| j == k).unwrap_or(0);
                ext.index_of(CopyId::new(v, copy))
            })
            .collect()
    };
    let stems = cover
        .stems
        .iter()
        .enumerate()
        .map(|(k, s)| Stem {
            input: s.input,
            nodes: rewrite(k, &s.nodes),
        })
        .collect();
    let offset = cover.stems.len();
    let cycles = cover
        .cycles
        .iter()
        .enumerate()
        .map(|(k, c)| rewrite(offset + k, c))
        .collect();
    Ok(Split { ext, stems, cycles })
}

fn check_full_cover(net: &StructuredNetwork, cover: &PathCycleCover) -> Result<SystemGraph> {
    let g = SystemGraph::of_network(net);
    let missing = inaccessible_nodes(&g);
    if !missing.is_empty() {
        return Err(Error::NotInputAccessible {
            nodes: missing.into_iter().map(|v| v + 1).collect(),
        });
    }
    cover.validate(&g)?;
    if !cover.covers_all(net.n()) {
        return Err(Error::InvalidCover("cover misses some state nodes".into()));
    }
    Ok(g)
}

fn verified(plan: ExtensionPlan) -> Result<ExtensionPlan> {
    let g = SystemGraph::expanded(&plan.result);
    if !plan.structurally_controllable || generic_dimension(&g)?.d_c != plan.result.n_hat() {
        return Err(Error::Internal("constructed extension is not structurally controllable".into()));
    }
    Ok(plan)
}

/// Homogeneous extension of an X-network from a cover whose stems start at
/// pairwise distinct inputs.
pub fn extend_x_network(net: &StructuredNetwork, cover: &PathCycleCover) -> Result<ExtensionPlan> {
    check_full_cover(net, cover)?;
    let inputs: BTreeSet<usize> = cover.stems.iter().map(|s| s.input).collect();
    if inputs.len() != cover.stems.len() {
        return Err(Error::InvalidCover("two stems start at the same input".into()));
    }
    let split = split_shared_nodes(net, cover)?;
    let mut certificate = PathCycleCover {
        stems: split.stems,
        cycles: split.cycles,
    };
    certificate.canonicalize();
    verified(ExtensionPlan::evaluate(split.ext, Some(cover.clone()), Some(certificate))?)
}

/// Two-step extension of an input-accessible, uncontrollable network. Without
/// a cover, one is chosen by [`greedy_cover`].
pub fn extend_general(net: &StructuredNetwork, cover: Option<&PathCycleCover>) -> Result<ExtensionPlan> {
    let g = SystemGraph::of_network(net);
    let missing = inaccessible_nodes(&g);
    if !missing.is_empty() {
        return Err(Error::NotInputAccessible {
            nodes: missing.into_iter().map(|v| v + 1).collect(),
        });
    }
    if generic_dimension(&g)?.is_structurally_controllable {
        return Err(Error::Precondition("network is already structurally controllable".into()));
    }
    let cover = match cover {
        Some(c) => c.clone(),
        None => greedy_cover(&g)?,
    };
    check_full_cover(net, &cover)?;

    let split = split_shared_nodes(net, &cover)?;
    // Longest stem per input, ties to the smallest path index.
    let mut kept: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, s) in split.stems.iter().enumerate() {
        let e = kept.entry(s.input).or_insert(k);
        if s.nodes.len() > split.stems[*e].nodes.len() {
            *e = k;
        }
    }
    let keep: BTreeSet<usize> = kept.values().copied().collect();
    let ext = split.ext;
    let mut heterogeneous = vec![false; net.n()];
    let mut certificate = PathCycleCover {
        stems: Vec::new(),
        cycles: split.cycles,
    };
    for (k, s) in split.stems.into_iter().enumerate() {
        if keep.contains(&k) {
            certificate.stems.push(s);
        } else {
            for v in s.nodes {
                heterogeneous[ext.copy_at(v).subsystem] = true;
                certificate.cycles.push(vec![v]);
            }
        }
    }
    certificate.canonicalize();
    let result = ExtendedNetwork::new(net.clone(), ext.orders().to_vec(), heterogeneous)?;
    verified(ExtensionPlan::evaluate(result, Some(cover), Some(certificate))?)
}

/// A cover of every state node of an input-accessible graph: one stem per
/// input to its farthest node, shortest cycles for uncovered nodes on
/// cycles, then further stems to the farthest uncovered nodes.
pub fn greedy_cover(g: &SystemGraph) -> Result<PathCycleCover> {
    let n = g.n_states();
    let none = vec![false; n];
    // Shortest stem from input s to v.
    let stem_to = |s: usize, v: usize| -> Option<Vec<usize>> {
        g.input_successors(s)
            .iter()
            .filter_map(|&w| g.shortest_path(w, v, &none))
            .min_by_key(Vec::len)
    };
    let mut cover = PathCycleCover::default();
    let mut covered = vec![false; n];
    let mark = |nodes: &[usize], covered: &mut Vec<bool>| {
        for &v in nodes {
            covered[v] = true;
        }
    };
    for s in 0..g.n_inputs() {
        let farthest = g
            .reachable_from_input(s)
            .into_iter()
            .filter_map(|v| stem_to(s, v).map(|p| (p.len(), v, p)))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        if let Some((_, _, nodes)) = farthest {
            mark(&nodes, &mut covered);
            cover.stems.push(Stem { input: s, nodes });
        }
    }
    let on_cycle = g.on_cycle();
    for v in 0..n {
        if !covered[v] && on_cycle[v] {
            let c = shortest_cycle_through(g, v).ok_or_else(|| Error::Internal("cycle node without cycle".into()))?;
            mark(&c, &mut covered);
            cover.cycles.push(c);
        }
    }
    loop {
        let best = (0..n)
            .filter(|&v| !covered[v])
            .flat_map(|v| (0..g.n_inputs()).map(move |s| (s, v)))
            .filter_map(|(s, v)| stem_to(s, v).map(|p| (p.len(), s, v, p)))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(b.2.cmp(&a.2)));
        match best {
            Some((_, s, _, nodes)) => {
                mark(&nodes, &mut covered);
                cover.stems.push(Stem { input: s, nodes });
            }
            None => break,
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::Internal("greedy cover left a node uncovered".into()));
    }
    Ok(cover)
}

/// Fewest first-order heterogeneous replacements for structural
/// controllability: `n - d_c`.
pub fn first_order_minimum(net: &StructuredNetwork) -> Result<usize> {
    Ok(net.n() - generic_dimension(&SystemGraph::of_network(net))?.d_c)
}

/// Bounds on the number of heterogeneous subsystems of order at most
/// `n_hat_max` needed to make a Y-network structurally controllable.
pub fn heterogeneity_bounds(net: &StructuredNetwork, n_hat_max: usize) -> Result<HeterogeneityBounds> {
    if n_hat_max == 0 {
        return Err(Error::Parameter("maximum order must be at least 1".into()));
    }
    let g = SystemGraph::of_network(net);
    let label = classify(&g)?.label;
    if label != Label::Y {
        return Err(Error::Precondition(format!("not a Y-network (label {label})")));
    }
    let z_size = max_disjoint_stems(&g)?.covered().len();
    let upper = net.n() - z_size;
    Ok(HeterogeneityBounds {
        lower: upper.div_ceil(n_hat_max),
        upper,
        n_hat_max,
        z_size,
    })
}

/// Saving in modified subsystems over first-order heterogeneous replacement.
pub fn delta_index(plan: &ExtensionPlan) -> i64 {
    plan.delta
}
