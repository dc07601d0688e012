//! Exhaustive enumeration of stems, cycles and covers for small graphs.
//!
//! Used as an independent oracle: everything here is plain backtracking over
//! explicitly listed paths, sharing no code with the circulation solver.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::SystemGraph;

use super::{PathCycleCover, Stem};

/// Default size guard for [`enumerate_covers`].
pub const DEFAULT_MAX_NODES: usize = 12;

/// Every elementary stem of the graph, grouped by input.
pub fn all_stems(g: &SystemGraph) -> Vec<Stem> {
    let mut out = Vec::new();
    for s in 0..g.n_inputs() {
        for &v in g.input_successors(s) {
            let mut path = vec![v];
            let mut on_path = vec![false; g.n_states()];
            on_path[v] = true;
            extend_stems(g, s, &mut path, &mut on_path, &mut out);
        }
    }
    out
}

fn extend_stems(g: &SystemGraph, s: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Stem>) {
    out.push(Stem {
        input: s,
        nodes: path.clone(),
    });
    let last = *path.last().expect("non-empty");
    for &w in g.successors(last) {
        if !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend_stems(g, s, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Every elementary cycle, listed once, starting at its smallest node.
pub fn all_cycles(g: &SystemGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..g.n_states() {
        let mut path = vec![start];
        let mut on_path = vec![false; g.n_states()];
        on_path[start] = true;
        extend_cycles(g, start, &mut path, &mut on_path, &mut out);
    }
    out
}

fn extend_cycles(
    g: &SystemGraph,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("non-empty");
    for &w in g.successors(last) {
        if w == start {
            out.push(path.clone());
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend_cycles(g, start, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

#[derive(Debug, Clone)]
enum PathRef {
    Stem(usize),
    Cycle(usize),
}

struct Catalog {
    stems: Vec<Stem>,
    cycles: Vec<Vec<usize>>,
    /// (kind, state mask, input) for every path, stems first.
    entries: Vec<(PathRef, u64, Option<usize>)>,
}

impl Catalog {
    fn new(g: &SystemGraph) -> Self {
        let stems = all_stems(g);
        let cycles = all_cycles(g);
        let mut entries = Vec::with_capacity(stems.len() + cycles.len());
        for (k, s) in stems.iter().enumerate() {
            entries.push((PathRef::Stem(k), mask_of(&s.nodes), Some(s.input)));
        }
        for (k, c) in cycles.iter().enumerate() {
            entries.push((PathRef::Cycle(k), mask_of(c), None));
        }
        Self { stems, cycles, entries }
    }

    fn cover_of(&self, chosen: &[usize]) -> PathCycleCover {
        let mut cover = PathCycleCover::default();
        for &i in chosen {
            match self.entries[i].0 {
                PathRef::Stem(k) => cover.stems.push(self.stems[k].clone()),
                PathRef::Cycle(k) => cover.cycles.push(self.cycles[k].clone()),
            }
        }
        cover.canonicalize();
        cover
    }
}

fn mask_of(nodes: &[usize]) -> u64 {
    nodes.iter().fold(0, |m, &v| m | (1u64 << v))
}

/// Single-consumer stream of covers.
#[derive(Debug)]
pub struct CoverStream {
    inner: std::vec::IntoIter<PathCycleCover>,
}

impl Iterator for CoverStream {
    type Item = PathCycleCover;

    fn next(&mut self) -> Option<Self::Item> {
        self.inner.next()
    }
}

impl ExactSizeIterator for CoverStream {}

impl CoverStream {
    fn from_vec(v: Vec<PathCycleCover>) -> Self {
        Self { inner: v.into_iter() }
    }
}

/// Enumerates covers of a small graph.
///
/// With `vertex_disjoint_only`, yields every family of vertex-disjoint stems
/// (one per input at most) and cycles that reaches the maximum coverage.
/// Otherwise yields every irredundant family of stems and cycles covering all
/// coverable state nodes, where no path can be dropped without uncovering a
/// node. Covers are canonicalized and yielded once each, in sorted order.
pub fn enumerate_covers(g: &SystemGraph, vertex_disjoint_only: bool, max_nodes: usize) -> Result<CoverStream> {
    let limit = max_nodes.min(64);
    if g.n_states() > limit {
        return Err(Error::SizeLimit {
            size: g.n_states(),
            limit,
        });
    }
    let cat = Catalog::new(g);
    let mut found = BTreeSet::new();
    if vertex_disjoint_only {
        let mut best = 0u32;
        let mut families: Vec<Vec<usize>> = Vec::new();
        let total_free = g.n_states() as u32;
        disjoint_search(&cat, 0, 0, 0, &mut Vec::new(), total_free, &mut best, &mut families);
        if best > 0 {
            for f in families {
                found.insert(CoverKey(cat.cover_of(&f)));
            }
        }
    } else {
        let coverable = cat.entries.iter().fold(0u64, |m, e| m | e.1);
        if coverable != 0 {
            let mut chosen = Vec::new();
            minimal_search(&cat, coverable, 0, &mut chosen, &mut found);
        }
    }
    Ok(CoverStream::from_vec(found.into_iter().map(|k| k.0).collect()))
}

/// Orders covers by their canonical stems, then cycles.
#[derive(PartialEq, Eq)]
struct CoverKey(PathCycleCover);

impl PartialOrd for CoverKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CoverKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.0.stems, &self.0.cycles).cmp(&(&other.0.stems, &other.0.cycles))
    }
}

#[allow(clippy::too_many_arguments)]
fn disjoint_search(
    cat: &Catalog,
    from: usize,
    used_states: u64,
    used_inputs: u64,
    chosen: &mut Vec<usize>,
    total: u32,
    best: &mut u32,
    families: &mut Vec<Vec<usize>>,
) {
    let covered = used_states.count_ones();
    if covered > *best {
        *best = covered;
        families.clear();
    }
    if covered == *best && covered > 0 {
        families.push(chosen.clone());
    }
    if covered + (total - covered) < *best {
        return;
    }
    for i in from..cat.entries.len() {
        let (_, mask, input) = &cat.entries[i];
        if mask & used_states != 0 {
            continue;
        }
        let input_bit = input.map_or(0, |s| 1u64 << s);
        if input_bit & used_inputs != 0 {
            continue;
        }
        chosen.push(i);
        disjoint_search(
            cat,
            i + 1,
            used_states | mask,
            used_inputs | input_bit,
            chosen,
            total,
            best,
            families,
        );
        chosen.pop();
    }
}

fn minimal_search(cat: &Catalog, target: u64, covered: u64, chosen: &mut Vec<usize>, found: &mut BTreeSet<CoverKey>) {
    let missing = target & !covered;
    if missing == 0 {
        let irredundant = chosen.iter().enumerate().all(|(k, &i)| {
            let others = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(0u64, |m, (_, &p)| m | cat.entries[p].1);
            cat.entries[i].1 & !others != 0
        });
        if irredundant {
            let mut sorted = chosen.clone();
            sorted.sort_unstable();
            found.insert(CoverKey(cat.cover_of(&sorted)));
        }
        return;
    }
    let v = missing.trailing_zeros();
    for (i, e) in cat.entries.iter().enumerate() {
        if e.1 & (1u64 << v) != 0 && !chosen.contains(&i) {
            chosen.push(i);
            minimal_search(cat, target, covered | e.1, chosen, found);
            chosen.pop();
        }
    }
}
