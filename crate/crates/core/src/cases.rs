//! Example networks: binary trees, single bifurcations and small fixtures.

use std::fmt;
use std::str::FromStr;

use crate::cover::{PathCycleCover, Stem};
use crate::error::{Error, Result};
use crate::extend::{extend_x_network, ExtensionPlan};
use crate::model::{CopyId, CopyPattern, ExtendedNetwork, StructuredNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    BinaryTree,
    Bifurcation,
    Fig1a,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3a,
    Fig3b,
    Fig3c,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::BinaryTree,
        Family::Bifurcation,
        Family::Fig1a,
        Family::Fig2a,
        Family::Fig2b,
        Family::Fig2c,
        Family::Fig2d,
        Family::Fig3a,
        Family::Fig3b,
        Family::Fig3c,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::BinaryTree => "binary_tree",
            Family::Bifurcation => "bifurcation",
            Family::Fig1a => "fig1a",
            Family::Fig2a => "fig2a",
            Family::Fig2b => "fig2b",
            Family::Fig2c => "fig2c",
            Family::Fig2d => "fig2d",
            Family::Fig3a => "fig3a",
            Family::Fig3b => "fig3b",
            Family::Fig3c => "fig3c",
        }
    }

    pub fn takes_height(self) -> bool {
        matches!(self, Family::BinaryTree | Family::Bifurcation)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == key || (key == "tree" && *f == Family::BinaryTree))
            .ok_or_else(|| Error::Parameter(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseStudyId {
    pub family: Family,
    pub height: usize,
    /// For trees and bifurcations, whether the extended counterpart is meant.
    pub extended: bool,
}

impl CaseStudyId {
    pub fn new(family: Family, height: usize, extended: bool) -> Result<Self> {
        if family == Family::Bifurcation && height % 2 == 1 {
            return Err(Error::Parameter(format!("bifurcation height must be even, got {height}")));
        }
        if extended && !family.takes_height() {
            return Err(Error::Parameter(format!("{family} has no extended variant")));
        }
        Ok(Self {
            family,
            height,
            extended,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Network(StructuredNetwork),
    Extended(ExtendedNetwork),
}

impl Generated {
    pub fn to_json_string(&self) -> String {
        match self {
            Generated::Network(n) => n.to_json_string(),
            Generated::Extended(e) => e.to_json_string(),
        }
    }
}

pub fn generate(id: CaseStudyId) -> Result<Generated> {
    let h = id.height;
    Ok(match (id.family, id.extended) {
        (Family::BinaryTree, false) => Generated::Network(binary_tree(h)?),
        (Family::BinaryTree, true) => Generated::Extended(extended_binary_tree(h)?),
        (Family::Bifurcation, false) => Generated::Network(bifurcation(h)?),
        (Family::Bifurcation, true) => Generated::Extended(extended_bifurcation(h)?),
        (Family::Fig1a, _) => Generated::Network(fig1a()),
        (Family::Fig2a, _) => Generated::Network(fig2a()),
        (Family::Fig2b, _) => Generated::Network(fig2b()),
        (Family::Fig2c, _) => Generated::Network(fig2c()),
        (Family::Fig2d, _) => Generated::Network(fig2d()),
        (Family::Fig3a, _) => Generated::Extended(fig3a()?),
        (Family::Fig3b, _) => Generated::Extended(fig3b()?),
        (Family::Fig3c, _) => Generated::Extended(fig3c()?),
    })
}

/// Largest accepted height.
pub const MAX_HEIGHT: usize = 20;

fn check_height(h: usize) -> Result<()> {
    if h > MAX_HEIGHT {
        return Err(Error::Parameter(format!("height {h} exceeds {MAX_HEIGHT}")));
    }
    Ok(())
}

/// Complete binary tree with `2^{h+1} - 1` nodes; node `c` (1-based) has
/// children `2c` and `2c + 1`, and the root is driven by the single input.
pub fn binary_tree(h: usize) -> Result<StructuredNetwork> {
    check_height(h)?;
    let n = (1usize << (h + 1)) - 1;
    let edges = (2..=n).map(|c| (c / 2 - 1, c - 1));
    StructuredNetwork::new(n, 1, edges, [(0, 0)])
}

/// Binary tree whose non-leaf subsystems are second-order heterogeneous. The
/// first child of a node listens to copy 1 of its parent, the second child
/// to copy 2; the input drives both copies of the root.
pub fn extended_binary_tree(h: usize) -> Result<ExtendedNetwork> {
    let base = binary_tree(h)?;
    let n = base.n();
    let internal = (1usize << h) - 1;
    let orders: Vec<usize> = (0..n).map(|i| if i < internal { 2 } else { 1 }).collect();
    let heterogeneous: Vec<bool> = (0..n).map(|i| i < internal).collect();
    let mut pattern = CopyPattern::default();
    for c in 2..=n {
        let parent = c / 2 - 1;
        let source = if c % 2 == 0 { 0 } else { 1 };
        pattern.state_edges.push((CopyId::new(parent, source), CopyId::new(c - 1, 0)));
    }
    pattern.input_edges = (0..orders[0]).map(|k| (0, CopyId::new(0, k))).collect();
    ExtendedNetwork::with_pattern(base, orders, heterogeneous, pattern)
}

fn check_bifurcation(h: usize) -> Result<()> {
    check_height(h)?;
    if h % 2 == 1 {
        return Err(Error::Parameter(format!("bifurcation height must be even, got {h}")));
    }
    Ok(())
}

/// Root `1` with the chains `1 -> 2 -> ... -> h+1` and
/// `1 -> h+2 -> ... -> 2h+1`; the root is driven by the single input.
pub fn bifurcation(h: usize) -> Result<StructuredNetwork> {
    check_bifurcation(h)?;
    let n = 2 * h + 1;
    let mut edges = Vec::new();
    for k in 1..=h {
        edges.push((k - 1, k));
    }
    if h > 0 {
        edges.push((0, h + 1));
        for v in h + 1..n - 1 {
            edges.push((v, v + 1));
        }
    }
    StructuredNetwork::new(n, 1, edges, [(0, 0)])
}

/// Bifurcation whose right-branch nodes `h+2, h+4, ...` become second-order
/// heterogeneous subsystems. Each of them receives its predecessor on copy 2
/// and feeds its successor from copy 2.
pub fn extended_bifurcation(h: usize) -> Result<ExtendedNetwork> {
    let base = bifurcation(h)?;
    let n = base.n();
    let mut orders = vec![1; n];
    let mut heterogeneous = vec![false; n];
    for k in 1..=h / 2 {
        orders[h + 2 * k - 1] = 2;
        heterogeneous[h + 2 * k - 1] = true;
    }
    let port = |v: usize| CopyId::new(v, orders[v] - 1);
    let mut pattern = CopyPattern::default();
    for &(from, to) in base.state_edges() {
        pattern.state_edges.push((port(from), port(to)));
    }
    pattern.input_edges.push((0, CopyId::new(0, 0)));
    ExtendedNetwork::with_pattern(base, orders, heterogeneous, pattern)
}

fn net(n: usize, m: usize, edges: &[(usize, usize)], inputs: &[(usize, usize)]) -> StructuredNetwork {
    let shift = |&(a, b): &(usize, usize)| (a - 1, b - 1);
    StructuredNetwork::new(n, m, edges.iter().map(shift), inputs.iter().map(shift)).expect("fixture is valid")
}

fn stem(input: usize, nodes: &[usize]) -> Stem {
    Stem {
        input: input - 1,
        nodes: nodes.iter().map(|v| v - 1).collect(),
    }
}

fn cycle(nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|v| v - 1).collect()
}

/// A driven node with two successors.
pub fn fig1a() -> StructuredNetwork {
    net(3, 1, &[(1, 2), (1, 3)], &[(1, 1)])
}

/// Two inputs whose stems merge at node 3 and split again.
pub fn fig2a() -> StructuredNetwork {
    net(
        7,
        2,
        &[(1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 7)],
        &[(1, 1), (2, 2)],
    )
}

pub fn fig2a_cover() -> PathCycleCover {
    PathCycleCover {
        stems: vec![stem(1, &[1, 3, 4, 6]), stem(2, &[2, 3, 5, 7])],
        cycles: vec![],
    }
}

/// A stem crossed by a three-node cycle.
pub fn fig2b() -> StructuredNetwork {
    net(6, 1, &[(1, 2), (2, 3), (3, 4), (2, 5), (5, 6), (6, 2)], &[(1, 1)])
}

pub fn fig2b_cover() -> PathCycleCover {
    PathCycleCover {
        stems: vec![stem(1, &[1, 2, 3, 4])],
        cycles: vec![cycle(&[2, 5, 6])],
    }
}

/// A short stem and two cycles sharing node 5.
pub fn fig2c() -> StructuredNetwork {
    net(
        7,
        1,
        &[(1, 2), (1, 3), (3, 4), (4, 5), (5, 3), (7, 5), (5, 6), (6, 7)],
        &[(1, 1)],
    )
}

pub fn fig2c_cover() -> PathCycleCover {
    PathCycleCover {
        stems: vec![stem(1, &[1, 2])],
        cycles: vec![cycle(&[3, 4, 5]), cycle(&[5, 6, 7])],
    }
}

/// Two branches of length three from a driven root.
pub fn fig2d() -> StructuredNetwork {
    net(7, 1, &[(1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (6, 7)], &[(1, 1)])
}

pub fn fig3a() -> Result<ExtendedNetwork> {
    Ok(extend_x_network(&fig2a(), &fig2a_cover())?.result)
}

pub fn fig3b() -> Result<ExtendedNetwork> {
    Ok(extend_x_network(&fig2b(), &fig2b_cover())?.result)
}

pub fn fig3c() -> Result<ExtendedNetwork> {
    Ok(extend_x_network(&fig2c(), &fig2c_cover())?.result)
}

/// Closed-form metrics of the tree and bifurcation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedMetrics {
    pub d_c: usize,
    pub s: usize,
    pub s_hat: usize,
    pub delta: i64,
}

pub fn expected_metrics(id: CaseStudyId) -> Result<ExpectedMetrics> {
    let h = id.height;
    match id.family {
        Family::BinaryTree => {
            check_height(h)?;
            let p = 1usize << h;
            Ok(ExpectedMetrics {
                d_c: h + 1,
                s: 2 * p - (h + 2),
                s_hat: p - 1,
                delta: p as i64 - (h as i64 + 1),
            })
        }
        Family::Bifurcation => {
            check_bifurcation(h)?;
            Ok(ExpectedMetrics {
                d_c: h + 1,
                s: h,
                s_hat: h / 2,
                delta: (h / 2) as i64,
            })
        }
        f => Err(Error::Parameter(format!("{f} has no closed-form metrics"))),
    }
}

/// Evaluated extension plan of an extended tree or bifurcation.
pub fn case_plan(id: CaseStudyId) -> Result<ExtensionPlan> {
    let ext = match id.family {
        Family::BinaryTree => extended_binary_tree(id.height)?,
        Family::Bifurcation => extended_bifurcation(id.height)?,
        f => return Err(Error::Parameter(format!("{f} has no extension plan"))),
    };
    ExtensionPlan::evaluate(ext, None, None)
}
