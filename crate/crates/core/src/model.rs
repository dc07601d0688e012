//! Structured network models.
//!
//! A [`StructuredNetwork`] records which entries of the state and input
//! matrices may be nonzero: `state_edges` holds pairs `(j, i)` meaning the
//! state of node `j` drives node `i`, and `input_edges` holds pairs `(s, i)`
//! meaning input `s` drives node `i`. The output matrix is the identity and
//! is never stored.
//!
//! An [`ExtendedNetwork`] replaces every node `i` by a subsystem of order
//! `orders[i]`, with either zero (homogeneous) or fully free (heterogeneous)
//! internal dynamics. Inter-subsystem couplings are only allowed where the
//! base network has an edge.
//!
//! Indices are 0-based in memory and 1-based in JSON documents; the
//! conversion happens only in the `*_json` helpers of this module.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparsity pattern of a network of first-order nodes with trivial dynamics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredNetwork {
    n: usize,
    m: usize,
    state_edges: Vec<(usize, usize)>,
    input_edges: Vec<(usize, usize)>,
    labels: BTreeMap<usize, String>,
}

impl StructuredNetwork {
    /// Builds a validated network from 0-based edge lists.
    pub fn new(
        n: usize,
        m: usize,
        state_edges: impl IntoIterator<Item = (usize, usize)>,
        input_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("network needs at least one state node".into()));
        }
        if m == 0 {
            return Err(Error::Invalid("network needs at least one input node".into()));
        }
        let mut se = BTreeSet::new();
        for (j, i) in state_edges {
            check_range("state", j, n)?;
            check_range("state", i, n)?;
            if i == j {
                return Err(Error::SelfLoop { node: i + 1 });
            }
            if !se.insert((j, i)) {
                return Err(Error::DuplicateEdge {
                    what: "state",
                    from: j + 1,
                    to: i + 1,
                });
            }
        }
        let mut ie = BTreeSet::new();
        for (s, i) in input_edges {
            check_range("input", s, m)?;
            check_range("state", i, n)?;
            if !ie.insert((s, i)) {
                return Err(Error::DuplicateEdge {
                    what: "input",
                    from: s + 1,
                    to: i + 1,
                });
            }
        }
        Ok(Self {
            n,
            m,
            state_edges: se.into_iter().collect(),
            input_edges: ie.into_iter().collect(),
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Result<Self> {
        for &k in labels.keys() {
            check_range("label", k, self.n)?;
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted `(from, to)` state edges.
    pub fn state_edges(&self) -> &[(usize, usize)] {
        &self.state_edges
    }

    /// Sorted `(input, state)` edges.
    pub fn input_edges(&self) -> &[(usize, usize)] {
        &self.input_edges
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn has_state_edge(&self, from: usize, to: usize) -> bool {
        self.state_edges.binary_search(&(from, to)).is_ok()
    }

    pub fn has_input_edge(&self, input: usize, to: usize) -> bool {
        self.input_edges.binary_search(&(input, to)).is_ok()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(text)?;
        doc.into_network()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_doc(&self) -> NetworkDoc {
        NetworkDoc {
            n: self.n,
            m: self.m,
            state_edges: self.state_edges.iter().map(|&(j, i)| [j + 1, i + 1]).collect(),
            input_edges: self.input_edges.iter().map(|&(s, i)| [s + 1, i + 1]).collect(),
            labels: if self.labels.is_empty() {
                None
            } else {
                Some(
                    self.labels
                        .iter()
                        .map(|(k, v)| ((k + 1).to_string(), v.clone()))
                        .collect(),
                )
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("network serializes")
    }
}

fn check_range(what: &'static str, index: usize, limit: usize) -> Result<()> {
    if index >= limit {
        Err(Error::OutOfRange {
            what,
            index: index + 1,
            limit,
        })
    } else {
        Ok(())
    }
}

/// Converts a 1-based document index, rejecting zero.
fn from_one_based(what: &'static str, index: usize, limit: usize) -> Result<usize> {
    if index == 0 || index > limit {
        Err(Error::OutOfRange { what, index, limit })
    } else {
        Ok(index - 1)
    }
}

/// JSON form of a [`StructuredNetwork`] (1-based indices).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub n: usize,
    pub m: usize,
    pub state_edges: Vec<[usize; 2]>,
    pub input_edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
}

impl NetworkDoc {
    pub fn into_network(self) -> Result<StructuredNetwork> {
        let n = self.n;
        let m = self.m;
        let mut se = Vec::with_capacity(self.state_edges.len());
        for [j, i] in self.state_edges {
            se.push((from_one_based("state", j, n)?, from_one_based("state", i, n)?));
        }
        let mut ie = Vec::with_capacity(self.input_edges.len());
        for [s, i] in self.input_edges {
            ie.push((from_one_based("input", s, m)?, from_one_based("state", i, n)?));
        }
        let net = StructuredNetwork::new(n, m, se, ie)?;
        let mut labels = BTreeMap::new();
        for (k, v) in self.labels.unwrap_or_default() {
            let idx: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("label key {k:?} is not a node index")))?;
            labels.insert(from_one_based("label", idx, n)?, v);
        }
        net.with_labels(labels)
    }
}

/// One state variable of an extended network: copy `copy` of subsystem `subsystem`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopyId {
    pub subsystem: usize,
    pub copy: usize,
}

impl CopyId {
    pub fn new(subsystem: usize, copy: usize) -> Self {
        Self { subsystem, copy }
    }
}

/// Explicit copy-level coupling pattern, used when only some entries of the
/// allowed inter-subsystem blocks are free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CopyPattern {
    /// `(from, to)` pairs between copies of distinct subsystems.
    pub state_edges: Vec<(CopyId, CopyId)>,
    /// `(input, to)` pairs.
    pub input_edges: Vec<(usize, CopyId)>,
}

/// Block-structured network with per-subsystem orders and dynamics flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedNetwork {
    base: StructuredNetwork,
    orders: Vec<usize>,
    heterogeneous: Vec<bool>,
    pattern: Option<CopyPattern>,
    offsets: Vec<usize>,
}

impl ExtendedNetwork {
    /// Extension using the full block pattern allowed by the base network.
    pub fn new(base: StructuredNetwork, orders: Vec<usize>, heterogeneous: Vec<bool>) -> Result<Self> {
        Self::build(base, orders, heterogeneous, None)
    }

    /// Extension whose inter-subsystem couplings are restricted to `pattern`.
    pub fn with_pattern(
        base: StructuredNetwork,
        orders: Vec<usize>,
        heterogeneous: Vec<bool>,
        pattern: CopyPattern,
    ) -> Result<Self> {
        Self::build(base, orders, heterogeneous, Some(pattern))
    }

    /// All orders 1, all subsystems homogeneous.
    pub fn identity(base: StructuredNetwork) -> Self {
        let n = base.n();
        Self::build(base, vec![1; n], vec![false; n], None).expect("identity extension is valid")
    }

    fn build(
        base: StructuredNetwork,
        orders: Vec<usize>,
        heterogeneous: Vec<bool>,
        pattern: Option<CopyPattern>,
    ) -> Result<Self> {
        let n = base.n();
        if orders.len() != n {
            return Err(Error::Invalid(format!("orders has length {}, expected {n}", orders.len())));
        }
        if heterogeneous.len() != n {
            return Err(Error::Invalid(format!(
                "heterogeneous has length {}, expected {n}",
                heterogeneous.len()
            )));
        }
        if let Some(i) = orders.iter().position(|&o| o == 0) {
            return Err(Error::Invalid(format!("subsystem {} has order 0", i + 1)));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for &o in &orders {
            offsets.push(acc);
            acc += o;
        }
        offsets.push(acc);

        let pattern = match pattern {
            None => None,
            Some(p) => Some(validate_pattern(&base, &orders, p)?),
        };
        Ok(Self {
            base,
            orders,
            heterogeneous,
            pattern,
            offsets,
        })
    }

    pub fn base(&self) -> &StructuredNetwork {
        &self.base
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn heterogeneous(&self) -> &[bool] {
        &self.heterogeneous
    }

    pub fn pattern(&self) -> Option<&CopyPattern> {
        self.pattern.as_ref()
    }

    /// Number of subsystems (the output dimension).
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    /// Total state dimension.
    pub fn n_hat(&self) -> usize {
        self.offsets[self.n()]
    }

    /// Global 0-based index of a copy; copies of subsystem `i` are contiguous.
    pub fn index_of(&self, c: CopyId) -> usize {
        debug_assert!(c.copy < self.orders[c.subsystem]);
        self.offsets[c.subsystem] + c.copy
    }

    pub fn copy_at(&self, global: usize) -> CopyId {
        let sub = self.offsets.partition_point(|&o| o <= global) - 1;
        CopyId::new(sub, global - self.offsets[sub])
    }

    pub fn copies(&self, subsystem: usize) -> std::ops::Range<usize> {
        self.offsets[subsystem]..self.offsets[subsystem + 1]
    }

    /// Subsystems that differ from a first-order homogeneous node.
    pub fn modified_subsystems(&self) -> BTreeSet<usize> {
        (0..self.n())
            .filter(|&i| self.orders[i] > 1 || self.heterogeneous[i])
            .collect()
    }

    /// Free positions `(to, from)` of the state matrix, as global indices
    /// sorted by row then column.
    pub fn state_positions(&self) -> Vec<(usize, usize)> {
        let mut pos = BTreeSet::new();
        for i in 0..self.n() {
            if self.heterogeneous[i] {
                for r in self.copies(i) {
                    for c in self.copies(i) {
                        pos.insert((r, c));
                    }
                }
            }
        }
        match &self.pattern {
            Some(p) => {
                for &(from, to) in &p.state_edges {
                    pos.insert((self.index_of(to), self.index_of(from)));
                }
            }
            None => {
                for &(j, i) in self.base.state_edges() {
                    for r in self.copies(i) {
                        for c in self.copies(j) {
                            pos.insert((r, c));
                        }
                    }
                }
            }
        }
        pos.into_iter().collect()
    }

    /// Free positions `(row, input)` of the input matrix.
    pub fn input_positions(&self) -> Vec<(usize, usize)> {
        let mut pos = BTreeSet::new();
        match &self.pattern {
            Some(p) => {
                for &(s, to) in &p.input_edges {
                    pos.insert((self.index_of(to), s));
                }
            }
            None => {
                for &(s, i) in self.base.input_edges() {
                    for r in self.copies(i) {
                        pos.insert((r, s));
                    }
                }
            }
        }
        pos.into_iter().collect()
    }

    /// Positions `(subsystem, global)` of the block-diagonal output matrix.
    /// Entries of first-order subsystems are fixed to one; the others are free.
    pub fn output_positions(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|i| self.copies(i).map(move |g| (i, g)))
            .collect()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ExtendedDoc = serde_json::from_str(text)?;
        doc.into_extended()
    }

    pub fn to_doc(&self) -> ExtendedDoc {
        let pattern = self.pattern.as_ref();
        ExtendedDoc {
            network: self.base.to_doc(),
            orders: self.orders.clone(),
            heterogeneous: self.heterogeneous.clone(),
            copy_edges: pattern.map(|p| {
                p.state_edges
                    .iter()
                    .map(|(a, b)| [copy_doc(*a), copy_doc(*b)])
                    .collect()
            }),
            copy_input_edges: pattern.map(|p| {
                p.input_edges
                    .iter()
                    .map(|&(s, c)| (s + 1, copy_doc(c)))
                    .collect()
            }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("extended network serializes")
    }
}

fn validate_pattern(base: &StructuredNetwork, orders: &[usize], p: CopyPattern) -> Result<CopyPattern> {
    let check = |c: CopyId| -> Result<()> {
        check_range("subsystem", c.subsystem, base.n())?;
        check_range("copy", c.copy, orders[c.subsystem])
    };
    let mut se = BTreeSet::new();
    for (from, to) in p.state_edges {
        check(from)?;
        check(to)?;
        if from.subsystem == to.subsystem {
            return Err(Error::Invalid(format!(
                "copy edge inside subsystem {}; internal dynamics follow the heterogeneous flag",
                from.subsystem + 1
            )));
        }
        if !base.has_state_edge(from.subsystem, to.subsystem) {
            return Err(Error::Invalid(format!(
                "copy edge {}→{} has no base edge",
                from.subsystem + 1,
                to.subsystem + 1
            )));
        }
        if !se.insert((from, to)) {
            return Err(Error::DuplicateEdge {
                what: "copy",
                from: from.subsystem + 1,
                to: to.subsystem + 1,
            });
        }
    }
    let mut ie = BTreeSet::new();
    for (s, to) in p.input_edges {
        check_range("input", s, base.m())?;
        check(to)?;
        if !base.has_input_edge(s, to.subsystem) {
            return Err(Error::Invalid(format!(
                "copy input edge u{}→{} has no base edge",
                s + 1,
                to.subsystem + 1
            )));
        }
        if !ie.insert((s, to)) {
            return Err(Error::DuplicateEdge {
                what: "copy input",
                from: s + 1,
                to: to.subsystem + 1,
            });
        }
    }
    Ok(CopyPattern {
        state_edges: se.into_iter().collect(),
        input_edges: ie.into_iter().collect(),
    })
}

fn copy_doc(c: CopyId) -> [usize; 2] {
    [c.subsystem + 1, c.copy + 1]
}

/// JSON form of an [`ExtendedNetwork`]: the base document plus orders,
/// flags and an optional explicit copy-level pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedDoc {
    #[serde(flatten)]
    pub network: NetworkDoc,
    pub orders: Vec<usize>,
    pub heterogeneous: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_edges: Option<Vec<[[usize; 2]; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_input_edges: Option<Vec<(usize, [usize; 2])>>,
}

impl ExtendedDoc {
    pub fn into_extended(self) -> Result<ExtendedNetwork> {
        let base = self.network.into_network()?;
        let conv = |[s, c]: [usize; 2]| -> Result<CopyId> {
            let s = from_one_based("subsystem", s, base.n())?;
            if c == 0 {
                return Err(Error::OutOfRange {
                    what: "copy",
                    index: 0,
                    limit: 0,
                });
            }
            Ok(CopyId::new(s, c - 1))
        };
        let pattern = match (self.copy_edges, self.copy_input_edges) {
            (None, None) => None,
            (se, ie) => {
                let mut p = CopyPattern::default();
                for [a, b] in se.unwrap_or_default() {
                    p.state_edges.push((conv(a)?, conv(b)?));
                }
                for (s, c) in ie.unwrap_or_default() {
                    p.input_edges.push((from_one_based("input", s, base.m())?, conv(c)?));
                }
                Some(p)
            }
        };
        ExtendedNetwork::build(base, self.orders, self.heterogeneous, pattern)
    }
}

/// Either kind of network document, told apart by the presence of `orders`.
#[derive(Debug, Clone)]
pub enum AnyNetwork {
    Structured(StructuredNetwork),
    Extended(ExtendedNetwork),
}

impl AnyNetwork {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("orders").is_some() {
            let doc: ExtendedDoc = serde_json::from_value(value)?;
            Ok(Self::Extended(doc.into_extended()?))
        } else {
            let doc: NetworkDoc = serde_json::from_value(value)?;
            Ok(Self::Structured(doc.into_network()?))
        }
    }

    /// Views the document as an extension; plain networks become the identity extension.
    pub fn into_extended(self) -> ExtendedNetwork {
        match self {
            Self::Structured(n) => ExtendedNetwork::identity(n),
            Self::Extended(e) => e,
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            Self::Structured(n) => n.to_json_string(),
            Self::Extended(e) => e.to_json_string(),
        }
    }
}
