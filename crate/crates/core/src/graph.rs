//! The data-graph model: nodes carrying a unique id plus a k-tuple of
//! property values, labeled directed edges, paths and data paths, and the
//! exhaustive path enumerator that backs the differential test suites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Index of a node inside its host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

/// Index of an edge label inside the graph's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelId(pub u16);

/// The data value of a node: its unique id plus the k-tuple of properties.
///
/// Ids and properties are opaque strings compared by exact equality; numeric
/// data in source files is kept stringified.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DataValue {
    pub id: String,
    pub props: Vec<String>,
}

impl DataValue {
    pub fn new(id: impl Into<String>, props: Vec<String>) -> Self {
        DataValue { id: id.into(), props }
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.id)?;
        for p in &self.props {
            write!(f, ",{p}")?;
        }
        write!(f, ")")
    }
}

/// Default surface form of the reserved pad token; graph files must not use
/// it as an id, property, or label.
pub const PAD_TOKEN: &str = "\u{266f}"; // ♯

/// Options for [`DataGraph::load`]. The pad escape is configurable so a file
/// that legitimately needs "♯" as data can designate a different reserved
/// string instead.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub pad_literal: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { pad_literal: PAD_TOKEN.to_string() }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    sigma: Vec<String>,
    k: usize,
    nodes: Vec<NodeFile>,
    edges: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: String,
    #[serde(default)]
    props: Vec<String>,
}

/// A finite labeled directed graph whose nodes carry data values.
///
/// Immutable after construction and safely shareable across concurrent
/// evaluators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataGraph {
    sigma: Vec<String>,
    k: usize,
    values: Vec<DataValue>,
    edges: BTreeSet<(NodeId, LabelId, NodeId)>,
    /// Out-edges per node, sorted by (label name, target id) so enumeration
    /// is deterministic.
    succ: Vec<Vec<(LabelId, NodeId)>>,
    id_index: BTreeMap<String, NodeId>,
}

impl DataGraph {
    /// Builds a graph from parts, checking every structural invariant.
    pub fn new(
        sigma: Vec<String>,
        k: usize,
        nodes: Vec<DataValue>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, GraphError> {
        Self::with_options(sigma, k, nodes, edges, &LoadOptions::default())
    }

    pub fn with_options(
        sigma: Vec<String>,
        k: usize,
        nodes: Vec<DataValue>,
        edges: Vec<(String, String, String)>,
        opts: &LoadOptions,
    ) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::EmptyNodeSet);
        }
        let pad = &opts.pad_literal;
        for l in &sigma {
            if l == pad {
                return Err(GraphError::ReservedPadToken(l.clone()));
            }
        }
        let mut id_index = BTreeMap::new();
        for (i, v) in nodes.iter().enumerate() {
            if v.id == *pad || v.props.iter().any(|p| p == pad) {
                return Err(GraphError::ReservedPadToken(v.id.clone()));
            }
            if v.props.len() != k {
                return Err(GraphError::WrongPropertyArity {
                    id: v.id.clone(),
                    got: v.props.len(),
                    expected: k,
                });
            }
            if id_index.insert(v.id.clone(), NodeId(i as u32)).is_some() {
                return Err(GraphError::DuplicateId(v.id.clone()));
            }
        }
        let label_index: BTreeMap<&str, LabelId> = sigma
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), LabelId(i as u16)))
            .collect();
        let mut edge_set = BTreeSet::new();
        for (src, lbl, dst) in edges {
            let s = *id_index.get(&src).ok_or(GraphError::UnknownNode(src.clone()))?;
            let d = *id_index.get(&dst).ok_or(GraphError::UnknownNode(dst.clone()))?;
            let l = *label_index.get(lbl.as_str()).ok_or(GraphError::UnknownLabel(lbl.clone()))?;
            edge_set.insert((s, l, d));
        }
        let mut succ = vec![Vec::new(); nodes.len()];
        for &(s, l, d) in &edge_set {
            succ[s.0 as usize].push((l, d));
        }
        // Successor lists sorted by (label name, target id) so enumeration is
        // deterministic regardless of input order.
        for list in &mut succ {
            list.sort_by(|a, b| {
                (&sigma[a.0 .0 as usize], &nodes[a.1 .0 as usize].id)
                    .cmp(&(&sigma[b.0 .0 as usize], &nodes[b.1 .0 as usize].id))
            });
        }
        Ok(DataGraph { sigma, k, values: nodes, edges: edge_set, succ, id_index })
    }

    /// Loads a graph from the JSON wire format:
    /// `{"sigma":["a"],"k":1,"nodes":[{"id":"n1","props":["0"]}],"edges":[["n1","a","n1"]]}`.
    pub fn load(reader: impl Read) -> Result<Self, GraphError> {
        Self::load_with(reader, &LoadOptions::default())
    }

    pub fn load_with(reader: impl Read, opts: &LoadOptions) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_reader(reader).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let nodes = file.nodes.into_iter().map(|n| DataValue::new(n.id, n.props)).collect();
        Self::with_options(file.sigma, file.k, nodes, file.edges, opts)
    }

    pub fn load_str(text: &str) -> Result<Self, GraphError> {
        Self::load(text.as_bytes())
    }

    /// Serializes back into the JSON wire format.
    pub fn to_json(&self) -> serde_json::Value {
        let file = GraphFile {
            sigma: self.sigma.clone(),
            k: self.k,
            nodes: self
                .values
                .iter()
                .map(|v| NodeFile { id: v.id.clone(), props: v.props.clone() })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(s, l, d)| (self.id_of(s).to_string(), self.label_name(l).to_string(), self.id_of(d).to_string()))
                .collect(),
        };
        serde_json::to_value(file).expect("graph serialization cannot fail")
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.values.len() as u32).map(NodeId)
    }

    /// Nodes sorted by id string; the canonical enumeration order.
    pub fn nodes_by_id(&self) -> Vec<NodeId> {
        self.id_index.values().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, LabelId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, s: NodeId, l: LabelId, d: NodeId) -> bool {
        self.edges.contains(&(s, l, d))
    }

    pub fn successors(&self, v: NodeId) -> &[(LabelId, NodeId)] {
        &self.succ[v.0 as usize]
    }

    pub fn id_of(&self, v: NodeId) -> &str {
        &self.values[v.0 as usize].id
    }

    pub fn props_of(&self, v: NodeId) -> &[String] {
        &self.values[v.0 as usize].props
    }

    pub fn value_of(&self, v: NodeId) -> &DataValue {
        &self.values[v.0 as usize]
    }

    pub fn node_by_id(&self, id: &str) -> Option<NodeId> {
        self.id_index.get(id).copied()
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.sigma[l.0 as usize]
    }

    pub fn label_by_name(&self, name: &str) -> Option<LabelId> {
        self.sigma.iter().position(|s| s == name).map(|i| LabelId(i as u16))
    }

    /// The distinct property tuples occurring in the graph, sorted.
    pub fn distinct_props(&self) -> Vec<Vec<String>> {
        let set: BTreeSet<Vec<String>> = self.values.iter().map(|v| v.props.clone()).collect();
        set.into_iter().collect()
    }

    /// The data path induced by a path: each node replaced by its data value.
    pub fn dp(&self, p: &Path) -> DataPath {
        let mut values = Vec::with_capacity(p.len() + 1);
        let mut labels = Vec::with_capacity(p.len());
        values.push(self.value_of(p.start).clone());
        for &(l, v) in &p.steps {
            labels.push(self.label_name(l).to_string());
            values.push(self.value_of(v).clone());
        }
        DataPath { values, labels }
    }

    /// True when `p` is structurally a path of this graph (every step an edge).
    pub fn is_path(&self, p: &Path) -> bool {
        if p.start.0 as usize >= self.values.len() {
            return false;
        }
        let mut at = p.start;
        for &(l, v) in &p.steps {
            if !self.has_edge(at, l, v) {
                return false;
            }
            at = v;
        }
        true
    }

    /// Streams every path of length at most `maxlen`, each exactly once, in
    /// length-then-lexicographic order over (start id, labels, node ids).
    pub fn paths_up_to(self: &Arc<Self>, maxlen: usize) -> PathsUpTo {
        PathsUpTo {
            graph: Arc::clone(self),
            maxlen,
            level: Vec::new(),
            cursor: 0,
            next_len: 0,
        }
    }

    /// Convenience wrapper collecting [`DataGraph::paths_up_to`].
    pub fn all_paths(self: &Arc<Self>, maxlen: usize) -> Vec<Path> {
        self.paths_up_to(maxlen).collect()
    }

    fn sort_key(&self, p: &Path) -> (String, Vec<String>, Vec<String>) {
        (
            self.id_of(p.start).to_string(),
            p.steps.iter().map(|&(l, _)| self.label_name(l).to_string()).collect(),
            p.steps.iter().map(|&(_, v)| self.id_of(v).to_string()).collect(),
        )
    }
}

/// A path: a start node plus a sequence of (label, node) steps. The empty
/// step sequence is the length-0 path consisting of the start node alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub start: NodeId,
    pub steps: Vec<(LabelId, NodeId)>,
}

impl Path {
    pub fn single(v: NodeId) -> Self {
        Path { start: v, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> NodeId {
        self.steps.last().map(|&(_, v)| v).unwrap_or(self.start)
    }

    /// Node at each position 0..=len, in order.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(self.start);
        out.extend(self.steps.iter().map(|&(_, v)| v));
        out
    }

    pub fn labels(&self) -> Vec<LabelId> {
        self.steps.iter().map(|&(l, _)| l).collect()
    }

    /// True iff no node occurs twice.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.nodes().into_iter().all(|v| seen.insert(v))
    }

    /// Concatenation; requires the last node of `self` to equal the first of
    /// `other`.
    pub fn concat(&self, other: &Path, g: &DataGraph) -> Result<Path, GraphError> {
        if self.end() != other.start {
            return Err(GraphError::EndpointMismatch(
                g.id_of(self.end()).to_string(),
                g.id_of(other.start).to_string(),
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(Path { start: self.start, steps })
    }

    pub fn render(&self, g: &DataGraph) -> String {
        let mut s = g.id_of(self.start).to_string();
        for &(l, v) in &self.steps {
            s.push(' ');
            s.push_str(g.label_name(l));
            s.push(' ');
            s.push_str(g.id_of(v));
        }
        s
    }
}

/// The label sequence of a path, as label names.
pub fn label_of(g: &DataGraph, p: &Path) -> Vec<String> {
    p.steps.iter().map(|&(l, _)| g.label_name(l).to_string()).collect()
}

/// Iterator over all paths up to a length bound, produced level by level in
/// the canonical deterministic order.
pub struct PathsUpTo {
    graph: Arc<DataGraph>,
    maxlen: usize,
    level: Vec<Path>,
    cursor: usize,
    next_len: usize,
}

impl Iterator for PathsUpTo {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        loop {
            if self.cursor < self.level.len() {
                let p = self.level[self.cursor].clone();
                self.cursor += 1;
                return Some(p);
            }
            if self.next_len > self.maxlen {
                return None;
            }
            let fresh: Vec<Path> = if self.next_len == 0 {
                self.graph.nodes_by_id().into_iter().map(Path::single).collect()
            } else {
                let mut out = Vec::new();
                for p in &self.level {
                    for &(l, v) in self.graph.successors(p.end()) {
                        let mut q = p.clone();
                        q.steps.push((l, v));
                        out.push(q);
                    }
                }
                out
            };
            let g = &self.graph;
            let mut fresh = fresh;
            fresh.sort_by(|a, b| g.sort_key(a).cmp(&g.sort_key(b)));
            self.level = fresh;
            self.cursor = 0;
            self.next_len += 1;
            if self.level.is_empty() && self.next_len <= self.maxlen {
                // no paths of this length means none longer either
                return None;
            }
        }
    }
}

/// The alternating sequence d0 a1 d1 ... an dn induced by a path: one more
/// data value than labels. Standalone (not tied to a host graph) so raw data
/// paths can be fed to automata directly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataPath {
    values: Vec<DataValue>,
    labels: Vec<String>,
}

impl DataPath {
    pub fn new(values: Vec<DataValue>, labels: Vec<String>) -> Self {
        assert_eq!(values.len(), labels.len() + 1, "data path parity violated");
        DataPath { values, labels }
    }

    pub fn singleton(value: DataValue) -> Self {
        DataPath { values: vec![value], labels: Vec::new() }
    }

    /// Number of labels (= path length).
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn values(&self) -> &[DataValue] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn first(&self) -> &DataValue {
        &self.values[0]
    }

    pub fn last(&self) -> &DataValue {
        self.values.last().expect("data paths are non-empty")
    }
}

impl fmt::Display for DataPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.values[0])?;
        for (a, d) in self.labels.iter().zip(self.values.iter().skip(1)) {
            write!(f, " {a} {d}")?;
        }
        Ok(())
    }
}

/// The convolution of m data paths: a single sequence of m-tuples, tail
/// padded with the reserved pad on shorter tapes. `None` components are pads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaryDataPath {
    arity: usize,
    data_cols: Vec<Vec<Option<DataValue>>>,
    label_cols: Vec<Vec<Option<String>>>,
}

impl NaryDataPath {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of label columns; data columns are one more.
    pub fn len(&self) -> usize {
        self.label_cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label_cols.is_empty()
    }

    pub fn data_col(&self, j: usize) -> &[Option<DataValue>] {
        &self.data_cols[j]
    }

    pub fn label_col(&self, j: usize) -> &[Option<String>] {
        &self.label_cols[j]
    }

    /// Restricts tape `i` to its non-pad positions, recovering the original
    /// data path.
    pub fn project(&self, tape: usize) -> DataPath {
        assert!(tape < self.arity);
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for col in &self.data_cols {
            if let Some(v) = &col[tape] {
                values.push(v.clone());
            }
        }
        for col in &self.label_cols {
            if let Some(l) = &col[tape] {
                labels.push(l.clone());
            }
        }
        DataPath::new(values, labels)
    }

    /// Checks the tail-padding discipline: per tape, data position 0 is
    /// real, a label pad appears exactly when the following data position is
    /// padded, and pads persist to the end.
    pub fn padding_ok(&self) -> bool {
        for t in 0..self.arity {
            if self.data_cols[0][t].is_none() {
                return false;
            }
            let mut prev_pad = false;
            for j in 0..self.label_cols.len() {
                let lab_pad = self.label_cols[j][t].is_none();
                let dat_pad = self.data_cols[j + 1][t].is_none();
                if lab_pad != dat_pad || (prev_pad && !lab_pad) {
                    return false;
                }
                prev_pad = lab_pad;
            }
        }
        true
    }
}

/// Zips an m-tuple of data paths into one path of m-tuples; the result is as
/// long as the longest input, shorter tapes padded at the tail.
pub fn convolve(paths: &[DataPath]) -> NaryDataPath {
    assert!(!paths.is_empty(), "convolution needs arity of at least 1");
    let arity = paths.len();
    let max = paths.iter().map(|p| p.len()).max().unwrap();
    let mut data_cols = Vec::with_capacity(max + 1);
    let mut label_cols = Vec::with_capacity(max);
    for j in 0..=max {
        let col: Vec<Option<DataValue>> = paths
            .iter()
            .map(|p| if j <= p.len() { Some(p.values()[j].clone()) } else { None })
            .collect();
        data_cols.push(col);
        if j < max {
            let col: Vec<Option<String>> = paths
                .iter()
                .map(|p| if j < p.len() { Some(p.labels()[j].clone()) } else { None })
                .collect();
            label_cols.push(col);
        }
    }
    NaryDataPath { arity, data_cols, label_cols }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3() -> DataGraph {
        crate::corpus::fig3_graph()
    }

    fn fig3_path(g: &DataGraph) -> Path {
        // n4 s n3 p n11 p n9 f n13
        let step = |from: &str, l: &str, to: &str| {
            let s = g.node_by_id(from).unwrap();
            assert!(g.has_edge(s, g.label_by_name(l).unwrap(), g.node_by_id(to).unwrap()));
            (g.label_by_name(l).unwrap(), g.node_by_id(to).unwrap())
        };
        Path {
            start: g.node_by_id("03").unwrap(),
            steps: vec![
                step("03", "s", "05"),
                step("05", "p", "11"),
                step("11", "p", "24"),
                step("24", "f", "29"),
            ],
        }
    }

    #[test]
    fn loads_fig3_fragment() {
        let g = fig3();
        assert_eq!(g.k(), 2);
        let n2 = g.node_by_id("07").unwrap();
        assert_eq!(g.props_of(n2)[1], "66");
        let n9 = g.node_by_id("24").unwrap();
        assert_eq!(g.props_of(n9), ["Paul".to_string(), "5".to_string()]);
        let n13 = g.node_by_id("29").unwrap();
        assert_eq!(g.props_of(n13), ["Paul".to_string(), "5".to_string()]);
    }

    #[test]
    fn empty_node_set_rejected() {
        let err = DataGraph::new(vec!["a".into()], 0, vec![], vec![]).unwrap_err();
        assert_eq!(err, GraphError::EmptyNodeSet);
    }

    #[test]
    fn duplicate_id_rejected() {
        let err = DataGraph::new(
            vec!["a".into()],
            0,
            vec![DataValue::new("01", vec![]), DataValue::new("01", vec![])],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateId("01".into()));
    }

    #[test]
    fn unknown_label_and_arity_rejected() {
        let err = DataGraph::new(
            vec!["a".into()],
            0,
            vec![DataValue::new("01", vec![])],
            vec![("01".into(), "b".into(), "01".into())],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::UnknownLabel("b".into()));
        let err = DataGraph::new(vec![], 1, vec![DataValue::new("01", vec![])], vec![]).unwrap_err();
        assert!(matches!(err, GraphError::WrongPropertyArity { .. }));
    }

    #[test]
    fn pad_token_rejected() {
        let err =
            DataGraph::new(vec![], 0, vec![DataValue::new(PAD_TOKEN, vec![])], vec![]).unwrap_err();
        assert!(matches!(err, GraphError::ReservedPadToken(_)));
    }

    #[test]
    fn dp_of_fig3_path() {
        let g = fig3();
        let p = fig3_path(&g);
        let d = g.dp(&p);
        assert_eq!(d.first(), &DataValue::new("03", vec!["Mary".into(), "56".into()]));
        assert_eq!(d.last(), &DataValue::new("29", vec!["Paul".into(), "5".into()]));
        assert_eq!(d.labels(), ["s", "p", "p", "f"]);
        assert_eq!(label_of(&g, &p), ["s", "p", "p", "f"]);
        assert!(p.is_simple());
    }

    #[test]
    fn dp_of_length_zero_path() {
        let g = fig3();
        let p = Path::single(g.node_by_id("24").unwrap());
        let d = g.dp(&p);
        assert_eq!(d.len(), 0);
        assert_eq!(d.first(), &DataValue::new("24", vec!["Paul".into(), "5".into()]));
        assert!(label_of(&g, &p).is_empty());
        assert!(p.is_simple());
    }

    #[test]
    fn convolve_pads_shorter_tapes() {
        let d1 = DataPath::new(
            vec![DataValue::new("1", vec![]), DataValue::new("2", vec![])],
            vec!["a".into()],
        );
        let d2 = DataPath::singleton(DataValue::new("9", vec![]));
        let c = convolve(&[d1.clone(), d2.clone()]);
        assert_eq!(c.len(), 1);
        assert_eq!(c.data_col(0), &[Some(DataValue::new("1", vec![])), Some(DataValue::new("9", vec![]))]);
        assert_eq!(c.label_col(0), &[Some("a".to_string()), None]);
        assert_eq!(c.data_col(1), &[Some(DataValue::new("2", vec![])), None]);
        assert!(c.padding_ok());
        assert_eq!(c.project(0), d1);
        assert_eq!(c.project(1), d2);
    }

    #[test]
    fn convolve_identical_paths_has_no_pad() {
        let d = DataPath::new(
            vec![DataValue::new("1", vec![]), DataValue::new("2", vec![])],
            vec!["a".into()],
        );
        let c = convolve(&[d.clone(), d.clone()]);
        for j in 0..=c.len() {
            assert!(c.data_col(j).iter().all(|x| x.is_some()));
            let col = c.data_col(j);
            assert_eq!(col[0], col[1]);
        }
    }

    #[test]
    fn paths_up_to_two_node_graph() {
        let g = Arc::new(
            DataGraph::new(
                vec!["a".into()],
                0,
                vec![DataValue::new("v", vec![]), DataValue::new("w", vec![])],
                vec![("v".into(), "a".into(), "w".into())],
            )
            .unwrap(),
        );
        let paths: Vec<String> = g.paths_up_to(1).map(|p| p.render(&g)).collect();
        assert_eq!(paths, vec!["v", "w", "v a w"]);
    }

    #[test]
    fn paths_up_to_isolated_node() {
        let g = Arc::new(
            DataGraph::new(vec![], 0, vec![DataValue::new("v", vec![])], vec![]).unwrap(),
        );
        let paths: Vec<Path> = g.paths_up_to(5).collect();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].len(), 0);
    }

    #[test]
    fn paths_up_to_matches_walk_count_oracle() {
        // Independent oracle: count walks of each length via adjacency
        // matrix powers (multiplicity by parallel labels included).
        let g = Arc::new(crate::corpus::fig5_graph());
        let n = g.node_count();
        let mut adj = vec![vec![0u64; n]; n];
        for (s, _, d) in g.edges() {
            adj[s.0 as usize][d.0 as usize] += 1;
        }
        let mut expect = n as u64; // length-0 walks
        let mut powm = adj.clone();
        for _ in 1..=3 {
            expect += powm.iter().flatten().sum::<u64>();
            powm = mat_mul(&powm, &adj);
        }
        let got = g.paths_up_to(3).count() as u64;
        assert_eq!(got, expect);
    }

    fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.len();
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if a[i][j] == 0 {
                    continue;
                }
                for l in 0..n {
                    out[i][l] += a[i][j] * b[j][l];
                }
            }
        }
        out
    }

    #[test]
    fn paths_up_to_is_monotone_in_bound() {
        let g = Arc::new(crate::corpus::fig5_graph());
        let small: BTreeSet<Path> = g.paths_up_to(2).collect();
        let big: BTreeSet<Path> = g.paths_up_to(3).collect();
        assert!(small.is_subset(&big));
        assert!(big.difference(&small).all(|p| p.len() == 3));
    }

    #[test]
    fn simple_path_detection() {
        let g = Arc::new(
            DataGraph::new(
                vec!["a".into()],
                0,
                vec![DataValue::new("v", vec![]), DataValue::new("w", vec![])],
                vec![
                    ("v".into(), "a".into(), "w".into()),
                    ("w".into(), "a".into(), "v".into()),
                ],
            )
            .unwrap(),
        );
        let v = g.node_by_id("v").unwrap();
        let w = g.node_by_id("w").unwrap();
        let a = g.label_by_name("a").unwrap();
        let back = Path { start: v, steps: vec![(a, w), (a, v)] };
        assert!(!back.is_simple());
        let hop = Path { start: v, steps: vec![(a, w)] };
        assert!(hop.is_simple());
    }

    #[test]
    fn concat_paths() {
        let g = Arc::new(
            DataGraph::new(
                vec!["a".into(), "b".into()],
                0,
                vec![
                    DataValue::new("u", vec![]),
                    DataValue::new("v", vec![]),
                    DataValue::new("w", vec![]),
                ],
                vec![
                    ("v".into(), "a".into(), "w".into()),
                    ("w".into(), "b".into(), "u".into()),
                ],
            )
            .unwrap(),
        );
        let v = g.node_by_id("v").unwrap();
        let w = g.node_by_id("w").unwrap();
        let u = g.node_by_id("u").unwrap();
        let a = g.label_by_name("a").unwrap();
        let b = g.label_by_name("b").unwrap();
        let p = Path { start: v, steps: vec![(a, w)] };
        let q = Path { start: w, steps: vec![(b, u)] };
        let pq = p.concat(&q, &g).unwrap();
        assert_eq!(pq.render(&g), "v a w b u");
        assert_eq!(pq.len(), p.len() + q.len());
        // identity on the right
        let unit = Path::single(p.end());
        assert_eq!(p.concat(&unit, &g).unwrap(), p);
        // endpoint mismatch
        let r = Path { start: u, steps: vec![] };
        assert!(p.concat(&r, &g).is_err());
    }
}
