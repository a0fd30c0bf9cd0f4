//! Undirected simple graphs with external string labels.
//!
//! Graphs are loaded from plain edge lists: one edge per line, two
//! whitespace-separated node labels, `#`/`%` comment lines. Construction
//! drops self-loops and collapses duplicate or reversed edges, so the
//! adjacency is always simple and symmetric. Any further columns on an
//! edge line (weights, timestamps) are ignored; every network is treated
//! as unweighted and undirected.
//!
//! Nodes keep the label they had in the input and get a dense internal
//! index in first-appearance order. A [`Graph`] is immutable once built
//! and safe to share across worker threads.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: expected two node labels, found {found} token(s)")]
    MalformedLine { line: usize, found: usize },
    #[error("node index {index} out of range (graph has {n} nodes)")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("node subset contains duplicate index {index}")]
    DuplicateNode { index: usize },
    #[error("label {label:?} already names a graph node")]
    DuplicateLabel { label: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected simple graph: sorted neighbor lists plus a bijective
/// mapping between dense internal indices and external labels.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edge_count: usize,
}

impl Graph {
    /// Parse an edge-list stream.
    ///
    /// Every label that appears becomes a node, including labels seen only
    /// in self-loop lines. Self-loops and duplicate/reversed edges are
    /// dropped. Lines whose first two whitespace-separated tokens are the
    /// endpoints; extra tokens are ignored.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
        let mut builder = GraphBuilder::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
                return Err(GraphError::MalformedLine {
                    line: lineno + 1,
                    found: 1,
                });
            };
            builder.add_edge(a, b);
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Iterate over edges as `(u, v)` pairs with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Degree of every node by internal index; sums to `2E`.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Connected components of the whole graph, ordered by smallest
    /// contained index; members sorted.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Connected components of the subgraph induced by `subset`, ordered by
    /// smallest contained index; members sorted. Indices are parent-graph
    /// indices.
    pub fn components_of(&self, subset: &[usize]) -> Result<Vec<Vec<usize>>, GraphError> {
        let member = self.subset_membership(subset)?;
        let mut seen: HashSet<usize> = HashSet::with_capacity(subset.len());
        let mut components = Vec::new();
        let mut stack = Vec::new();
        let mut order: Vec<usize> = subset.to_vec();
        order.sort_unstable();
        for &start in &order {
            if seen.contains(&start) {
                continue;
            }
            seen.insert(start);
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if member.contains(&v) && !seen.contains(&v) {
                        seen.insert(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        Ok(components)
    }

    /// Subgraph induced by `subset`: exactly the edges with both endpoints
    /// inside. Returns the subgraph plus a mapping from its local indices
    /// back to parent indices. Labels are preserved.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        let member = self.subset_membership(subset)?;
        let mut parents: Vec<usize> = subset.to_vec();
        parents.sort_unstable();
        let local: HashMap<usize, usize> = parents
            .iter()
            .enumerate()
            .map(|(loc, &p)| (p, loc))
            .collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); parents.len()];
        let mut edge_count = 0;
        for (loc, &p) in parents.iter().enumerate() {
            for &v in &self.adj[p] {
                if member.contains(&v) {
                    adj[loc].push(local[&v]);
                }
            }
            adj[loc].sort_unstable();
            edge_count += adj[loc].len();
        }
        let labels: Vec<String> = parents.iter().map(|&p| self.labels[p].clone()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok((
            Graph {
                adj,
                labels,
                index,
                edge_count: edge_count / 2,
            },
            parents,
        ))
    }

    /// New graph with extra isolated nodes appended after the existing ones.
    pub fn with_added_labels<S: AsRef<str>>(&self, extra: &[S]) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        for label in extra {
            let label = label.as_ref();
            if g.index.contains_key(label) {
                return Err(GraphError::DuplicateLabel {
                    label: label.to_string(),
                });
            }
            g.index.insert(label.to_string(), g.labels.len());
            g.labels.push(label.to_string());
            g.adj.push(Vec::new());
        }
        Ok(g)
    }

    /// Write the graph as an edge list, one `a<TAB>b` line per edge in
    /// internal index order. Degree-0 nodes are not representable in this
    /// format and are skipped.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{}\t{}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }

    fn subset_membership(&self, subset: &[usize]) -> Result<HashSet<usize>, GraphError> {
        let n = self.node_count();
        let mut member = HashSet::with_capacity(subset.len());
        for &u in subset {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { index: u, n });
            }
            if !member.insert(u) {
                return Err(GraphError::DuplicateNode { index: u });
            }
        }
        Ok(member)
    }
}

/// Incremental builder used by the parser and the dataset converter.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    /// Register both endpoints as nodes and add the edge unless it is a
    /// self-loop or a duplicate.
    pub fn add_edge(&mut self, a: &str, b: &str) {
        let u = self.intern(a);
        let v = self.intern(b);
        if u == v {
            return;
        }
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn build(self) -> Graph {
        let n = self.labels.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for ns in &mut adj {
            ns.sort_unstable();
        }
        Graph {
            adj,
            labels: self.labels,
            index: self.index,
            edge_count: self.edges.len(),
        }
    }
}
