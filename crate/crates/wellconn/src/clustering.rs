//! Partitions of a graph's node set and their summary statistics.
//!
//! A [`Clustering`] assigns every node to exactly one cluster. Cluster ids
//! are dense (`0..B`) and renumbered on construction; input files may use
//! arbitrary string labels. Nodes missing from a clustering file are
//! completed as fresh singletons, so a clustering is always a total
//! partition of the graph it was parsed against.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum ClusteringError {
    #[error("line {line}: expected node and cluster labels, found {found} token(s)")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: node {label:?} assigned to more than one cluster")]
    DuplicateAssignment { label: String, line: usize },
    #[error("line {line}: node {label:?} is not a node of the graph")]
    UnknownNode { label: String, line: usize },
    #[error("node universes differ ({left} vs {right} nodes)")]
    UniverseMismatch { left: usize, right: usize },
    #[error("cluster member lists do not form a partition: {reason}")]
    NotAPartition { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A partition of `0..n` into non-empty clusters with dense ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    assignment: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl Clustering {
    /// Build from a per-node cluster id vector. Ids may be sparse; they are
    /// renumbered densely in first-appearance order.
    pub fn from_assignment(raw: &[usize]) -> Clustering {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        let mut assignment = Vec::with_capacity(raw.len());
        for (node, &label) in raw.iter().enumerate() {
            let id = match remap.entry(label) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let id = clusters.len();
                    clusters.push(Vec::new());
                    e.insert(id);
                    id
                }
            };
            clusters[id].push(node);
            assignment.push(id);
        }
        Clustering {
            assignment,
            clusters,
        }
    }

    /// Build from explicit member lists covering `0..n` exactly once.
    pub fn from_clusters(clusters: Vec<Vec<usize>>, n: usize) -> Result<Clustering, ClusteringError> {
        let mut assignment = vec![usize::MAX; n];
        let mut clean = Vec::with_capacity(clusters.len());
        for members in clusters {
            if members.is_empty() {
                continue;
            }
            let id = clean.len();
            let mut sorted = members;
            sorted.sort_unstable();
            for &node in &sorted {
                if node >= n {
                    return Err(ClusteringError::NotAPartition {
                        reason: format!("node index {node} out of range for n = {n}"),
                    });
                }
                if assignment[node] != usize::MAX {
                    return Err(ClusteringError::NotAPartition {
                        reason: format!("node {node} appears in more than one cluster"),
                    });
                }
                assignment[node] = id;
            }
            clean.push(sorted);
        }
        if let Some(node) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(ClusteringError::NotAPartition {
                reason: format!("node {node} is not covered by any cluster"),
            });
        }
        Ok(Clustering {
            assignment,
            clusters: clean,
        })
    }

    /// Parse a `node cluster` file against a graph. Graph nodes absent from
    /// the file become fresh singleton clusters; node labels unknown to the
    /// graph are an error (extend the graph first to admit degree-0 nodes,
    /// see [`parse_clustering_extending`]).
    pub fn parse<R: BufRead>(reader: R, graph: &Graph) -> Result<Clustering, ClusteringError> {
        let n = graph.node_count();
        let mut raw: Vec<Option<usize>> = vec![None; n];
        let mut cluster_ids: HashMap<String, usize> = HashMap::new();
        let mut next_cluster = 0usize;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(node_label), Some(cluster_label)) = (tokens.next(), tokens.next()) else {
                return Err(ClusteringError::MalformedLine {
                    line: lineno + 1,
                    found: 1,
                });
            };
            let Some(node) = graph.node_by_label(node_label) else {
                return Err(ClusteringError::UnknownNode {
                    label: node_label.to_string(),
                    line: lineno + 1,
                });
            };
            if raw[node].is_some() {
                return Err(ClusteringError::DuplicateAssignment {
                    label: node_label.to_string(),
                    line: lineno + 1,
                });
            }
            let id = *cluster_ids
                .entry(cluster_label.to_string())
                .or_insert_with(|| {
                    let id = next_cluster;
                    next_cluster += 1;
                    id
                });
            raw[node] = Some(id);
        }
        // Singleton completion for nodes the file does not mention.
        let mut dense: Vec<usize> = Vec::with_capacity(n);
        for slot in raw {
            match slot {
                Some(id) => dense.push(id),
                None => {
                    dense.push(next_cluster);
                    next_cluster += 1;
                }
            }
        }
        Ok(Clustering::from_assignment(&dense))
    }

    /// Number of nodes in the universe.
    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    /// Number of non-empty clusters (`B`).
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn cluster(&self, id: usize) -> &[usize] {
        &self.clusters[id]
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Member sets as a canonical value: clusters sorted by their smallest
    /// node. Two clusterings are the same partition iff these are equal.
    pub fn canonical_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = self.clusters.clone();
        sets.sort_by_key(|c| c[0]);
        sets
    }

    /// True iff every cluster of `self` is contained in one cluster of
    /// `parent`.
    pub fn is_refinement(&self, parent: &Clustering) -> Result<bool, ClusteringError> {
        if self.node_count() != parent.node_count() {
            return Err(ClusteringError::UniverseMismatch {
                left: self.node_count(),
                right: parent.node_count(),
            });
        }
        for members in &self.clusters {
            let target = parent.cluster_of(members[0]);
            if members.iter().any(|&u| parent.cluster_of(u) != target) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Node coverage, cluster counts, and the non-singleton size
    /// distribution.
    pub fn stats(&self) -> ClusterStats {
        let n = self.node_count();
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        let mut non_singleton_sizes: Vec<usize> = Vec::new();
        let mut covered = 0usize;
        for members in &self.clusters {
            let size = members.len();
            *histogram.entry(size).or_insert(0) += 1;
            if size >= 2 {
                covered += size;
                non_singleton_sizes.push(size);
            }
        }
        non_singleton_sizes.sort_unstable();
        let median = if non_singleton_sizes.is_empty() {
            None
        } else {
            // Lower median: integer-valued for even-length lists.
            Some(non_singleton_sizes[(non_singleton_sizes.len() - 1) / 2])
        };
        ClusterStats {
            node_coverage: if n == 0 { 0.0 } else { covered as f64 / n as f64 },
            num_clusters: self.cluster_count(),
            num_non_singleton: non_singleton_sizes.len(),
            size_min: non_singleton_sizes.first().copied(),
            size_median: median,
            size_max: non_singleton_sizes.last().copied(),
            size_histogram: histogram,
        }
    }

    /// Write as `node<TAB>cluster` lines sorted by node label. Cluster
    /// labels are the dense ids; output round-trips through [`Clustering::parse`].
    pub fn write<W: Write>(&self, graph: &Graph, mut w: W) -> std::io::Result<()> {
        let mut order: Vec<usize> = (0..self.node_count()).collect();
        order.sort_by(|&a, &b| graph.label(a).cmp(graph.label(b)));
        for node in order {
            writeln!(w, "{}\t{}", graph.label(node), self.assignment[node])?;
        }
        Ok(())
    }
}

/// Parse a clustering whose file may name nodes absent from the graph's
/// edge list. Unknown labels are admitted as isolated (degree-0) nodes:
/// the returned graph extends the input with them, and the clustering is
/// a partition of the extended universe.
pub fn parse_clustering_extending(
    text: &str,
    graph: &Graph,
) -> Result<(Graph, Clustering), ClusteringError> {
    let mut extra: Vec<&str> = Vec::new();
    let mut seen: HashMap<&str, ()> = HashMap::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(node_label), Some(_)) = (tokens.next(), tokens.next()) else {
            continue; // malformed lines are reported by the real parse below
        };
        if graph.node_by_label(node_label).is_none() && !seen.contains_key(node_label) {
            seen.insert(node_label, ());
            extra.push(node_label);
        }
    }
    let extended = if extra.is_empty() {
        graph.clone()
    } else {
        graph
            .with_added_labels(&extra)
            .expect("labels filtered against the graph cannot collide")
    };
    let clustering = Clustering::parse(text.as_bytes(), &extended)?;
    Ok((extended, clustering))
}

/// Cluster statistics: coverage is the fraction of nodes in clusters of
/// size at least two; min/median/max describe the non-singleton size
/// distribution; the histogram covers all clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub node_coverage: f64,
    pub num_clusters: usize,
    pub num_non_singleton: usize,
    pub size_min: Option<usize>,
    pub size_median: Option<usize>,
    pub size_max: Option<usize>,
    pub size_histogram: BTreeMap<usize, usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::parse_edge_list("1 2\n2 3\n3 1".as_bytes()).unwrap()
    }

    #[test]
    fn parses_simple_clustering() {
        let g = triangle();
        let c = Clustering::parse("1 A\n2 A\n3 B".as_bytes(), &g).unwrap();
        assert_eq!(c.cluster_count(), 2);
        assert_eq!(c.cluster(0), &[0, 1]);
        assert_eq!(c.cluster(1), &[2]);
    }

    #[test]
    fn completes_missing_nodes_as_singletons() {
        let g = triangle();
        let c = Clustering::parse("".as_bytes(), &g).unwrap();
        assert_eq!(c.cluster_count(), 3);
        assert!(c.clusters().iter().all(|cl| cl.len() == 1));
    }

    #[test]
    fn rejects_duplicate_assignment() {
        let g = triangle();
        let err = Clustering::parse("1 A\n1 B".as_bytes(), &g).unwrap_err();
        assert!(matches!(
            err,
            ClusteringError::DuplicateAssignment { line: 2, .. }
        ));
    }

    #[test]
    fn rejects_unknown_node() {
        let g = triangle();
        let err = Clustering::parse("9 A".as_bytes(), &g).unwrap_err();
        assert!(matches!(err, ClusteringError::UnknownNode { line: 1, .. }));
    }

    #[test]
    fn extending_parse_admits_isolated_nodes() {
        let g = triangle();
        let (g2, c) = parse_clustering_extending("1 A\nx A\ny B", &g).unwrap();
        assert_eq!(g2.node_count(), 5);
        assert_eq!(g2.degree(g2.node_by_label("x").unwrap()), 0);
        assert_eq!(c.node_count(), 5);
        // x shares a cluster with node "1"
        let x = g2.node_by_label("x").unwrap();
        let one = g2.node_by_label("1").unwrap();
        assert_eq!(c.cluster_of(x), c.cluster_of(one));
    }

    #[test]
    fn stats_examples() {
        // clusters {a,b},{c} over n=3
        let c = Clustering::from_assignment(&[0, 0, 1]);
        let s = c.stats();
        assert!((s.node_coverage - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.num_non_singleton, 1);
        assert_eq!(s.size_median, Some(2));
        assert_eq!(s.size_max, Some(2));
        assert_eq!(s.size_histogram.get(&1), Some(&1));

        let all_singletons = Clustering::from_assignment(&[0, 1, 2]);
        assert_eq!(all_singletons.stats().node_coverage, 0.0);
        assert_eq!(all_singletons.stats().size_median, None);

        let one_cluster = Clustering::from_assignment(&[0, 0, 0, 0]);
        let s = one_cluster.stats();
        assert_eq!(s.node_coverage, 1.0);
        assert_eq!(s.size_median, Some(4));
        assert_eq!(s.size_max, Some(4));
    }

    #[test]
    fn lower_median_for_even_counts() {
        // non-singleton sizes [2, 3] -> lower median 2
        let c = Clustering::from_assignment(&[0, 0, 1, 1, 1]);
        assert_eq!(c.stats().size_median, Some(2));
    }

    #[test]
    fn refinement_cases() {
        let parent = Clustering::from_assignment(&[0, 0, 1]);
        assert!(parent.is_refinement(&parent).unwrap());
        let singletons = Clustering::from_assignment(&[0, 1, 2]);
        assert!(singletons.is_refinement(&parent).unwrap());
        // crossing cluster {a,c},{b}
        let crossing = Clustering::from_assignment(&[0, 1, 0]);
        assert!(!crossing.is_refinement(&parent).unwrap());
        // parent never refines a strict refinement
        assert!(!parent.is_refinement(&singletons).unwrap());
        let other = Clustering::from_assignment(&[0, 0]);
        assert!(matches!(
            parent.is_refinement(&other),
            Err(ClusteringError::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn write_round_trips() {
        let g = Graph::parse_edge_list("1 2\n2 3\n3 1\n4 1".as_bytes()).unwrap();
        let c = Clustering::parse("1 A\n2 A\n3 B".as_bytes(), &g).unwrap();
        let mut buf = Vec::new();
        c.write(&g, &mut buf).unwrap();
        let c2 = Clustering::parse(&buf[..], &g).unwrap();
        assert_eq!(c.canonical_sets(), c2.canonical_sets());
    }

    #[test]
    fn write_empty_clustering_is_empty() {
        let g = Graph::parse_edge_list("".as_bytes()).unwrap();
        let c = Clustering::parse("".as_bytes(), &g).unwrap();
        let mut buf = Vec::new();
        c.write(&g, &mut buf).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn write_includes_completed_singletons() {
        let g = triangle();
        let c = Clustering::parse("1 A".as_bytes(), &g).unwrap();
        let mut buf = Vec::new();
        c.write(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().any(|l| l.starts_with("2\t")));
        assert!(text.lines().any(|l| l.starts_with("3\t")));
    }

    #[test]
    fn from_clusters_validates_partition() {
        assert!(Clustering::from_clusters(vec![vec![0, 1], vec![2]], 3).is_ok());
        assert!(matches!(
            Clustering::from_clusters(vec![vec![0, 1], vec![1]], 3),
            Err(ClusteringError::NotAPartition { .. })
        ));
        assert!(matches!(
            Clustering::from_clusters(vec![vec![0]], 2),
            Err(ClusteringError::NotAPartition { .. })
        ));
        assert!(matches!(
            Clustering::from_clusters(vec![vec![0, 5]], 2),
            Err(ClusteringError::NotAPartition { .. })
        ));
    }

    #[test]
    fn partition_sizes_sum_to_n() {
        let c = Clustering::from_assignment(&[3, 1, 4, 1, 5, 9, 2, 6]);
        let total: usize = c.clusters().iter().map(Vec::len).sum();
        assert_eq!(total, c.node_count());
    }
}
