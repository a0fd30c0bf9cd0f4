//! Global minimum edge cuts and per-cluster connectivity classification.
//!
//! A cluster with `n_c` nodes counts as well-connected when the minimum
//! edge cut of its induced subgraph is strictly greater than a threshold
//! in `n_c` (default `log10(n_c)`); connected clusters at or below the
//! threshold are poorly connected. Cuts are computed exactly with the
//! Stoer-Wagner algorithm, so every classification is deterministic and
//! testable against brute force.

use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::Clustering;
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ConnectivityError {
    #[error("minimum edge cut requires at least 2 nodes, got {n}")]
    TooFewNodes { n: usize },
    #[error("cannot classify an empty cluster")]
    EmptyCluster,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A global minimum edge cut: its size and the two sides realizing it.
/// `cut_size == 0` iff the graph is disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub cut_size: usize,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

/// Connectivity class of one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityClass {
    Disconnected,
    PoorlyConnected,
    WellConnected,
    TrivialSingleton,
}

/// Well-connectedness threshold as a function of the cluster size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `log10(n_c)`: 0 at size 1, 1 at size 10, 2 at size 100.
    Log10,
    /// A constant, independent of cluster size.
    Const(f64),
}

impl Threshold {
    pub fn eval(&self, cluster_size: usize) -> f64 {
        match self {
            Threshold::Log10 => (cluster_size as f64).log10(),
            Threshold::Const(v) => *v,
        }
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Log10
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Log10 => write!(f, "log10"),
            Threshold::Const(v) => write!(f, "const:{v}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "log10" {
            return Ok(Threshold::Log10);
        }
        if let Some(v) = s.strip_prefix("const:") {
            let v: f64 = v
                .parse()
                .map_err(|e| format!("invalid constant threshold {v:?}: {e}"))?;
            if !v.is_finite() || v < 0.0 {
                return Err(format!("threshold constant must be finite and >= 0, got {v}"));
            }
            return Ok(Threshold::Const(v));
        }
        Err(format!(
            "unknown threshold {s:?}: expected \"log10\" or \"const:<value>\""
        ))
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact global minimum edge cut (Stoer-Wagner).
///
/// A disconnected graph yields `cut_size == 0` with one connected
/// component as `side_a`. Requires at least two nodes.
pub fn min_edge_cut(graph: &Graph) -> Result<CutResult, ConnectivityError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(ConnectivityError::TooFewNodes { n });
    }
    let components = graph.connected_components();
    if components.len() > 1 {
        let side_a = components[0].clone();
        let mut side_b: Vec<usize> = components[1..].concat();
        side_b.sort_unstable();
        return Ok(CutResult {
            cut_size: 0,
            side_a,
            side_b,
        });
    }
    let (cut, side) = stoer_wagner(graph);
    let mut side_a = side;
    side_a.sort_unstable();
    let in_a: Vec<bool> = {
        let mut m = vec![false; n];
        for &u in &side_a {
            m[u] = true;
        }
        m
    };
    let side_b: Vec<usize> = (0..n).filter(|&u| !in_a[u]).collect();
    debug_assert!(!side_a.is_empty() && !side_b.is_empty());
    debug_assert_eq!(
        graph
            .edges()
            .filter(|&(u, v)| in_a[u] != in_a[v])
            .count(),
        cut as usize
    );
    Ok(CutResult {
        cut_size: cut as usize,
        side_a,
        side_b,
    })
}

/// Stoer-Wagner on a connected graph with >= 2 nodes. Returns the minimum
/// cut weight and one side of the bipartition (original node ids).
fn stoer_wagner(graph: &Graph) -> (u64, Vec<usize>) {
    let n = graph.node_count();
    // Super-vertex weight maps; contraction accumulates parallel weights.
    let mut weights: Vec<HashMap<usize, u64>> = (0..n)
        .map(|u| graph.neighbors(u).iter().map(|&v| (v, 1u64)).collect())
        .collect();
    let mut merged_into: Vec<Vec<usize>> = (0..n).map(|u| vec![u]).collect();
    let mut alive = vec![true; n];
    let mut alive_count = n;

    let mut best_cut = u64::MAX;
    let mut best_side: Vec<usize> = Vec::new();

    while alive_count > 1 {
        let start = alive.iter().position(|&a| a).expect("alive supernode");
        let (s, t, cut_of_phase) = min_cut_phase(&weights, &alive, alive_count, start);
        if cut_of_phase < best_cut {
            best_cut = cut_of_phase;
            best_side = merged_into[t].clone();
        }
        // Contract t into s.
        let t_edges: Vec<(usize, u64)> = weights[t].drain().collect();
        for (v, w) in t_edges {
            if v == s {
                weights[s].remove(&t);
                continue;
            }
            weights[v].remove(&t);
            *weights[s].entry(v).or_insert(0) += w;
            *weights[v].entry(s).or_insert(0) += w;
        }
        let moved = std::mem::take(&mut merged_into[t]);
        merged_into[s].extend(moved);
        alive[t] = false;
        alive_count -= 1;
    }
    (best_cut, best_side)
}

/// One maximum-adjacency phase: returns the last two added supernodes and
/// the weight of the cut-of-the-phase (connectivity of `t` to the rest).
fn min_cut_phase(
    weights: &[HashMap<usize, u64>],
    alive: &[bool],
    alive_count: usize,
    start: usize,
) -> (usize, usize, u64) {
    let n = weights.len();
    let mut key = vec![0u64; n];
    let mut added = vec![false; n];
    let mut heap: BinaryHeap<(u64, usize)> = BinaryHeap::new();
    heap.push((0, start));
    let mut order: Vec<usize> = Vec::with_capacity(alive_count);
    while order.len() < alive_count {
        let Some((k, u)) = heap.pop() else {
            unreachable!("phase ran out of reachable supernodes on a connected graph");
        };
        if added[u] || !alive[u] || k != key[u] {
            continue; // stale heap entry
        }
        added[u] = true;
        order.push(u);
        for (&v, &w) in &weights[u] {
            if alive[v] && !added[v] {
                key[v] += w;
                heap.push((key[v], v));
            }
        }
    }
    let t = *order.last().expect("phase order non-empty");
    let s = if order.len() >= 2 {
        order[order.len() - 2]
    } else {
        t
    };
    (s, t, key[t])
}

/// Classify one cluster of a parent graph. Returns the cut of its induced
/// subgraph (sides mapped back to parent indices); singletons have no cut.
pub fn classify_cluster(
    graph: &Graph,
    cluster: &[usize],
    threshold: &Threshold,
) -> Result<(ConnectivityClass, Option<CutResult>), ConnectivityError> {
    if cluster.is_empty() {
        return Err(ConnectivityError::EmptyCluster);
    }
    if cluster.len() == 1 {
        // log10(1) = 0 makes "cut > 0" vacuous for a node with no possible
        // cut, so singletons get their own class.
        return Ok((ConnectivityClass::TrivialSingleton, None));
    }
    let (sub, parents) = graph.induced_subgraph(cluster)?;
    let local = min_edge_cut(&sub)?;
    let cut = CutResult {
        cut_size: local.cut_size,
        side_a: local.side_a.iter().map(|&u| parents[u]).collect(),
        side_b: local.side_b.iter().map(|&u| parents[u]).collect(),
    };
    let class = if cut.cut_size == 0 {
        ConnectivityClass::Disconnected
    } else if (cut.cut_size as f64) > threshold.eval(cluster.len()) {
        ConnectivityClass::WellConnected
    } else {
        ConnectivityClass::PoorlyConnected
    };
    Ok((class, Some(cut)))
}

/// One row of a connectivity profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub cluster: usize,
    pub size: usize,
    pub cut_size: Option<usize>,
    pub class: ConnectivityClass,
}

/// Per-class counts and percentages for a whole clustering. Percentages
/// are over classified (non-singleton) clusters and sum to 100 when any
/// exist; singletons are counted separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityProfile {
    pub records: Vec<ClusterRecord>,
    pub num_clusters: usize,
    pub num_classified: usize,
    pub num_singletons: usize,
    pub disconnected: usize,
    pub poorly_connected: usize,
    pub well_connected: usize,
    pub pct_disconnected: f64,
    pub pct_poorly_connected: f64,
    pub pct_well_connected: f64,
}

/// Classify every cluster of a clustering. Per-cluster work runs on the
/// current rayon pool; records are merged in cluster-id order.
pub fn connectivity_profile(
    graph: &Graph,
    clustering: &Clustering,
    threshold: &Threshold,
) -> Result<ConnectivityProfile, ConnectivityError> {
    let records: Vec<ClusterRecord> = clustering
        .clusters()
        .par_iter()
        .enumerate()
        .map(|(id, members)| {
            let (class, cut) = classify_cluster(graph, members, threshold)?;
            Ok(ClusterRecord {
                cluster: id,
                size: members.len(),
                cut_size: cut.map(|c| c.cut_size),
                class,
            })
        })
        .collect::<Result<_, ConnectivityError>>()?;
    Ok(profile_from_records(records))
}

fn profile_from_records(records: Vec<ClusterRecord>) -> ConnectivityProfile {
    let mut counts: HashMap<ConnectivityClass, usize> = HashMap::new();
    for r in &records {
        match counts.entry(r.class) {
            Entry::Occupied(mut e) => *e.get_mut() += 1,
            Entry::Vacant(e) => {
                e.insert(1);
            }
        }
    }
    let get = |c: ConnectivityClass| counts.get(&c).copied().unwrap_or(0);
    let disconnected = get(ConnectivityClass::Disconnected);
    let poorly = get(ConnectivityClass::PoorlyConnected);
    let well = get(ConnectivityClass::WellConnected);
    let singletons = get(ConnectivityClass::TrivialSingleton);
    let classified = disconnected + poorly + well;
    let pct = |c: usize| {
        if classified == 0 {
            0.0
        } else {
            100.0 * c as f64 / classified as f64
        }
    };
    ConnectivityProfile {
        num_clusters: records.len(),
        num_classified: classified,
        num_singletons: singletons,
        disconnected,
        poorly_connected: poorly,
        well_connected: well,
        pct_disconnected: pct(disconnected),
        pct_poorly_connected: pct(poorly),
        pct_well_connected: pct(well),
        records,
    }
}
