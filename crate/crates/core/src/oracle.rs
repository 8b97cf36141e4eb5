//! Ground truth and verification.
//!
//! `brute_force_rp` answers a single replacement query by BFS on the graph
//! with the edge removed; it is the independent oracle every pipeline is
//! checked against. `verify_table` sweeps a computed table against the
//! oracle, and `QueryIndex` serves constant-time lookups over a table with
//! the off-path fallback.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use crate::config::AlgoConfig;
use crate::graph::{Dist, Graph, Vertex, INF};
use crate::ssrp::{classify_pos, EdgeClass};
use crate::table::ReplacementTable;
use crate::tree::{edge_on_path, TreeStore};

/// BFS distance from `s` to `t` in `G - e`; sentinel when disconnected.
pub fn brute_force_rp(g: &Graph, s: Vertex, t: Vertex, e: (Vertex, Vertex)) -> Dist {
    let skip = (e.0.min(e.1), e.0.max(e.1));
    let mut dist = alloc::vec![INF; g.n()];
    let mut queue = VecDeque::new();
    dist[s as usize] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return dist[u as usize];
        }
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if (u.min(v), u.max(v)) == skip {
                continue;
            }
            if dist[v as usize] == INF {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist[t as usize]
}

/// One disagreement between a table and the oracle, annotated with the edge
/// class and the pass expected to have produced the entry.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub source: Vertex,
    pub target: Vertex,
    pub edge: (Vertex, Vertex),
    pub expected: Dist,
    pub actual: Dist,
    pub class: EdgeClass,
    pub expected_pass: &'static str,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare every keyed triple of `table` against the brute-force oracle.
pub fn verify_table(
    g: &Graph,
    sources: &[Vertex],
    table: &ReplacementTable,
    cfg: &AlgoConfig,
) -> VerifyReport {
    let scales = cfg.scales(g.n(), sources.len().max(1));
    let trees = TreeStore::build(g, sources);
    let mut report = VerifyReport::default();
    for (&(s, t, eid), &actual) in table.iter() {
        let edge = g.endpoints(eid);
        let expected = brute_force_rp(g, s, t, edge);
        report.checked += 1;
        if actual != expected {
            let tree = &trees.get(s).tree;
            let deep = tree.tree_edge_child(edge.0, edge.1).unwrap_or(edge.1);
            let d_on_path = tree.dist(t).saturating_sub(tree.dist(deep));
            let class = classify_pos(d_on_path, &scales);
            let expected_pass = match class {
                EdgeClass::Near => {
                    let tail = tree.dist(deep).saturating_sub(1);
                    if expected != INF
                        && (expected as f64) <= tail as f64 + scales.near_threshold
                    {
                        "small-near"
                    } else {
                        "large-near"
                    }
                }
                EdgeClass::Far(_) => "far",
            };
            report.mismatches.push(Mismatch {
                source: s,
                target: t,
                edge,
                expected,
                actual,
                class,
                expected_pass,
            });
        }
    }
    report
        .mismatches
        .sort_by_key(|m| (m.source, m.target, m.edge));
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryError {
    UnknownSource { s: Vertex },
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::UnknownSource { s } => write!(f, "source {s} is not indexed"),
        }
    }
}

impl core::error::Error for QueryError {}

/// Constant-time query layer over a computed table: keyed triples return the
/// stored value, off-path edges fall back to the plain distance.
pub struct QueryIndex<'a> {
    g: &'a Graph,
    table: &'a ReplacementTable,
    trees: TreeStore,
    sources: Vec<Vertex>,
}

impl<'a> QueryIndex<'a> {
    pub fn build(g: &'a Graph, sources: &[Vertex], table: &'a ReplacementTable) -> Self {
        let trees = TreeStore::build(g, sources);
        QueryIndex {
            g,
            table,
            trees,
            sources: sources.to_vec(),
        }
    }

    /// Distance from `s` to `t` avoiding `e`.
    pub fn query(&self, s: Vertex, t: Vertex, e: (Vertex, Vertex)) -> Result<Dist, QueryError> {
        if !self.sources.contains(&s) {
            return Err(QueryError::UnknownSource { s });
        }
        let tl = self.trees.get(s);
        if !edge_on_path(&tl.tree, &tl.lca, e.0, e.1, t) {
            return Ok(tl.tree.dist(t));
        }
        let eid = self.g.edge_id(e.0, e.1).expect("edge exists");
        Ok(self.table.get(s, t, eid).unwrap_or(INF))
    }

    /// Plain distance from an indexed source.
    pub fn dist(&self, s: Vertex, t: Vertex) -> Result<Dist, QueryError> {
        if !self.sources.contains(&s) {
            return Err(QueryError::UnknownSource { s });
        }
        Ok(self.trees.get(s).tree.dist(t))
    }
}
