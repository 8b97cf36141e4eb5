//! Single-source replacement paths.
//!
//! Edges of a canonical source->target path are classified by their path
//! distance to the target. Three passes fill the table, each one min-merging
//! candidates that are realizable walks avoiding the failed edge, so entries
//! only ever decrease toward the optimum:
//!
//! * far pass: for an edge in dyadic bucket `k`, scan the level-k landmarks
//!   within guard radius `2^k * x` of the target and chain a precomputed
//!   source->landmark replacement distance with the landmark->target
//!   distance (the guard keeps that tail clear of the failed edge);
//! * small-near pass: one Dijkstra over an auxiliary graph whose nodes
//!   `[t, e]` capture replacement paths that rejoin quickly;
//! * large-near pass: scan level-0 landmarks whose canonical path to the
//!   target avoids the failed edge.

use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::aux::{AuxGraph, AuxTag};
use crate::config::{AlgoConfig, Scales};
use crate::counters::Counters;
use crate::graph::{dist_add, Dist, EdgeId, Graph, Vertex, INF};
use crate::lca::LcaIndex;
use crate::pair_rp::{pair_replacement_with_tree, PairReplacement, RpError};
use crate::sampling::{sample_landmarks, LandmarkSets};
use crate::table::ReplacementTable;
use crate::tree::{bfs_tree, edge_on_path, ShortestPathTree, TreeStore};

/// Classification of a path edge by its distance to the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Near,
    Far(u32),
}

/// Classify by path distance to the target. Distances below the near
/// threshold are near; otherwise bucket `k` holds `[2^(k+1) x, 2^(k+2) x)`,
/// with the gap between the threshold and `2x` folded into bucket 0 and
/// everything past the top bucket capped there.
pub fn classify_pos(d_to_target: Dist, scales: &Scales) -> EdgeClass {
    let d = d_to_target as f64;
    if d < scales.near_threshold {
        return EdgeClass::Near;
    }
    let k = libm::floor(libm::log2(d / scales.x)) as i64 - 1;
    EdgeClass::Far(k.clamp(0, scales.k_max as i64) as u32)
}

/// Classify an edge that must lie on the canonical path root->target.
pub fn classify_edge(
    tree_s: &ShortestPathTree,
    lca_s: &LcaIndex,
    target: Vertex,
    e: (Vertex, Vertex),
    scales: &Scales,
) -> Result<EdgeClass, RpError> {
    if !edge_on_path(tree_s, lca_s, e.0, e.1, target) {
        return Err(RpError::NotOnPath { u: e.0, v: e.1 });
    }
    let child = tree_s.tree_edge_child(e.0, e.1).expect("on-path edge");
    Ok(classify_pos(tree_s.dist(target) - tree_s.dist(child), scales))
}

/// Source->landmark replacement distances: rows keyed by `(landmark, edge
/// id)` for edges on the canonical source->landmark path. Lookups fall back
/// to the plain distance for off-path edges; an on-path edge without a row
/// yields the sentinel (no certificate).
#[derive(Default, Clone, Debug)]
pub struct LandmarkRp {
    rows: HashMap<(Vertex, EdgeId), Dist>,
}

impl LandmarkRp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, r: Vertex, e: EdgeId, d: Dist) {
        self.rows.insert((r, e), d);
    }

    pub fn load_pair(&mut self, pair: &PairReplacement) {
        for entry in &pair.entries {
            self.insert(pair.t, entry.edge_id, entry.dist);
        }
    }

    pub fn lookup(
        &self,
        tree_s: &ShortestPathTree,
        lca_s: &LcaIndex,
        r: Vertex,
        e: (Vertex, Vertex),
        eid: EdgeId,
    ) -> Dist {
        if edge_on_path(tree_s, lca_s, e.0, e.1, r) {
            self.rows.get(&(r, eid)).copied().unwrap_or(INF)
        } else {
            tree_s.dist(r)
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (&(Vertex, EdgeId), &Dist)> {
        self.rows.iter()
    }
}

/// Shared read-only context for the per-source passes.
pub struct PassContext<'a> {
    pub g: &'a Graph,
    pub s: Vertex,
    pub tree_s: &'a ShortestPathTree,
    pub lca_s: &'a LcaIndex,
    pub landmarks: &'a LandmarkSets,
    pub trees: &'a TreeStore,
    pub scales: Scales,
}

impl<'a> PassContext<'a> {
    /// Canonical path edges to `t` as `(position, endpoints, id)`; position 1
    /// is the edge at the source.
    pub fn path_edges_of(&self, t: Vertex) -> Vec<(usize, (Vertex, Vertex), EdgeId)> {
        let verts = self.tree_s.path_vertices(t).expect("reachable target");
        verts
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                (
                    i + 1,
                    (w[0], w[1]),
                    self.g.edge_id(w[0], w[1]).expect("path edge"),
                )
            })
            .collect()
    }
}

/// Far pass: for each far edge on each target's canonical path, try every
/// landmark of the edge's bucket inside the guard radius. A landmark within
/// radius `2^k * x` of the target cannot reach it through a bucket-k edge,
/// so every merged candidate is a real walk avoiding the failure.
pub fn far_edge_pass(
    ctx: &PassContext<'_>,
    targets: &[Vertex],
    landmark_rp: &LandmarkRp,
    table: &mut ReplacementTable,
    counters: &mut Counters,
) {
    for &t in targets {
        if t == ctx.s || !ctx.tree_s.is_reachable(t) {
            continue;
        }
        let dt = ctx.tree_s.dist(t);
        let mut work_here = 0u64;
        for (pos, e, eid) in ctx.path_edges_of(t) {
            let to_target = dt - pos as Dist;
            let EdgeClass::Far(k) = classify_pos(to_target, &ctx.scales) else {
                continue;
            };
            let radius = ctx.scales.guard_radius(k);
            for &r in ctx.landmarks.level(k) {
                work_here += 1;
                let rt = ctx.trees.dist(r, t);
                if rt == INF || (rt as f64) > radius {
                    continue;
                }
                let sr = landmark_rp.lookup(ctx.tree_s, ctx.lca_s, r, e, eid);
                table.merge_min(ctx.s, t, eid, dist_add(sr, rt));
            }
        }
        counters.far_inspections += work_here;
        counters.far_inspections_max_per_target =
            counters.far_inspections_max_per_target.max(work_here);
    }
}

/// Retained state of the small-near Dijkstra: labels for `[t, e]` nodes plus
/// the predecessor array, enough to replay any small replacement path.
pub struct SmallNearState {
    pub labels: HashMap<(Vertex, EdgeId), Dist>,
    pub aux: AuxGraph,
    pub aux_dist: Vec<Dist>,
    pub aux_pred: Vec<u32>,
    pub node_of: HashMap<(Vertex, EdgeId), u32>,
    pub plain_node: HashMap<Vertex, u32>,
}

impl SmallNearState {
    pub fn label(&self, t: Vertex, e: EdgeId) -> Dist {
        self.labels.get(&(t, e)).copied().unwrap_or(INF)
    }
}

/// Small-near pass: build the auxiliary graph and run one Dijkstra.
///
/// Nodes: `[s]`; `[v]` per reachable vertex; `[t, e]` per near edge `e` on
/// the canonical path to `t`. Arcs: `[s] -> [v]` weighted `dist(s, v)`;
/// `[v] -> [t, e]` weight 1 when `v` neighbors `t`, the canonical path to
/// `v` avoids `e`, and the hop `(v, t)` is not `e` itself; `[v, e] -> [t, e]`
/// weight 1 when `t` neighbors `v`. Every aux path replays as a real walk
/// avoiding `e`, and any replacement path that rejoins within the near
/// window is reproduced hop by hop.
pub fn small_near_pass(
    ctx: &PassContext<'_>,
    table: &mut ReplacementTable,
    counters: &mut Counters,
) -> SmallNearState {
    let g = ctx.g;
    let mut aux = AuxGraph::new();
    let source = aux.add_node(AuxTag::Source);
    let mut plain_node = HashMap::new();
    for &v in ctx.tree_s.bfs_order() {
        let id = aux.add_node(AuxTag::Node(v));
        plain_node.insert(v, id);
        aux.add_arc(source, id, ctx.tree_s.dist(v));
    }
    let mut node_of: HashMap<(Vertex, EdgeId), u32> = HashMap::new();
    let mut edge_nodes: Vec<(Vertex, (Vertex, Vertex), EdgeId, u32)> = Vec::new();
    let t_cap = libm::ceil(ctx.scales.near_threshold).min(g.n() as f64) as usize;
    for &t in ctx.tree_s.bfs_order() {
        if t == ctx.s {
            continue;
        }
        let dt = ctx.tree_s.dist(t);
        let mut keyed_here = 0usize;
        for (pos, e, eid) in ctx.path_edges_of(t) {
            if classify_pos(dt - pos as Dist, &ctx.scales) != EdgeClass::Near {
                continue;
            }
            let id = aux.add_node(AuxTag::NodeEdge(t, eid));
            node_of.insert((t, eid), id);
            edge_nodes.push((t, e, eid, id));
            keyed_here += 1;
        }
        assert!(keyed_here <= t_cap.min(dt as usize));
    }
    for &(t, e, _, node) in &edge_nodes {
        for &v in g.neighbors(t) {
            if !ctx.tree_s.is_reachable(v) {
                continue;
            }
            if (v.min(t), v.max(t)) == (e.0.min(e.1), e.0.max(e.1)) {
                // The hop (v, t) would be the failed edge itself.
                continue;
            }
            if !edge_on_path(ctx.tree_s, ctx.lca_s, e.0, e.1, v) {
                aux.add_arc(plain_node[&v], node, 1);
            }
        }
    }
    // Extend a captured replacement path by one hop: [v, e] -> [t, e].
    for &(v, _, eid, from) in &edge_nodes {
        for &t2 in g.neighbors(v) {
            if let Some(&to) = node_of.get(&(t2, eid)) {
                aux.add_arc(from, to, 1);
            }
        }
    }
    // Size caps mirroring the intended asymptotics; these fire only on
    // keying bugs, never on legitimate runs.
    assert!(aux.node_count() <= 1 + g.n() * (t_cap + 2));
    assert!(aux.arc_count() <= g.n() + 4 * (g.m() + g.n()) * (t_cap + 2));

    let (aux_dist, aux_pred) = aux.dijkstra(source, counters);
    let mut labels = HashMap::with_capacity(node_of.len());
    for (&(t, eid), &node) in &node_of {
        let w = aux_dist[node as usize];
        labels.insert((t, eid), w);
        if w != INF {
            table.merge_min(ctx.s, t, eid, w);
        }
    }
    SmallNearState {
        labels,
        aux,
        aux_dist,
        aux_pred,
        node_of,
        plain_node,
    }
}

/// Large-near pass: scan level-0 landmarks whose canonical path to the
/// target avoids the failed edge.
pub fn large_near_pass(
    ctx: &PassContext<'_>,
    targets: &[Vertex],
    landmark_rp: &LandmarkRp,
    table: &mut ReplacementTable,
    counters: &mut Counters,
) {
    for &t in targets {
        if t == ctx.s || !ctx.tree_s.is_reachable(t) {
            continue;
        }
        let dt = ctx.tree_s.dist(t);
        for (pos, e, eid) in ctx.path_edges_of(t) {
            if classify_pos(dt - pos as Dist, &ctx.scales) != EdgeClass::Near {
                continue;
            }
            for &r in ctx.landmarks.level(0) {
                counters.large_inspections += 1;
                if ctx.trees.on_path(r, e.0, e.1, t) {
                    continue;
                }
                let rt = ctx.trees.dist(r, t);
                if rt == INF {
                    continue;
                }
                let sr = landmark_rp.lookup(ctx.tree_s, ctx.lca_s, r, e, eid);
                table.merge_min(ctx.s, t, eid, dist_add(sr, rt));
            }
        }
    }
}

pub struct SsrpOutput {
    pub table: ReplacementTable,
    pub counters: Counters,
    pub landmarks: LandmarkSets,
}

/// Full single-source pipeline: sample landmarks, compute exact
/// source->landmark replacement rows with the classical pair routine, then
/// run the three passes over every target.
pub fn run_ssrp(g: &Graph, s: Vertex, cfg: &AlgoConfig) -> Result<SsrpOutput, RpError> {
    if (s as usize) >= g.n() {
        return Err(RpError::VertexOutOfRange { v: s, n: g.n() });
    }
    let mut counters = Counters::new();
    let scales = cfg.scales(g.n(), 1);
    let landmarks = sample_landmarks(g, &[s], cfg);
    let tree_s = bfs_tree(g, s);
    let lca_s = LcaIndex::build(&tree_s);
    let mut roots: Vec<Vertex> = landmarks.all().to_vec();
    if !roots.contains(&s) {
        roots.push(s);
    }
    let trees = TreeStore::build(g, &roots);
    counters.bfs_trees += roots.len() as u64;

    // Exact source->landmark replacement rows.
    let mut landmark_rp = LandmarkRp::new();
    for &r in landmarks.all() {
        if r == s || !tree_s.is_reachable(r) {
            continue;
        }
        let pair = pair_replacement_with_tree(g, &tree_s, r, &mut counters)?;
        landmark_rp.load_pair(&pair);
    }

    let mut table = ReplacementTable::new();
    let targets: Vec<Vertex> = tree_s
        .bfs_order()
        .iter()
        .copied()
        .filter(|&t| t != s)
        .collect();
    for &t in &targets {
        for eid in tree_s.path_edge_ids(g, t).expect("reachable") {
            table.ensure(s, t, eid);
        }
    }
    // Landmark rows are exact; merge them for landmark targets.
    for (&(r, eid), &d) in landmark_rp.rows() {
        table.merge_min(s, r, eid, d);
    }

    let ctx = PassContext {
        g,
        s,
        tree_s: &tree_s,
        lca_s: &lca_s,
        landmarks: &landmarks,
        trees: &trees,
        scales,
    };
    far_edge_pass(&ctx, &targets, &landmark_rp, &mut table, &mut counters);
    small_near_pass(&ctx, &mut table, &mut counters);
    large_near_pass(&ctx, &targets, &landmark_rp, &mut table, &mut counters);

    Ok(SsrpOutput {
        table,
        counters,
        landmarks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::oracle::brute_force_rp;
    use crate::rng::SplitMix64;

    #[test]
    fn classify_override_buckets() {
        let cfg = AlgoConfig {
            threshold_override: Some(1.0),
            ..Default::default()
        };
        let scales = cfg.scales(10, 1);
        // Path 0..9, target 9, edge (0,1): distance 8 lands in bucket 2.
        assert_eq!(classify_pos(8, &scales), EdgeClass::Far(2));
        assert_eq!(classify_pos(0, &scales), EdgeClass::Near);
        // The whole range [threshold, 4x) is bucket 0.
        assert_eq!(classify_pos(1, &scales), EdgeClass::Far(0));
        assert_eq!(classify_pos(3, &scales), EdgeClass::Far(0));
        assert_eq!(classify_pos(4, &scales), EdgeClass::Far(1));
    }

    #[test]
    fn classify_near_with_clamped_scale() {
        // sigma = n keeps x >= 1, so an edge adjacent to the target is near.
        let scales = AlgoConfig::default().scales(9, 9);
        assert_eq!(classify_pos(0, &scales), EdgeClass::Near);
    }

    #[test]
    fn classify_rejects_off_path_edge() {
        let g = parse_edge_list("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0").unwrap();
        let t = bfs_tree(&g, 0);
        let idx = LcaIndex::build(&t);
        let scales = AlgoConfig::default().scales(6, 1);
        assert!(classify_edge(&t, &idx, 1, (3, 4), &scales).is_err());
    }

    #[test]
    fn triangle_table() {
        let g = parse_edge_list("3 3\n0 1\n1 2\n0 2").unwrap();
        let out = run_ssrp(&g, 0, &AlgoConfig::default()).unwrap();
        let e01 = g.edge_id(0, 1).unwrap();
        let e02 = g.edge_id(0, 2).unwrap();
        assert_eq!(out.table.len(), 2);
        assert_eq!(out.table.get(0, 1, e01), Some(2));
        assert_eq!(out.table.get(0, 2, e02), Some(2));
    }

    #[test]
    fn cycle_table_is_detour() {
        let g = parse_edge_list("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0").unwrap();
        let out = run_ssrp(&g, 0, &AlgoConfig::default()).unwrap();
        let tree = bfs_tree(&g, 0);
        for (&(s, t, _), &d) in out.table.iter() {
            assert_eq!(s, 0);
            assert_eq!(d, 6 - tree.dist(t));
        }
        assert_eq!(out.table.len(), 1 + 2 + 3 + 2 + 1);
    }

    #[test]
    fn small_near_forced_detour() {
        // Edge (0,1) plus the detour 0-2-1: the only replacement walk has
        // length 2.
        let g = parse_edge_list("3 3\n0 1\n0 2\n2 1").unwrap();
        let out = run_ssrp(&g, 0, &AlgoConfig::default()).unwrap();
        let e01 = g.edge_id(0, 1).unwrap();
        assert_eq!(out.table.get(0, 1, e01), Some(2));
    }

    #[test]
    fn bridge_stays_sentinel() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let out = run_ssrp(&g, 0, &AlgoConfig::default()).unwrap();
        for (_, &d) in out.table.iter() {
            assert_eq!(d, INF);
        }
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        let mut rng = SplitMix64::new(0x55f1);
        for trial in 0..25 {
            let n = 10 + rng.next_below(31) as usize;
            let mut edges = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for v in 1..n as Vertex {
                let p = rng.next_below(v as u64) as Vertex;
                edges.push((p, v));
                seen.insert((p.min(v), p.max(v)));
            }
            for _ in 0..n {
                let u = rng.next_below(n as u64) as Vertex;
                let v = rng.next_below(n as u64) as Vertex;
                if u != v && seen.insert((u.min(v), u.max(v))) {
                    edges.push((u.min(v), u.max(v)));
                }
            }
            let g = crate::graph::Graph::from_edges(n, &edges).unwrap();
            let cfg = AlgoConfig {
                seed: trial as u64,
                ..Default::default()
            };
            let out = run_ssrp(&g, 0, &cfg).unwrap();
            for (&(s, t, eid), &d) in out.table.iter() {
                let e = g.endpoints(eid);
                assert_eq!(d, brute_force_rp(&g, s, t, e), "trial {trial} t={t}");
            }
        }
    }

    // Long path plus random chords with a pinned tiny threshold: exercises
    // the far buckets and guard radii. c_sample is raised until every
    // landmark level saturates, which makes the far pass deterministic.
    #[test]
    fn override_stress_far_entries_match_oracle() {
        let mut rng = SplitMix64::new(0xfa11);
        let n = 200usize;
        let mut edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        let mut seen: std::collections::HashSet<(Vertex, Vertex)> =
            edges.iter().copied().collect();
        for _ in 0..60 {
            let u = rng.next_below(n as u64) as Vertex;
            let v = rng.next_below(n as u64) as Vertex;
            if u != v && seen.insert((u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let g = crate::graph::Graph::from_edges(n, &edges).unwrap();
        let cfg = AlgoConfig {
            seed: 3,
            c_sample: 512.0,
            threshold_override: Some(2.0),
            ..Default::default()
        };
        let scales = cfg.scales(n, 1);
        for k in 0..=scales.k_max {
            assert_eq!(cfg.sample_prob(n, 1, k), 1.0, "level {k} must saturate");
        }
        let out = run_ssrp(&g, 0, &cfg).unwrap();
        let tree = bfs_tree(&g, 0);
        let mut checked_far = 0usize;
        for (&(s, t, eid), &d) in out.table.iter() {
            let e = g.endpoints(eid);
            let child = tree.tree_edge_child(e.0, e.1).unwrap();
            if let EdgeClass::Far(_) = classify_pos(tree.dist(t) - tree.dist(child), &scales) {
                assert_eq!(d, brute_force_rp(&g, s, t, e));
                checked_far += 1;
            }
        }
        assert!(checked_far > 50, "expected many far edges, got {checked_far}");
    }

    #[test]
    fn bridge_far_edge_stays_sentinel() {
        // A far bridge: no landmark qualifies with a finite chained value,
        // so the entry stays at the sentinel.
        let n = 40usize;
        let edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        let g = crate::graph::Graph::from_edges(n, &edges).unwrap();
        let cfg = AlgoConfig {
            c_sample: 512.0,
            threshold_override: Some(2.0),
            ..Default::default()
        };
        let out = run_ssrp(&g, 0, &cfg).unwrap();
        for (_, &d) in out.table.iter() {
            assert_eq!(d, INF);
        }
    }
}
