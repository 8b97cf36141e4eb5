//! Canonical BFS shortest-path trees.
//!
//! Ties between shortest paths are broken deterministically: the parent of
//! `v` is the minimum-id neighbor one level closer to the root. The "canonical
//! path" from the root to `v` is the resulting tree path; replacement tables
//! are keyed by exactly its edges.

use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashMap;

use crate::graph::{Dist, EdgeId, Graph, Vertex, INF};
use crate::lca::LcaIndex;

pub const UNSET: Vertex = u32::MAX;

#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    root: Vertex,
    dist: Vec<Dist>,
    parent: Vec<Vertex>,
    bfs_order: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    Unreachable { root: Vertex, v: Vertex },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Unreachable { root, v } => {
                write!(f, "vertex {v} is unreachable from root {root}")
            }
        }
    }
}

impl core::error::Error for TreeError {}

/// BFS from `root`; unreachable vertices keep `INF` distance and no parent.
pub fn bfs_tree(g: &Graph, root: Vertex) -> ShortestPathTree {
    assert!((root as usize) < g.n(), "root out of range");
    let n = g.n();
    let mut dist = alloc::vec![INF; n];
    let mut bfs_order = Vec::with_capacity(n);
    let mut queue = alloc::collections::VecDeque::new();
    dist[root as usize] = 0;
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        bfs_order.push(u);
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if dist[v as usize] == INF {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    // Canonical parent: minimum-id neighbor one level up. Neighbor lists are
    // sorted, so the first match wins.
    let mut parent = alloc::vec![UNSET; n];
    for v in 0..n as Vertex {
        let dv = dist[v as usize];
        if dv == INF || dv == 0 {
            continue;
        }
        for &u in g.neighbors(v) {
            if dist[u as usize] == dv - 1 {
                parent[v as usize] = u;
                break;
            }
        }
    }
    ShortestPathTree {
        root,
        dist,
        parent,
        bfs_order,
    }
}

impl ShortestPathTree {
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn dist(&self, v: Vertex) -> Dist {
        self.dist[v as usize]
    }

    pub fn dists(&self) -> &[Dist] {
        &self.dist
    }

    pub fn parent(&self, v: Vertex) -> Vertex {
        self.parent[v as usize]
    }

    pub fn is_reachable(&self, v: Vertex) -> bool {
        self.dist[v as usize] != INF
    }

    /// Vertices in BFS discovery order (nondecreasing distance).
    pub fn bfs_order(&self) -> &[Vertex] {
        &self.bfs_order
    }

    pub fn n(&self) -> usize {
        self.dist.len()
    }

    /// Canonical path root -> v as a vertex sequence.
    pub fn path_vertices(&self, v: Vertex) -> Result<Vec<Vertex>, TreeError> {
        if !self.is_reachable(v) {
            return Err(TreeError::Unreachable { root: self.root, v });
        }
        let mut path = Vec::with_capacity(self.dist(v) as usize + 1);
        let mut cur = v;
        loop {
            path.push(cur);
            if cur == self.root {
                break;
            }
            cur = self.parent(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// Canonical path root -> v as ordered `(parent, child)` edges;
    /// length equals `dist(v)`.
    pub fn path_edges(&self, v: Vertex) -> Result<Vec<(Vertex, Vertex)>, TreeError> {
        let verts = self.path_vertices(v)?;
        Ok(verts.windows(2).map(|w| (w[0], w[1])).collect())
    }

    /// Edge ids along the canonical path root -> v.
    pub fn path_edge_ids(&self, g: &Graph, v: Vertex) -> Result<Vec<EdgeId>, TreeError> {
        let edges = self.path_edges(v)?;
        Ok(edges
            .iter()
            .map(|&(a, b)| g.edge_id(a, b).expect("tree edge exists in graph"))
            .collect())
    }

    /// For a graph edge `(u, v)` that is a tree edge, the `(child, parent)`
    /// orientation; `None` if the edge is not part of this tree.
    pub fn tree_edge_child(&self, u: Vertex, v: Vertex) -> Option<Vertex> {
        let (du, dv) = (self.dist(u), self.dist(v));
        if du == INF || dv == INF {
            return None;
        }
        if dv == du + 1 && self.parent(v) == u {
            Some(v)
        } else if du == dv + 1 && self.parent(u) == v {
            Some(u)
        } else {
            None
        }
    }
}

/// Is edge `(u, v)` on the canonical path from the tree root to `target`?
///
/// Non-tree edges are never on a canonical path. For a tree edge with deeper
/// endpoint `b`, membership is a single LCA probe: `lca(b, target) == b`.
pub fn edge_on_path(
    tree: &ShortestPathTree,
    idx: &LcaIndex,
    u: Vertex,
    v: Vertex,
    target: Vertex,
) -> bool {
    if !tree.is_reachable(target) {
        return false;
    }
    let Some(child) = tree.tree_edge_child(u, v) else {
        return false;
    };
    idx.lca(child, target) == Ok(child)
}

/// Shortest-path trees plus LCA indexes for a set of roots.
pub struct TreeStore {
    map: HashMap<Vertex, TreeLca>,
}

pub struct TreeLca {
    pub tree: ShortestPathTree,
    pub lca: LcaIndex,
}

impl TreeStore {
    pub fn build(g: &Graph, roots: &[Vertex]) -> TreeStore {
        let mut map = HashMap::with_capacity(roots.len());
        for &r in roots {
            map.entry(r).or_insert_with(|| {
                let tree = bfs_tree(g, r);
                let lca = LcaIndex::build(&tree);
                TreeLca { tree, lca }
            });
        }
        TreeStore { map }
    }

    pub fn get(&self, root: Vertex) -> &TreeLca {
        self.map.get(&root).expect("tree built for root")
    }

    pub fn contains(&self, root: Vertex) -> bool {
        self.map.contains_key(&root)
    }

    /// Hop distance between a stored root and any vertex.
    pub fn dist(&self, root: Vertex, v: Vertex) -> Dist {
        self.get(root).tree.dist(v)
    }

    /// Is edge `(u, v)` on the canonical path `root -> target`?
    pub fn on_path(&self, root: Vertex, u: Vertex, v: Vertex, target: Vertex) -> bool {
        let tl = self.get(root);
        edge_on_path(&tl.tree, &tl.lca, u, v, target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn path4() -> Graph {
        parse_edge_list("4 3\n0 1\n1 2\n2 3").unwrap()
    }

    fn c6() -> Graph {
        parse_edge_list("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0").unwrap()
    }

    #[test]
    fn path_graph_distances() {
        let t = bfs_tree(&path4(), 0);
        assert_eq!(t.dist(3), 3);
        assert_eq!(t.parent(3), 2);
    }

    #[test]
    fn cycle_tie_breaks_to_min_id() {
        // In C6 from 0, vertex 3 is reachable at distance 3 through 2 or 4;
        // the canonical parent is the smaller id.
        let t = bfs_tree(&c6(), 0);
        assert_eq!(t.dist(3), 3);
        assert_eq!(t.parent(3), 2);
    }

    #[test]
    fn disconnected_vertices_are_unreachable() {
        let g = parse_edge_list("4 2\n0 1\n2 3").unwrap();
        let t = bfs_tree(&g, 0);
        assert_eq!(t.dist(2), INF);
        assert_eq!(t.dist(3), INF);
        assert!(t.path_edges(3).is_err());
    }

    #[test]
    fn canonical_path_edges_path_graph() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        let t = bfs_tree(&g, 0);
        assert_eq!(t.path_edges(2).unwrap(), alloc::vec![(0, 1), (1, 2)]);
        assert_eq!(t.path_edges(0).unwrap(), alloc::vec![]);
    }

    #[test]
    fn canonical_path_edges_cycle() {
        let t = bfs_tree(&c6(), 0);
        assert_eq!(
            t.path_edges(3).unwrap(),
            alloc::vec![(0, 1), (1, 2), (2, 3)]
        );
    }

    #[test]
    fn edge_on_path_cases() {
        let g = path4();
        let t = bfs_tree(&g, 0);
        let idx = LcaIndex::build(&t);
        assert!(edge_on_path(&t, &idx, 1, 2, 3));
        assert!(!edge_on_path(&t, &idx, 2, 3, 1));
        // Non-tree edge is never on a canonical path.
        let g2 = c6();
        let t2 = bfs_tree(&g2, 0);
        let idx2 = LcaIndex::build(&t2);
        assert!(!edge_on_path(&t2, &idx2, 3, 4, 3)); // (3,4) is not a tree edge from 0
    }

    #[test]
    fn path_length_matches_dist() {
        let g = c6();
        let t = bfs_tree(&g, 0);
        for v in 0..6 {
            assert_eq!(t.path_edges(v).unwrap().len(), t.dist(v) as usize);
        }
    }
}
