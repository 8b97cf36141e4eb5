//! Flat `(root, vertex) -> distance` store with expected O(1) lookup.

use hashbrown::HashMap;

use crate::graph::{Dist, Vertex};
use crate::tree::ShortestPathTree;

/// Associative map over `(root, vertex)` pairs holding hop distances. Any
/// expected-O(1) map satisfies the contract; entries agree exactly with the
/// trees they were loaded from.
#[derive(Default, Clone, Debug)]
pub struct DistanceStore {
    map: HashMap<(Vertex, Vertex), Dist>,
}

impl DistanceStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert all reachable `(root, v)` distances of a tree.
    pub fn insert_tree(&mut self, tree: &ShortestPathTree) {
        let root = tree.root();
        for v in 0..tree.n() as Vertex {
            if tree.is_reachable(v) {
                self.map.insert((root, v), tree.dist(v));
            }
        }
    }

    pub fn get(&self, root: Vertex, v: Vertex) -> Option<Dist> {
        self.map.get(&(root, v)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::tree::bfs_tree;

    #[test]
    fn lookups_match_tree() {
        let g = parse_edge_list("6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0").unwrap();
        let mut store = DistanceStore::new();
        for root in 0..6 {
            store.insert_tree(&bfs_tree(&g, root));
        }
        for root in 0..6 {
            let t = bfs_tree(&g, root);
            for v in 0..6 {
                assert_eq!(store.get(root, v), Some(t.dist(v)));
            }
        }
        assert_eq!(store.len(), 36);
    }

    #[test]
    fn unreachable_pairs_absent() {
        let g = parse_edge_list("4 2\n0 1\n2 3").unwrap();
        let mut store = DistanceStore::new();
        store.insert_tree(&bfs_tree(&g, 0));
        assert_eq!(store.get(0, 2), None);
        assert_eq!(store.get(0, 1), Some(1));
    }
}
