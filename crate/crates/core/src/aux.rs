//! Weighted digraph scaffold for the auxiliary constructions.
//!
//! All four auxiliary graphs used by the pipelines are instances of this
//! structure: tagged nodes, nonnegative integer arc weights, one designated
//! source, solved with a binary-heap Dijkstra that keeps predecessors so
//! shortest aux paths can be replayed as walks in the underlying graph.

use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::counters::Counters;
use crate::graph::{dist_add, Dist, EdgeId, Vertex, INF};

pub const NO_PRED: u32 = u32::MAX;

/// Node tags. `Node(v)` is a plain vertex copy; `NodeEdge(v, e)` asks for the
/// best walk to `v` avoiding `e`; `Interval(r, i)` stands for the bottleneck
/// edge of the i-th interval on the path to `r`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AuxTag {
    Source,
    Node(Vertex),
    NodeEdge(Vertex, EdgeId),
    Interval(Vertex, u32),
}

pub struct AuxGraph {
    pub tags: Vec<AuxTag>,
    arcs: Vec<Vec<(u32, Dist)>>,
    arc_count: usize,
}

impl AuxGraph {
    pub fn new() -> Self {
        AuxGraph {
            tags: Vec::new(),
            arcs: Vec::new(),
            arc_count: 0,
        }
    }

    pub fn add_node(&mut self, tag: AuxTag) -> u32 {
        let id = self.tags.len() as u32;
        self.tags.push(tag);
        self.arcs.push(Vec::new());
        id
    }

    pub fn add_arc(&mut self, from: u32, to: u32, w: Dist) {
        debug_assert!(w != INF);
        self.arcs[from as usize].push((to, w));
        self.arc_count += 1;
    }

    pub fn node_count(&self) -> usize {
        self.tags.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Dijkstra from `src`; returns labels and predecessor nodes.
    pub fn dijkstra(&self, src: u32, counters: &mut Counters) -> (Vec<Dist>, Vec<u32>) {
        counters.aux_nodes += self.node_count() as u64;
        counters.aux_arcs += self.arc_count as u64;
        let n = self.node_count();
        let mut dist = alloc::vec![INF; n];
        let mut pred = alloc::vec![NO_PRED; n];
        let mut heap = alloc::collections::BinaryHeap::new();
        dist[src as usize] = 0;
        heap.push(Reverse((0 as Dist, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            counters.dijkstra_pops += 1;
            for &(v, w) in &self.arcs[u as usize] {
                let nd = dist_add(d, w);
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    pred[v as usize] = u;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        (dist, pred)
    }
}

impl Default for AuxGraph {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dijkstra_two_routes() {
        let mut g = AuxGraph::new();
        let s = g.add_node(AuxTag::Source);
        let a = g.add_node(AuxTag::Node(0));
        let b = g.add_node(AuxTag::Node(1));
        g.add_arc(s, a, 5);
        g.add_arc(s, b, 1);
        g.add_arc(b, a, 2);
        let mut c = Counters::new();
        let (dist, pred) = g.dijkstra(s, &mut c);
        assert_eq!(dist[a as usize], 3);
        assert_eq!(pred[a as usize], b);
        assert_eq!(c.dijkstra_pops, 3);
    }

    #[test]
    fn unreachable_keeps_sentinel() {
        let mut g = AuxGraph::new();
        let s = g.add_node(AuxTag::Source);
        let a = g.add_node(AuxTag::Node(0));
        let _ = (s, a);
        let mut c = Counters::new();
        let (dist, _) = g.dijkstra(0, &mut c);
        assert_eq!(dist[1], INF);
    }
}
