//! Work counters exposed for benchmarking and scaling checks.

/// Cheap counters threaded through the pipelines. They make the intended
/// scaling observable without a profiler: auxiliary-graph sizes, Dijkstra
/// settles, and the per-target landmark-scan work of the far-edge pass.
#[derive(Default, Clone, Debug)]
pub struct Counters {
    pub aux_nodes: u64,
    pub aux_arcs: u64,
    pub dijkstra_pops: u64,
    /// Total (landmark, far edge) inspections.
    pub far_inspections: u64,
    /// Maximum far-edge inspections charged to a single target.
    pub far_inspections_max_per_target: u64,
    /// Total (landmark, near edge) inspections of the large-near pass.
    pub large_inspections: u64,
    pub pair_rp_calls: u64,
    pub bfs_trees: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, other: &Counters) {
        self.aux_nodes += other.aux_nodes;
        self.aux_arcs += other.aux_arcs;
        self.dijkstra_pops += other.dijkstra_pops;
        self.far_inspections += other.far_inspections;
        self.far_inspections_max_per_target = self
            .far_inspections_max_per_target
            .max(other.far_inspections_max_per_target);
        self.large_inspections += other.large_inspections;
        self.pair_rp_calls += other.pair_rp_calls;
        self.bfs_trees += other.bfs_trees;
    }
}
