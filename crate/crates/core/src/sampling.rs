//! Random landmark and center families.
//!
//! Level-k sets are sampled independently per `(level, vertex)` pair with
//! probability `min(1, c_sample * 2^-k * sqrt(sigma / n))`, so the families
//! are reproducible under a fixed seed and independent of evaluation order.
//! Landmarks and centers are drawn from separate streams. The sets are NOT
//! nested: membership at one level says nothing about another.

use alloc::vec::Vec;

use crate::config::AlgoConfig;
use crate::graph::{Graph, Vertex};
use crate::rng;

const LANDMARK_STREAM: u64 = 0x4c414e444d41524b; // "LANDMARK"
const CENTER_STREAM: u64 = 0x43454e5445525354; // "CENTERST"

/// The landmark family: per-level membership plus the union. Every source is
/// force-added to every level.
#[derive(Clone, Debug)]
pub struct LandmarkSets {
    pub k_max: u32,
    member: Vec<Vec<bool>>,
    union: Vec<bool>,
    per_level: Vec<Vec<Vertex>>,
    union_list: Vec<Vertex>,
}

/// The center family: per-level membership plus per-vertex priority, the
/// maximum level the vertex was sampled into (`None` for non-centers).
/// Sources are force-added to level 0.
#[derive(Clone, Debug)]
pub struct CenterSets {
    pub k_max: u32,
    member: Vec<Vec<bool>>,
    priority: Vec<Option<u32>>,
    union_list: Vec<Vertex>,
}

fn sample_levels(
    g: &Graph,
    cfg: &AlgoConfig,
    sigma: usize,
    k_max: u32,
    stream: u64,
) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut member = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let p = cfg.sample_prob(n, sigma, k);
        let mut level = alloc::vec![false; n];
        if p >= 1.0 {
            level.iter_mut().for_each(|b| *b = true);
        } else {
            for (v, slot) in level.iter_mut().enumerate() {
                *slot = rng::bernoulli(cfg.seed, stream, k as u64, v as u64, p);
            }
        }
        member.push(level);
    }
    member
}

/// Sample the landmark family `L_0..L_k_max` and force-add every source to
/// every level.
pub fn sample_landmarks(g: &Graph, sources: &[Vertex], cfg: &AlgoConfig) -> LandmarkSets {
    let sigma = sources.len();
    assert!(sigma >= 1, "sources must be nonempty");
    let k_max = cfg.scales(g.n(), sigma).k_max;
    let mut member = sample_levels(g, cfg, sigma, k_max, LANDMARK_STREAM);
    for level in &mut member {
        for &s in sources {
            level[s as usize] = true;
        }
    }
    let mut union = alloc::vec![false; g.n()];
    for level in &member {
        for (v, &m) in level.iter().enumerate() {
            union[v] |= m;
        }
    }
    let per_level = member
        .iter()
        .map(|level| members_of(level))
        .collect::<Vec<_>>();
    let union_list = members_of(&union);
    LandmarkSets {
        k_max,
        member,
        union,
        per_level,
        union_list,
    }
}

/// Sample the center family `C_0..C_k_max` (independent stream), force-add
/// sources to level 0, and compute per-vertex priorities.
pub fn sample_centers(g: &Graph, sources: &[Vertex], cfg: &AlgoConfig) -> CenterSets {
    let sigma = sources.len();
    assert!(sigma >= 1, "sources must be nonempty");
    let k_max = cfg.scales(g.n(), sigma).k_max;
    let mut member = sample_levels(g, cfg, sigma, k_max, CENTER_STREAM);
    for &s in sources {
        member[0][s as usize] = true;
    }
    let mut priority = alloc::vec![None; g.n()];
    for (k, level) in member.iter().enumerate() {
        for (v, &m) in level.iter().enumerate() {
            if m {
                priority[v] = Some(k as u32);
            }
        }
    }
    let union: Vec<bool> = priority.iter().map(|p| p.is_some()).collect();
    let union_list = members_of(&union);
    CenterSets {
        k_max,
        member,
        priority,
        union_list,
    }
}

fn members_of(bits: &[bool]) -> Vec<Vertex> {
    bits.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(v, _)| v as Vertex)
        .collect()
}

impl LandmarkSets {
    pub fn contains(&self, k: u32, v: Vertex) -> bool {
        self.member[k as usize][v as usize]
    }

    pub fn in_union(&self, v: Vertex) -> bool {
        self.union[v as usize]
    }

    /// Level members in ascending vertex order.
    pub fn level(&self, k: u32) -> &[Vertex] {
        &self.per_level[k as usize]
    }

    /// Union members in ascending vertex order.
    pub fn all(&self) -> &[Vertex] {
        &self.union_list
    }
}

impl CenterSets {
    pub fn contains(&self, k: u32, v: Vertex) -> bool {
        self.member[k as usize][v as usize]
    }

    pub fn is_center(&self, v: Vertex) -> bool {
        self.priority[v as usize].is_some()
    }

    /// Highest level the vertex belongs to.
    pub fn priority(&self, v: Vertex) -> Option<u32> {
        self.priority[v as usize]
    }

    /// Centers in ascending vertex order.
    pub fn all(&self) -> &[Vertex] {
        &self.union_list
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::graph::Graph;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn clamp_saturates_level_zero() {
        // n=4, sigma=1: p_0 = min(1, 4 * 0.5) = 1, so L_0 is everything.
        let g = path_graph(4);
        let l = sample_landmarks(&g, &[0], &AlgoConfig::default());
        assert_eq!(l.level(0), &[0, 1, 2, 3]);
    }

    #[test]
    fn sources_forced_everywhere() {
        let g = path_graph(64);
        let cfg = AlgoConfig {
            seed: 99,
            ..Default::default()
        };
        let l = sample_landmarks(&g, &[17], &cfg);
        for k in 0..=l.k_max {
            assert!(l.contains(k, 17));
        }
        assert!(l.in_union(17));
        let c = sample_centers(&g, &[17], &cfg);
        assert!(c.contains(0, 17));
        assert!(c.priority(17).is_some());
    }

    #[test]
    fn fixed_seed_reproduces() {
        let g = path_graph(200);
        let cfg = AlgoConfig {
            seed: 7,
            ..Default::default()
        };
        let a = sample_landmarks(&g, &[0], &cfg);
        let b = sample_landmarks(&g, &[0], &cfg);
        assert_eq!(a.all(), b.all());
        for k in 0..=a.k_max {
            assert_eq!(a.level(k), b.level(k));
        }
    }

    #[test]
    fn streams_are_independent() {
        let g = path_graph(500);
        let cfg = AlgoConfig {
            seed: 5,
            ..Default::default()
        };
        let l = sample_landmarks(&g, &[0], &cfg);
        let c = sample_centers(&g, &[0], &cfg);
        // Same probabilities, different streams: memberships should differ
        // somewhere at this size.
        let differs = (0..500u32).any(|v| l.contains(1, v) != c.contains(1, v));
        assert!(differs);
    }

    #[test]
    fn saturated_centers_have_max_priority() {
        // n=4, sigma=4: every level keeps probability 1 up to k=2=k_max.
        let g = path_graph(4);
        let c = sample_centers(&g, &[0, 1, 2, 3], &AlgoConfig::default());
        for v in 0..4 {
            assert_eq!(c.priority(v), Some(c.k_max));
        }
    }

    #[test]
    fn measured_level_sizes_follow_the_sampling_rate() {
        // Monte-Carlo size check at n=10^4, sigma=4: every |C_k| stays within
        // 3x of c_sample * 2^-k * sqrt(n * sigma) * (1 + ln n) over 20 seeds.
        let n = 10_000usize;
        let g = path_graph(n);
        let sources = [0, 1, 2, 3];
        for seed in 0..20u64 {
            let cfg = AlgoConfig {
                seed,
                ..Default::default()
            };
            let c = sample_centers(&g, &sources, &cfg);
            let lnn = libm::log(n as f64);
            for k in 0..=c.k_max {
                let count = (0..n as Vertex).filter(|&v| c.contains(k, v)).count() as f64;
                let expect =
                    4.0 / (1u64 << k) as f64 * libm::sqrt((n * 4) as f64) * (1.0 + lnn);
                assert!(
                    count <= 3.0 * expect,
                    "seed {seed} level {k}: {count} > 3x {expect}"
                );
            }
        }
    }
}
