//! O(1) least-common-ancestor queries over a BFS tree.
//!
//! Euler tour plus a sparse table of range depth minima: O(n log n) build,
//! O(1) per query.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Dist, Vertex, INF};
use crate::tree::ShortestPathTree;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct LcaIndex {
    root: Vertex,
    tour: Vec<Vertex>,
    depth: Vec<Dist>,
    first: Vec<u32>,
    // sparse[j][i] = index into `tour` of the min-depth entry in [i, i + 2^j).
    sparse: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcaError {
    OutsideComponent { v: Vertex },
}

impl fmt::Display for LcaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcaError::OutsideComponent { v } => {
                write!(f, "vertex {v} is outside the indexed component")
            }
        }
    }
}

impl core::error::Error for LcaError {}

impl LcaIndex {
    pub fn build(tree: &ShortestPathTree) -> LcaIndex {
        let n = tree.n();
        // Children lists from the parent array; ascending child ids.
        let mut children = alloc::vec![Vec::new(); n];
        for v in 0..n as Vertex {
            if tree.is_reachable(v) && v != tree.root() {
                children[tree.parent(v) as usize].push(v);
            }
        }
        let mut tour = Vec::with_capacity(2 * n);
        let mut first = alloc::vec![NONE; n];
        // Iterative Euler tour: push the vertex on entry and after each child.
        let mut stack: Vec<(Vertex, usize)> = alloc::vec![(tree.root(), 0)];
        if tree.n() > 0 {
            first[tree.root() as usize] = 0;
            tour.push(tree.root());
        }
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < children[v as usize].len() {
                let c = children[v as usize][*next];
                *next += 1;
                first[c as usize] = tour.len() as u32;
                tour.push(c);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    tour.push(p);
                }
            }
        }
        let depth: Vec<Dist> = tree.dists().to_vec();
        let len = tour.len();
        let levels = if len <= 1 {
            1
        } else {
            usize::BITS as usize - (len - 1).leading_zeros() as usize
        };
        let mut sparse = Vec::with_capacity(levels);
        let base: Vec<u32> = (0..len as u32).collect();
        sparse.push(base);
        let mut width = 1;
        while 2 * width <= len {
            let prev = &sparse[sparse.len() - 1];
            let mut row = Vec::with_capacity(len - 2 * width + 1);
            for i in 0..=len - 2 * width {
                let a = prev[i];
                let b = prev[i + width];
                row.push(if depth[tour[a as usize] as usize] <= depth[tour[b as usize] as usize] {
                    a
                } else {
                    b
                });
            }
            sparse.push(row);
            width *= 2;
        }
        LcaIndex {
            root: tree.root(),
            tour,
            depth,
            first,
            sparse,
        }
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Deepest common ancestor of `u` and `v` in the indexed tree.
    pub fn lca(&self, u: Vertex, v: Vertex) -> Result<Vertex, LcaError> {
        let fu = self.occ(u)?;
        let fv = self.occ(v)?;
        let (lo, hi) = if fu <= fv { (fu, fv) } else { (fv, fu) };
        let span = hi - lo + 1;
        let j = usize::BITS as usize - 1 - span.leading_zeros() as usize;
        let a = self.sparse[j][lo];
        let b = self.sparse[j][hi + 1 - (1 << j)];
        let (da, db) = (
            self.depth[self.tour[a as usize] as usize],
            self.depth[self.tour[b as usize] as usize],
        );
        Ok(if da <= db {
            self.tour[a as usize]
        } else {
            self.tour[b as usize]
        })
    }

    /// Depth (= BFS distance) of a vertex in the indexed tree.
    pub fn depth(&self, v: Vertex) -> Dist {
        self.depth[v as usize]
    }

    fn occ(&self, v: Vertex) -> Result<usize, LcaError> {
        if (v as usize) >= self.first.len()
            || self.first[v as usize] == NONE
            || self.depth[v as usize] == INF
        {
            return Err(LcaError::OutsideComponent { v });
        }
        Ok(self.first[v as usize] as usize)
    }
}
