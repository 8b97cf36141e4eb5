//! The replacement table: `(source, target, path edge) -> distance`.

use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::graph::{Dist, EdgeId, Vertex, INF};

/// Map from `(source, target, edge id)` to the best known replacement
/// distance. Only edges on the canonical source->target path are keyed; for
/// off-path edges the query layer answers the plain distance. Keys start at
/// the `INF` sentinel and passes only ever lower them.
#[derive(Default, Clone, Debug)]
pub struct ReplacementTable {
    entries: HashMap<(Vertex, Vertex, EdgeId), Dist>,
}

impl ReplacementTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Key a triple at the sentinel if not yet present.
    pub fn ensure(&mut self, s: Vertex, t: Vertex, e: EdgeId) {
        self.entries.entry((s, t, e)).or_insert(INF);
    }

    /// Lower a keyed triple; inserting an unkeyed triple starts from the
    /// sentinel. Min-merge keeps every pass monotone.
    pub fn merge_min(&mut self, s: Vertex, t: Vertex, e: EdgeId, d: Dist) {
        let slot = self.entries.entry((s, t, e)).or_insert(INF);
        if d < *slot {
            *slot = d;
        }
    }

    pub fn get(&self, s: Vertex, t: Vertex, e: EdgeId) -> Option<Dist> {
        self.entries.get(&(s, t, e)).copied()
    }

    pub fn contains(&self, s: Vertex, t: Vertex, e: EdgeId) -> bool {
        self.entries.contains_key(&(s, t, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vertex, Vertex, EdgeId), &Dist)> {
        self.entries.iter()
    }

    /// Entries sorted by `(source, target, edge id)` for stable output.
    pub fn sorted_entries(&self) -> Vec<((Vertex, Vertex, EdgeId), Dist)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, d)| (*k, *d)).collect();
        v.sort_unstable();
        v
    }

    /// Merge another table's shard into this one (min per key).
    pub fn absorb(&mut self, other: ReplacementTable) {
        for ((s, t, e), d) in other.entries {
            self.merge_min(s, t, e, d);
        }
    }
}
