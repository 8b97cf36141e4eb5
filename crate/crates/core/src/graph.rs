//! Immutable simple undirected unweighted graphs with stable edge ids.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashMap;

pub type Vertex = u32;
pub type EdgeId = u32;

/// Hop distance. `INF` is the unreachable sentinel; it orders above every
/// finite value and is absorbing under [`dist_add`].
pub type Dist = u32;
pub const INF: Dist = u32::MAX;

/// Sum of two distances; `INF` absorbs.
#[inline]
pub fn dist_add(a: Dist, b: Dist) -> Dist {
    a.saturating_add(b)
}

/// Undirected unweighted graph. Simple (no self-loops or parallel edges),
/// neighbor lists sorted ascending, and every edge carries a dense id in
/// `[0, m)` keyed by its unordered endpoint pair.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
    edge_ids: HashMap<(Vertex, Vertex), EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    Parse { line: usize, msg: String },
    SelfLoop { u: Vertex },
    DuplicateEdge { u: Vertex, v: Vertex },
    VertexOutOfRange { v: Vertex, n: usize },
    EdgeCountMismatch { declared: usize, found: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            GraphError::SelfLoop { u } => write!(f, "self-loop at vertex {u}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            GraphError::VertexOutOfRange { v, n } => {
                write!(f, "vertex {v} out of range for n = {n}")
            }
            GraphError::EdgeCountMismatch { declared, found } => {
                write!(f, "edge count mismatch: declared {declared}, found {found}")
            }
        }
    }
}

impl core::error::Error for GraphError {}

impl Graph {
    /// Build a graph from an edge list, validating simplicity and ranges.
    /// Edge ids follow the input order.
    pub fn from_edges(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut neighbors = alloc::vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut edge_ids = HashMap::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { u });
            }
            let key = (u.min(v), u.max(v));
            let id = edges.len() as EdgeId;
            if edge_ids.insert(key, id).is_some() {
                return Err(GraphError::DuplicateEdge { u: key.0, v: key.1 });
            }
            edges.push(key);
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            neighbors,
            edges,
            edge_ids,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v as usize].len()
    }

    /// Edges in id order, endpoints as `(min, max)`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.edge_ids.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }
}

/// Parse the edge-list text format: a header line `n m` followed by exactly
/// `m` lines `u v` with `0 <= u, v < n`.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| GraphError::Parse {
        line: 1,
        msg: "empty input".to_string(),
    })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), 1, "vertex count")?;
    let m: usize = parse_field(it.next(), 1, "edge count")?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line: 1,
            msg: "expected exactly two header fields".to_string(),
        });
    }
    let mut edge_list = Vec::with_capacity(m);
    for (idx, raw) in lines {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut it = raw.split_whitespace();
        let u: Vertex = parse_field(it.next(), line_no, "endpoint")?;
        let v: Vertex = parse_field(it.next(), line_no, "endpoint")?;
        if it.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                msg: "expected exactly two endpoints".to_string(),
            });
        }
        edge_list.push((u, v));
    }
    if edge_list.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edge_list.len(),
        });
    }
    Graph::from_edges(n, &edge_list)
}

/// Render a graph back into the edge-list text format.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn parse_field<T: core::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let s = field.ok_or_else(|| GraphError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    s.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what}: {s:?}"),
    })
}
