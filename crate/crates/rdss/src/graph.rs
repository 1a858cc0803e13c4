//! Graph data model, text-format ingestion, and neighborhood queries.
//!
//! Vertices are 0-indexed everywhere (files and API). Undirected edges are
//! stored canonically with `u < v`; directed edges are stored as given.
//! For directed graphs `neighborhood` returns out-neighbors, which are the
//! repair sources of a vertex.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Hard limit so vertex subsets fit in a `u64` bitmask.
pub const MAX_VERTICES: usize = 64;

/// A subset of vertices `0..n`, packed into a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut m = 0u64;
        for v in it {
            m |= 1 << v;
        }
        VertexSet(m)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersect(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(v)
            }
        })
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed header, expected `p rdss <n> <m> <u|d>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge line, expected `e <u> <v>`")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex index {v} out of range (n = {n})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph has {n} vertices, more than the supported maximum {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("operation requires an undirected graph")]
    DirectedNotSupported,
    #[error("operation requires a directed graph")]
    UndirectedNotSupported,
    #[error("vertex {v} out of range (n = {n})")]
    BadVertex { v: usize, n: usize },
}

/// An immutable storage graph. Construction validates all invariants; the
/// struct is then safe for concurrent read access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: BTreeSet<(usize, usize)>,
    /// Out-neighborhoods (symmetric closure for undirected graphs).
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(
        n: usize,
        directed: bool,
        edge_list: &[(usize, usize)],
    ) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut edges = BTreeSet::new();
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                let bad = if u >= n { u } else { v };
                return Err(GraphError::BadVertex { v: bad, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, v: u });
            }
            let key = if directed {
                (u, v)
            } else {
                (u.min(v), u.max(v))
            };
            if !edges.insert(key) {
                return Err(GraphError::DuplicateEdge {
                    line: 0,
                    u: key.0,
                    v: key.1,
                });
            }
            adj[u].insert(v);
            if !directed {
                adj[v].insert(u);
            }
        }
        Ok(Graph {
            n,
            directed,
            edges,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge set: `u < v` for undirected graphs, as stored for directed.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if self.directed {
            self.edges.contains(&(u, v))
        } else {
            self.edges.contains(&(u.min(v), u.max(v)))
        }
    }

    /// N(v): out-neighbors for directed graphs, all adjacent vertices otherwise.
    pub fn neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.n {
            return Err(GraphError::BadVertex { v, n: self.n });
        }
        Ok(self.adj[v])
    }

    /// Unchecked neighborhood access for hot paths.
    pub fn nbrs(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// N(U): vertices outside U with at least one incoming edge from U.
    pub fn neighborhood_of_set(&self, set: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in set.iter() {
            out = out.union(self.adj[v]);
        }
        out.minus(set)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adj[v].is_empty()).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        // Weak connectivity for directed graphs.
        let mut sym = vec![VertexSet::EMPTY; self.n];
        for &(u, v) in &self.edges {
            sym[u].insert(v);
            sym[v].insert(u);
        }
        let mut seen = VertexSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(sym[v]);
            }
            frontier = next.minus(seen);
            seen = seen.union(next);
        }
        seen.len() == self.n
    }

    /// Parses the line-oriented graph format:
    /// header `p rdss <n> <m> <u|d>`, then `m` lines `e <u> <v>`.
    /// `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut n = 0usize;
        let mut m = 0usize;
        let mut directed = false;
        let mut saw_header = false;
        let mut header_line = 0usize;
        let mut edge_lines: Vec<(usize, usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !saw_header {
                if fields.len() != 5 || fields[0] != "p" || fields[1] != "rdss" {
                    return Err(GraphError::MalformedHeader { line: lineno });
                }
                n = fields[2]
                    .parse()
                    .map_err(|_| GraphError::MalformedHeader { line: lineno })?;
                m = fields[3]
                    .parse()
                    .map_err(|_| GraphError::MalformedHeader { line: lineno })?;
                directed = match fields[4] {
                    "u" => false,
                    "d" => true,
                    _ => return Err(GraphError::MalformedHeader { line: lineno }),
                };
                saw_header = true;
                header_line = lineno;
                continue;
            }
            if fields.len() != 3 || fields[0] != "e" {
                return Err(GraphError::MalformedEdge { line: lineno });
            }
            let u: usize = fields[1]
                .parse()
                .map_err(|_| GraphError::MalformedEdge { line: lineno })?;
            let v: usize = fields[2]
                .parse()
                .map_err(|_| GraphError::MalformedEdge { line: lineno })?;
            edge_lines.push((lineno, u, v));
        }
        if !saw_header {
            return Err(GraphError::MalformedHeader { line: 1 });
        }
        let _ = header_line;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        if edge_lines.len() != m {
            return Err(GraphError::EdgeCountMismatch {
                expected: m,
                found: edge_lines.len(),
            });
        }
        let mut edges = BTreeSet::new();
        let mut adj = vec![VertexSet::EMPTY; n];
        for (lineno, u, v) in edge_lines {
            if u >= n {
                return Err(GraphError::VertexOutOfRange {
                    line: lineno,
                    v: u,
                    n,
                });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { line: lineno, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: lineno, v: u });
            }
            let key = if directed {
                (u, v)
            } else {
                (u.min(v), u.max(v))
            };
            if !edges.insert(key) {
                return Err(GraphError::DuplicateEdge {
                    line: lineno,
                    u: key.0,
                    v: key.1,
                });
            }
            adj[u].insert(v);
            if !directed {
                adj[v].insert(u);
            }
        }
        Ok(Graph {
            n,
            directed,
            edges,
            adj,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(
            "p rdss {} {} {}\n",
            self.n,
            self.edges.len(),
            if self.directed { "d" } else { "u" }
        );
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    // --- stock test graphs ---

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, false, &edges).unwrap()
    }

    pub fn directed_cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, true, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, false, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::new(n, false, &edges).unwrap()
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::new(n, false, &[]).unwrap()
    }
}
