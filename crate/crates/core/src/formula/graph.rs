use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty graph description")]
    Empty,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("edge ({u}, {v}) is out of range for {n} vertices")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    Duplicate { u: usize, v: usize },
    #[error("self-loop on vertex {v}")]
    SelfLoop { v: usize },
    #[error("malformed graph document: {0}")]
    Document(String),
}

/// A simple directed graph on vertices `0..n`: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl DiGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<DiGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            if !set.insert((u, v)) {
                return Err(GraphError::Duplicate { u, v });
            }
        }
        Ok(DiGraph { n, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Every simple digraph on `n` labeled vertices, in edge-bitmask order.
    pub fn enumerate_all(n: usize) -> impl Iterator<Item = DiGraph> {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let total: u64 = 1 << slots.len();
        (0..total).map(move |mask| DiGraph {
            n,
            edges: slots
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphDocument {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        })
        .expect("graph document serializes")
    }
}

impl fmt::Display for DiGraph {
    /// The line-oriented text format accepted by [`parse_graph`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parse either the line format (`n` then one `u v` per line) or a JSON
/// document `{"n": .., "edges": [[u, v], ..]}`.
pub fn parse_graph(text: &str) -> Result<DiGraph, GraphError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(GraphError::Empty);
    }
    if trimmed.starts_with('{') {
        let doc: GraphDocument =
            serde_json::from_str(trimmed).map_err(|e| GraphError::Document(e.to_string()))?;
        return DiGraph::new(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)));
    }

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or(GraphError::Empty)?;
    let n: usize = header.parse().map_err(|_| GraphError::Syntax {
        line: header_line,
        message: format!("expected a vertex count, found `{header}`"),
    })?;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[u, v]) => edges.push((u, v)),
            _ => {
                return Err(GraphError::Syntax {
                    line,
                    message: format!("expected `u v`, found `{content}`"),
                })
            }
        }
    }
    DiGraph::new(n, edges)
}
