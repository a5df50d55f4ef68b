//! The hypergraph document format.
//!
//! A document is a single JSON object:
//!
//! ```json
//! {
//!   "n": 4,
//!   "edges": [[0, 1], [0, 2], [0, 3]],
//!   "labels": ["a", "b", "c", "d"],
//!   "meta": {"generator": "star", "leaves": "3"}
//! }
//! ```
//!
//! `labels` and `meta` are optional. Edges are stored sorted, deduplicated
//! and in canonical order (by size, then lexicographically). Loading a
//! non-canonical document canonicalizes it and reports a warning.
//! [`serialize`] writes one edge per line, so documents diff cleanly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use container_lab_core::{Hypergraph, VertexSet};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HypergraphDocument {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
    pub labels: Option<Vec<String>>,
    pub meta: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("edge {edge} has vertex {vertex}, out of range for n = {n}")]
    IndexOutOfRange { edge: usize, vertex: u64, n: usize },
    #[error("edge {edge} is empty")]
    EmptyEdge { edge: usize },
}

/// Non-fatal findings while loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    UnsortedEdge { edge: usize },
    RepeatedVertex { edge: usize },
    DuplicateEdge { edge: usize },
    EdgeOrder,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::UnsortedEdge { edge } => write!(f, "edge {edge} was not sorted"),
            Warning::RepeatedVertex { edge } => write!(f, "edge {edge} repeated a vertex"),
            Warning::DuplicateEdge { edge } => write!(f, "edge {edge} duplicated an earlier edge"),
            Warning::EdgeOrder => f.write_str("edges were not in canonical order"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub document: HypergraphDocument,
    pub warnings: Vec<Warning>,
}

fn malformed(msg: impl Into<String>) -> DocumentError {
    DocumentError::Malformed(msg.into())
}

pub fn parse(text: &str) -> Result<Parsed, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let Value::Object(obj) = value else { return Err(malformed("top level must be an object")) };
    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "edges" | "labels" | "meta") {
            return Err(malformed(format!("unknown key `{key}`")));
        }
    }
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| malformed("`n` must be a non-negative integer"))?;
    let n = usize::try_from(n).map_err(|_| malformed("`n` is too large"))?;
    let raw = obj.get("edges").and_then(Value::as_array).ok_or_else(|| malformed("`edges` must be an array"))?;

    let mut warnings = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(raw.len());
    for (i, e) in raw.iter().enumerate() {
        let items = e.as_array().ok_or_else(|| malformed(format!("edge {i} must be an array")))?;
        if items.is_empty() {
            return Err(DocumentError::EmptyEdge { edge: i });
        }
        let mut edge = Vec::with_capacity(items.len());
        for v in items {
            let v = v.as_u64().ok_or_else(|| malformed(format!("edge {i} has a non-integer entry")))?;
            if v >= n as u64 {
                return Err(DocumentError::IndexOutOfRange { edge: i, vertex: v, n });
            }
            edge.push(v as usize);
        }
        if !edge.windows(2).all(|w| w[0] <= w[1]) {
            warnings.push(Warning::UnsortedEdge { edge: i });
            edge.sort_unstable();
        }
        let before = edge.len();
        edge.dedup();
        if edge.len() != before {
            warnings.push(Warning::RepeatedVertex { edge: i });
        }
        edges.push(edge);
    }
    let mut seen = std::collections::HashSet::new();
    let mut kept = Vec::with_capacity(edges.len());
    for (i, e) in edges.into_iter().enumerate() {
        if seen.contains(&e) {
            warnings.push(Warning::DuplicateEdge { edge: i });
        } else {
            seen.insert(e.clone());
            kept.push(e);
        }
    }
    if !kept.windows(2).all(|w| edge_key(&w[0]) < edge_key(&w[1])) {
        warnings.push(Warning::EdgeOrder);
        kept.sort_by(|a, b| edge_key(a).cmp(&edge_key(b)));
    }
    let edges = kept;

    let labels = match obj.get("labels") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            let labels = items
                .iter()
                .map(|l| l.as_str().map(str::to_owned).ok_or_else(|| malformed("labels must be strings")))
                .collect::<Result<Vec<_>, _>>()?;
            if labels.len() != n {
                return Err(malformed(format!("{} labels for {n} vertices", labels.len())));
            }
            Some(labels)
        }
        Some(_) => return Err(malformed("`labels` must be an array")),
    };
    let meta = match obj.get("meta") {
        None | Some(Value::Null) => BTreeMap::new(),
        Some(Value::Object(m)) => m
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => Ok((k.clone(), s.clone())),
                _ => Err(malformed(format!("meta value `{k}` must be a string"))),
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(malformed("`meta` must be an object")),
    };
    Ok(Parsed { document: HypergraphDocument { n, edges, labels, meta }, warnings })
}

fn edge_key(e: &[usize]) -> (usize, &[usize]) {
    (e.len(), e)
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn join(items: &[usize]) -> String {
    let mut out = String::new();
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{v}").unwrap();
    }
    out
}

/// Deterministic text form; `parse(serialize(d)) == d` for canonical `d`.
pub fn serialize(doc: &HypergraphDocument) -> String {
    let mut out = String::from("{\n");
    writeln!(out, "  \"n\": {},", doc.n).unwrap();
    if doc.edges.is_empty() {
        out.push_str("  \"edges\": []");
    } else {
        out.push_str("  \"edges\": [\n");
        for (i, e) in doc.edges.iter().enumerate() {
            let sep = if i + 1 < doc.edges.len() { "," } else { "" };
            writeln!(out, "    [{}]{sep}", join(e)).unwrap();
        }
        out.push_str("  ]");
    }
    if let Some(labels) = &doc.labels {
        let items: Vec<String> = labels.iter().map(|l| json_string(l)).collect();
        write!(out, ",\n  \"labels\": [{}]", items.join(", ")).unwrap();
    }
    if !doc.meta.is_empty() {
        let items: Vec<String> =
            doc.meta.iter().map(|(k, v)| format!("{}: {}", json_string(k), json_string(v))).collect();
        write!(out, ",\n  \"meta\": {{{}}}", items.join(", ")).unwrap();
    }
    out.push_str("\n}\n");
    out
}

impl HypergraphDocument {
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        let edges = h.edges().iter().map(|e| e.iter().collect()).collect();
        Self { n: h.n(), edges, labels: None, meta: BTreeMap::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn to_hypergraph(&self) -> container_lab_core::Result<Hypergraph> {
        Hypergraph::new(self.n, self.edges.iter().map(|e| VertexSet::from(e.as_slice())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_round_trip() {
        let text = "{\n  \"n\": 2,\n  \"edges\": [\n    [0, 1]\n  ]\n}\n";
        let parsed = parse(text).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.document.edges, [[0, 1]]);
        assert_eq!(serialize(&parsed.document), text);
    }

    #[test]
    fn errors_are_distinct() {
        assert!(matches!(parse("{\"n\": 2, \"edges\": [[]]}"), Err(DocumentError::EmptyEdge { edge: 0 })));
        assert!(matches!(parse("{\"n\": 2, \"edges\": [[0, 2]]}"), Err(DocumentError::IndexOutOfRange { .. })));
        assert!(matches!(parse("{\"n\": 2, \"edges\": [[0, 1]"), Err(DocumentError::Malformed(_))));
        assert!(matches!(parse("{\"n\": -1, \"edges\": []}"), Err(DocumentError::Malformed(_))));
    }

    #[test]
    fn canonicalizes_with_warnings() {
        let parsed = parse("{\"n\": 3, \"edges\": [[1, 0], [0, 1], [2], [1, 1, 2]]}").unwrap();
        assert_eq!(parsed.document.edges, [vec![2], vec![0, 1], vec![1, 2]]);
        let w = &parsed.warnings;
        assert!(w.contains(&Warning::UnsortedEdge { edge: 0 }));
        assert!(w.contains(&Warning::DuplicateEdge { edge: 1 }));
        assert!(w.contains(&Warning::RepeatedVertex { edge: 3 }));
        assert!(w.contains(&Warning::EdgeOrder));
    }

    #[test]
    fn labels_and_meta() {
        let doc = HypergraphDocument {
            n: 2,
            edges: vec![vec![0], vec![0, 1]],
            labels: Some(vec!["x\"y".into(), "z".into()]),
            meta: [("generator".to_string(), "hand".to_string())].into(),
        };
        let text = serialize(&doc);
        assert_eq!(parse(&text).unwrap().document, doc);
    }
}
