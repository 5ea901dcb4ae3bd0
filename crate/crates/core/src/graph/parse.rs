//! Text formats for resolution graphs.
//!
//! JSON: `{"vertices":[{"id":"a","weight":-2}],"edges":[["a","b"]]}`.
//!
//! DSL: one statement per line, `vertex <id> <weight>` or `edge <id> <id>`;
//! `#` starts a comment. Both formats are reproduced byte-for-byte by the
//! matching dump function when the input is already in dump layout.

use serde::{Deserialize, Serialize};

use super::{ResolutionGraph, Vertex};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<RawVertex>,
    edges: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: String,
    weight: i64,
}

/// Parses either format; input whose first non-blank character is `{` is
/// read as JSON.
pub fn parse_graph(text: &str) -> Result<ResolutionGraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_dsl(text)
    }
}

pub fn parse_json(text: &str) -> Result<ResolutionGraph> {
    let raw: RawGraph = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let vertices = raw.vertices.into_iter().map(|v| Vertex { id: v.id, weight: v.weight }).collect();
    let edges = raw.edges.into_iter().map(|[a, b]| (a, b)).collect();
    ResolutionGraph::from_ids(vertices, edges)
}

pub fn parse_dsl(text: &str) -> Result<ResolutionGraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("");
        let tokens: Vec<(usize, &str)> = tokenize(line);
        let Some(&(col, keyword)) = tokens.first() else { continue };
        let err = |column: usize, message: String| Error::Syntax { line: lineno + 1, column, message };
        match keyword {
            "vertex" => {
                if tokens.len() != 3 {
                    return Err(err(col, format!("expected `vertex <id> <weight>`, found {} tokens", tokens.len())));
                }
                let (wcol, wtok) = tokens[2];
                let weight: i64 = wtok
                    .parse()
                    .map_err(|_| err(wcol, format!("weight `{wtok}` is not an integer")))?;
                vertices.push(Vertex { id: tokens[1].1.to_string(), weight });
            }
            "edge" => {
                if tokens.len() != 3 {
                    return Err(err(col, format!("expected `edge <id> <id>`, found {} tokens", tokens.len())));
                }
                edges.push((tokens[1].1.to_string(), tokens[2].1.to_string()));
            }
            other => return Err(err(col, format!("unknown statement `{other}`"))),
        }
    }
    ResolutionGraph::from_ids(vertices, edges)
}

/// Whitespace-separated tokens with their 1-based column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn dump_json(g: &ResolutionGraph) -> String {
    let raw = RawGraph {
        vertices: g.vertices().iter().map(|v| RawVertex { id: v.id.clone(), weight: v.weight }).collect(),
        edges: g
            .edges()
            .iter()
            .map(|&(a, b)| [g.id(a).to_string(), g.id(b).to_string()])
            .collect(),
    };
    serde_json::to_string(&raw).expect("graph serialization cannot fail")
}

/// DSL rendering. Fails if an id cannot be written as a DSL token.
pub fn dump_dsl(g: &ResolutionGraph) -> Result<String> {
    for v in g.vertices() {
        if v.id.is_empty() || v.id.contains('#') || v.id.chars().any(char::is_whitespace) {
            return Err(Error::Syntax {
                line: 0,
                column: 0,
                message: format!("vertex id `{}` cannot be written in the DSL", v.id),
            });
        }
    }
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", v.id, v.weight));
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!("edge {} {}\n", g.id(a), g.id(b)));
    }
    Ok(out)
}
