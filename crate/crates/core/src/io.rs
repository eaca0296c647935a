//! Text, DOT and JSON forms of multigraphs.
//!
//! The text format is line based:
//!
//! ```text
//! c a comment
//! p mgraph <n> <number of distinct multiedges>
//! e <u> <v> <multiplicity>
//! ```
//!
//! Vertices are `1..=n`. Lines starting with `c` are comments and may appear
//! anywhere, blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut g = Multigraph::new();
    let mut lines_seen = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let num = |s: &str, what: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| parse_err(line, format!("{what} `{s}` is not a non-negative integer")))
        };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "second header line"));
                }
                let [_, kind, n, m] = fields[..] else {
                    return Err(parse_err(line, "expected `p mgraph <n> <m>`"));
                };
                if kind != "mgraph" {
                    return Err(parse_err(line, format!("unknown format `{kind}`")));
                }
                let n = num(n, "vertex count")? as usize;
                let m = num(m, "edge count")? as usize;
                g = Multigraph::with_vertices(n);
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(parse_err(line, "edge before the header line"));
                };
                let [_, u, v, mult] = fields[..] else {
                    return Err(parse_err(line, "expected `e <u> <v> <mult>`"));
                };
                let (u, v, mult) = (num(u, "vertex")?, num(v, "vertex")?, num(mult, "multiplicity")?);
                for x in [u, v] {
                    if x == 0 || x as usize > n {
                        return Err(parse_err(line, format!("vertex {x} outside 1..={n}")));
                    }
                }
                if u == v {
                    return Err(parse_err(line, format!("loop at vertex {u}")));
                }
                if mult == 0 {
                    return Err(parse_err(line, "multiplicity must be at least 1"));
                }
                let (a, b) = (VertexId(u), VertexId(v));
                if g.mult(a, b) > 0 {
                    return Err(parse_err(line, format!("multiedge {{{u},{v}}} listed twice")));
                }
                g.add_edge(a, b, mult).map_err(|e| parse_err(line, e.to_string()))?;
                lines_seen += 1;
            }
            other => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }
    let Some((_, m)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing `p mgraph` header"));
    };
    if lines_seen != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("header announces {m} multiedges, found {lines_seen}"),
        ));
    }
    Ok(g)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Multigraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Vertices in insertion order, numbered from 1.
fn labels(g: &Multigraph) -> BTreeMap<VertexId, u32> {
    g.vertices().enumerate().map(|(i, v)| (v, i as u32 + 1)).collect()
}

fn sorted_edges(g: &Multigraph) -> Vec<(u32, u32, u32)> {
    let lab = labels(g);
    let mut edges: Vec<(u32, u32, u32)> = g
        .multiedges()
        .map(|(u, v, m)| {
            let (a, b) = (lab[&u], lab[&v]);
            (a.min(b), a.max(b), m)
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Text form; vertices are renumbered `1..=n` in insertion order.
pub fn serialize_graph(g: &Multigraph) -> String {
    let edges = sorted_edges(g);
    let mut out = format!("p mgraph {} {}\n", g.vertex_count(), edges.len());
    for (u, v, m) in edges {
        writeln!(out, "e {u} {v} {m}").unwrap();
    }
    out
}

/// DOT with one line per edge instance.
pub fn to_dot(g: &Multigraph) -> String {
    let mut out = String::from("graph G {\n");
    for i in 1..=g.vertex_count() {
        writeln!(out, "  {i};").unwrap();
    }
    for (u, v, m) in sorted_edges(g) {
        for _ in 0..m {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// JSON form keeping the original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, u32)>,
}

impl GraphJson {
    pub fn from_graph(g: &Multigraph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            edges: g.multiedges().collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Multigraph> {
        let mut g = Multigraph::new();
        for &v in &self.vertices {
            g.add_vertex_with_id(v);
        }
        for &(u, v, m) in &self.edges {
            g.add_edge(u, v, m)?;
        }
        Ok(g)
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::theta;

    #[test]
    fn theta_from_text() {
        let g = parse_graph("c two vertices\np mgraph 2 1\ne 1 2 2\n").unwrap();
        assert_eq!(g, theta(2));
        assert_eq!(serialize_graph(&g), "p mgraph 2 1\ne 1 2 2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let loop_line = parse_graph("p mgraph 3 1\n\ne 3 3 1\n");
        assert!(matches!(loop_line, Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("e 1 2 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p mgraph 2 1\ne 1 5 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p mgraph 2 2\ne 1 2 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dot_repeats_parallel_edges() {
        let dot = to_dot(&theta(3));
        assert_eq!(dot.matches("1 -- 2;").count(), 3);
    }

    #[test]
    fn json_keeps_ids() {
        let mut g = theta(2);
        let v = g.add_vertex();
        g.remove_vertex(VertexId(1)).unwrap();
        let j = GraphJson::from_graph(&g);
        assert_eq!(j.to_graph().unwrap(), g);
        assert!(j.vertices.contains(&v));
    }
}
