//! Text formats.
//!
//! Graphs: a `p <n> <m>` header, then `m` lines `e <u> <v> <w>`; vertices are
//! `0..n`, `#` starts a comment, parallel edges are summed.
//!
//! Trees: a `t <n>` header with the number of tree nodes, then one
//! `b <vertex> <terminal>` line per graph vertex and `e <u> <v> <w>` per
//! tree edge.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{HarnessError, HarnessResult};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};
use crate::tree::{SteinerTree, TreeEdge};

fn parse_err(line: usize, msg: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn field<T: FromStr>(line: usize, fields: &[&str], i: usize, what: &str) -> HarnessResult<T> {
    let raw = fields
        .get(i)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {raw:?}")))
}

fn arity(line: usize, fields: &[&str], n: usize) -> HarnessResult<()> {
    if fields.len() != n {
        return Err(parse_err(
            line,
            format!("expected {} fields after {:?}, got {}", n - 1, fields[0], fields.len() - 1),
        ));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> HarnessResult<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut builder = GraphBuilder::new();
    let mut seen_edges = 0;
    let mut last_line = 0;
    for (line, f) in records(text) {
        last_line = line;
        match f[0] {
            "p" => {
                arity(line, &f, 3)?;
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                let n: usize = field(line, &f, 1, "vertex count")?;
                let m: usize = field(line, &f, 2, "edge count")?;
                builder = GraphBuilder::with_vertices((0..n as u32).map(Vertex));
                header = Some((n, m));
            }
            "e" => {
                arity(line, &f, 4)?;
                let (n, _) = header.ok_or_else(|| parse_err(line, "edge before header"))?;
                let u: u32 = field(line, &f, 1, "vertex")?;
                let v: u32 = field(line, &f, 2, "vertex")?;
                let w: f64 = field(line, &f, 3, "weight")?;
                for x in [u, v] {
                    if x as usize >= n {
                        return Err(parse_err(line, format!("vertex {x} out of range 0..{n}")));
                    }
                }
                if !(w > 0.0) || !w.is_finite() {
                    return Err(parse_err(line, format!("weight must be positive, got {w}")));
                }
                builder
                    .add_edge(Vertex(u), Vertex(v), w)
                    .map_err(|e| parse_err(line, e.to_string()))?;
                seen_edges += 1;
            }
            other => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
    }
    let (_, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `p n m` header"))?;
    if seen_edges != m {
        return Err(parse_err(
            last_line,
            format!("header announces {m} edges, found {seen_edges}"),
        ));
    }
    Ok(builder.build())
}

fn contiguous(vertices: impl Iterator<Item = Vertex>) -> bool {
    vertices.enumerate().all(|(i, v)| v.0 as usize == i)
}

pub fn write_graph(g: &Graph) -> HarnessResult<String> {
    if !contiguous(g.vertices().iter().copied()) {
        return Err(HarnessError::Config(
            "only graphs on vertices 0..n can be written".into(),
        ));
    }
    let mut out = format!("p {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v, w) in g.edges() {
        writeln!(out, "e {u} {v} {w}").unwrap();
    }
    Ok(out)
}

pub fn load_graph(path: impl AsRef<Path>) -> HarnessResult<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_graph(&text)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> HarnessResult<()> {
    let path = path.as_ref();
    std::fs::write(path, write_graph(g)?).map_err(|e| HarnessError::io(path, e))
}

pub fn write_tree(t: &SteinerTree) -> String {
    let mut out = format!("t {}\n", t.num_nodes());
    for (v, term) in t.assignment() {
        writeln!(out, "b {v} {term}").unwrap();
    }
    for e in t.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.weight).unwrap();
    }
    out
}

pub fn parse_tree(text: &str) -> HarnessResult<SteinerTree> {
    let mut nodes: Option<usize> = None;
    let mut assignment = BTreeMap::new();
    let mut edges = Vec::new();
    let mut last_line = 1;
    for (line, f) in records(text) {
        last_line = line;
        match f[0] {
            "t" => {
                arity(line, &f, 2)?;
                if nodes.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                nodes = Some(field(line, &f, 1, "node count")?);
            }
            "b" => {
                arity(line, &f, 3)?;
                let v = Vertex(field(line, &f, 1, "vertex")?);
                let t = Vertex(field(line, &f, 2, "terminal")?);
                if assignment.insert(v, t).is_some() {
                    return Err(parse_err(line, format!("vertex {v} assigned twice")));
                }
            }
            "e" => {
                arity(line, &f, 4)?;
                edges.push(TreeEdge {
                    u: Vertex(field(line, &f, 1, "node")?),
                    v: Vertex(field(line, &f, 2, "node")?),
                    weight: field(line, &f, 3, "weight")?,
                });
            }
            other => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
    }
    let n = nodes.ok_or_else(|| parse_err(last_line, "missing `t n` header"))?;
    let terminals: VertexSet = assignment.values().copied().collect();
    if terminals.len() != n {
        return Err(parse_err(
            last_line,
            format!("header announces {n} nodes, assignment uses {}", terminals.len()),
        ));
    }
    SteinerTree::from_parts(terminals, edges, assignment)
        .map_err(|e| parse_err(last_line, e.to_string()))
}

pub fn load_tree(path: impl AsRef<Path>) -> HarnessResult<SteinerTree> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_tree(&text)
}

pub fn save_tree(t: &SteinerTree, path: impl AsRef<Path>) -> HarnessResult<()> {
    let path = path.as_ref();
    std::fs::write(path, write_tree(t)).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gomory_hu_exact;

    #[test]
    fn parses_path_graph() {
        let g = parse_graph("p 3 2\ne 0 1 3.0\ne 1 2 1.0\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.weight(Vertex(0), Vertex(1)), 3.0);
        assert_eq!(g.weight(Vertex(1), Vertex(2)), 1.0);
    }

    #[test]
    fn duplicates_are_summed() {
        let g = parse_graph("p 2 2\ne 0 1 2.0\ne 0 1 2.0").unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.weight(Vertex(0), Vertex(1)), 4.0);
    }

    #[test]
    fn comments_and_isolated_vertices() {
        let g = parse_graph("# hi\np 4 1 # four vertices\n\ne 0 3 1.5\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |t: &str| match parse_graph(t) {
            Err(HarnessError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("p 2 1\n\ne 0 1 x\n"), 3);
        assert_eq!(line("p 2 1\ne 0 1 0\n"), 2);
        assert_eq!(line("p 2 1\ne 0 1 -1\n"), 2);
        assert_eq!(line("p 2 1\ne 0 5 1\n"), 2);
        assert_eq!(line("e 0 1 1\n"), 1);
        assert_eq!(line("p 2 1\ne 0 0 1\n"), 2);
        assert_eq!(line("p 2 2\ne 0 1 1\n"), 2);
        assert_eq!(line("p 2 1\nq\n"), 2);
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges([(0, 1, 0.1), (1, 2, 1.0 / 3.0), (0, 2, 7.0)]).unwrap();
        assert_eq!(parse_graph(&write_graph(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn tree_round_trip() {
        let g = Graph::from_edges([(0, 1, 0.1), (1, 2, 1.0 / 3.0), (0, 2, 7.0), (2, 3, 2.5)]).unwrap();
        let t = gomory_hu_exact(&g).unwrap();
        assert_eq!(parse_tree(&write_tree(&t)).unwrap(), t);
    }

    #[test]
    fn bad_tree_rejected() {
        assert!(parse_tree("t 2\nb 0 0\nb 1 1\n").is_err());
        assert!(parse_tree("t 3\nb 0 0\nb 1 1\ne 0 1 1\n").is_err());
    }
}
