//! Text formats: DIMACS edge lists, the unit-weight subset of SteinLib STP,
//! and a plain set cover format. File ids are 1-based for DIMACS and STP,
//! 0-based for set cover.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::setcover::SetCoverInstance;
use crate::steiner::SteinerInstance;

fn numbers<'a>(line: usize, fields: impl Iterator<Item = &'a str>) -> Result<Vec<usize>> {
    fields
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found {f:?}")))
        })
        .collect()
}

fn one_based(line: usize, id: usize, n: usize) -> Result<Vertex> {
    if id == 0 || id > n {
        return Err(Error::parse(line, format!("vertex {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

/// Collects edges, rejecting loops and duplicates with the offending line.
struct EdgeReader {
    builder: GraphBuilder,
    seen: HashSet<(Vertex, Vertex)>,
}

impl EdgeReader {
    fn new(n: usize) -> Self {
        EdgeReader {
            builder: GraphBuilder::new(n),
            seen: HashSet::new(),
        }
    }

    fn add(&mut self, line: usize, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::parse(line, format!("self-loop on vertex {}", u + 1)));
        }
        if !self.seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        self.builder.add_edge(u, v);
        Ok(())
    }
}

pub fn read_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Option<EdgeReader> = None;
    let mut count = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut fields = raw.split_whitespace();
        match fields.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "second problem line"));
                }
                if fields.next() != Some("edge") {
                    return Err(Error::parse(line, "expected `p edge <n> <m>`"));
                }
                let nums = numbers(line, fields)?;
                let [n, m] = nums[..] else {
                    return Err(Error::parse(line, "expected `p edge <n> <m>`"));
                };
                header = Some((n, m));
                edges = Some(EdgeReader::new(n));
            }
            Some("e") => {
                let (Some((n, _)), Some(reader)) = (header, edges.as_mut()) else {
                    return Err(Error::parse(line, "edge line before the problem line"));
                };
                let nums = numbers(line, fields)?;
                let [u, v] = nums[..] else {
                    return Err(Error::parse(line, "expected `e <u> <v>`"));
                };
                reader.add(line, one_based(line, u, n)?, one_based(line, v, n)?)?;
                count += 1;
            }
            Some(other) => {
                return Err(Error::parse(line, format!("unknown line type {other:?}")));
            }
        }
    }
    let (Some((_, m)), Some(reader)) = (header, edges) else {
        return Err(Error::parse(0, "missing `p edge` line"));
    };
    if count != m {
        return Err(Error::parse(
            text.lines().count(),
            format!("header declares {m} edges, found {count}"),
        ));
    }
    Ok(reader.builder.build())
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a string");
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Graph,
    Terminals,
    Other,
}

pub fn read_stp(text: &str) -> Result<SteinerInstance> {
    let mut section = Section::None;
    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terms: Option<usize> = None;
    let mut reader: Option<EdgeReader> = None;
    let mut edge_count = 0;
    let mut terminals: Vec<Vertex> = Vec::new();
    let mut saw_terminals = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut fields = raw.split_whitespace();
        let Some(key) = fields.next() else { continue };
        let key_lower = key.to_ascii_lowercase();
        if section == Section::None {
            match key_lower.as_str() {
                "section" => {
                    section = match fields.next().map(str::to_ascii_lowercase).as_deref() {
                        Some("graph") => Section::Graph,
                        Some("terminals") => {
                            saw_terminals = true;
                            Section::Terminals
                        }
                        _ => Section::Other,
                    };
                }
                "eof" => break,
                _ if key.contains("STP") || key.starts_with("33D32945") => {}
                _ => return Err(Error::parse(line, format!("unexpected {key:?} outside a section"))),
            }
            continue;
        }
        if key_lower == "end" {
            section = Section::None;
            continue;
        }
        match section {
            Section::Graph => match key_lower.as_str() {
                "nodes" => {
                    let nums = numbers(line, fields)?;
                    let [n] = nums[..] else {
                        return Err(Error::parse(line, "expected `Nodes <n>`"));
                    };
                    nodes = Some(n);
                    reader = Some(EdgeReader::new(n));
                }
                "edges" => {
                    let nums = numbers(line, fields)?;
                    let [m] = nums[..] else {
                        return Err(Error::parse(line, "expected `Edges <m>`"));
                    };
                    declared_edges = Some(m);
                }
                "e" => {
                    let (Some(n), Some(r)) = (nodes, reader.as_mut()) else {
                        return Err(Error::parse(line, "edge before `Nodes`"));
                    };
                    let nums = numbers(line, fields)?;
                    let [u, v, w] = nums[..] else {
                        return Err(Error::parse(line, "expected `E <u> <v> <weight>`"));
                    };
                    if w != 1 {
                        return Err(Error::parse(line, format!("edge weight {w}; only unit weights are supported")));
                    }
                    r.add(line, one_based(line, u, n)?, one_based(line, v, n)?)?;
                    edge_count += 1;
                }
                _ => return Err(Error::parse(line, format!("unexpected {key:?} in the graph section"))),
            },
            Section::Terminals => match key_lower.as_str() {
                "terminals" => {
                    let nums = numbers(line, fields)?;
                    let [k] = nums[..] else {
                        return Err(Error::parse(line, "expected `Terminals <k>`"));
                    };
                    declared_terms = Some(k);
                }
                "t" => {
                    let Some(n) = nodes else {
                        return Err(Error::parse(line, "terminal before the graph section"));
                    };
                    let nums = numbers(line, fields)?;
                    let [v] = nums[..] else {
                        return Err(Error::parse(line, "expected `T <v>`"));
                    };
                    terminals.push(one_based(line, v, n)?);
                }
                _ => return Err(Error::parse(line, format!("unexpected {key:?} in the terminals section"))),
            },
            Section::Other | Section::None => {}
        }
    }
    let last = text.lines().count();
    let Some(reader) = reader else {
        return Err(Error::parse(last, "missing graph section"));
    };
    if !saw_terminals {
        return Err(Error::parse(last, "missing terminals section"));
    }
    if declared_edges.is_some_and(|m| m != edge_count) {
        return Err(Error::parse(
            last,
            format!("`Edges` declares {} edges, found {edge_count}", declared_edges.unwrap_or(0)),
        ));
    }
    if declared_terms.is_some_and(|k| k != terminals.len()) {
        return Err(Error::parse(
            last,
            format!(
                "`Terminals` declares {}, found {}",
                declared_terms.unwrap_or(0),
                terminals.len()
            ),
        ));
    }
    SteinerInstance::new(reader.builder.build(), terminals)
}

pub fn write_stp(inst: &SteinerInstance) -> String {
    let g = &inst.graph;
    let mut out = String::from("33D32945 STP File, STP Format Version 1.0\n\nSECTION Graph\n");
    writeln!(out, "Nodes {}", g.n()).expect("writing to a string");
    writeln!(out, "Edges {}", g.edge_count()).expect("writing to a string");
    for (u, v) in g.edges() {
        writeln!(out, "E {} {} 1", u + 1, v + 1).expect("writing to a string");
    }
    out.push_str("END\n\nSECTION Terminals\n");
    writeln!(out, "Terminals {}", inst.terminals.len()).expect("writing to a string");
    for &t in &inst.terminals {
        writeln!(out, "T {}", t + 1).expect("writing to a string");
    }
    out.push_str("END\n\nEOF\n");
    out
}

pub fn read_setcover(text: &str) -> Result<SetCoverInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((line, head)) = lines.next() else {
        return Err(Error::parse(1, "empty input"));
    };
    let nums = numbers(line, head.split_whitespace())?;
    let [n, m] = nums[..] else {
        return Err(Error::parse(line, "expected `<n> <m>`"));
    };
    let mut sets = Vec::with_capacity(m);
    for (line, raw) in lines {
        if sets.len() == m {
            return Err(Error::parse(line, format!("more than {m} sets")));
        }
        let nums = numbers(line, raw.split_whitespace())?;
        let (k, elements) = nums.split_first().expect("nonempty line");
        if elements.len() != *k {
            return Err(Error::parse(
                line,
                format!("set declares {k} elements, lists {}", elements.len()),
            ));
        }
        if let Some(&x) = elements.iter().find(|&&x| x >= n) {
            return Err(Error::parse(line, format!("element {x} outside 0..{n}")));
        }
        sets.push(elements.to_vec());
    }
    if sets.len() != m {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {m} sets, found {}", sets.len()),
        ));
    }
    SetCoverInstance::new(n, sets)
}

pub fn write_setcover(inst: &SetCoverInstance) -> String {
    let mut out = format!("{} {}\n", inst.ground_size(), inst.set_count());
    for set in inst.sets() {
        let mut line = set.len().to_string();
        for x in set {
            write!(line, " {x}").expect("writing to a string");
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
