//! PACE `.gr` and `.td` formats. Files number vertices from 1; in memory vertex
//! `i` of a file is id `i - 1`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::td::TreeDecomposition;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_num(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, found '{tok}'"),
    })
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing 'p tw' header"))?;
    if header.len() != 4 || header[0] != "p" || header[1] != "tw" {
        return Err(perr(hline, "expected 'p tw <vertices> <edges>'"));
    }
    let n = parse_num(header[2], hline, "vertex count")?;
    let m = parse_num(header[3], hline, "edge count")?;
    let mut g = Graph::edgeless(n as u32);
    let mut seen = 0;
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(perr(line, "expected an edge 'u v'"));
        }
        let u = parse_num(toks[0], line, "vertex")?;
        let v = parse_num(toks[1], line, "vertex")?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(perr(line, format!("vertex {x} outside 1..={n}")));
            }
        }
        match g.add_edge((u - 1) as Vertex, (v - 1) as Vertex) {
            Ok(true) => {}
            Ok(false) => return Err(perr(line, format!("duplicate edge {u} {v}"))),
            Err(e) => return Err(perr(line, e.to_string())),
        }
        seen += 1;
    }
    if seen != m {
        return Err(perr(hline, format!("header announces {m} edges, found {seen}")));
    }
    Ok(g)
}

fn dense_ids(g: &Graph) -> Result<()> {
    if g.vertices().enumerate().any(|(i, v)| v as usize != i) {
        return Err(Error::invalid("PACE output needs vertex ids 0..n-1"));
    }
    Ok(())
}

pub fn write_gr(g: &Graph) -> Result<String> {
    dense_ids(g)?;
    let mut out = format!("p tw {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    Ok(out)
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing 's td' header"))?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(perr(hline, "expected 's td <bags> <max bag size> <vertices>'"));
    }
    let nb = parse_num(header[2], hline, "bag count")?;
    let width1 = parse_num(header[3], hline, "bag size")?;
    let n = parse_num(header[4], hline, "vertex count")?;
    let mut bags: Vec<Option<VertexSet>> = vec![None; nb];
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks[0] == "b" {
            let i = parse_num(toks.get(1).copied().unwrap_or(""), line, "bag index")?;
            if i == 0 || i > nb {
                return Err(perr(line, format!("bag index {i} outside 1..={nb}")));
            }
            if bags[i - 1].is_some() {
                return Err(perr(line, format!("bag {i} defined twice")));
            }
            let mut bag = VertexSet::new();
            for t in &toks[2..] {
                let v = parse_num(t, line, "vertex")?;
                if v == 0 || v > n {
                    return Err(perr(line, format!("vertex {v} outside 1..={n}")));
                }
                bag.insert((v - 1) as Vertex);
            }
            if bag.len() > width1 {
                return Err(perr(line, format!("bag {i} larger than announced size {width1}")));
            }
            bags[i - 1] = Some(bag);
        } else {
            if toks.len() != 2 {
                return Err(perr(line, "expected a tree edge 'i j'"));
            }
            let a = parse_num(toks[0], line, "bag index")?;
            let b = parse_num(toks[1], line, "bag index")?;
            if a == 0 || a > nb || b == 0 || b > nb {
                return Err(perr(line, format!("tree edge {a} {b} outside 1..={nb}")));
            }
            edges.push((a - 1, b - 1));
        }
    }
    let bags: Vec<VertexSet> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(hline, format!("bag {} missing", i + 1))))
        .collect::<Result<_>>()?;
    TreeDecomposition::new(bags, &edges).map_err(|e| perr(hline, e.to_string()))
}

/// Writes `td` for a graph on `n` vertices.
pub fn write_td(td: &TreeDecomposition, n: usize) -> Result<String> {
    if td.bags().iter().flatten().any(|&v| v as usize >= n) {
        return Err(Error::invalid("bag vertex outside 0..n-1"));
    }
    let size = td.bags().iter().map(|b| b.len()).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.len(), size, n);
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for (p, c) in td.tree_edges() {
        writeln!(out, "{} {}", p + 1, c + 1).unwrap();
    }
    Ok(out)
}
