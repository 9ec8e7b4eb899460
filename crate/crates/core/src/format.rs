//! Text formats for graphs, move scripts and integer matrices.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Mult};
use crate::intlinalg::IntMatrix;
use crate::moves::{MoveScript, PartitionSpec, Step};

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_count(line: usize, s: &str) -> Result<Mult> {
    if s == "inf" {
        return Ok(Mult::Infinite);
    }
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::syntax(line, format!("expected a count or `inf`, found `{s}`")));
    }
    match s.parse::<u64>() {
        Ok(0) => Err(Error::syntax(line, "counts must be positive")),
        Ok(n) => Ok(Mult::Finite(n)),
        Err(_) => Err(Error::syntax(line, format!("count `{s}` is too large"))),
    }
}

/// Parses `vertex <id>` lines followed by `edge <src> <dst> <count|inf>` lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, Mult)> = Vec::new();
    let mut seen_pairs = HashSet::new();
    for (ln, line) in lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["vertex", id] => {
                if !edges.is_empty() {
                    return Err(Error::syntax(ln, "vertex declarations must precede edges"));
                }
                if index.insert(id.to_string(), names.len()).is_some() {
                    return Err(Error::syntax(ln, format!("duplicate vertex `{id}`")));
                }
                names.push(id.to_string());
            }
            ["edge", src, dst, count] => {
                let lookup = |v: &str| {
                    index
                        .get(v)
                        .copied()
                        .ok_or_else(|| Error::syntax(ln, format!("unknown vertex `{v}`")))
                };
                let (s, d) = (lookup(src)?, lookup(dst)?);
                let m = parse_count(ln, count)?;
                if !seen_pairs.insert((s, d)) {
                    return Err(Error::syntax(ln, format!("duplicate edge line for `{src}` -> `{dst}`")));
                }
                edges.push((s, d, m));
            }
            ["vertex", ..] => return Err(Error::syntax(ln, "expected `vertex <id>`")),
            ["edge", ..] => return Err(Error::syntax(ln, "expected `edge <src> <dst> <count>`")),
            [word, ..] => return Err(Error::syntax(ln, format!("unknown keyword `{word}`"))),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    let n = names.len();
    let mut rows = vec![vec![Mult::ZERO; n]; n];
    for (s, d, m) in edges {
        rows[s][d] = m;
    }
    Graph::new(names, rows)
}

/// Canonical text: vertices in order, then edges in row-major order.
pub fn print_graph(g: &Graph) -> String {
    let mut out = String::new();
    for name in g.names() {
        writeln!(out, "vertex {name}").unwrap();
    }
    for u in 0..g.len() {
        for v in 0..g.len() {
            let m = g.mult(u, v);
            if !m.is_zero() {
                writeln!(out, "edge {} {} {m}", g.name(u), g.name(v)).unwrap();
            }
        }
    }
    out
}

fn parse_blocks(ln: usize, parts: &[&str], allow_inf: bool) -> Result<PartitionSpec> {
    if parts.is_empty() {
        return Err(Error::syntax(ln, "expected at least one `::` block"));
    }
    let mut blocks = Vec::with_capacity(parts.len());
    for part in parts {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::syntax(ln, "empty block"));
        }
        let mut block = Vec::new();
        for pair in part.split(',') {
            let Some((v, c)) = pair.trim().split_once('=') else {
                return Err(Error::syntax(ln, format!("expected `<vertex>=<count>`, found `{}`", pair.trim())));
            };
            let (v, c) = (v.trim(), c.trim());
            if v.is_empty() || v.contains(char::is_whitespace) {
                return Err(Error::syntax(ln, format!("invalid vertex `{v}` in block")));
            }
            let m = parse_count(ln, c)?;
            if m.is_infinite() && !allow_inf {
                return Err(Error::syntax(ln, "insplit blocks must have finite counts"));
            }
            block.push((v.to_string(), m));
        }
        blocks.push(block);
    }
    Ok(PartitionSpec::new(blocks))
}

fn single_vertex(ln: usize, keyword: &str, args: &[&str]) -> Result<String> {
    match args {
        [w] => Ok(w.to_string()),
        _ => Err(Error::syntax(ln, format!("expected `{keyword} <vertex>`"))),
    }
}

/// Parses one step per line. Vertex names are checked when the script runs.
pub fn parse_script(text: &str) -> Result<MoveScript> {
    let mut steps = Vec::new();
    for (ln, line) in lines(text) {
        let mut parts = line.split("::");
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let blocks: Vec<&str> = parts.collect();
        let Some((&keyword, args)) = head.split_first() else {
            return Err(Error::syntax(ln, "missing step keyword"));
        };
        let split = matches!(keyword, "outsplit" | "insplit");
        if !split && !blocks.is_empty() {
            return Err(Error::syntax(ln, format!("`{keyword}` takes no blocks")));
        }
        let step = match keyword {
            "remove-source" => Step::RemoveSource(single_vertex(ln, keyword, args)?),
            "reduce" => Step::Reduce(single_vertex(ln, keyword, args)?),
            "collapse" => Step::Collapse(single_vertex(ln, keyword, args)?),
            "cuntz-splice" => Step::CuntzSplice(single_vertex(ln, keyword, args)?),
            "transitive" => {
                if args.len() < 2 {
                    return Err(Error::syntax(ln, "expected `transitive <v0> <v1> ...`"));
                }
                Step::Transitive(args.iter().map(|s| s.to_string()).collect())
            }
            "outsplit" => Step::Outsplit(single_vertex(ln, keyword, args)?, parse_blocks(ln, &blocks, true)?),
            "insplit" => Step::Insplit(single_vertex(ln, keyword, args)?, parse_blocks(ln, &blocks, false)?),
            other => return Err(Error::syntax(ln, format!("unknown step `{other}`"))),
        };
        steps.push(step);
    }
    Ok(MoveScript::new(steps))
}

/// Parses `rows cols` followed by one line of integers per row.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut it = lines(text);
    let Some((ln, header)) = it.next() else {
        return Err(Error::syntax(1, "expected `rows cols`"));
    };
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::syntax(ln, "expected `rows cols`"))?;
    let [rows, cols] = dims[..] else {
        return Err(Error::syntax(ln, "expected `rows cols`"));
    };
    let mut entries = Vec::with_capacity(rows.saturating_mul(cols));
    let mut seen = 0;
    for (ln, line) in it {
        if seen == rows {
            return Err(Error::syntax(ln, format!("more than {rows} rows")));
        }
        let row: Vec<BigInt> = line
            .split_whitespace()
            .map(|s| s.parse::<BigInt>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::syntax(ln, "entries must be decimal integers"))?;
        if row.len() != cols {
            return Err(Error::syntax(ln, format!("expected {cols} entries, found {}", row.len())));
        }
        entries.extend(row);
        seen += 1;
    }
    if seen != rows {
        return Err(Error::input(format!("expected {rows} rows, found {seen}")));
    }
    IntMatrix::from_entries(rows, cols, entries)
}

pub fn print_matrix(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}
