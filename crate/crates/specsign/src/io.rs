//! Plain-text and JSON formats for matrices, graphs, and orientations.
//!
//! Matrix text: first line is the order n, then n lines of n integers.
//! Matrix JSON: `{"n": 2, "rows": [[0, 1], [1, 0]]}`; entries too large
//! for an i64 are decimal strings.
//! Graph text: first line "n m", then m lines "i j" with i < j.
//! Orientation text: same header, arcs "tail head" (one per edge).

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, NonnegMatrix};
use crate::orient::{Graph, Orientation};

/// Parsers refuse anything larger than this unless told otherwise.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Accepts either format, sniffing JSON by a leading '{'.
pub fn parse_matrix(text: &str, max_order: usize) -> Result<IntMatrix> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text, max_order)
    } else {
        parse_matrix_text(text, max_order)
    }
}

pub fn parse_nonneg_matrix(text: &str, max_order: usize) -> Result<NonnegMatrix> {
    NonnegMatrix::new(parse_matrix(text, max_order)?)
}

fn non_blank_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

fn parse_count(token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::Parse(format!("expected {what}, got {token:?}")))
}

pub fn parse_matrix_text(text: &str, max_order: usize) -> Result<IntMatrix> {
    let mut lines = non_blank_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix input".into()))?;
    let n = parse_count(header, "matrix order on the first line")?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > max_order {
        return Err(Error::OrderCapExceeded { n, cap: max_order });
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, got {i}")))?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for token in row {
            entries.push(
                BigInt::from_str(token)
                    .map_err(|_| Error::Parse(format!("bad integer {token:?} in row {i}")))?,
            );
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
    }
    IntMatrix::from_entries(n, entries)
}

pub fn parse_matrix_json(text: &str, max_order: usize) -> Result<IntMatrix> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing numeric field \"n\"".into()))? as usize;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > max_order {
        return Err(Error::OrderCapExceeded { n, cap: max_order });
    }
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"rows\"".into()))?;
    if rows.len() != n {
        return Err(Error::BadShape { n, expected: n, got: rows.len() });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(Error::BadShape { n, expected: n, got: row.len() });
        }
        for cell in row {
            entries.push(json_entry(cell, i)?);
        }
    }
    IntMatrix::from_entries(n, entries)
}

fn json_entry(cell: &Value, row: usize) -> Result<BigInt> {
    match cell {
        Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer entry {num} in row {row}"))),
        Value::String(s) => BigInt::from_str(s)
            .map_err(|_| Error::Parse(format!("bad integer string {s:?} in row {row}"))),
        other => Err(Error::Parse(format!("entry {other} in row {row} is not an integer"))),
    }
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    let n = m.order();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = m.get(i, j);
                    match i64::try_from(e) {
                        Ok(small) => json!(small),
                        Err(_) => json!(e.to_string()),
                    }
                })
                .collect()
        })
        .collect();
    json!({ "n": n, "rows": rows })
}

pub fn render_matrix(m: &IntMatrix) -> String {
    format!("{m}\n")
}

fn parse_pair_header(text: &str, max_order: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut lines = non_blank_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty graph input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse(format!("expected header \"n m\", got {header:?}")));
    }
    let n = parse_count(fields[0], "vertex count")?;
    let m = parse_count(fields[1], "edge count")?;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > max_order {
        return Err(Error::OrderCapExceeded { n, cap: max_order });
    }
    let mut pairs = Vec::with_capacity(m);
    for idx in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {m} edge lines, got {idx}")))?;
        let ends: Vec<&str> = line.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(Error::Parse(format!("edge line {idx} is not a pair: {line:?}")));
        }
        pairs.push((parse_count(ends[0], "vertex")?, parse_count(ends[1], "vertex")?));
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
    }
    Ok((n, pairs))
}

pub fn parse_graph(text: &str, max_order: usize) -> Result<Graph> {
    let (n, pairs) = parse_pair_header(text, max_order)?;
    Graph::new(n, pairs)
}

/// Arcs are directed "tail head" pairs; the underlying simple graph must
/// have no loops or repeated edges.
pub fn parse_orientation(text: &str, max_order: usize) -> Result<Orientation> {
    let (n, arcs) = parse_pair_header(text, max_order)?;
    let graph = Graph::new(n, arcs.clone())?;
    let mut forward = vec![false; graph.edge_count()];
    for &(tail, head) in &arcs {
        let key = (tail.min(head), tail.max(head));
        let idx = graph
            .edges()
            .binary_search(&key)
            .map_err(|_| Error::Parse(format!("arc {tail} {head} lost its edge")))?;
        forward[idx] = tail < head;
    }
    Orientation::new(graph, forward)
}

pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.edge_count());
    for &(i, j) in g.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

pub fn render_orientation(o: &Orientation) -> String {
    let mut out = format!("{} {}\n", o.graph().order(), o.graph().edge_count());
    for (tail, head) in o.arcs() {
        writeln!(out, "{tail} {head}").unwrap();
    }
    out
}

pub fn graph_to_json(g: &Graph) -> Value {
    json!({
        "n": g.order(),
        "edges": g.edges().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
    })
}

pub fn orientation_to_json(o: &Orientation) -> Value {
    json!({
        "n": o.graph().order(),
        "arcs": o.arcs().into_iter().map(|(t, h)| json!([t, h])).collect::<Vec<_>>(),
    })
}
