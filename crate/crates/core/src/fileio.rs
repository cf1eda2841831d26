//! Text formats for graphs, bipartite graphs, lower-bound graphs and
//! partitions. All formats are whitespace-separated decimal.
//!
//! Graph: `n m` header, then `m` lines `u v` with `u < v`.
//! Bipartite: `nA nB m` header, then `m` lines `a b`.
//! Lower-bound graph: `LBG n k` header (`n` is the common side size), a line
//! with the edge count `m`, `m` edge lines `a b`, `k` designated lines
//! `a1 a2 b1 b2`, then one line each for the `A'` and `B'` id lists (blank
//! when empty).
//! Partition: a single line listing the A-side ids.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, VertexSet, K22};
use crate::lbgraph::LowerBoundGraph;

fn parse_fields<const N: usize>(line_no: usize, line: &str) -> Result<[u32; N]> {
    let mut out = [0u32; N];
    let mut fields = line.split_whitespace();
    for slot in &mut out {
        let field = fields
            .next()
            .ok_or_else(|| Error::parse(line_no, format!("expected {N} fields")))?;
        *slot = field
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad integer {field:?}")))?;
    }
    if fields.next().is_some() {
        return Err(Error::parse(line_no, format!("expected exactly {N} fields")));
    }
    Ok(out)
}

fn parse_id_list(line_no: usize, line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|f| {
            f.parse()
                .map_err(|_| Error::parse(line_no, format!("bad integer {f:?}")))
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let [n, m] = parse_fields(1, header)?;
    let mut edges = Vec::with_capacity(m as usize);
    for i in 0..m as usize {
        let line_no = 2 + i;
        let line = lines
            .get(1 + i)
            .ok_or_else(|| Error::parse(line_no, "unexpected end of edge list"))?;
        let [u, v] = parse_fields(line_no, line)?;
        if u >= v {
            return Err(Error::parse(line_no, "edges must be written with u < v"));
        }
        edges.push((u, v));
    }
    Graph::new(n as usize, edges)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n_vertices(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let [n_a, n_b, m] = parse_fields(1, header)?;
    let mut edges = Vec::with_capacity(m as usize);
    for i in 0..m as usize {
        let line_no = 2 + i;
        let line = lines
            .get(1 + i)
            .ok_or_else(|| Error::parse(line_no, "unexpected end of edge list"))?;
        let [a, b] = parse_fields(line_no, line)?;
        edges.push((a, b));
    }
    BipartiteGraph::new(n_a as usize, n_b as usize, edges)
}

pub fn format_bipartite(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {} {}\n", g.n_a(), g.n_b(), g.edge_count());
    for &(a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

pub fn parse_lower_bound_graph(text: &str) -> Result<LowerBoundGraph> {
    let mut lines: Vec<&str> = text.lines().collect();
    // The two trailing sample lines may be blank; tolerate their loss to
    // editors that strip trailing whitespace.
    let min_len = 2;
    while lines.len() < min_len {
        lines.push("");
    }

    let header = lines[0];
    let mut fields = header.split_whitespace();
    if fields.next() != Some("LBG") {
        return Err(Error::parse(1, "expected 'LBG n k' header"));
    }
    let header_rest: Vec<&str> = fields.collect();
    if header_rest.len() != 2 {
        return Err(Error::parse(1, "expected 'LBG n k' header"));
    }
    let n: u32 = header_rest[0]
        .parse()
        .map_err(|_| Error::parse(1, "bad side size"))?;
    let k: u32 = header_rest[1]
        .parse()
        .map_err(|_| Error::parse(1, "bad family size"))?;

    let [m] = parse_fields(2, lines.get(1).copied().unwrap_or_default())?;
    let expected = 2 + m as usize + k as usize + 2;
    while lines.len() < expected {
        lines.push("");
    }
    if lines.len() != expected {
        return Err(Error::parse(
            lines.len(),
            format!("expected {expected} lines, found {}", lines.len()),
        ));
    }

    let mut edges = Vec::with_capacity(m as usize);
    for i in 0..m as usize {
        let line_no = 3 + i;
        let [a, b] = parse_fields(line_no, lines[2 + i])?;
        edges.push((a, b));
    }
    let base = BipartiteGraph::new(n as usize, n as usize, edges)?;

    let mut designated = Vec::with_capacity(k as usize);
    for i in 0..k as usize {
        let line_no = 3 + m as usize + i;
        let [a1, a2, b1, b2] = parse_fields(line_no, lines[2 + m as usize + i])?;
        designated.push(K22::new(a1, a2, b1, b2)?);
    }

    let sample_line = 2 + m as usize + k as usize;
    let sample_a = VertexSet::new(parse_id_list(sample_line + 1, lines[sample_line])?);
    let sample_b = VertexSet::new(parse_id_list(sample_line + 2, lines[sample_line + 1])?);

    LowerBoundGraph::new(base, designated, sample_a, sample_b)
}

pub fn format_lower_bound_graph(lbg: &LowerBoundGraph) -> Result<String> {
    let base = lbg.base();
    if base.n_a() != base.n_b() {
        return Err(Error::invalid(
            "the text format requires equal side sizes",
        ));
    }
    let mut out = format!("LBG {} {}\n", base.n_a(), lbg.k());
    out.push_str(&format!("{}\n", base.edge_count()));
    for &(a, b) in base.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    for k in lbg.designated() {
        let (a1, a2) = k.a_pair();
        let (b1, b2) = k.b_pair();
        out.push_str(&format!("{a1} {a2} {b1} {b2}\n"));
    }
    out.push_str(&format_id_list(lbg.sample_a()));
    out.push_str(&format_id_list(lbg.sample_b()));
    Ok(out)
}

fn format_id_list(ids: &VertexSet) -> String {
    let mut line = ids
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    line.push('\n');
    line
}

/// Parses a partition file: one line of A-side ids.
pub fn parse_partition(text: &str) -> Result<VertexSet> {
    let first = text.lines().next().unwrap_or("");
    Ok(VertexSet::new(parse_id_list(1, first)?))
}

pub fn format_partition(side_a: &VertexSet) -> String {
    format_id_list(side_a)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_lower_bound_graph(path: impl AsRef<Path>) -> Result<LowerBoundGraph> {
    parse_lower_bound_graph(&std::fs::read_to_string(path)?)
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<VertexSet> {
    parse_partition(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbgraph::{construct_lower_bound_graph, cyclic_4_12};

    #[test]
    fn graph_round_trip() {
        let g = Graph::random(9, 0.4, 5).unwrap();
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let err = parse_graph("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_graph("3 1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_graph("3 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn bipartite_round_trip() {
        let g = crate::lbgraph::generate_random_bipartite(7, 0.3, 8).unwrap();
        assert_eq!(parse_bipartite(&format_bipartite(&g)).unwrap(), g);
    }

    #[test]
    fn lbg_round_trip_demo() {
        let lbg = cyclic_4_12();
        let text = format_lower_bound_graph(&lbg).unwrap();
        assert_eq!(parse_lower_bound_graph(&text).unwrap(), lbg);
    }

    #[test]
    fn lbg_round_trip_constructed() {
        let (lbg, _) = construct_lower_bound_graph(32, 3).unwrap();
        let text = format_lower_bound_graph(&lbg).unwrap();
        assert_eq!(parse_lower_bound_graph(&text).unwrap(), lbg);
    }

    #[test]
    fn lbg_round_trip_with_empty_samples() {
        let base = crate::graph::BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
            .unwrap();
        let lbg = LowerBoundGraph::new(
            base,
            vec![K22::new(0, 1, 0, 1).unwrap()],
            VertexSet::empty(),
            VertexSet::empty(),
        )
        .unwrap();
        let text = format_lower_bound_graph(&lbg).unwrap();
        assert_eq!(parse_lower_bound_graph(&text).unwrap(), lbg);
    }

    #[test]
    fn lbg_rejects_bad_header() {
        assert!(parse_lower_bound_graph("GLB 4 4\n0\n\n\n").is_err());
        assert!(parse_lower_bound_graph("LBG 4\n0\n\n\n").is_err());
    }

    #[test]
    fn partition_round_trip() {
        let s = VertexSet::new(vec![0, 3, 5]);
        assert_eq!(parse_partition(&format_partition(&s)).unwrap(), s);
        assert_eq!(parse_partition("\n").unwrap(), VertexSet::empty());
    }
}
