use std::fmt::Write as _;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Metis,
    Edgelist,
}

impl Format {
    /// `.graph` and `.metis` files are METIS, everything else an edge list.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("graph" | "metis") => Format::Metis,
            _ => Format::Edgelist,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metis" => Ok(Format::Metis),
            "edgelist" => Ok(Format::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is only detected at end of input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("unsupported METIS format code `{0}`")]
    UnsupportedFormat(String),
    #[error("`{0}` is not a non-negative integer")]
    BadToken(String),
    #[error("missing vertex weight")]
    MissingWeight,
    #[error("neighbor {neighbor} out of range 1..={n}")]
    NeighborOutOfRange { neighbor: u64, n: usize },
    #[error("vertex {vertex} lists {neighbor}, which does not list it back")]
    Asymmetric { vertex: usize, neighbor: usize },
    #[error("expected {expected} vertex lines, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error("header declares {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("expected two vertex ids, found {0} tokens")]
    BadEdgeLine(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A parsed graph plus the file's own vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    /// Weights are all one unless the file carried them.
    pub graph: Graph,
    /// 1-based file id of every dense vertex.
    pub ids: Vec<u64>,
    pub has_weights: bool,
    pub format: Format,
}

impl ParsedGraph {
    /// The vertex as written in the file: the 1-based position for METIS,
    /// the original label for edge lists.
    pub fn label(&self, v: Vertex) -> u64 {
        match self.format {
            Format::Metis => self.ids[v],
            Format::Edgelist => self.ids[v] - 1,
        }
    }
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn number(token: &str, line: usize) -> Result<u64, ParseError> {
    token.parse().map_err(|_| err(line, ParseErrorKind::BadToken(token.to_owned())))
}

/// Parses a METIS graph: header `n m [fmt]` with `fmt` `0` (unweighted) or
/// `10` (a leading vertex weight on each line), then one line of 1-based
/// neighbors per vertex. `%` lines are comments.
pub fn parse_metis(text: &str) -> Result<ParsedGraph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=4).contains(&fields.len()) {
        return Err(err(hline, ParseErrorKind::BadHeader(header.to_owned())));
    }
    let n = number(fields[0], hline)? as usize;
    let m = number(fields[1], hline)? as usize;
    let has_weights = match fields.get(2).map(|f| f.trim_start_matches('0')) {
        None | Some("") => false,
        Some("10") => true,
        Some(_) => return Err(err(hline, ParseErrorKind::UnsupportedFormat(fields[2].to_owned()))),
    };

    let mut adj: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    let mut weights: Vec<Weight> = Vec::with_capacity(n);
    let mut line_of = Vec::with_capacity(n);
    for (lno, line) in lines {
        if adj.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(lno, ParseErrorKind::LineCount { expected: n, found: n + 1 }));
        }
        let mut tokens = line.split_whitespace();
        let v = adj.len();
        if has_weights {
            let w = match tokens.next() {
                Some(t) => number(t, lno)?,
                None => return Err(err(lno, ParseErrorKind::MissingWeight)),
            };
            weights.push(Weight::try_from(w).map_err(|_| err(lno, ParseErrorKind::BadToken(w.to_string())))?);
            if w == 0 {
                return Err(err(lno, GraphError::NonPositiveWeight(v, 0).into()));
            }
        } else {
            weights.push(1);
        }
        let mut list = Vec::new();
        for t in tokens {
            let u = number(t, lno)?;
            if u == 0 || u as usize > n {
                return Err(err(lno, ParseErrorKind::NeighborOutOfRange { neighbor: u, n }));
            }
            let u = u as usize - 1;
            if u == v {
                warn!("line {lno}: self-loop on vertex {} dropped", v + 1);
            } else {
                list.push(u);
            }
        }
        list.sort_unstable();
        list.dedup();
        adj.push(list);
        line_of.push(lno);
    }
    if adj.len() < n {
        return Err(err(0, ParseErrorKind::LineCount { expected: n, found: adj.len() }));
    }
    let mut directed = 0usize;
    for (v, list) in adj.iter().enumerate() {
        for &u in list {
            if adj[u].binary_search(&v).is_err() {
                return Err(err(line_of[v], ParseErrorKind::Asymmetric { vertex: v + 1, neighbor: u + 1 }));
            }
        }
        directed += list.len();
    }
    if directed / 2 != m {
        return Err(err(hline, ParseErrorKind::EdgeCount { expected: m, found: directed / 2 }));
    }
    Ok(ParsedGraph { graph: Graph::from_adjacency(adj, weights), ids: (1..=n as u64).collect(), has_weights, format: Format::Metis })
}

/// Parses whitespace-separated `u v` pairs. Labels are arbitrary
/// non-negative integers, numbered densely by first appearance; a label `x`
/// gets file id `x + 1`. `#` and `%` lines are comments.
pub fn parse_edgelist(text: &str) -> Result<ParsedGraph, ParseError> {
    let mut dense = std::collections::HashMap::new();
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: u64| -> Vertex {
        *dense.entry(label).or_insert_with(|| {
            ids.push(label + 1);
            ids.len() - 1
        })
    };
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(err(lno, ParseErrorKind::BadEdgeLine(tokens.len())));
        }
        let (a, b) = (number(tokens[0], lno)?, number(tokens[1], lno)?);
        let (u, v) = (intern(a), intern(b));
        if u == v {
            warn!("line {lno}: self-loop on {a} dropped");
        } else {
            edges.push((u, v));
        }
    }
    let n = ids.len();
    let graph = Graph::new(n, &edges, vec![1; n]).map_err(|e| err(0, e.into()))?;
    Ok(ParsedGraph { graph, ids, has_weights: false, format: Format::Edgelist })
}

pub fn parse_graph(text: &str, format: Format) -> Result<ParsedGraph, ParseError> {
    match format {
        Format::Metis => parse_metis(text),
        Format::Edgelist => parse_edgelist(text),
    }
}

/// Writes `g` in METIS format, with vertex weights when `with_weights`.
pub fn write_metis(g: &Graph, with_weights: bool) -> String {
    let mut out = String::new();
    let fmt = if with_weights { " 10" } else { "" };
    let _ = writeln!(out, "{} {}{fmt}", g.num_vertices(), g.num_edges());
    for v in g.vertices() {
        let mut fields: Vec<String> = Vec::with_capacity(g.degree(v) + 1);
        if with_weights {
            fields.push(g.weight(v).to_string());
        }
        fields.extend(g.neighbors(v).iter().map(|u| (u + 1).to_string()));
        let _ = writeln!(out, "{}", fields.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn metis_examples() {
        let p = parse_metis("3 2 10\n1 2\n5 1 3\n1 2\n").unwrap();
        assert!(p.has_weights);
        assert_eq!(p.graph, Graph::new(3, &[(0, 1), (1, 2)], vec![1, 5, 1]).unwrap());

        let p = parse_metis("2 1 0\n2\n1\n").unwrap();
        assert!(!p.has_weights);
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let e = parse_metis("2 1 0\n2\n\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Asymmetric { vertex: 1, neighbor: 2 });
        assert_eq!(e.line, 2);
    }

    #[test]
    fn metis_comments_and_isolated_vertices() {
        let p = parse_metis("% c\n3 1\n% inner\n2\n1\n\n").unwrap();
        assert_eq!(p.graph.num_vertices(), 3);
        assert_eq!(p.graph.degree(2), 0);
    }

    #[test]
    fn metis_errors_carry_line_numbers() {
        assert_eq!(parse_metis("2 1\n2\nx\n").unwrap_err().line, 3);
        assert_eq!(parse_metis("2 1\n3\n1\n").unwrap_err().line, 2);
        assert!(matches!(parse_metis("2 1\n2\n").unwrap_err().kind, ParseErrorKind::LineCount { .. }));
        assert!(matches!(parse_metis("2 2\n2\n1\n").unwrap_err().kind, ParseErrorKind::EdgeCount { .. }));
        assert!(matches!(parse_metis("2 1 1\n2\n1\n").unwrap_err().kind, ParseErrorKind::UnsupportedFormat(_)));
        assert!(matches!(parse_metis("1 0\n\n1\n").unwrap_err().kind, ParseErrorKind::LineCount { .. }));
        assert!(matches!(parse_metis("").unwrap_err().kind, ParseErrorKind::MissingHeader));
    }

    #[test]
    fn edgelist_examples() {
        let p = parse_edgelist("0 1\n1 2\n").unwrap();
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.ids, vec![1, 2, 3]);

        let p = parse_edgelist("# c\n0 1\n1 0\n").unwrap();
        assert_eq!(p.graph.num_edges(), 1);

        let p = parse_edgelist("0 0\n").unwrap();
        assert_eq!((p.graph.num_vertices(), p.graph.num_edges()), (1, 0));

        let p = parse_edgelist("17 5\n5 9\n").unwrap();
        assert_eq!(p.ids, vec![18, 6, 10]);
        assert_eq!(p.label(0), 17);

        assert_eq!(parse_edgelist("0 1\n1\n").unwrap_err().line, 2);
        assert_eq!(parse_edgelist("0 1\n1 -2\n").unwrap_err().line, 2);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..30).prop_flat_map(|n| {
            (proptest::collection::vec((0..n, 0..n), 0..60), proptest::collection::vec(1i64..500, n))
                .prop_map(move |(edges, w)| Graph::new(n, &edges, w).unwrap())
        })
    }

    proptest! {
        #[test]
        fn metis_round_trip(g in arb_graph()) {
            let p = parse_metis(&write_metis(&g, true)).unwrap();
            prop_assert_eq!(&p.graph, &g);
            let p = parse_metis(&write_metis(&g, false)).unwrap();
            prop_assert_eq!(p.graph.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        }
    }
}
