//! Edge-list text format and its JSON alternative.
//!
//! Text: a header line `n m`, then `m` lines `u v w`, decimal, single spaces,
//! LF line endings. JSON: `{"n": n, "edges": [[u, v, w], ...]}`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dag::Dag;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

pub fn parse_edge_list(text: &str) -> Result<Dag> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut tokens = header.split_whitespace();
    let n: usize = field(tokens.next(), 1, "vertex count")?;
    let m: usize = field(tokens.next(), 1, "edge count")?;
    if tokens.next().is_some() {
        return Err(parse_err(1, "trailing tokens in header"));
    }
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let u: usize = field(tokens.next(), lineno, "source")?;
        let v: usize = field(tokens.next(), lineno, "target")?;
        let w: i64 = field(tokens.next(), lineno, "weight")?;
        if tokens.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Dag::from_signed_edges(n, &edges)
}

pub fn parse_json(text: &str) -> Result<Dag> {
    let graph: JsonGraph =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    Dag::from_signed_edges(graph.n, &graph.edges)
}

pub fn parse(text: &str, format: Format) -> Result<Dag> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Json => parse_json(text),
    }
}

pub fn write_edge_list(dag: &Dag) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", dag.n(), dag.m()).unwrap();
    for &(u, v, w) in dag.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}

pub fn write_json(dag: &Dag) -> String {
    let graph = JsonGraph {
        n: dag.n(),
        edges: dag.edges().iter().map(|&(u, v, w)| (u, v, w as i64)).collect(),
    };
    serde_json::to_string(&graph).expect("graph serializes")
}

pub fn write(dag: &Dag, format: Format) -> String {
    match format {
        Format::EdgeList => write_edge_list(dag),
        Format::Json => write_json(dag),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_exact_text() {
        let dag = Dag::new(3, &[(0, 1, 4), (1, 2, 0)]).unwrap();
        assert_eq!(write_edge_list(&dag), "3 2\n0 1 4\n1 2 0\n");
        assert_eq!(write_json(&dag), r#"{"n":3,"edges":[[0,1,4],[1,2,0]]}"#);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("2 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 2\n0 1 1\n"), Err(Error::Parse { .. })));
        assert_eq!(
            parse_edge_list("2 1\n0 1 -1\n").unwrap_err(),
            Error::NegativeWeight(0, 1)
        );
        assert_eq!(
            parse_edge_list("2 2\n0 1 1\n1 0 1\n").unwrap_err(),
            Error::CycleDetected
        );
        assert!(parse_json(r#"{"n":2}"#).is_err());
    }

    proptest! {
        #[test]
        fn both_formats_round_trip(n in 1usize..20, raw in prop::collection::vec((0usize..20, 0usize..20, 0u64..1000), 0..40)) {
            let edges: Vec<_> = raw
                .into_iter()
                .filter(|&(u, v, _)| u < n && v < n && u < v)
                .collect();
            let dag = Dag::new(n, &edges).unwrap();
            for format in [Format::EdgeList, Format::Json] {
                let back = parse(&write(&dag, format), format).unwrap();
                prop_assert_eq!(back.n(), dag.n());
                prop_assert_eq!(back.edges(), dag.edges());
            }
        }
    }
}
