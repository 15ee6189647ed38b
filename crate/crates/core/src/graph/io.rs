//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! `u < v`, ASCII decimal, newline-terminated.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Edge, Graph};
use crate::error::{Error, Result};

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_graph(&text, path)
}

/// Parses edge-list text. `origin` only labels error messages.
pub fn parse_graph(text: &str, origin: impl AsRef<Path>) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.as_ref().to_path_buf(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header line \"n m\"".into()))?;
    let (n, m) =
        parse_pair(header).ok_or_else(|| err(header_no, format!("expected header \"n m\", found {header:?}")))?;

    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = header_no;
    for (no, line) in lines {
        last_line = no;
        let (u, v) = parse_pair(line).ok_or_else(|| err(no, format!("expected edge \"u v\", found {line:?}")))?;
        if u == v {
            return Err(err(no, format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(err(no, format!("vertex id out of range for n = {n}")));
        }
        let e = (u.min(v), u.max(v));
        if !seen.insert(e) {
            return Err(err(no, format!("duplicate edge {} {}", e.0, e.1)));
        }
        if edges.len() == m {
            return Err(err(no, format!("more than the {m} edges declared in the header")));
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} edges but {} were listed", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

pub fn write_graph<W: Write>(graph: &Graph, out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", graph.n(), graph.m())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write_graph(graph, file)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::triangle;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_graph(text, "test.txt")
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse("3 3\n0 1\n1 2\n0 2").unwrap(), triangle());
        let g = parse("4 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (4, 0));
    }

    #[test]
    fn reports_offending_line() {
        assert_eq!(line_of(parse("3 1\n0 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("3 2\n0 1\n1 0\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("3 1\n0 x\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("3 1\n0 5\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("3\n").unwrap_err()), 1);
        assert_eq!(line_of(parse("3 2\n0 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("3 1\n0 1\n1 2\n").unwrap_err()), 3);
        assert!(parse("").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k3.txt");
        save_graph(&triangle(), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "3 3\n0 1\n0 2\n1 2\n");
        assert_eq!(load_graph(&path).unwrap(), triangle());
    }

    proptest! {
        #[test]
        fn save_then_load_is_identity(n in 1usize..30, pairs in proptest::collection::vec((0usize..30, 0usize..30), 0..60)) {
            let mut edges: Vec<Edge> = pairs.into_iter()
                .map(|(a, b)| (a % n, b % n))
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let g = Graph::from_edges(n, edges).unwrap();
            let mut buf = Vec::new();
            write_graph(&g, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            prop_assert_eq!(parse(&text).unwrap(), g);
        }
    }
}
