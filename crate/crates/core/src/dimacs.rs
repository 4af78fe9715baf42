//! DIMACS-style edge format: `p edge N M` followed by `e u v` lines with
//! 1-based labels. Lines starting with `c` are comments.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p edge N M` problem line")]
    MissingProblemLine,
    #[error("declared {declared} edges but found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A parsed graph plus the number of duplicate edge lines that were merged.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates_merged: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_label(tok: Option<&str>, n: usize, line: usize) -> Result<usize, DimacsError> {
    let tok = tok.ok_or_else(|| syntax(line, "edge line needs two endpoints"))?;
    let v: usize = tok
        .parse()
        .map_err(|_| syntax(line, format!("bad vertex label `{tok}`")))?;
    if v == 0 || v > n {
        return Err(syntax(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Reads a graph. Duplicate edges (either orientation) are merged and
/// counted; self-loops are rejected. The declared edge count must match the
/// number of `e` lines.
pub fn read_dimacs<R: BufRead>(reader: R) -> Result<ParsedGraph, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph = Graph::empty(0);
    let mut lines_seen = 0usize;
    let mut duplicates = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(lineno, "second problem line"));
                }
                if toks.next() != Some("edge") {
                    return Err(syntax(lineno, "expected `p edge N M`"));
                }
                let n = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(lineno, "bad vertex count"))?;
                let m = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(lineno, "bad edge count"))?;
                header = Some((n, m));
                graph = Graph::empty(n);
            }
            Some("e") => {
                let (n, _) = header.ok_or(DimacsError::MissingProblemLine)?;
                let u = parse_label(toks.next(), n, lineno)?;
                let v = parse_label(toks.next(), n, lineno)?;
                lines_seen += 1;
                match graph.try_add_edge(u, v) {
                    Ok(()) => {}
                    Err(GraphError::DuplicateEdge(..)) => duplicates += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            Some(other) => return Err(syntax(lineno, format!("unknown line type `{other}`"))),
        }
    }

    let (_, m) = header.ok_or(DimacsError::MissingProblemLine)?;
    if m != lines_seen {
        return Err(DimacsError::EdgeCountMismatch {
            declared: m,
            found: lines_seen,
        });
    }
    if duplicates > 0 {
        log::warn!("merged {duplicates} duplicate edge line(s)");
    }
    Ok(ParsedGraph {
        graph,
        duplicates_merged: duplicates,
    })
}

pub fn parse_dimacs(text: &str) -> Result<ParsedGraph, DimacsError> {
    read_dimacs(text.as_bytes())
}

/// Writes edges in ascending `(u, v)` order, `u < v`, 1-based.
pub fn write_dimacs<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "p edge {} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

pub fn to_dimacs_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_dimacs(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_converts_to_zero_based() {
        let text = "c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 3 1\n";
        let parsed = parse_dimacs(text).unwrap();
        assert_eq!(parsed.graph, Graph::complete(3));
        assert_eq!(parsed.duplicates_merged, 0);
    }

    #[test]
    fn writer_output_is_exact() {
        let g = Graph::from_edges(4, [(2, 3), (1, 0), (0, 2)]).unwrap();
        assert_eq!(to_dimacs_string(&g), "p edge 4 3\ne 1 2\ne 1 3\ne 3 4\n");
    }

    #[test]
    fn duplicates_are_merged_and_counted() {
        let parsed = parse_dimacs("p edge 3 3\ne 1 2\ne 2 1\ne 1 2\n").unwrap();
        assert_eq!(parsed.graph.edge_count(), 1);
        assert_eq!(parsed.duplicates_merged, 2);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_dimacs("e 1 2\n"),
            Err(DimacsError::MissingProblemLine)
        ));
        assert!(matches!(
            parse_dimacs("p edge 3 1\ne 1 4\n"),
            Err(DimacsError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 3 1\ne 2 2\n"),
            Err(DimacsError::Graph(GraphError::SelfLoop(1)))
        ));
        assert!(matches!(
            parse_dimacs("p edge 3 2\ne 1 2\n"),
            Err(DimacsError::EdgeCountMismatch {
                declared: 2,
                found: 1
            })
        ));
        assert!(parse_dimacs("").is_err());
    }
}
