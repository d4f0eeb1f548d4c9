//! Edge-list text format:
//!
//! ```text
//! c optional comment
//! p edge <n> <m>
//! e <u> <v>        (m lines, 1 <= u < v <= n)
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header, expected `p edge <n> <m>`")]
    MalformedHeader,
    #[error("second `p` header")]
    DuplicateHeader,
    #[error("missing `p edge <n> <m>` header")]
    MissingHeader,
    #[error("malformed edge line, expected `e <u> <v>`")]
    MalformedEdge,
    #[error("unrecognized line")]
    UnknownLine,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses the edge-list format. Blank lines and `c` comment lines are
/// skipped; a trailing `\r` on a line is tolerated.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(err(line_no, ParseErrorKind::DuplicateHeader));
                }
                let parsed = match tokens.as_slice() {
                    ["p", "edge", n, m] => n.parse().ok().zip(m.parse().ok()),
                    _ => None,
                };
                let (n, m) = parsed.ok_or_else(|| err(line_no, ParseErrorKind::MalformedHeader))?;
                header = Some((n, m, line_no));
            }
            Some("e") => {
                let (u, v): (usize, usize) = match tokens.as_slice() {
                    ["e", u, v] => u.parse().ok().zip(v.parse().ok()),
                    _ => None,
                }
                .ok_or_else(|| err(line_no, ParseErrorKind::MalformedEdge))?;
                if u == v {
                    return Err(err(line_no, ParseErrorKind::SelfLoop(u)));
                }
                let (n, _, _) =
                    header.ok_or_else(|| err(line_no, ParseErrorKind::MissingHeader))?;
                for vertex in [u, v] {
                    if vertex == 0 || vertex > n {
                        return Err(err(line_no, ParseErrorKind::VertexOutOfRange { vertex, n }));
                    }
                }
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    return Err(err(line_no, ParseErrorKind::DuplicateEdge(key.0, key.1)));
                }
                edges.push((key.0 - 1, key.1 - 1));
            }
            Some(_) => return Err(err(line_no, ParseErrorKind::UnknownLine)),
        }
    }

    let (n, m, header_line) =
        header.ok_or_else(|| err(text.lines().count().max(1), ParseErrorKind::MissingHeader))?;
    if edges.len() != m {
        return Err(err(
            header_line,
            ParseErrorKind::EdgeCountMismatch {
                declared: m,
                found: edges.len(),
            },
        ));
    }
    Ok(Graph::new(n, edges).expect("edges validated while parsing"))
}

/// Canonical text: header, then edges in lexicographic order, LF endings.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.edge_count());
    let _ = writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}
