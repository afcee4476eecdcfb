//! Plain-text formats: edge lists, burning sequences, and DOT export.
//!
//! Edge-list format: the first significant line holds the vertex count `n`,
//! each following line one edge `u v`. Burning-sequence files hold one
//! decimal vertex id per line. Both formats allow blank lines and `#`
//! comments (full-line or trailing) and are LF-terminated on output.

use crate::tree::{build_tree, Tree};
use crate::{Error, Result};

/// Strips a trailing comment and surrounding whitespace.
fn significant(line: &str) -> &str {
    let line = match line.split_once('#') {
        Some((head, _)) => head,
        None => line,
    };
    line.trim()
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a non-negative integer, got {tok:?}"),
    })
}

/// Parses an edge-list document and validates it as a tree.
pub fn parse_edge_list(text: &str) -> Result<Tree> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = significant(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if toks.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected the vertex count on the first line".into(),
                    });
                }
                n = Some(parse_usize(toks[0], line_no)?);
            }
            Some(_) => {
                if toks.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected an edge `u v`, got {line:?}"),
                    });
                }
                edges.push((parse_usize(toks[0], line_no)?, parse_usize(toks[1], line_no)?));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing vertex count".into(),
    })?;
    build_tree(n, &edges)
}

/// Writes a tree as an edge-list document.
pub fn write_edge_list(t: &Tree) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", t.n()));
    for &(u, v) in t.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a burning-sequence file into raw ids (validation happens when a
/// [`crate::BurningSequence`] is built against a tree).
pub fn parse_sequence(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = significant(raw);
        if line.is_empty() {
            continue;
        }
        if line.split_whitespace().count() != 1 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected one vertex id per line, got {line:?}"),
            });
        }
        out.push(parse_usize(line, line_no)?);
    }
    Ok(out)
}

/// Writes one vertex id per line.
pub fn write_sequence(sources: &[usize]) -> String {
    let mut out = String::new();
    for &v in sources {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Graphviz DOT export with stable ordering: all vertices first, then edges.
pub fn to_dot(t: &Tree) -> String {
    let mut out = String::from("graph tree {\n");
    for v in 0..t.n() {
        out.push_str(&format!("  {v};\n"));
    }
    for &(u, v) in t.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}
