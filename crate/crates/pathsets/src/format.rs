//! The `.pg` text format and DOT export.
//!
//! `.pg` is line-oriented; `#` starts a comment, tokens are separated by
//! whitespace and match `[A-Za-z0-9_.+-]+`:
//!
//! ```text
//! alphabet <sym> <sym> ...      # exactly one, first non-comment line
//! vertex <name> [<name> ...]    # one or more lines
//! edge <from> <to> <sym>        # zero or more lines
//! start <name>                  # at most one; absent means sofic mode
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::{DuplicateEdges, Edge, LabeledGraph};

/// A parsed `.pg` file: a graph, the optional start vertex, and how many
/// duplicate edges were collapsed (zero under strict parsing).
#[derive(Debug, Clone)]
pub struct ParsedPg {
    pub graph: LabeledGraph,
    pub start: Option<usize>,
    pub duplicates: usize,
}

fn token_ok(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'+' | b'-'))
}

fn check_token(tok: &str, line: usize) -> Result<()> {
    if token_ok(tok) {
        Ok(())
    } else {
        Err(Error::Parse {
            line,
            msg: format!("token {tok:?} must match [A-Za-z0-9_.+-]+"),
        })
    }
}

/// Parses `.pg` text. `strict` forwards duplicate edges as errors instead
/// of collapsing them.
pub fn parse_pg(text: &str, strict: bool) -> Result<ParsedPg> {
    let mut alphabet: Option<Alphabet> = None;
    let mut names: Vec<String> = Vec::new();
    let mut name_index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut start: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace();
        let Some(directive) = tokens.next() else {
            continue;
        };
        let rest: Vec<&str> = tokens.collect();
        match directive {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "repeated alphabet line".into(),
                    });
                }
                if !names.is_empty() || !edges.is_empty() || start.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "alphabet must be the first directive".into(),
                    });
                }
                for t in &rest {
                    check_token(t, line_no)?;
                }
                alphabet = Some(Alphabet::new(rest).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?);
            }
            "vertex" => {
                if alphabet.is_none() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "vertex before alphabet".into(),
                    });
                }
                if rest.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "vertex line needs at least one name".into(),
                    });
                }
                for t in rest {
                    check_token(t, line_no)?;
                    if name_index.insert(t.to_string(), names.len()).is_some() {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("duplicate vertex `{t}`"),
                        });
                    }
                    names.push(t.to_string());
                }
            }
            "edge" => {
                let Some(alpha) = &alphabet else {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "edge before alphabet".into(),
                    });
                };
                let [from, to, sym] = rest.as_slice() else {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "edge needs exactly: from to symbol".into(),
                    });
                };
                let f = *name_index.get(*from).ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("unknown vertex `{from}`"),
                })?;
                let t = *name_index.get(*to).ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("unknown vertex `{to}`"),
                })?;
                let l = alpha.index_of(sym).ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("unknown label `{sym}`"),
                })?;
                edges.push((
                    line_no,
                    Edge {
                        from: f,
                        label: l,
                        to: t,
                    },
                ));
            }
            "start" => {
                if start.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "repeated start line".into(),
                    });
                }
                let [name] = rest.as_slice() else {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "start needs exactly one vertex name".into(),
                    });
                };
                start = Some((line_no, name.to_string()));
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let Some(alphabet) = alphabet else {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "missing alphabet line".into(),
        });
    };
    if names.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "missing vertex lines".into(),
        });
    }
    let start = match start {
        None => None,
        Some((line, name)) => Some(*name_index.get(&name).ok_or(Error::Parse {
            line,
            msg: format!("unknown start vertex `{name}`"),
        })?),
    };
    let mode = if strict {
        DuplicateEdges::Error
    } else {
        DuplicateEdges::Collapse
    };
    let built = LabeledGraph::from_indexed(
        alphabet,
        names,
        edges.into_iter().map(|(_, e)| e).collect(),
        mode,
    )?;
    Ok(ParsedPg {
        graph: built.graph,
        start,
        duplicates: built.duplicates,
    })
}

/// Renders a graph in `.pg` form: one vertex per line in index order,
/// edges sorted by `(from, label, to)`, and the optional start line last.
pub fn write_pg(g: &LabeledGraph, start: Option<usize>) -> String {
    let mut out = String::new();
    out.push_str("alphabet");
    for s in g.alphabet().symbols() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    for name in g.names() {
        writeln!(out, "vertex {name}").expect("string write");
    }
    for e in g.edges() {
        writeln!(
            out,
            "edge {} {} {}",
            g.name(e.from),
            g.name(e.to),
            g.alphabet().symbol(e.label)
        )
        .expect("string write");
    }
    if let Some(v) = start {
        writeln!(out, "start {}", g.name(v)).expect("string write");
    }
    out
}

/// Renders a graph as a DOT digraph with edge labels; the start vertex, if
/// any, is drawn double-circled.
pub fn write_dot(g: &LabeledGraph, start: Option<usize>) -> String {
    let mut out = String::from("digraph pathset {\n  rankdir=LR;\n");
    for (v, name) in g.names().iter().enumerate() {
        let shape = if start == Some(v) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  \"{name}\" [shape={shape}];").expect("string write");
    }
    for e in g.edges() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.name(e.from),
            g.name(e.to),
            g.alphabet().symbol(e.label)
        )
        .expect("string write");
    }
    out.push_str("}\n");
    out
}
