use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::DirectedEdgeList;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Delimiter {
    /// Comma when the line contains one, whitespace otherwise.
    #[default]
    Auto,
    Whitespace,
    Comma,
}

impl std::str::FromStr for Delimiter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Delimiter::Auto),
            "whitespace" => Ok(Delimiter::Whitespace),
            "comma" => Ok(Delimiter::Comma),
            other => Err(Error::Parse(format!("unknown delimiter `{other}`"))),
        }
    }
}

/// A skipped input line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineDiagnostic {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedEdgeList {
    pub edges: DirectedEdgeList,
    pub diagnostics: Vec<LineDiagnostic>,
}

fn split_fields(line: &str, delimiter: Delimiter) -> Vec<&str> {
    let comma = match delimiter {
        Delimiter::Comma => true,
        Delimiter::Whitespace => false,
        Delimiter::Auto => line.contains(','),
    };
    if comma {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Reads `source<delim>target[<delim>ignored...]` lines. Blank lines and
/// lines starting with `#` are skipped; malformed lines become diagnostics.
pub fn parse_edge_list<R: BufRead>(
    input: R,
    label: impl Into<String>,
    delimiter: Delimiter,
) -> Result<ParsedEdgeList> {
    let label = label.into();
    let mut edges = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed, delimiter);
        match fields.as_slice() {
            [src, dst, ..] if !src.is_empty() && !dst.is_empty() => {
                edges.push((src.to_string(), dst.to_string()));
            }
            _ => diagnostics.push(LineDiagnostic {
                line: idx + 1,
                message: format!("expected `source target`, got `{trimmed}`"),
            }),
        }
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput(format!("period `{label}` has no valid edges")));
    }
    Ok(ParsedEdgeList {
        edges: DirectedEdgeList { label, edges },
        diagnostics,
    })
}

/// Writes one `source target` line per edge copy.
pub fn write_edge_list<W: Write>(list: &DirectedEdgeList, mut out: W) -> Result<()> {
    for (s, t) in &list.edges {
        writeln!(out, "{s} {t}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<ParsedEdgeList> {
        parse_edge_list(text.as_bytes(), "p", Delimiter::Auto)
    }

    #[test]
    fn basic() {
        let p = parse("a b\nb a\n").unwrap();
        assert_eq!(p.edges.edges.len(), 2);
        assert!(p.diagnostics.is_empty());
    }

    #[test]
    fn keeps_multi_edges_and_skips_comments() {
        let p = parse("a b\n# comment\na b\n").unwrap();
        assert_eq!(p.edges.edges, vec![("a".into(), "b".into()), ("a".into(), "b".into())]);
    }

    #[test]
    fn malformed_lines_are_reported() {
        let p = parse("a b\nlonely\nc,d,17\n").unwrap();
        assert_eq!(p.edges.edges.len(), 2);
        assert_eq!(p.diagnostics.len(), 1);
        assert_eq!(p.diagnostics[0].line, 2);
        assert_eq!(p.edges.edges[1], ("c".into(), "d".into()));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse("# nothing\n\n"), Err(Error::EmptyInput(_))));
        assert!(matches!(parse(",x\n"), Err(Error::EmptyInput(_))));
    }

    proptest! {
        #[test]
        fn export_round_trip(edges in prop::collection::vec(("[A-Za-z0-9_]{1,8}", "[A-Za-z0-9_]{1,8}"), 1..50)) {
            let list = DirectedEdgeList { label: "m".into(), edges };
            let mut buf = Vec::new();
            write_edge_list(&list, &mut buf).unwrap();
            let back = parse_edge_list(buf.as_slice(), "m", Delimiter::Whitespace).unwrap();
            prop_assert!(back.diagnostics.is_empty());
            prop_assert_eq!(back.edges, list);
        }
    }
}
