//! Instance files.
//!
//! Canonical text form:
//!
//! ```text
//! n 2
//! M 0: (0,0) (1,1)
//! M 1: (0,1) (1,0)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The JSON form
//! `{"matchings": [[[0,0],[1,1]], [[0,1],[1,0]]]}` is accepted as well and
//! detected by a leading `{`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::family::{validate_family, FamilyError, MatchingFamily};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: FamilyError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ParseError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    matchings: Vec<Vec<[i64; 2]>>,
}

/// Canonical text bytes for `family`.
pub fn to_canonical(family: &MatchingFamily) -> String {
    let mut out = format!("n {}\n", family.n());
    for (i, m) in family.matchings().iter().enumerate() {
        write!(out, "M {i}:").unwrap();
        for e in m.edges() {
            write!(out, " ({},{})", e.left, e.right).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn to_json(family: &MatchingFamily) -> String {
    let inst = JsonInstance {
        matchings: family
            .matchings()
            .iter()
            .map(|m| m.edges().iter().map(|e| [e.left as i64, e.right as i64]).collect())
            .collect(),
    };
    serde_json::to_string(&inst).expect("plain integers serialize")
}

/// First 16 hex digits of the SHA-256 of the canonical text.
pub fn digest(family: &MatchingFamily) -> String {
    let hash = Sha256::digest(to_canonical(family).as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn parse_instance(text: &str) -> Result<MatchingFamily, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn read_instance(path: &Path) -> Result<MatchingFamily, ParseError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, family: &MatchingFamily) -> std::io::Result<()> {
    std::fs::write(path, to_canonical(family))
}

fn parse_json(text: &str) -> Result<MatchingFamily, ParseError> {
    let inst: JsonInstance =
        serde_json::from_str(text).map_err(|e| ParseError::syntax(e.line(), e.column(), e.to_string()))?;
    let raw: Vec<Vec<(i64, i64)>> = inst
        .matchings
        .into_iter()
        .map(|m| m.into_iter().map(|[u, w]| (u, w)).collect())
        .collect();
    validate_family(&raw).map_err(|source| ParseError::Invalid { line: 1, source })
}

/// Byte cursor over one line, tracking a 1-based column.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.bytes.len()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }
}

fn parse_text(text: &str) -> Result<MatchingFamily, ParseError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut raw: Vec<Vec<(i64, i64)>> = Vec::new();
    let mut matching_lines: Vec<usize> = Vec::new();
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cur = Cursor {
            bytes: line.as_bytes(),
            pos: 0,
            line: line_no,
        };
        cur.skip_ws();
        match cur.bytes.get(cur.pos) {
            Some(b'n') if declared.is_none() => {
                cur.pos += 1;
                let n = cur.int()?;
                if n < 0 {
                    return Err(ParseError::syntax(line_no, 3, "matching count must be non-negative"));
                }
                if !cur.at_end() {
                    return Err(cur.err("unexpected trailing input"));
                }
                declared = Some((n as usize, line_no));
            }
            Some(b'M') if declared.is_some() => {
                cur.pos += 1;
                let index_col = cur.column() + 1;
                let index = cur.int()?;
                if index != raw.len() as i64 {
                    return Err(ParseError::syntax(
                        line_no,
                        index_col,
                        format!("expected matching index {}, found {index}", raw.len()),
                    ));
                }
                cur.expect(b':')?;
                let mut edges = Vec::new();
                while !cur.at_end() {
                    cur.expect(b'(')?;
                    let u = cur.int()?;
                    cur.expect(b',')?;
                    let w = cur.int()?;
                    cur.expect(b')')?;
                    edges.push((u, w));
                }
                raw.push(edges);
                matching_lines.push(line_no);
            }
            _ if declared.is_none() => return Err(cur.err("expected header `n <count>`")),
            _ => return Err(cur.err("expected `M <index>: ...`")),
        }
    }
    let Some((n, header_line)) = declared else {
        return Err(ParseError::syntax(last_line.max(1), 1, "missing header `n <count>`"));
    };
    if raw.len() != n {
        return Err(ParseError::syntax(
            header_line,
            1,
            format!("header declares {n} matchings, found {}", raw.len()),
        ));
    }
    validate_family(&raw).map_err(|source| {
        let line = match &source {
            FamilyError::DuplicateVertexInMatching { matching, .. }
            | FamilyError::DuplicateEdge { matching, .. }
            | FamilyError::NegativeVertexId { matching, .. }
            | FamilyError::VertexIdTooLarge { matching, .. } => matching_lines[*matching],
            FamilyError::IndexOutOfRange { .. } => header_line,
        };
        ParseError::Invalid { line, source }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::drisko_tight;

    #[test]
    fn canonical_text() {
        let f = validate_family(&[vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]).unwrap();
        assert_eq!(to_canonical(&f), "n 2\nM 0: (0,0) (1,1)\nM 1: (0,1) (1,0)\n");
        assert_eq!(parse_instance(&to_canonical(&f)).unwrap(), f);
        assert_eq!(parse_instance(&to_json(&f)).unwrap(), f);
    }

    #[test]
    fn lenient_whitespace_and_comments() {
        let text = "# instance\n\nn 2\nM 0:(0, 0)  ( 1 ,1 )\nM 1:\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.matching(0).len(), 2);
        assert!(f.matching(1).is_empty());
    }

    #[test]
    fn json_form() {
        let f = parse_instance(r#"{"matchings": [[[0,0]], [[1,0],[0,1]]]}"#).unwrap();
        assert_eq!(to_canonical(&f), "n 2\nM 0: (0,0)\nM 1: (1,0) (0,1)\n");
    }

    fn syntax_at(text: &str) -> (usize, usize) {
        match parse_instance(text).unwrap_err() {
            ParseError::Syntax { line, column, .. } => (line, column),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(syntax_at("n 1\nM 0: (0;0)\n"), (2, 8));
        assert_eq!(syntax_at("M 0: (0,0)\n"), (1, 1));
        assert_eq!(syntax_at("n 1\nM 1: (0,0)\n"), (2, 3));
        assert_eq!(syntax_at("n 2\nM 0: (0,0)\n").0, 1);
        assert_eq!(syntax_at("n 1\nM 0: (x,0)\n"), (2, 7));
        assert_eq!(syntax_at("{\"matchings\": [[[0]]]}").0, 1);
        assert_eq!(syntax_at(""), (1, 1));
    }

    #[test]
    fn validation_errors_carry_lines() {
        match parse_instance("n 2\nM 0: (0,0)\nM 1: (0,0) (0,1)\n").unwrap_err() {
            ParseError::Invalid { line, source } => {
                assert_eq!(line, 3);
                assert!(matches!(source, FamilyError::DuplicateVertexInMatching { .. }));
            }
            other => panic!("{other}"),
        }
        assert!(matches!(
            parse_instance("n 1\nM 0: (-1,0)\n").unwrap_err(),
            ParseError::Invalid {
                line: 2,
                source: FamilyError::NegativeVertexId { .. }
            }
        ));
    }

    #[test]
    fn digest_is_stable() {
        let a = digest(&drisko_tight(3).unwrap());
        assert_eq!(a.len(), 16);
        assert_eq!(a, digest(&drisko_tight(3).unwrap()));
        assert_ne!(a, digest(&drisko_tight(4).unwrap()));
    }
}
