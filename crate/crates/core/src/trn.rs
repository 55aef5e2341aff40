//! The `.trn` text format.
//!
//! ```text
//! # optional comment lines
//! 3
//! 010
//! 001
//! 100
//! ```
//!
//! The first non-comment line is `n`; the next `n` non-comment lines hold the
//! adjacency rows, character `j` of row `i` being `1` iff `i -> j`. Trailing
//! whitespace is ignored. Blank lines are skipped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

pub fn parse(text: &str) -> Result<Tournament> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid vertex count {header:?}"),
    })?;

    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {n} rows, found {}", rows.len()),
        })?;
        let row = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Parse {
                    line,
                    msg: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("row has {} cells, expected {n}", row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: "trailing content after last row".into(),
        });
    }
    Tournament::from_matrix(n, &rows)
}

pub fn format(t: &Tournament) -> String {
    let mut s = format!("{}\n", t.n());
    for row in t.matrix() {
        s.extend(row.iter().map(|&c| if c == 1 { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn read(path: impl AsRef<Path>) -> Result<Tournament> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write(path: impl AsRef<Path>, t: &Tournament) -> Result<()> {
    std::fs::write(path, format(t))?;
    Ok(())
}
