//! Alist text format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```

use std::fmt::Write;

use super::ParityCheck;
use crate::error::{Error, Result};

pub(super) fn write(pc: &ParityCheck) -> String {
    let max_col = pc.columns().iter().map(Vec::len).max().unwrap_or(0);
    let max_row = pc.rows().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let join = |xs: Vec<String>| xs.join(" ");
    writeln!(out, "{} {}", pc.n(), pc.m()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", join(pc.columns().iter().map(|c| c.len().to_string()).collect())).unwrap();
    writeln!(out, "{}", join(pc.rows().iter().map(|r| r.len().to_string()).collect())).unwrap();
    for (lists, width) in [(pc.columns(), max_col), (pc.rows(), max_row)] {
        for list in lists {
            let mut entries: Vec<String> = list.iter().map(|i| (i + 1).to_string()).collect();
            entries.resize(width, "0".to_string());
            writeln!(out, "{}", join(entries)).unwrap();
        }
    }
    out
}

pub(super) fn read(text: &str) -> Result<ParityCheck> {
    let bad = |msg: &str| Error::Alist(msg.to_string());
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut numbers = |what: &str| -> Result<Vec<usize>> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad integer {t:?} in {what}"))))
            .collect()
    };

    let dims = numbers("dimensions")?;
    let [n, m] = dims[..] else { return Err(bad("first line must hold n and m")) };
    let _max_degrees = numbers("maximum degrees")?;
    let col_deg = numbers("column degrees")?;
    let row_deg = numbers("row degrees")?;
    if col_deg.len() != n || row_deg.len() != m {
        return Err(bad("degree list lengths do not match n and m"));
    }

    let mut cols = Vec::with_capacity(n);
    for (v, &deg) in col_deg.iter().enumerate() {
        let entries: Vec<usize> = numbers("column list")?.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != deg || entries.iter().any(|&r| r > m) {
            return Err(bad(&format!("column {} does not match its degree", v + 1)));
        }
        cols.push(entries.into_iter().map(|r| r - 1).collect::<Vec<_>>());
    }
    let mut rows = Vec::with_capacity(m);
    for (r, &deg) in row_deg.iter().enumerate() {
        let mut entries: Vec<usize> = numbers("row list")?.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != deg || entries.iter().any(|&c| c > n) {
            return Err(bad(&format!("row {} does not match its degree", r + 1)));
        }
        entries.iter_mut().for_each(|c| *c -= 1);
        entries.sort_unstable();
        rows.push(entries);
    }

    let pc = ParityCheck::from_columns(m, cols)?;
    if pc.rows() != rows.as_slice() {
        return Err(bad("row lists are inconsistent with column lists"));
    }
    Ok(pc)
}
