//! Sparse binary parity-check matrices with alist and dense-text I/O.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("column index {index} out of range for {n_cols} columns")]
    IndexOutOfRange { index: usize, n_cols: usize },
    #[error("malformed alist: {0}")]
    Alist(String),
    #[error("malformed dense matrix: {0}")]
    Dense(String),
}

/// Binary parity-check matrix stored by row supports `I_j` and column
/// supports `J_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheck {
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheck {
    /// Builds a matrix from row supports; duplicates are merged.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let mut cols = vec![Vec::new(); n_cols];
        let mut clean = Vec::with_capacity(rows.len());
        for (j, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            for &i in &row {
                if i >= n_cols {
                    return Err(MatrixError::IndexOutOfRange { index: i, n_cols });
                }
                cols[i].push(j);
            }
            clean.push(row);
        }
        Ok(Self { n_cols, rows: clean, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// `I_j`: the columns checked by row `j`, ascending.
    pub fn row(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    /// `J_i`: the rows touching column `i`, ascending.
    pub fn col(&self, i: usize) -> &[usize] {
        &self.cols[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn entry(&self, j: usize, i: usize) -> bool {
        self.rows[j].binary_search(&i).is_ok()
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when the matrix is square and row `j+1` is row `j` shifted
    /// cyclically right by one position.
    pub fn is_circulant(&self) -> bool {
        let n = self.n_cols;
        if self.rows.len() != n {
            return false;
        }
        (0..n).all(|j| {
            let next = (j + 1) % n;
            let mut shifted: Vec<usize> = self.rows[j].iter().map(|&i| (i + 1) % n).collect();
            shifted.sort_unstable();
            shifted == self.rows[next]
        })
    }

    /// Syndrome check over GF(2).
    pub fn is_codeword(&self, x: &[bool]) -> bool {
        x.len() == self.n_cols && self.rows.iter().all(|row| row.iter().filter(|&&i| x[i]).count() % 2 == 0)
    }

    /// Standard alist layout (1-indexed, zero padding for irregular degrees).
    pub fn to_alist(&self) -> String {
        let (n, m) = (self.n_cols, self.rows.len());
        let (wc, wr) = (self.max_col_weight(), self.max_row_weight());
        let mut out = String::new();
        let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{n} {m}").unwrap();
        writeln!(out, "{wc} {wr}").unwrap();
        writeln!(out, "{}", join(&mut self.cols.iter().map(Vec::len))).unwrap();
        writeln!(out, "{}", join(&mut self.rows.iter().map(Vec::len))).unwrap();
        for (lists, width) in [(&self.cols, wc), (&self.rows, wr)] {
            for list in lists {
                let padded = list.iter().map(|&x| x + 1).chain(std::iter::repeat(0));
                writeln!(out, "{}", join(&mut padded.take(width.max(list.len())))).unwrap();
            }
        }
        out
    }

    pub fn from_alist(text: &str) -> Result<Self, MatrixError> {
        let bad = |msg: &str| MatrixError::Alist(msg.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut header = |what: &str| -> Result<Vec<usize>, MatrixError> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
            line.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad number in {what}"))))
                .collect()
        };
        let dims = header("dimensions")?;
        let [n, m] = dims[..] else {
            return Err(bad("dimension line needs two numbers"));
        };
        let _max = header("max degrees")?;
        let col_deg = header("column degrees")?;
        let row_deg = header("row degrees")?;
        if col_deg.len() != n || row_deg.len() != m {
            return Err(bad("degree list length mismatch"));
        }
        let mut read_lists = |count: usize, degs: &[usize], bound: usize, what: &str| {
            (0..count)
                .map(|k| {
                    let entries: Vec<usize> = header(what)?.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
                    if entries.len() != degs[k] || entries.iter().any(|&x| x >= bound) {
                        return Err(bad(&format!("{what} {k} inconsistent with its degree")));
                    }
                    Ok(entries)
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let cols = read_lists(n, &col_deg, m, "column list")?;
        let rows = read_lists(m, &row_deg, n, "row list")?;
        let h = Self::from_rows(n, rows)?;
        let mut sorted_cols = cols;
        sorted_cols.iter_mut().for_each(|c| c.sort_unstable());
        if sorted_cols != h.cols {
            return Err(bad("column lists disagree with row lists"));
        }
        Ok(h)
    }

    /// One line of `0`/`1` characters per row.
    pub fn to_dense(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (self.n_cols + 1));
        for row in &self.rows {
            let mut line = vec![b'0'; self.n_cols];
            for &i in row {
                line[i] = b'1';
            }
            out.push_str(std::str::from_utf8(&line).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn from_dense(text: &str) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        let mut width = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bits: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if *width.get_or_insert(bits.len()) != bits.len() {
                return Err(MatrixError::Dense("ragged rows".into()));
            }
            let mut row = Vec::new();
            for (i, c) in bits.into_iter().enumerate() {
                match c {
                    '1' => row.push(i),
                    '0' => {}
                    other => return Err(MatrixError::Dense(format!("unexpected {other:?}"))),
                }
            }
            rows.push(row);
        }
        Self::from_rows(width.unwrap_or(0), rows)
    }

    /// Hex SHA-256 of the alist rendering, used as a provenance id.
    pub fn matrix_id(&self) -> String {
        let digest = Sha256::digest(self.to_alist().as_bytes());
        digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }
}
