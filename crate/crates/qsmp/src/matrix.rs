//! Dense real and boolean matrices with the repo-wide text format.
//!
//! Matrices are stored row-major at desk scale (up to a few hundred rows).
//! The text format is line oriented: the first meaningful line is
//! `rows cols`, followed by `rows` lines of `cols` space-separated decimal
//! numbers. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Build from row-major entries. All entries must be finite and the
    /// shape nonempty.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::BadEntryCount { rows, cols, got: data.len() });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: i / cols, col: i % cols });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be nonempty");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn matmul(&self, rhs: &RealMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        let data = self.data.iter().map(|v| v * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, rhs: &RealMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RealMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &RealMatrix, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest absolute entrywise difference; shapes must agree.
    pub fn max_abs_diff(&self, rhs: &RealMatrix) -> Result<f64> {
        Ok(self.sub(rhs)?.max_abs())
    }

    /// cn(Q): maximum l2-norm over columns.
    pub fn column_norm(&self) -> f64 {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| {
                        let v = self.get(r, c);
                        v * v
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// rn(Q): maximum l2-norm over rows.
    pub fn row_norm(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// l2-norm of a single column.
    pub fn column_norm_at(&self, c: usize) -> f64 {
        (0..self.rows)
            .map(|r| {
                let v = self.get(r, c);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// l2-norm of a single row.
    pub fn row_norm_at(&self, r: usize) -> f64 {
        self.row(r).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm: l2-norm of all entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum of |a_ij - a_ji| over all pairs; 0 for symmetric matrices.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// True when every entry is exactly 0 or 1.
    pub fn is_boolean(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Parse the matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = meaningful_lines(text);
        let (rows, cols) = parse_header(lines.next())?;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, got {r}")))?;
            parse_row(line, cols, &mut data)?;
        }
        RealMatrix::new(rows, cols, data)
    }

    /// Serialize to the matrix text format. `f64` values use the shortest
    /// round-trip decimal representation, so output is deterministic.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Dense matrix with entries constrained to {0, 1}.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanMatrix(RealMatrix);

impl BooleanMatrix {
    pub fn new(m: RealMatrix) -> Result<Self> {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if v != 0.0 && v != 1.0 {
                    return Err(Error::NonBooleanEntry { row: r, col: c, value: v });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(RealMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(RealMatrix::identity(n))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        Self(RealMatrix::from_fn(rows, cols, |r, c| if f(r, c) { 1.0 } else { 0.0 }))
    }

    /// Entry as a bit.
    #[inline]
    pub fn bit(&self, r: usize, c: usize) -> u8 {
        if self.0.get(r, c) != 0.0 {
            1
        } else {
            0
        }
    }

    pub fn as_real(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_real(self) -> RealMatrix {
        self.0
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(RealMatrix::parse(text)?)
    }

    /// Zero-pad to `rows x cols`; existing entries keep their positions.
    pub fn pad_to(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows() || cols < self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "cannot pad {}x{} down to {rows}x{cols}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(Self::from_fn(rows, cols, |r, c| {
            r < self.rows() && c < self.cols() && self.bit(r, c) == 1
        }))
    }
}

impl Deref for BooleanMatrix {
    type Target = RealMatrix;

    fn deref(&self) -> &RealMatrix {
        &self.0
    }
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: Option<&str>) -> Result<(usize, usize)> {
    let line = line.ok_or_else(|| Error::Parse("missing 'rows cols' header".into()))?;
    let mut it = line.split_whitespace();
    let rows: usize = it
        .next()
        .ok_or_else(|| Error::Parse("missing row count".into()))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count in {line:?}")))?;
    let cols: usize = it
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count in {line:?}")))?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in header {line:?}")));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    Ok((rows, cols))
}

fn parse_row(line: &str, cols: usize, data: &mut Vec<f64>) -> Result<()> {
    let mut count = 0;
    for tok in line.split_whitespace() {
        let v: f64 = tok.parse().map_err(|_| Error::Parse(format!("bad number {tok:?}")))?;
        data.push(v);
        count += 1;
    }
    if count != cols {
        return Err(Error::Parse(format!("expected {cols} entries per row, got {count}")));
    }
    Ok(())
}
