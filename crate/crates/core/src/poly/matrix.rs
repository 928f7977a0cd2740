use super::Polynomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::ScalarMatrix;

/// Dense matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<K: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn new(rows: Vec<Vec<Polynomial<K>>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries: Vec<Polynomial<K>> = rows.into_iter().flatten().collect();
        if let Some(first) = entries.first() {
            for e in &entries[1..] {
                first.check_compatible(e)?;
            }
        }
        Ok(PolyMatrix { rows: nrows, cols: ncols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nvars(&self) -> Option<usize> {
        self.entries.first().map(|e| e.nvars())
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial<K> {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Polynomial<K>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Polynomial<K>>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Matrix-vector product with a vector of polynomials.
    pub fn mul_vec(&self, v: &[Polynomial<K>]) -> Result<Vec<Polynomial<K>>> {
        if v.len() != self.cols {
            return Err(Error::Length { expected: self.cols, got: v.len() });
        }
        (0..self.rows)
            .map(|r| {
                let mut acc: Option<Polynomial<K>> = None;
                for (a, b) in self.row(r).iter().zip(v) {
                    let t = a.checked_mul(b)?;
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.checked_add(&t)?,
                    });
                }
                acc.ok_or_else(|| Error::Dimension("empty row".into()))
            })
            .collect()
    }

    /// Evaluate every entry at a point.
    pub fn eval(&self, point: &[K]) -> Result<ScalarMatrix<K>> {
        let values = self.entries.iter().map(|e| e.evaluate(point)).collect::<Result<Vec<_>>>()?;
        Ok(ScalarMatrix::from_flat(self.rows, self.cols, values))
    }
}
