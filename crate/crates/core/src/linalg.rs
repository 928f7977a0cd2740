//! Exact dense linear algebra over a [`Field`].
//!
//! Row reduction dispatches through [`Field::row_reduce`]: rationals use
//! fraction-free (Bareiss) elimination on integer rows, prime fields use
//! plain Gauss-Jordan. Both pick the first nonzero entry in column order as
//! pivot, ties broken by row order, so the reduced form is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeField, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix<K: Field> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<K: Field> {
    pub rref: ScalarMatrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> Echelon<K> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis<K: Field> {
    pub dim: usize,
    pub vectors: Vec<Vec<K>>,
}

impl<K: Field> KernelBasis<K> {
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Every vector is annihilated by `m`.
    pub fn verify(&self, m: &ScalarMatrix<K>) -> bool {
        self.vectors.iter().all(|v| m.mul_vec(v).map(|w| w.iter().all(|x| x.is_zero())).unwrap_or(false))
    }
}

impl<K: Field> ScalarMatrix<K> {
    pub fn new(rows: Vec<Vec<K>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<K> = rows.into_iter().flatten().collect();
        if let Some(first) = data.first() {
            let ctx = first.ctx();
            if data.iter().any(|x| x.ctx() != ctx) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(ScalarMatrix { rows: nrows, cols: ncols, data })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<K>) -> Self {
        assert_eq!(data.len(), rows * cols);
        ScalarMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &K::Ctx) -> Self {
        ScalarMatrix { rows, cols, data: vec![K::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: &K::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, K::one(ctx));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        ScalarMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Rows reordered so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let rows: Vec<Vec<K>> = perm.iter().map(|&r| self.row(r).to_vec()).collect();
        ScalarMatrix { rows: self.rows, cols: self.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        self.transpose().permute_rows(perm).transpose()
    }

    pub fn mul_vec(&self, v: &[K]) -> Result<Vec<K>> {
        if v.len() != self.cols {
            return Err(Error::Length { expected: self.cols, got: v.len() });
        }
        let Some(ctx) = v.first().map(|x| x.ctx()) else {
            return Err(Error::Dimension("product with an empty vector".into()));
        };
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = K::zero(&ctx);
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn echelon(&self) -> Echelon<K> {
        K::row_reduce(self)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel(&self) -> KernelBasis<K> {
        let ech = self.echelon();
        kernel_from_echelon(&ech, self.cols)
    }

    /// One solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[K]) -> Result<Option<Vec<K>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side has {} entries, matrix has {} rows", b.len(), self.rows)));
        }
        let mut aug = Vec::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            aug.extend_from_slice(self.row(r));
            aug.push(b[r].clone());
        }
        let aug = ScalarMatrix { rows: self.rows, cols: self.cols + 1, data: aug };
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let ctx = match b.first().or(self.data.first()) {
            Some(x) => x.ctx(),
            None => return Ok(Some(Vec::new())),
        };
        let mut x = vec![K::zero(&ctx); self.cols];
        for (i, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.rref.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<K> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let Some(first) = self.data.first() else {
            return Err(Error::Dimension("determinant of an empty matrix".into()));
        };
        let ctx = first.ctx();
        let mut m = self.clone();
        let mut det = K::one(&ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(K::zero(&ctx));
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                let factor = m.get(r, c).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(c, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }
}

impl ScalarMatrix<Rational> {
    pub fn reduce_mod(&self, field: PrimeField) -> Option<ScalarMatrix<Fp>> {
        let data = self.data.iter().map(|q| Fp::from_rational(q, &field)).collect::<Option<Vec<_>>>()?;
        Some(ScalarMatrix { rows: self.rows, cols: self.cols, data })
    }
}

/// `a` and `b` are nonzero and represent the same projective point.
pub fn proportional<K: Field>(a: &[K], b: &[K]) -> bool {
    if a.len() != b.len() || a.iter().all(|x| x.is_zero()) || b.iter().all(|x| x.is_zero()) {
        return false;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i].mul(&b[j]) != a[j].mul(&b[i]) {
                return false;
            }
        }
    }
    true
}

/// Scale a nonzero rational vector to coprime integers with the first
/// nonzero entry positive. The zero vector is returned unchanged.
pub fn normalize_projective(v: &[Rational]) -> Vec<Rational> {
    let Some(c) = crate::field::rational_content(v) else {
        return v.to_vec();
    };
    let first_negative = v.iter().find(|x| !Zero::is_zero(*x)).is_some_and(|x| x < &<Rational as Zero>::zero());
    let c = if first_negative { -c } else { c };
    v.iter().map(|x| x / &c).collect()
}

fn kernel_from_echelon<K: Field>(ech: &Echelon<K>, cols: usize) -> KernelBasis<K> {
    let ctx = match ech.rref.data.first() {
        Some(x) => x.ctx(),
        None => {
            return KernelBasis { dim: cols, vectors: Vec::new() };
        }
    };
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![K::zero(&ctx); cols];
        v[free] = K::one(&ctx);
        for (i, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = ech.rref.get(i, free).neg();
        }
        vectors.push(v);
    }
    KernelBasis { dim: cols, vectors }
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn gauss_jordan<K: Field>(m: &ScalarMatrix<K>) -> Echelon<K> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(p, r);
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..a.cols {
            let v = a.get(r, j).mul(&inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                let v = a.get(i, j).sub(&factor.mul(a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rref: a, pivots }
}

/// Fraction-free elimination over the integers followed by exact
/// back-substitution. Each row is first scaled to integers, which does not
/// change the row space.
pub fn bareiss_rref(m: &ScalarMatrix<Rational>) -> Echelon<Rational> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    // back-substitution to reduced form
    let mut q: Vec<Vec<Rational>> =
        a.into_iter().map(|row| row.into_iter().map(Rational::from_integer).collect()).collect();
    for (i, &pc) in pivots.iter().enumerate().rev() {
        let inv = q[i][pc].recip();
        for j in pc..cols {
            q[i][j] = &q[i][j] * &inv;
        }
        for k in 0..i {
            if Zero::is_zero(&q[k][pc]) {
                continue;
            }
            let factor = q[k][pc].clone();
            for j in pc..cols {
                let v = &q[k][j] - &factor * &q[i][j];
                q[k][j] = v;
            }
        }
    }
    let data = q.into_iter().flatten().collect();
    Echelon { rref: ScalarMatrix { rows, cols, data }, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ratio, rational};

    fn qm(rows: &[&[i64]]) -> ScalarMatrix<Rational> {
        ScalarMatrix::new(rows.iter().map(|r| r.iter().map(|&v| rational(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn diagonal_rank() {
        let m = qm(&[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 0]]);
        assert_eq!(m.rank(), 3);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(k.verify(&m));
    }

    #[test]
    fn identity_kernel_is_empty() {
        assert!(ScalarMatrix::<Rational>::identity(4, &()).kernel().is_empty());
    }

    #[test]
    fn bareiss_matches_gauss_jordan() {
        let m = ScalarMatrix::new(vec![
            vec![ratio(1, 2), rational(3), rational(-1), rational(0)],
            vec![rational(1), rational(6), ratio(-2, 3), rational(5)],
            vec![rational(2), rational(12), rational(-4), rational(0)],
        ])
        .unwrap();
        assert_eq!(bareiss_rref(&m), gauss_jordan(&m));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = qm(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[rational(3), rational(1)]).unwrap(), Some(vec![rational(2), rational(1)]));
        let s = qm(&[&[1, 1], &[2, 2]]);
        assert_eq!(s.solve(&[rational(1), rational(3)]).unwrap(), None);
        assert!(s.solve(&[rational(1)]).is_err());
    }

    #[test]
    fn determinant_values() {
        assert_eq!(qm(&[&[2, 1], &[7, 4]]).determinant().unwrap(), rational(1));
        assert_eq!(qm(&[&[0, 1], &[1, 0]]).determinant().unwrap(), rational(-1));
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).determinant().unwrap(), rational(0));
    }

    #[test]
    fn projective_helpers() {
        let a = vec![ratio(-1, 2), rational(0), rational(3)];
        assert_eq!(normalize_projective(&a), vec![rational(1), rational(0), rational(-6)]);
        assert!(proportional(&a, &normalize_projective(&a)));
        assert!(!proportional(&a, &[rational(1), rational(1), rational(-6)]));
        assert!(!proportional(&a, &[rational(0), rational(0), rational(0)]));
    }

    #[test]
    fn prime_field_rank() {
        let m = qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let mp = m.reduce_mod(PrimeField::default()).unwrap();
        assert_eq!(mp.rank(), 2);
        assert!(mp.kernel().verify(&mp));
    }
}
