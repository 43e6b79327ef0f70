use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::error::{Error, Result};

pub type RatVector = Vec<Rat>;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from row vectors. An empty list yields a `0 x cols`
    /// matrix only through [`RatMatrix::zeros`]; here it gives `0 x 0`.
    pub fn from_rows(rows: Vec<RatVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::RaggedRows);
        }
        let n = rows.len();
        Ok(RatMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Like [`RatMatrix::from_rows`] but with an explicit column count, so an
    /// empty row list still has a meaningful shape.
    pub fn from_rows_with_cols(rows: Vec<RatVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let n = rows.len();
        Ok(RatMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer convenience constructor, panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().copied().map(Rat::from_int).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn diag(values: &[Rat]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Nilpotent Jordan block of size `n` (ones on the superdiagonal).
    pub fn jordan_block(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m.set(i - 1, i, Rat::one());
        }
        m
    }

    pub fn block_diag(blocks: &[RatMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[RatVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
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

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &RatMatrix, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `self^k` for square matrices; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let n = self.ensure_square()?;
        let mut acc = Self::identity(n);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[Rat]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `f * self` for a row vector (covector) `f`.
    pub fn apply_left(&self, f: &[Rat]) -> Result<RatVector> {
        if f.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: f.len(),
            });
        }
        let mut out = vec![Rat::zero(); self.cols];
        for (i, fi) in f.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &(fi * a);
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn is_zero_vector(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn unit_vector(n: usize, i: usize) -> RatVector {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

/// Reduced row echelon form and its rank.
pub fn rref(m: &RatMatrix) -> (RatMatrix, usize) {
    let (r, pivots) = rref_with_pivots(m);
    (r, pivots.len())
}

/// Gauss-Jordan elimination; returns the RREF together with its pivot
/// columns in increasing order.
pub fn rref_with_pivots(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a.get(r, c).recip().expect("pivot is nonzero");
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let delta = &factor * a.get(r, j);
                if !delta.is_zero() {
                    a.data[i * cols + j] -= &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Particular solution of `A x = b` with every free variable of the RREF set
/// to zero, or `None` when the system is inconsistent.
pub fn solve_canonical(a: &RatMatrix, b: &[Rat]) -> Result<Option<RatVector>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut aug = RatMatrix::zeros(a.rows, a.cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, bi.clone());
    }
    let (r, pivots) = rref_with_pivots(&aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, a.cols).clone();
    }
    Ok(Some(x))
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(Rat::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized as a list of rows of rational strings.
impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rat>>::deserialize(deserializer)?;
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fraction-free (Bareiss-style) integer elimination used as an
    /// independent rank oracle.
    fn integer_rank(rows: &[Vec<i64>]) -> usize {
        use num_bigint::BigInt;
        use num_traits::Zero;
        let mut a: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let n_rows = a.len();
        let n_cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..n_cols {
            let Some(p) = (rank..n_rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            for i in rank + 1..n_rows {
                let (piv, lead) = (a[rank][c].clone(), a[i][c].clone());
                let pivot_row = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = &*x * &piv - y * &lead;
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rref_examples() {
        let (r, rank) = rref(&RatMatrix::identity(2));
        assert_eq!((r, rank), (RatMatrix::identity(2), 2));
        let (r, rank) = rref(&RatMatrix::zeros(3, 3));
        assert_eq!((r, rank), (RatMatrix::zeros(3, 3), 0));
        let (r, rank) = rref(&RatMatrix::from_ints(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, RatMatrix::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!(rank, 1);
    }

    #[test]
    fn solve_canonical_examples() {
        let b = vec![Rat::from_int(3), Rat::new(-1, 2)];
        assert_eq!(
            solve_canonical(&RatMatrix::identity(2), &b).unwrap(),
            Some(b.clone())
        );
        assert_eq!(solve_canonical(&RatMatrix::zeros(2, 2), &b).unwrap(), None);
        let x = solve_canonical(&RatMatrix::from_ints(&[&[1, 1]]), &[Rat::one()]).unwrap();
        assert_eq!(x, Some(vec![Rat::one(), Rat::zero()]));
    }

    #[test]
    fn pow_and_transpose() {
        let j3 = RatMatrix::jordan_block(3);
        assert!(j3.pow(3).unwrap().is_zero());
        assert!(!j3.pow(2).unwrap().is_zero());
        assert_eq!(j3.pow(0).unwrap(), RatMatrix::identity(3));
        assert_eq!(j3.transpose().transpose(), j3);
        assert_eq!(j3.transpose().get(1, 0), &Rat::one());
    }

    #[test]
    fn apply_left_matches_transpose() {
        let m = RatMatrix::from_ints(&[&[1, 2, 0], &[0, -1, 3]]);
        let f = vec![Rat::from_int(2), Rat::new(1, 3)];
        assert_eq!(m.apply_left(&f).unwrap(), m.transpose().apply(&f).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn rank_agrees_with_fraction_free_elimination(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..6)
        ) {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let m = RatMatrix::from_ints(&refs);
            proptest::prop_assert_eq!(m.rank(), integer_rank(&rows));
            proptest::prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
