//! Dense rational matrices and the exact linear-algebra kernels the rest of
//! the crate is built on: reduced row echelon form, kernel bases, right
//! inverses and the fully classified 2x2 eigenvalue problem.
//!
//! Pivots are always the first nonzero entry in column order, so every result
//! is deterministic and reproducible.

use crate::error::{Error, Result};
use crate::rational::{rational_sqrt, Rational};
use num_traits::{One, Zero};

/// Column vector with rational entries.
pub type QVector = Vec<Rational>;

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Output of [`QMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// The unique reduced row echelon form.
    pub reduced: QMatrix,
    /// Pivot column indices in increasing order.
    pub pivots: Vec<usize>,
    /// Rank, equal to `pivots.len()`.
    pub rank: usize,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        QMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = QMatrix::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> QVector {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> QVector {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix::new(self.rows, self.cols, self.entries.iter().map(|a| a * s).collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        QMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    /// Reduced row echelon form with pivot columns and rank.
    ///
    /// The pivot in each column is the first nonzero entry scanning down, so
    /// the pivot columns are exactly the leftmost maximal independent set of
    /// columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    let a = m.at(src, c).clone();
                    let b = m.at(pivot_row, c).clone();
                    *m.at_mut(src, c) = b;
                    *m.at_mut(pivot_row, c) = a;
                }
            }
            let inv = {
                let p = m.at(pivot_row, col).clone();
                Rational::one() / p
            };
            for c in col..m.cols {
                let v = m.at(pivot_row, c).clone() * &inv;
                *m.at_mut(pivot_row, c) = v;
            }
            for r in 0..m.rows {
                if r == pivot_row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let sub = &factor * m.at(pivot_row, c);
                    *m.at_mut(r, c) -= sub;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space; empty iff the columns are independent.
    ///
    /// One basis vector per free column, with a 1 in the free position.
    pub fn kernel_basis(&self) -> Vec<QVector> {
        let Rref { reduced, pivots, rank } = self.rref();
        let mut basis = Vec::new();
        let mut next_pivot = 0usize;
        for free in 0..self.cols {
            if next_pivot < pivots.len() && pivots[next_pivot] == free {
                next_pivot += 1;
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -reduced.at(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A right inverse `X` with `self * X = I`.
    ///
    /// Requires full row rank (in particular `rows <= cols`). Free variables
    /// are set to zero, which makes the result deterministic.
    pub fn right_inverse(&self) -> Result<QMatrix> {
        if self.rows > self.cols {
            return Err(Error::NotFullRowRank);
        }
        let aug = hstack(self, &QMatrix::identity(self.rows));
        let Rref { reduced, pivots, rank } = aug.rref();
        let lead: Vec<usize> = pivots.iter().copied().filter(|&p| p < self.cols).collect();
        if rank != self.rows || lead.len() != self.rows {
            return Err(Error::NotFullRowRank);
        }
        let mut x = QMatrix::zero(self.cols, self.rows);
        for (i, &p) in lead.iter().enumerate() {
            for j in 0..self.rows {
                *x.at_mut(p, j) = reduced.at(i, self.cols + j).clone();
            }
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        match self.right_inverse() {
            Ok(inv) => Some(inv),
            Err(_) => None,
        }
    }

    /// Determinant of a square matrix by exact elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Rational::zero();
            };
            if src != col {
                for c in 0..n {
                    let a = m.at(src, c).clone();
                    let b = m.at(col, c).clone();
                    *m.at_mut(src, c) = b;
                    *m.at_mut(col, c) = a;
                }
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone() / &pivot;
                for c in col..n {
                    let sub = &factor * m.at(col, c);
                    *m.at_mut(r, c) -= sub;
                }
            }
        }
        det
    }

    /// Characteristic data and eigenstructure of a 2x2 matrix, fully
    /// classified over the rationals.
    pub fn eigen2x2(&self) -> Eigen2x2 {
        assert_eq!((self.rows, self.cols), (2, 2), "eigen2x2 needs a 2x2 matrix");
        let trace = self.at(0, 0) + self.at(1, 1);
        let det = self.det();
        let discriminant = &trace * &trace - Rational::from_integer(4.into()) * &det;
        let outcome = match rational_sqrt(&discriminant) {
            None => EigenOutcome::IrrationalConjugatePair { discriminant },
            Some(s) if s.is_zero() => EigenOutcome::RepeatedRational {
                value: trace.clone() / Rational::from_integer(2.into()),
            },
            Some(s) => {
                let two = Rational::from_integer(2.into());
                let hi = (&trace + &s) / &two;
                let lo = (&trace - &s) / &two;
                let pairs = [hi, lo].map(|value| {
                    let shifted = QMatrix::from_rows(vec![
                        vec![self.at(0, 0) - &value, self.at(0, 1).clone()],
                        vec![self.at(1, 0).clone(), self.at(1, 1) - &value],
                    ]);
                    let kernel = shifted.kernel_basis();
                    assert_eq!(kernel.len(), 1, "distinct eigenvalue must have a 1-dim eigenspace");
                    let vector = normalize_last_nonzero(&kernel[0])
                        .expect("eigenvector is nonzero");
                    (value, vector)
                });
                EigenOutcome::DistinctRational { pairs }
            }
        };
        Eigen2x2 { trace, det, outcome }
    }
}

/// Characteristic polynomial `t^2 - trace*t + det` plus the classified roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigen2x2 {
    pub trace: Rational,
    pub det: Rational,
    pub outcome: EigenOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenOutcome {
    /// Two distinct rational eigenvalues, larger first, each with one
    /// eigenvector normalized so its last nonzero coordinate is 1.
    DistinctRational { pairs: [(Rational, QVector); 2] },
    /// Rational double root.
    RepeatedRational { value: Rational },
    /// Irreducible characteristic polynomial; carries `trace^2 - 4*det`,
    /// which is not a rational square.
    IrrationalConjugatePair { discriminant: Rational },
}

/// Concatenates two matrices side by side.
pub fn hstack(a: &QMatrix, b: &QMatrix) -> QMatrix {
    assert_eq!(a.rows(), b.rows());
    let mut m = QMatrix::zero(a.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            *m.at_mut(r, c) = a.at(r, c).clone();
        }
        for c in 0..b.cols() {
            *m.at_mut(r, a.cols() + c) = b.at(r, c).clone();
        }
    }
    m
}

/// Scales a vector so its last nonzero coordinate is 1; `None` for zero.
pub fn normalize_last_nonzero(v: &[Rational]) -> Option<QVector> {
    let last = v.iter().rposition(|x| !x.is_zero())?;
    let inv = Rational::one() / v[last].clone();
    Some(v.iter().map(|x| x * &inv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = QMatrix::identity(2);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);

        let z = QMatrix::zero(3, 4);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_worked_flattening_has_rank_2() {
        // First flattening of the reshaped 6x2x2 running example.
        let a = m(&[
            &[12, 8, 6, 4],
            &[30, 20, 15, 10],
            &[8, 8, 5, 6],
            &[35, 38, 23, 30],
            &[16, 16, 10, 12],
            &[52, 64, 37, 54],
        ]);
        assert_eq!(a.rank(), 2);
        // The first two columns are the pivot columns.
        assert_eq!(a.rref().pivots, vec![0, 1]);
    }

    #[test]
    fn rref_is_idempotent() {
        let a = m(&[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
        let r = a.rref();
        let rr = r.reduced.rref();
        assert_eq!(rr.reduced, r.reduced);
        assert_eq!(rr.pivots, r.pivots);
    }

    #[test]
    fn kernel_basis_cases() {
        assert!(QMatrix::identity(2).kernel_basis().is_empty());

        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        let v = &k[0];
        assert_eq!(&v[0] * rat(-1), v[1].clone() * rat(1) * rat(-1) * rat(-1));
        assert_eq!(v[0].clone() + v[1].clone(), rat(0));

        // every kernel vector is an exact solution
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        for v in a.kernel_basis() {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn right_inverse_examples() {
        let id = QMatrix::identity(2);
        assert_eq!(id.right_inverse().unwrap(), id);

        let d = QMatrix::from_rows(vec![vec![rat(2), rat(0)], vec![rat(0), rat(4)]]);
        let want = QMatrix::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(0), ratio(1, 4)]]);
        assert_eq!(d.right_inverse().unwrap(), want);

        let a = m(&[&[1, 0, 1], &[0, 1, 0]]);
        let x = a.right_inverse().unwrap();
        assert_eq!(a.mul(&x), QMatrix::identity(2));

        assert_eq!(m(&[&[1, 1], &[2, 2]]).right_inverse(), Err(Error::NotFullRowRank));
        assert_eq!(m(&[&[1], &[0]]).right_inverse(), Err(Error::NotFullRowRank));
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn eigen2x2_worked_example() {
        // Appears as C1*C2^{-1} in the running 3x2x2x2 example.
        let m = QMatrix::from_rows(vec![
            vec![ratio(5, 2), rat(1)],
            vec![ratio(-3, 4), ratio(1, 2)],
        ]);
        let e = m.eigen2x2();
        assert_eq!(e.trace, rat(3));
        assert_eq!(e.det, rat(2));
        match e.outcome {
            EigenOutcome::DistinctRational { pairs } => {
                assert_eq!(pairs[0].0, rat(2));
                assert_eq!(pairs[0].1, vec![rat(-2), rat(1)]);
                assert_eq!(pairs[1].0, rat(1));
                assert_eq!(pairs[1].1, vec![ratio(-2, 3), rat(1)]);
                for (value, vector) in &pairs {
                    let mv = m.mul_vec(vector);
                    let scaled: QVector = vector.iter().map(|x| x * value).collect();
                    assert_eq!(mv, scaled);
                }
            }
            other => panic!("expected distinct rational eigenvalues, got {other:?}"),
        }
    }

    #[test]
    fn eigen2x2_repeated_and_swap() {
        match QMatrix::identity(2).eigen2x2().outcome {
            EigenOutcome::RepeatedRational { value } => assert_eq!(value, rat(1)),
            other => panic!("unexpected {other:?}"),
        }

        let swap = m(&[&[0, 1], &[1, 0]]);
        match swap.eigen2x2().outcome {
            EigenOutcome::DistinctRational { pairs } => {
                assert_eq!(pairs[0].0, rat(1));
                assert_eq!(pairs[0].1, vec![rat(1), rat(1)]);
                assert_eq!(pairs[1].0, rat(-1));
                assert_eq!(pairs[1].1, vec![rat(-1), rat(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigen2x2_irrational() {
        let rot = m(&[&[0, -1], &[1, 0]]);
        match rot.eigen2x2().outcome {
            EigenOutcome::IrrationalConjugatePair { discriminant } => {
                assert_eq!(discriminant, rat(-4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
