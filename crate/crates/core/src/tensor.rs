//! Dense tensors over the rationals: flattenings, multilinear rank, the
//! concision process, factor permutation, pairwise reshapes and rank-1 /
//! basis-change utilities.
//!
//! Entries are stored in lexicographic multi-index order with the last index
//! fastest. Factor indices are 0-based throughout.

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, QVector};
use crate::rational::Rational;
use num_traits::Zero;

/// Dense order-`k` tensor with explicit shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    shape: Vec<usize>,
    entries: Vec<Rational>,
}

/// Tuple of the ranks of all flattenings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearRank(pub Vec<usize>);

/// Result of the concision process.
///
/// `core` is the concise tensor; `injections[l]` is the `n_l x n'_l` matrix
/// whose columns are the chosen basis of the image of the `l`-th flattening.
/// Factors whose flattening rank is 1 are dropped from the core entirely;
/// their direction vector survives as an `n_l x 1` injection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcisionResult {
    pub core: Tensor,
    pub injections: Vec<QMatrix>,
    pub dropped_factors: Vec<usize>,
    /// Original factor index of each core factor, in order.
    pub factor_map: Vec<usize>,
}

/// A tensor with two factors merged into one, placed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReshapePair {
    pub merged: Tensor,
    pub i: usize,
    pub j: usize,
    pub n_i: usize,
    pub n_j: usize,
}

impl Tensor {
    /// Builds a tensor, checking that the entry count matches the shape.
    pub fn new(shape: Vec<usize>, entries: Vec<Rational>) -> Result<Self> {
        if shape.iter().any(|&n| n == 0) {
            return Err(Error::ShapeMismatch("factor dimensions must be >= 1".into()));
        }
        let size: usize = shape.iter().product();
        if entries.len() != size {
            return Err(Error::ShapeMismatch(format!(
                "shape {:?} needs {} entries, got {}",
                shape,
                size,
                entries.len()
            )));
        }
        Ok(Tensor { shape, entries })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let size: usize = shape.iter().product();
        Tensor { shape, entries: vec![Rational::zero(); size] }
    }

    /// Order-0 tensor holding a single scalar.
    pub fn scalar(value: Rational) -> Self {
        Tensor { shape: vec![], entries: vec![value] }
    }

    /// Outer product of one vector per factor.
    pub fn rank1(vectors: &[QVector]) -> Self {
        let shape: Vec<usize> = vectors.iter().map(Vec::len).collect();
        let mut t = Tensor::zeros(shape.clone());
        let size = t.entries.len();
        for lin in 0..size {
            let idx = t.unrank(lin);
            let mut v = Rational::from_integer(1.into());
            for (l, &i) in idx.iter().enumerate() {
                v *= &vectors[l][i];
            }
            t.entries[lin] = v;
        }
        t
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    fn strides(&self) -> Vec<usize> {
        let k = self.shape.len();
        let mut s = vec![1usize; k];
        for l in (0..k.saturating_sub(1)).rev() {
            s[l] = s[l + 1] * self.shape[l + 1];
        }
        s
    }

    fn linear(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let strides = self.strides();
        idx.iter().zip(&strides).map(|(i, s)| i * s).sum()
    }

    fn unrank(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.shape.len()];
        for l in (0..self.shape.len()).rev() {
            idx[l] = lin % self.shape[l];
            lin /= self.shape[l];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.entries[self.linear(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Rational) {
        let lin = self.linear(idx);
        self.entries[lin] = value;
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> Tensor {
        Tensor { shape: self.shape.clone(), entries: self.entries.iter().map(|a| a * s).collect() }
    }

    /// The `factor`-th flattening: an `n_factor x prod(other dims)` matrix.
    ///
    /// Columns run lexicographically over the remaining indices in their
    /// original order, last index fastest.
    pub fn flatten(&self, factor: usize) -> Result<QMatrix> {
        let k = self.order();
        if factor >= k {
            return Err(Error::BadFactorIndex { index: factor, order: k });
        }
        let rows = self.shape[factor];
        let cols: usize = self.entries.len() / rows;
        let mut m = QMatrix::zero(rows, cols);
        for lin in 0..self.entries.len() {
            let idx = self.unrank(lin);
            let r = idx[factor];
            let mut c = 0usize;
            for (l, &i) in idx.iter().enumerate() {
                if l == factor {
                    continue;
                }
                c = c * self.shape[l] + i;
            }
            *m.at_mut(r, c) = self.entries[lin].clone();
        }
        Ok(m)
    }

    /// Ranks of all flattenings.
    pub fn multilinear_rank(&self) -> MultilinearRank {
        MultilinearRank(
            (0..self.order())
                .map(|l| self.flatten(l).expect("factor in range").rank())
                .collect(),
        )
    }

    /// Contracts factor `factor` with `m` (whose column count is the factor
    /// dimension), replacing that dimension by `m.rows()`.
    pub fn mode_multiply(&self, factor: usize, m: &QMatrix) -> Result<Tensor> {
        let k = self.order();
        if factor >= k {
            return Err(Error::BadFactorIndex { index: factor, order: k });
        }
        if m.cols() != self.shape[factor] {
            return Err(Error::ShapeMismatch(format!(
                "factor {} has dimension {}, matrix has {} columns",
                factor,
                self.shape[factor],
                m.cols()
            )));
        }
        let mut shape = self.shape.clone();
        shape[factor] = m.rows();
        let mut out = Tensor::zeros(shape);
        for lin in 0..out.entries.len() {
            let idx = out.unrank(lin);
            let mut src = idx.clone();
            let mut acc = Rational::zero();
            for j in 0..self.shape[factor] {
                let coef = m.at(idx[factor], j);
                if coef.is_zero() {
                    continue;
                }
                src[factor] = j;
                acc += coef * self.get(&src);
            }
            out.entries[lin] = acc;
        }
        Ok(out)
    }

    /// Multilinear basis change: one invertible square matrix per factor.
    pub fn apply_gl(&self, mats: &[QMatrix]) -> Result<Tensor> {
        if mats.len() != self.order() {
            return Err(Error::ShapeMismatch(format!(
                "{} basis-change matrices for an order-{} tensor",
                mats.len(),
                self.order()
            )));
        }
        let mut t = self.clone();
        for (l, m) in mats.iter().enumerate() {
            if m.rows() != m.cols() || m.rows() != self.shape[l] {
                return Err(Error::ShapeMismatch(format!(
                    "factor {} expects a {}x{} matrix",
                    l, self.shape[l], self.shape[l]
                )));
            }
            if m.inverse().is_none() {
                return Err(Error::SingularFactorMatrix { factor: l });
            }
            t = t.mode_multiply(l, m)?;
        }
        Ok(t)
    }

    /// Reorders factors: result factor `l` is input factor `perm[l]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Tensor> {
        let k = self.order();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::ShapeMismatch(format!("{perm:?} is not a permutation of 0..{k}")));
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut out = Tensor::zeros(shape);
        for lin in 0..out.entries.len() {
            let idx = out.unrank(lin);
            let mut src = vec![0usize; k];
            for (l, &p) in perm.iter().enumerate() {
                src[p] = idx[l];
            }
            out.entries[lin] = self.get(&src).clone();
        }
        Ok(out)
    }

    /// Slice at `index` along `factor`: an order-`k-1` tensor.
    pub fn slice(&self, factor: usize, index: usize) -> Result<Tensor> {
        let k = self.order();
        if factor >= k {
            return Err(Error::BadFactorIndex { index: factor, order: k });
        }
        let mut shape = self.shape.clone();
        shape.remove(factor);
        let mut out = Tensor::zeros(shape);
        for lin in 0..out.entries.len() {
            let idx = out.unrank(lin);
            let mut src = idx.clone();
            src.insert(factor, index);
            out.entries[lin] = self.get(&src).clone();
        }
        Ok(out)
    }

    /// Inserts a dimension-1 factor at `position`.
    pub fn insert_axis(&self, position: usize) -> Tensor {
        assert!(position <= self.order());
        let mut shape = self.shape.clone();
        shape.insert(position, 1);
        Tensor { shape, entries: self.entries.clone() }
    }

    /// Merges factors `i` and `j` into a single first factor of dimension
    /// `n_i * n_j`; remaining factors keep their relative order. The merged
    /// index is `a * n_j + b` for `(a, b)` on factors `(i, j)`.
    pub fn reshape_pair(&self, i: usize, j: usize) -> Result<ReshapePair> {
        let k = self.order();
        if i >= k {
            return Err(Error::BadFactorIndex { index: i, order: k });
        }
        if j >= k || i == j {
            return Err(Error::BadFactorIndex { index: j, order: k });
        }
        let (n_i, n_j) = (self.shape[i], self.shape[j]);
        let mut shape = vec![n_i * n_j];
        for (l, &n) in self.shape.iter().enumerate() {
            if l != i && l != j {
                shape.push(n);
            }
        }
        let mut merged = Tensor::zeros(shape);
        for lin in 0..self.entries.len() {
            let idx = self.unrank(lin);
            let mut dst = vec![idx[i] * n_j + idx[j]];
            for (l, &x) in idx.iter().enumerate() {
                if l != i && l != j {
                    dst.push(x);
                }
            }
            merged.set(&dst, self.entries[lin].clone());
        }
        Ok(ReshapePair { merged, i, j, n_i, n_j })
    }

    /// The concision process: restricts to the minimal subspace tensor
    /// product containing the tensor.
    ///
    /// For each factor whose flattening rank is below its dimension, the
    /// pivot columns of the flattening's reduced row echelon form (read left
    /// to right) become the image basis and the tensor is rewritten in that
    /// basis. Rank-1 factors are dropped from the core; a rank-1 input
    /// concises to an order-0 scalar core.
    pub fn concise(&self) -> Result<ConcisionResult> {
        if self.is_zero() {
            return Err(Error::ZeroTensor);
        }
        let k = self.order();
        let mut current = self.clone();
        let mut injections = Vec::with_capacity(k);
        let mut dropped_factors = Vec::new();
        let mut factor_map = Vec::new();
        for l in 0..k {
            let pos = l - dropped_factors.len();
            let m = current.flatten(pos)?;
            let rref = m.rref();
            if rref.rank == self.shape[l] {
                injections.push(QMatrix::identity(self.shape[l]));
                factor_map.push(l);
                continue;
            }
            let basis: Vec<QVector> = rref.pivots.iter().map(|&p| m.column(p)).collect();
            injections.push(QMatrix::from_columns(&basis));
            // rows 0..rank of the RREF express every column of the
            // flattening in the chosen basis
            let mut shape = current.shape().to_vec();
            if rref.rank == 1 {
                dropped_factors.push(l);
                shape.remove(pos);
                let entries = (0..rref.reduced.cols()).map(|c| rref.reduced.at(0, c).clone());
                current = Tensor::new(shape, entries.collect())?;
            } else {
                factor_map.push(l);
                shape[pos] = rref.rank;
                let mut next = Tensor::zeros(shape);
                for lin in 0..next.entries.len() {
                    let idx = next.unrank(lin);
                    let r = idx[pos];
                    let mut c = 0usize;
                    for (d, &i) in idx.iter().enumerate() {
                        if d == pos {
                            continue;
                        }
                        c = c * next.shape[d] + i;
                    }
                    next.entries[lin] = rref.reduced.at(r, c).clone();
                }
                current = next;
            }
        }
        Ok(ConcisionResult { core: current, injections, dropped_factors, factor_map })
    }
}

impl ConcisionResult {
    /// Applies the injections to the core and re-inserts dropped factors,
    /// reproducing the original tensor exactly.
    pub fn reconstruct(&self) -> Tensor {
        let mut t = self.core.clone();
        for &l in &self.dropped_factors {
            t = t.insert_axis(l);
        }
        for (l, m) in self.injections.iter().enumerate() {
            t = t.mode_multiply(l, m).expect("injection shapes match by construction");
        }
        t
    }
}

/// Reads a length `n_i * n_j` vector as an `n_i x n_j` matrix, entry
/// `(a, b) = v[a * n_j + b]`.
pub fn unreshape_vector(v: &[Rational], n_i: usize, n_j: usize) -> Result<QMatrix> {
    if v.len() != n_i * n_j {
        return Err(Error::LengthMismatch { len: v.len(), rows: n_i, cols: n_j });
    }
    let mut m = QMatrix::zero(n_i, n_j);
    for a in 0..n_i {
        for b in 0..n_j {
            *m.at_mut(a, b) = v[a * n_j + b].clone();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    pub(crate) fn basis(n: usize, i: usize) -> QVector {
        let mut v = vec![rat(0); n];
        v[i] = rat(1);
        v
    }

    /// The 24-entry 3x2x2x2 running example.
    pub(crate) fn worked_example() -> Tensor {
        let entries = [
            12, 8, 6, 4, 30, 20, 15, 10, //
            8, 8, 5, 6, 35, 38, 23, 30, //
            16, 16, 10, 12, 52, 64, 37, 54,
        ];
        Tensor::new(vec![3, 2, 2, 2], entries.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn flatten_rank1_and_worked_example() {
        let t = Tensor::rank1(&[basis(2, 0), basis(2, 0), basis(2, 0)]);
        let m = t.flatten(0).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 4);
        for r in 0..2 {
            for c in 0..4 {
                assert_eq!(*m.at(r, c), if (r, c) == (0, 0) { rat(1) } else { rat(0) });
            }
        }

        let t = worked_example();
        let m = t.flatten(0).unwrap();
        let first: Vec<_> = (0..8).map(|c| m.at(0, c).clone()).collect();
        assert_eq!(first, [12, 8, 6, 4, 30, 20, 15, 10].map(rat).to_vec());
        assert_eq!(t.multilinear_rank(), MultilinearRank(vec![3, 2, 2, 2]));
    }

    #[test]
    fn reshape_pair_matches_displayed_flattening() {
        let t = worked_example();
        let merged = t.reshape_pair(0, 1).unwrap();
        assert_eq!(merged.merged.shape(), &[6, 2, 2]);
        let a = merged.merged.flatten(0).unwrap();
        let want = [
            [12, 8, 6, 4],
            [30, 20, 15, 10],
            [8, 8, 5, 6],
            [35, 38, 23, 30],
            [16, 16, 10, 12],
            [52, 64, 37, 54],
        ];
        for r in 0..6 {
            for c in 0..4 {
                assert_eq!(*a.at(r, c), rat(want[r][c]));
            }
        }
        assert_eq!(a.rank(), 2);

        // merging a rank-1 tensor keeps the merged flattening rank 1
        let r1 = Tensor::rank1(&[vec![rat(1), rat(2)], vec![rat(3), rat(5)], vec![rat(1), rat(7)]]);
        let m = r1.reshape_pair(0, 1).unwrap();
        assert_eq!(m.merged.flatten(0).unwrap().rank(), 1);

        // the reshape is a bijection on entries
        let mut before: Vec<_> = r1.entries().to_vec();
        let mut after: Vec<_> = m.merged.entries().to_vec();
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn multilinear_rank_two_term() {
        // e1(x)e1(x)e1 + e1(x)e2(x)e2 has multilinear rank (1,2,2)
        let t = Tensor::rank1(&[basis(2, 0), basis(2, 0), basis(2, 0)])
            .add(&Tensor::rank1(&[basis(2, 0), basis(2, 1), basis(2, 1)]))
            .unwrap();
        assert_eq!(t.multilinear_rank(), MultilinearRank(vec![1, 2, 2]));
    }

    #[test]
    fn concise_rank_one_gives_scalar_core() {
        let t = Tensor::rank1(&[basis(2, 0), basis(2, 0), basis(2, 0)]);
        let c = t.concise().unwrap();
        assert_eq!(c.core.shape(), &[] as &[usize]);
        assert_eq!(c.core.entries(), &[rat(1)]);
        assert_eq!(c.dropped_factors, vec![0, 1, 2]);
        assert!(c.factor_map.is_empty());
        assert_eq!(c.reconstruct(), t);
    }

    #[test]
    fn concise_drops_first_factor() {
        // e1(x)e1(x)e1 + e1(x)e2(x)e2 inside 3x2x2: identity 2x2 core
        let t = Tensor::rank1(&[basis(3, 0), basis(2, 0), basis(2, 0)])
            .add(&Tensor::rank1(&[basis(3, 0), basis(2, 1), basis(2, 1)]))
            .unwrap();
        let c = t.concise().unwrap();
        assert_eq!(c.core.shape(), &[2, 2]);
        assert_eq!(c.dropped_factors, vec![0]);
        assert_eq!(c.factor_map, vec![1, 2]);
        assert_eq!(
            c.core.entries(),
            &[rat(1), rat(0), rat(0), rat(1)]
        );
        assert_eq!(c.injections[0].column(0), vec![rat(1), rat(0), rat(0)]);
        assert_eq!(c.reconstruct(), t);
    }

    #[test]
    fn concise_worked_example_core() {
        let t = worked_example();
        let merged = t.reshape_pair(0, 1).unwrap().merged;
        let c = merged.concise().unwrap();
        assert_eq!(c.core.shape(), &[2, 2, 2]);
        assert!(c.dropped_factors.is_empty());
        // chosen image basis: first two columns of the flattening
        let m = merged.flatten(0).unwrap();
        assert_eq!(c.injections[0].column(0), m.column(0));
        assert_eq!(c.injections[0].column(1), m.column(1));
        // pencil slices across the middle factor
        let c1 = c.core.slice(1, 0).unwrap();
        let c2 = c.core.slice(1, 1).unwrap();
        assert_eq!(c1.entries(), &[rat(1), rat(0), rat(0), rat(1)]);
        assert_eq!(c2.entries(), &[ratio(1, 4), ratio(-1, 2), ratio(3, 8), ratio(5, 4)]);
        assert_eq!(c.reconstruct(), merged);
    }

    #[test]
    fn concise_is_idempotent_and_rejects_zero() {
        let t = worked_example();
        let core = t.reshape_pair(0, 1).unwrap().merged.concise().unwrap().core;
        let again = core.concise().unwrap();
        assert_eq!(again.core, core);
        assert!(again.dropped_factors.is_empty());

        assert_eq!(Tensor::zeros(vec![2, 2]).concise(), Err(Error::ZeroTensor));
    }

    #[test]
    fn unreshape_vector_examples() {
        let z = unreshape_vector(&vec![rat(0); 6], 3, 2).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.rank(), 0);

        let v: Vec<_> = [0, 1, 2, 3, 4, 5].map(rat).to_vec();
        let m = unreshape_vector(&v, 2, 3).unwrap();
        assert_eq!(*m.at(1, 2), rat(5));
        assert_eq!(*m.at(0, 1), rat(1));

        assert!(unreshape_vector(&v, 2, 2).is_err());
    }

    #[test]
    fn apply_gl_identity_and_rank1() {
        let t = worked_example();
        let ids = vec![
            QMatrix::identity(3),
            QMatrix::identity(2),
            QMatrix::identity(2),
            QMatrix::identity(2),
        ];
        assert_eq!(t.apply_gl(&ids).unwrap(), t);

        let r1 = Tensor::rank1(&[basis(2, 0), basis(2, 0), basis(2, 0)]);
        let mut e = Tensor::zeros(vec![2, 2, 2]);
        e.set(&[0, 0, 0], rat(1));
        assert_eq!(r1, e);

        let singular = vec![QMatrix::zero(3, 3), QMatrix::identity(2), QMatrix::identity(2), QMatrix::identity(2)];
        assert_eq!(t.apply_gl(&singular), Err(Error::SingularFactorMatrix { factor: 0 }));
    }

    #[test]
    fn permute_factors_round_trip() {
        let t = worked_example();
        let p = t.permute_factors(&[1, 2, 0, 3]).unwrap();
        assert_eq!(p.shape(), &[2, 2, 3, 2]);
        assert_eq!(p.get(&[1, 0, 2, 1]), t.get(&[2, 1, 0, 1]));
        // inverse permutation restores the tensor
        let back = p.permute_factors(&[2, 0, 1, 3]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn flattening_rank_product_bound() {
        // r_l <= prod of the other flattening ranks
        let t = worked_example();
        let MultilinearRank(r) = t.multilinear_rank();
        for l in 0..r.len() {
            let others: usize = r.iter().enumerate().filter(|&(i, _)| i != l).map(|(_, &x)| x).product();
            assert!(r[l] <= others);
        }
    }
}
