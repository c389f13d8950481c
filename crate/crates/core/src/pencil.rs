//! Homogeneous matrix pencils `x*A0 + y*A1` over the rationals: invariant
//! polynomials, elementary divisors (including the infinite `y`-power ones),
//! minimal indices, the complete Kronecker invariant, the assembled normal
//! form, and the tensor-rank formula for pencils of concise tensors.
//!
//! A tensor with a dimension-2 factor turns into a pencil by slicing along
//! that factor: `x, y` are the coordinates on it.

use crate::error::{Error, Result};
use crate::form::{interpolate_through_integers, BinaryForm};
use crate::matrix::QMatrix;
use crate::rational::Rational;
use crate::tensor::Tensor;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Pair of equal-shape matrices representing `x*A0 + y*A1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    pub a0: QMatrix,
    pub a1: QMatrix,
}

/// Complete strict-equivalence invariant of a pencil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerInvariants {
    /// Column minimal indices, ascending, zeros included.
    pub col_indices: Vec<usize>,
    /// Row minimal indices, ascending, zeros included.
    pub row_indices: Vec<usize>,
    /// Elementary divisors as (irreducible monic base, exponent); a base of
    /// `y` encodes an infinite divisor. Sorted deterministically.
    pub divisors: Vec<(BinaryForm, u32)>,
    /// Size of the regular part: total degree of all elementary divisors.
    pub regular_size: usize,
    /// Rank of the pencil over the function field.
    pub pencil_rank: usize,
}

/// One block of the Kronecker normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// `rows x cols` zero block carrying the zero minimal indices.
    Zero { rows: usize, cols: usize },
    /// Column-index block of size `eps x (eps+1)`.
    ColIndex(usize),
    /// Row-index block of size `(eta+1) x eta`.
    RowIndex(usize),
    /// Infinite-divisor block of size `u x u` for `y^u`.
    Infinite(u32),
    /// Companion block for a finite elementary divisor `base^exponent`.
    Finite { base: BinaryForm, exponent: u32 },
}

/// Canonical block-diagonal pencil together with its block list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub blocks: Vec<Block>,
    pub pencil: Pencil,
    pub invariants: KroneckerInvariants,
}

impl Pencil {
    pub fn new(a0: QMatrix, a1: QMatrix) -> Result<Self> {
        if a0.rows() != a1.rows() || a0.cols() != a1.cols() {
            return Err(Error::ShapeMismatch(format!(
                "pencil slices differ: {}x{} vs {}x{}",
                a0.rows(),
                a0.cols(),
                a1.rows(),
                a1.cols()
            )));
        }
        Ok(Pencil { a0, a1 })
    }

    pub fn rows(&self) -> usize {
        self.a0.rows()
    }

    pub fn cols(&self) -> usize {
        self.a0.cols()
    }

    pub fn transpose(&self) -> Pencil {
        Pencil { a0: self.a0.transpose(), a1: self.a1.transpose() }
    }

    /// Evaluation at `(x, y) = (t, 1)`.
    pub fn eval_affine(&self, t: &Rational) -> QMatrix {
        self.a0.scale(t).add(&self.a1)
    }

    /// The entry at `(r, c)` as a degree-<=1 binary form.
    pub fn entry_form(&self, r: usize, c: usize) -> BinaryForm {
        BinaryForm::linear(self.a0.at(r, c).clone(), self.a1.at(r, c).clone())
    }
}

impl std::fmt::Display for Pencil {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows() {
            write!(w, "[ ")?;
            for c in 0..self.cols() {
                if c > 0 {
                    write!(w, ", ")?;
                }
                write!(w, "{}", self.entry_form(r, c))?;
            }
            writeln!(w, " ]")?;
        }
        Ok(())
    }
}

/// Views a `(2, m, n)` tensor as a pencil: `A0` is the slice at first-factor
/// index 0, `A1` the slice at index 1, so `x, y` are coordinates on the
/// dimension-2 first factor.
pub fn pencil_of(t: &Tensor) -> Result<Pencil> {
    if t.order() != 3 || t.shape()[0] != 2 {
        return Err(Error::BadShape(format!(
            "pencil conversion needs shape (2, m, n), got {:?}",
            t.shape()
        )));
    }
    let a0 = t.slice(0, 0)?.flatten(0)?;
    let a1 = t.slice(0, 1)?.flatten(0)?;
    Pencil::new(a0, a1)
}

/// Largest minor size whose determinant is not identically zero.
///
/// The rank is attained at all but at most `min(m, n)` points of the
/// parameter line, so evaluating at `min(m, n) + 1` points is exact.
pub fn pencil_rank(p: &Pencil) -> usize {
    let s = p.rows().min(p.cols());
    (0..=s)
        .map(|t| p.eval_affine(&Rational::from_integer(BigInt::from(t))).rank())
        .max()
        .unwrap_or(0)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Determinant of the sub-pencil on `rows x cols` as a binary form of
/// degree `rows.len()`, computed by exact interpolation.
fn minor_form(p: &Pencil, rows: &[usize], cols: &[usize]) -> BinaryForm {
    let j = rows.len();
    debug_assert_eq!(j, cols.len());
    let values: Vec<Rational> = (0..=j)
        .map(|t| {
            let m = p.eval_affine(&Rational::from_integer(BigInt::from(t)));
            let mut sub = QMatrix::zero(j, j);
            for (ri, &r) in rows.iter().enumerate() {
                for (ci, &c) in cols.iter().enumerate() {
                    *sub.at_mut(ri, ci) = m.at(r, c).clone();
                }
            }
            sub.det()
        })
        .collect();
    // ascending coefficients of det(t*A0' + A1') = sum c_i t^(j-i)
    let asc = interpolate_through_integers(&values);
    let coeffs: Vec<Rational> = (0..=j).map(|i| asc[j - i].clone()).collect();
    BinaryForm::from_coeffs(coeffs)
}

/// Determinant of a square pencil as a binary form.
pub fn det_form(p: &Pencil) -> BinaryForm {
    assert_eq!(p.rows(), p.cols(), "determinant of a non-square pencil");
    let all: Vec<usize> = (0..p.rows()).collect();
    minor_form(p, &all, &all)
}

/// Gcd of all `j x j` minors, monic; `D_0 = 1`.
fn minor_gcd(p: &Pencil, j: usize) -> BinaryForm {
    if j == 0 {
        return BinaryForm::one();
    }
    let mut acc = BinaryForm::zero();
    for rows in combinations(p.rows(), j) {
        for cols in combinations(p.cols(), j) {
            let m = minor_form(p, &rows, &cols);
            acc = acc.gcd(&m);
            if acc.degree() == Some(0) {
                return BinaryForm::one();
            }
        }
    }
    acc
}

/// Invariant polynomials `i_1 | i_2 | ... | i_r` with `i_j = D_j / D_(j-1)`,
/// where `D_j` is the monic gcd of all `j x j` minors.
pub fn invariant_polynomials(p: &Pencil) -> Vec<BinaryForm> {
    let r = pencil_rank(p);
    let mut out = Vec::with_capacity(r);
    let mut prev = BinaryForm::one();
    for j in 1..=r {
        let d = minor_gcd(p, j);
        let q = d.div_exact(&prev).expect("D_(j-1) divides D_j").monic();
        out.push(q);
        prev = d;
    }
    out
}

/// Multiset of elementary divisors: irreducible-power factors of the
/// invariant polynomials. `y`-powers are the infinite divisors.
pub fn elementary_divisors(p: &Pencil) -> Vec<(BinaryForm, u32)> {
    let mut out = Vec::new();
    for ip in invariant_polynomials(p) {
        out.extend(ip.factor());
    }
    sort_divisors(&mut out);
    out
}

fn sort_divisors(divs: &mut [(BinaryForm, u32)]) {
    divs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
}

/// Dimension of the space of homogeneous degree-`d` polynomial solutions of
/// `(x*A0 + y*A1) v(x, y) = 0`.
fn polynomial_kernel_dim(p: &Pencil, d: usize) -> usize {
    let (m, n) = (p.rows(), p.cols());
    // unknowions: d+1 coefficient vectors in Q^n; equations: degree d+1
    // coefficients, each in Q^m
    let mut sys = QMatrix::zero(m * (d + 2), n * (d + 1));
    for s in 0..=d + 1 {
        for t in 0..=d {
            let block = if t == s {
                Some(&p.a0)
            } else if t + 1 == s {
                Some(&p.a1)
            } else {
                None
            };
            if let Some(b) = block {
                for r in 0..m {
                    for c in 0..n {
                        *sys.at_mut(s * m + r, t * n + c) = b.at(r, c).clone();
                    }
                }
            }
        }
    }
    n * (d + 1) - sys.rank()
}

/// Column and row minimal indices (ascending, zeros included).
///
/// The count of indices equal to `d` is the second difference
/// `s_d - 2 s_(d-1) + s_(d-2)` of the degree-stratified kernel dimensions,
/// and the total count is `n - rank` (columns) resp. `m - rank` (rows).
pub fn minimal_indices(p: &Pencil) -> (Vec<usize>, Vec<usize>) {
    let r = pencil_rank(p);
    let cols = minimal_indices_one_side(p, p.cols() - r);
    let rows = minimal_indices_one_side(&p.transpose(), p.rows() - r);
    (cols, rows)
}

fn minimal_indices_one_side(p: &Pencil, count: usize) -> Vec<usize> {
    let mut indices = Vec::with_capacity(count);
    let (mut s_prev2, mut s_prev) = (0usize, 0usize);
    let mut d = 0usize;
    while indices.len() < count {
        assert!(
            d <= p.rows() + p.cols(),
            "minimal index search exceeded the size bound; this is a bug"
        );
        let s_d = polynomial_kernel_dim(p, d);
        let c_d = s_d + s_prev2 - 2 * s_prev;
        for _ in 0..c_d {
            indices.push(d);
        }
        s_prev2 = s_prev;
        s_prev = s_d;
        d += 1;
    }
    indices
}

/// Assembles the complete invariant and checks the size bookkeeping.
pub fn kronecker_invariants(p: &Pencil) -> Result<KroneckerInvariants> {
    let r = pencil_rank(p);
    let (col_indices, row_indices) = minimal_indices(p);
    let divisors = elementary_divisors(p);
    let regular_size: usize = divisors
        .iter()
        .map(|(base, e)| *e as usize * base.degree().expect("divisor bases are nonzero"))
        .sum();
    let inv = KroneckerInvariants { col_indices, row_indices, divisors, regular_size, pencil_rank: r };
    let eps_pos: usize = inv.col_indices.iter().filter(|&&e| e > 0).sum();
    let eps_pos_count = inv.col_indices.iter().filter(|&&e| e > 0).count();
    let eta_pos: usize = inv.row_indices.iter().filter(|&&e| e > 0).sum();
    let eta_pos_count = inv.row_indices.iter().filter(|&&e| e > 0).count();
    let g = inv.col_indices.len() - eps_pos_count;
    let h = inv.row_indices.len() - eta_pos_count;
    let n_ok = p.cols() == g + eps_pos + eps_pos_count + eta_pos + inv.regular_size;
    let m_ok = p.rows() == h + eps_pos + eta_pos + eta_pos_count + inv.regular_size;
    let r_ok = r == eps_pos + eta_pos + inv.regular_size;
    if !(n_ok && m_ok && r_ok) {
        return Err(Error::InconsistentInvariants);
    }
    Ok(inv)
}

impl KroneckerInvariants {
    /// Number of non-squarefree invariant polynomials of the regular part,
    /// reconstructed from the divisor multiset: group by base, sort each
    /// base's exponents descending; the j-th invariant polynomial takes every
    /// base's j-th largest exponent.
    pub fn delta(&self) -> usize {
        let mut by_base: BTreeMap<&BinaryForm, Vec<u32>> = BTreeMap::new();
        for (base, e) in &self.divisors {
            by_base.entry(base).or_default().push(*e);
        }
        by_base
            .values()
            .map(|exps| exps.iter().filter(|&&e| e >= 2).count())
            .max()
            .unwrap_or(0)
    }

    /// True iff some minimal index is zero, i.e. the pencil came from a
    /// tensor that is not concise in a non-parameter factor.
    pub fn has_zero_index(&self) -> bool {
        self.col_indices.contains(&0) || self.row_indices.contains(&0)
    }
}

/// Rank of the tensor behind a pencil of a tensor concise in both
/// non-parameter factors: `sum(eps_i + 1) + sum(eta_j + 1) + N + delta`.
pub fn tensor_rank_from_pencil(inv: &KroneckerInvariants) -> Result<usize> {
    if inv.has_zero_index() {
        return Err(Error::NotConcisePencil);
    }
    let eps: usize = inv.col_indices.iter().map(|e| e + 1).sum();
    let eta: usize = inv.row_indices.iter().map(|e| e + 1).sum();
    Ok(eps + eta + inv.regular_size + inv.delta())
}

fn block_pencil(block: &Block) -> Pencil {
    match block {
        Block::Zero { rows, cols } => {
            Pencil { a0: QMatrix::zero(*rows, *cols), a1: QMatrix::zero(*rows, *cols) }
        }
        Block::ColIndex(eps) => {
            let mut a0 = QMatrix::zero(*eps, eps + 1);
            let mut a1 = QMatrix::zero(*eps, eps + 1);
            for i in 0..*eps {
                *a0.at_mut(i, i) = Rational::from_integer(1.into());
                *a1.at_mut(i, i + 1) = Rational::from_integer(1.into());
            }
            Pencil { a0, a1 }
        }
        Block::RowIndex(eta) => {
            let p = block_pencil(&Block::ColIndex(*eta));
            p.transpose()
        }
        Block::Infinite(u) => {
            let u = *u as usize;
            let mut a0 = QMatrix::zero(u, u);
            for i in 0..u.saturating_sub(1) {
                *a0.at_mut(i, i + 1) = Rational::from_integer(1.into());
            }
            Pencil { a0, a1: QMatrix::identity(u) }
        }
        Block::Finite { base, exponent } => {
            // companion block with det = base^exponent
            let mut g = BinaryForm::one();
            for _ in 0..*exponent {
                g = g.mul(base);
            }
            let d = g.degree().expect("nonzero divisor");
            // base != y, so the x^d coefficient is 1 and the dehomogenized
            // polynomial g(t, 1) is monic of degree d
            let coeffs = g.coeffs();
            let mut a1 = QMatrix::zero(d, d);
            for i in 0..d {
                // a_i = coefficient of t^i = coefficient of x^i y^(d-i)
                let a_i = coeffs[d - i].clone();
                *a1.at_mut(i, d - 1) = -a_i;
            }
            for i in 0..d.saturating_sub(1) {
                *a1.at_mut(i + 1, i) = Rational::from_integer(1.into());
            }
            // det(x*I - y*C) = y^d * charpoly(x/y) = base^exponent
            Pencil { a0: QMatrix::identity(d), a1: a1.scale(&-Rational::from_integer(1.into())) }
        }
    }
}

fn block_shape(block: &Block) -> (usize, usize) {
    match block {
        Block::Zero { rows, cols } => (*rows, *cols),
        Block::ColIndex(eps) => (*eps, eps + 1),
        Block::RowIndex(eta) => (eta + 1, *eta),
        Block::Infinite(u) => (*u as usize, *u as usize),
        Block::Finite { base, exponent } => {
            let d = base.degree().expect("nonzero") * *exponent as usize;
            (d, d)
        }
    }
}

/// Kronecker canonical form assembled from the invariants: zero block, then
/// column-index blocks ascending, row-index blocks ascending, infinite
/// blocks, and finite companion blocks in a fixed order.
pub fn normal_form(p: &Pencil) -> Result<NormalForm> {
    let invariants = kronecker_invariants(p)?;
    let g = invariants.col_indices.iter().filter(|&&e| e == 0).count();
    let h = invariants.row_indices.iter().filter(|&&e| e == 0).count();
    let mut blocks = Vec::new();
    if g > 0 || h > 0 {
        blocks.push(Block::Zero { rows: h, cols: g });
    }
    for &eps in invariants.col_indices.iter().filter(|&&e| e > 0) {
        blocks.push(Block::ColIndex(eps));
    }
    for &eta in invariants.row_indices.iter().filter(|&&e| e > 0) {
        blocks.push(Block::RowIndex(eta));
    }
    let mut infinite: Vec<u32> = Vec::new();
    let mut finite: Vec<(BinaryForm, u32)> = Vec::new();
    for (base, e) in &invariants.divisors {
        if *base == BinaryForm::y() {
            infinite.push(*e);
        } else {
            finite.push((base.clone(), *e));
        }
    }
    infinite.sort_unstable();
    for u in infinite {
        blocks.push(Block::Infinite(u));
    }
    sort_divisors(&mut finite);
    for (base, e) in finite {
        blocks.push(Block::Finite { base, exponent: e });
    }
    let rows: usize = blocks.iter().map(|b| block_shape(b).0).sum();
    let cols: usize = blocks.iter().map(|b| block_shape(b).1).sum();
    let mut a0 = QMatrix::zero(rows, cols);
    let mut a1 = QMatrix::zero(rows, cols);
    let (mut ro, mut co) = (0usize, 0usize);
    for b in &blocks {
        let bp = block_pencil(b);
        let (br, bc) = block_shape(b);
        for r in 0..br {
            for c in 0..bc {
                *a0.at_mut(ro + r, co + c) = bp.a0.at(r, c).clone();
                *a1.at_mut(ro + r, co + c) = bp.a1.at(r, c).clone();
            }
        }
        ro += br;
        co += bc;
    }
    Ok(NormalForm { blocks, pencil: Pencil { a0, a1 }, invariants })
}

/// Two pencils are strictly equivalent iff they share minimal indices and
/// elementary divisors.
pub fn strictly_equivalent(p1: &Pencil, p2: &Pencil) -> Result<bool> {
    Ok(kronecker_invariants(p1)? == kronecker_invariants(p2)?)
}
