//! Homogeneous binary forms in the pencil parameters, written `x*A0 + y*A1`
//! internally as polynomials in `x` (the first parameter) and `y`.
//!
//! A degree-`d` form stores coefficients of `x^d, x^(d-1) y, ..., y^d`.
//! Powers of `y` are the "infinite" elementary divisors of a pencil. All
//! gcds are normalized monic with respect to the leading monomial in
//! lexicographic order `x > y`.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Homogeneous binary form; the zero form has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BinaryForm {
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn zero() -> Self {
        BinaryForm { coeffs: vec![] }
    }

    /// Builds a form of degree `coeffs.len() - 1`; all-zero input collapses
    /// to the zero form.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        if coeffs.iter().all(Rational::is_zero) {
            BinaryForm::zero()
        } else {
            BinaryForm { coeffs }
        }
    }

    pub fn constant(c: Rational) -> Self {
        BinaryForm::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        BinaryForm::constant(Rational::one())
    }

    /// The form `x`.
    pub fn x() -> Self {
        BinaryForm::from_coeffs(vec![Rational::one(), Rational::zero()])
    }

    /// The form `y`.
    pub fn y() -> Self {
        BinaryForm::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// The linear form `a*x + b*y`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        BinaryForm::from_coeffs(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Total degree, `None` for the zero form.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficients of `x^d, ..., y^d`; empty for the zero form.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Multiplicity of `y` as a factor (number of leading zero coefficients).
    fn y_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Dehomogenization at `y = 1`, with the total degree kept alongside so
    /// the form can be reconstructed: `f = y^(d - deg p) * homogenize(p)`.
    fn to_poly(&self) -> Option<(usize, Poly)> {
        let d = self.degree()?;
        // coefficient of x^(d-i) y^i maps to the t^(d-i) coefficient
        let mut asc = vec![Rational::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            asc[d - i] = c.clone();
        }
        Some((d, Poly::new(asc)))
    }

    fn from_poly(total_degree: usize, p: &Poly) -> Self {
        if p.is_zero() {
            return BinaryForm::zero();
        }
        let mut coeffs = vec![Rational::zero(); total_degree + 1];
        for (s, c) in p.coeffs.iter().enumerate() {
            coeffs[total_degree - s] = c.clone();
        }
        BinaryForm::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() || other.is_zero() {
            return BinaryForm::zero();
        }
        let (da, db) = (self.coeffs.len() - 1, other.coeffs.len() - 1);
        let mut coeffs = vec![Rational::zero(); da + db + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm::from_coeffs(coeffs)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &BinaryForm) -> Option<BinaryForm> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BinaryForm::zero());
        }
        let (da, pa) = self.to_poly()?;
        let (db, pb) = other.to_poly().expect("nonzero");
        if da < db || self.y_valuation() < other.y_valuation() {
            return None;
        }
        let (q, r) = pa.divrem(&pb);
        if !r.is_zero() {
            return None;
        }
        Some(BinaryForm::from_poly(da - db, &q))
    }

    /// Gcd normalized monic w.r.t. the leading monomial in lex order `x > y`.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (_, pa) = self.to_poly().expect("nonzero");
        let (_, pb) = other.to_poly().expect("nonzero");
        let yv = self.y_valuation().min(other.y_valuation());
        let g = pa.gcd(&pb);
        let total = yv + g.degree();
        BinaryForm::from_poly(total, &g)
    }

    /// Scales so the first nonzero coefficient is 1.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => BinaryForm::zero(),
            Some(lead) => {
                let inv = Rational::one() / lead.clone();
                BinaryForm::from_coeffs(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// True iff the form is squarefree (coprime to both partial derivatives,
    /// equivalently its dehomogenization is squarefree and `y^2` is absent).
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                if self.y_valuation() >= 2 {
                    return false;
                }
                let (_, p) = self.to_poly().expect("nonzero");
                p.gcd(&p.derivative()).degree() == 0
            }
        }
    }

    /// Complete factorization into irreducible monic forms over the
    /// rationals with multiplicities. `y`-powers come out as the base `y`.
    pub fn factor(&self) -> Vec<(BinaryForm, u32)> {
        let mut out: Vec<(BinaryForm, u32)> = Vec::new();
        let Some(_) = self.degree() else {
            return out;
        };
        let yv = self.y_valuation();
        if yv > 0 {
            out.push((BinaryForm::y(), yv as u32));
        }
        let (_, p) = self.to_poly().expect("nonzero");
        // t-powers of the dehomogenization are x-powers of the form
        let tv = p.t_valuation();
        if tv > 0 {
            out.push((BinaryForm::x(), tv as u32));
        }
        let core = p.shift_down(tv).monic();
        for (q, mult) in core.squarefree_decomposition() {
            for factor in q.factor_squarefree() {
                let d = factor.degree();
                out.push((BinaryForm::from_poly(d, &factor.monic()), mult));
            }
        }
        out.sort_by(|a, b| form_sort_key(&a.0).cmp(&form_sort_key(&b.0)).then(a.1.cmp(&b.1)));
        out
    }

    /// For a degree-1 form `a*x + b*y`, returns `(a, b)`.
    pub fn linear_coeffs(&self) -> Option<(Rational, Rational)> {
        if self.degree() == Some(1) {
            Some((self.coeffs[0].clone(), self.coeffs[1].clone()))
        } else {
            None
        }
    }
}

fn form_sort_key(f: &BinaryForm) -> (usize, Vec<Rational>) {
    (f.coeffs.len(), f.coeffs.clone())
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let Some(d) = self.degree() else {
            return write!(w, "0");
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (xp, yp) = (d - i, i);
            let mono = match (xp, yp) {
                (0, 0) => String::new(),
                (1, 0) => "x".into(),
                (0, 1) => "y".into(),
                (p, 0) => format!("x^{p}"),
                (0, p) => format!("y^{p}"),
                (1, 1) => "x*y".into(),
                (1, q) => format!("x*y^{q}"),
                (p, 1) => format!("x^{p}*y"),
                (p, q) => format!("x^{p}*y^{q}"),
            };
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(w, "-")?;
                }
                first = false;
            } else if neg {
                write!(w, " - ")?;
            } else {
                write!(w, " + ")?;
            }
            if mono.is_empty() {
                write!(w, "{abs}")?;
            } else if abs.is_one() {
                write!(w, "{mono}")?;
            } else {
                write!(w, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Univariate polynomial with ascending rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::one() / self.lead();
        Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    fn t_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![]);
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = other.degree();
        let lead = other.lead();
        if rem.len() <= dd {
            return (Poly::new(vec![]), Poly::new(rem));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].clone() / &lead;
            quot[i - dd] = q.clone();
            for (j, c) in other.coeffs.iter().enumerate() {
                let sub = &q * c;
                rem[i - dd + j] -= sub;
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Yun's algorithm: returns squarefree parts with multiplicities, so
    /// `self = lead * prod part_i^mult_i`.
    fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut i = 1u32;
        loop {
            let d = Poly::new(
                c.coeffs
                    .iter()
                    .cloned()
                    .chain(std::iter::repeat(Rational::zero()))
                    .zip(b.derivative().coeffs.iter().cloned().chain(std::iter::repeat(Rational::zero())))
                    .take(c.coeffs.len().max(b.derivative().coeffs.len()))
                    .map(|(x, y)| x - y)
                    .collect(),
            );
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            i += 1;
            if b.degree() == 0 {
                break;
            }
        }
        out
    }

    /// Clears denominators and the content: a primitive integer polynomial
    /// with the same roots.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * &lcm / c.denom()).collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if content.is_zero() {
            return ints;
        }
        ints.iter().map(|v| v / &content).collect()
    }

    /// Factors a squarefree polynomial into irreducible monic factors.
    fn factor_squarefree(&self) -> Vec<Poly> {
        let mut factors = Vec::new();
        let mut rest = self.monic();
        if rest.degree() == 0 {
            return factors;
        }
        // strip rational roots
        for root in rational_roots(&rest) {
            let lin = Poly::new(vec![-root.clone(), Rational::one()]);
            let (q, r) = rest.divrem(&lin);
            debug_assert!(r.is_zero());
            rest = q;
            factors.push(lin);
        }
        if rest.degree() >= 1 {
            factors.extend(factor_rootless(&rest));
        }
        factors
    }
}

/// All rational roots of a polynomial (each listed once; the input is
/// squarefree in practice).
fn rational_roots(p: &Poly) -> Vec<Rational> {
    let ints = p.primitive_integer();
    if ints.is_empty() {
        return vec![];
    }
    let tv = ints.iter().take_while(|c| c.is_zero()).count();
    let mut roots = Vec::new();
    if tv > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[tv..];
    if ints.len() <= 1 {
        return roots;
    }
    let a0 = ints[0].abs();
    let an = ints.last().expect("nonzero").abs();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(&num * BigInt::from(sign), den.clone());
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand.clone());
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Positive divisors by trial division; intended for desk-scale inputs.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut divs = vec![BigInt::one()];
    let mut rest = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut mult = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            mult += 1;
        }
        if mult > 0 {
            primes.push((p.clone(), mult));
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    for (prime, mult) in primes {
        let base: Vec<BigInt> = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..mult {
            power *= &prime;
            for d in &base {
                divs.push(d * &power);
            }
        }
    }
    divs.sort();
    divs
}

/// Factors a squarefree polynomial without rational roots. Degrees 2 and 3
/// are already irreducible; beyond that, candidate factors are searched by
/// interpolation through divisor tuples of integer evaluations.
fn factor_rootless(p: &Poly) -> Vec<Poly> {
    let n = p.degree();
    if n <= 3 {
        return vec![p.monic()];
    }
    let ints = p.primitive_integer();
    let pz = Poly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    for m in 2..=n / 2 {
        // evaluation points 0, 1, -1, 2, -2, ...
        let mut points: Vec<(Rational, Vec<BigInt>)> = Vec::new();
        let mut t = 0i64;
        while points.len() < m + 1 {
            let x = Rational::from_integer(BigInt::from(t));
            let v = pz.eval(&x);
            if !v.is_zero() {
                points.push((x, signed_divisors(v.numer())));
            }
            t = if t > 0 { -t } else { -t + 1 };
        }
        let mut choice = vec![0usize; m + 1];
        'outer: loop {
            let samples: Vec<(Rational, Rational)> = points
                .iter()
                .zip(&choice)
                .map(|((x, divs), &c)| (x.clone(), Rational::from_integer(divs[c].clone())))
                .collect();
            if let Some(g) = interpolate(&samples) {
                if g.degree() == m {
                    let (q, r) = pz.divrem(&g);
                    if r.is_zero() {
                        let mut fs = factor_rootless(&g.monic());
                        fs.extend(factor_rootless(&q.monic()));
                        return fs;
                    }
                }
            }
            for i in 0..=m {
                choice[i] += 1;
                if choice[i] < points[i].1.len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    vec![p.monic()]
}

fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    for d in divisors(n) {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

/// Lagrange interpolation through exact points; `None` if inconsistent.
fn interpolate(samples: &[(Rational, Rational)]) -> Option<Poly> {
    let mut acc = Poly::new(vec![]);
    for (i, (xi, yi)) in samples.iter().enumerate() {
        let mut basis = Poly::new(vec![Rational::one()]);
        let mut denom = Rational::one();
        for (j, (xj, _)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&Poly::new(vec![-xj.clone(), Rational::one()]));
            denom *= xi - xj;
        }
        let scale = yi / denom;
        let term = Poly::new(basis.coeffs.iter().map(|c| c * &scale).collect());
        let len = acc.coeffs.len().max(term.coeffs.len());
        let mut sum = vec![Rational::zero(); len];
        for (k, c) in acc.coeffs.iter().enumerate() {
            sum[k] += c;
        }
        for (k, c) in term.coeffs.iter().enumerate() {
            sum[k] += c;
        }
        acc = Poly::new(sum);
    }
    Some(acc)
}

/// Interpolates the coefficients of a degree-bounded polynomial from exact
/// samples at `0, 1, ..., degree`; used for pencil minor determinants.
pub(crate) fn interpolate_through_integers(values: &[Rational]) -> Vec<Rational> {
    let samples: Vec<(Rational, Rational)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (Rational::from_integer(BigInt::from(i)), v.clone()))
        .collect();
    let p = interpolate(&samples).expect("distinct nodes");
    let mut coeffs = p.coeffs;
    coeffs.resize(values.len(), Rational::zero());
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn form(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn gcd_and_division() {
        // gcd(x^2, x*y) = x
        let g = form(&[1, 0, 0]).gcd(&form(&[0, 1, 0]));
        assert_eq!(g, BinaryForm::x());

        // (x^2 - y^2) / (x - y) = x + y
        let q = form(&[1, 0, -1]).div_exact(&form(&[1, -1])).unwrap();
        assert_eq!(q, form(&[1, 1]));

        assert!(form(&[1, 0, 1]).div_exact(&form(&[1, -1])).is_none());

        // y-power bookkeeping: gcd(y^2, x*y) = y
        let g = form(&[0, 0, 1]).gcd(&form(&[0, 1, 0]));
        assert_eq!(g, BinaryForm::y());
    }

    #[test]
    fn monic_uses_lex_leading_monomial() {
        // 2xy + 4y^2 -> xy + 2y^2
        let m = form(&[0, 2, 4]).monic();
        assert_eq!(m, form(&[0, 1, 2]));
    }

    #[test]
    fn factor_small_forms() {
        // x^2 y
        let f = form(&[0, 1, 0, 0]);
        assert_eq!(f.factor(), vec![(BinaryForm::y(), 1), (BinaryForm::x(), 2)]);

        // x^2 - y^2 = (x - y)(x + y)
        let f = form(&[1, 0, -1]);
        let factors = f.factor();
        assert_eq!(factors.len(), 2);
        assert!(factors.contains(&(form(&[1, -1]), 1)));
        assert!(factors.contains(&(form(&[1, 1]), 1)));

        // x^2 + y^2 irreducible over the rationals
        let f = form(&[1, 0, 1]);
        assert_eq!(f.factor(), vec![(form(&[1, 0, 1]), 1)]);

        // (x + 2y)^2 * (x^2 + y^2)
        let f = form(&[1, 2]).mul(&form(&[1, 2])).mul(&form(&[1, 0, 1]));
        let factors = f.factor();
        assert!(factors.contains(&(form(&[1, 2]), 2)));
        assert!(factors.contains(&(form(&[1, 0, 1]), 1)));
        assert_eq!(factors.len(), 2);
    }

    #[test]
    fn factor_quartic_without_roots() {
        // (x^2 + y^2)(x^2 + 2y^2) needs the interpolation search
        let f = form(&[1, 0, 1]).mul(&form(&[1, 0, 2]));
        let factors = f.factor();
        assert_eq!(factors.len(), 2);
        assert!(factors.contains(&(form(&[1, 0, 1]), 1)));
        assert!(factors.contains(&(form(&[1, 0, 2]), 1)));

        // x^4 + x y^3 + y^4 is irreducible
        let f = form(&[1, 0, 0, 1, 1]);
        assert_eq!(f.factor(), vec![(form(&[1, 0, 0, 1, 1]), 1)]);
    }

    #[test]
    fn squarefree_detection() {
        assert!(form(&[1, 1]).is_squarefree());
        assert!(form(&[1, 0, -1]).is_squarefree());
        assert!(!form(&[1, 2, 1]).is_squarefree()); // (x+y)^2
        assert!(!form(&[0, 0, 1]).is_squarefree()); // y^2
        assert!(form(&[0, 1, 0]).is_squarefree()); // xy
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(form(&[1, 0, -1]).to_string(), "x^2 - y^2");
        assert_eq!(form(&[0, 1]).to_string(), "y");
        assert_eq!(BinaryForm::zero().to_string(), "0");
        let half = BinaryForm::from_coeffs(vec![ratio(1, 2), rat(0)]);
        assert_eq!(half.to_string(), "1/2*x");
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        // p(t) = 3 - t + 2 t^2 sampled at 0, 1, 2
        let values = vec![rat(3), rat(4), rat(9)];
        assert_eq!(interpolate_through_integers(&values), vec![rat(3), rat(-1), rat(2)]);
    }
}
