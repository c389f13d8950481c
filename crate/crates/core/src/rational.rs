//! Exact rational scalars.
//!
//! Every coordinate in this crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. There is no
//! floating point anywhere in the decision path; membership in a family is a
//! closed condition and rounding would make it ill-posed.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` (denominator 1). Integers are unbounded.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Renders in the same `"p/q"` / `"p"` format accepted by [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Exact square root if `r` is the square of a rational, `None` otherwise.
///
/// Used to decide whether a quadratic character polynomial splits over the
/// rationals: its discriminant is a square iff both roots are rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let num = bigint_sqrt_exact(r.numer())?;
    let den = bigint_sqrt_exact(r.denom())?;
    Some(Rational::new(num, den))
}

/// True iff `r` is the square of a rational number.
pub fn is_rational_square(r: &Rational) -> bool {
    rational_sqrt(r).is_some()
}

/// True iff `r` is one (convenience re-export used by callers).
pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "7", "-22/7", "123456789123456789123/2"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // non-reduced input normalizes
        assert_eq!(format_rational(&parse_rational("4/8").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("6/3").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
    }

    #[test]
    fn square_detection() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(0)), Some(rat(0)));
        assert_eq!(rational_sqrt(&rat(1)), Some(rat(1)));
        assert!(rational_sqrt(&rat(2)).is_none());
        assert!(rational_sqrt(&rat(-4)).is_none());
        assert!(rational_sqrt(&ratio(1, 3)).is_none());
    }
}
