//! Exact scalars, polynomials and linear algebra.
//!
//! Everything here is exact: there is no floating point anywhere in the crate.

mod linalg;
mod poly;
mod quotient;
mod series;

pub use linalg::{solve_in_span, ModularEchelon, SpanSolver, SparseVec};
pub use poly::{odd_poly_coeffs, UniPoly};
pub use quotient::QuotientRingElem;
pub use series::{delta_series, BiSeries};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Generalised binomial coefficient `x(x-1)...(x-m+1)/m!`.
pub fn gen_binomial(x: &Rational, m: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..m {
        acc = acc * (x - int(j as i64)) / int(j as i64 + 1);
    }
    acc
}

pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient ring of a Fock vector.
///
/// Two instances exist: [`Rational`] for honest modules and
/// [`QuotientRingElem`] for the polynomial-parametrised module, where the
/// Heisenberg zero mode acts by the formal variable `t`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_rational(r: Rational) -> Self;

    /// The formal variable `t`, if this ring has one.
    fn formal_variable() -> Option<Self>;

    fn scale(&self, r: &Rational) -> Self {
        self.clone() * Self::from_rational(r.clone())
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn formal_variable() -> Option<Self> {
        None
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

/// `true` when `r` is a non-negative integer.
pub fn is_natural(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binomial(&int(5), 0), int(1));
        assert_eq!(gen_binomial(&rat(-3, 2), 2), rat(15, 8));
        assert_eq!(gen_binomial(&int(3), 5), int(0));
        assert_eq!(gen_binomial(&int(-1), 3), int(-1));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-13/10").unwrap(), rat(-13, 10));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    proptest! {
        #[test]
        fn pascal_rule(n in -40i64..40, d in 1i64..7, m in 1u32..=12) {
            let x = rat(n, d);
            let lhs = gen_binomial(&x, m);
            let rhs = gen_binomial(&(x.clone() - int(1)), m) + gen_binomial(&(x - int(1)), m - 1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
