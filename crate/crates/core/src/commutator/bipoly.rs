//! Polynomials in two variables `m`, `n` with rational coefficients.

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{factorial, format_rational, int, Rational, UniPoly};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    /// `(i, j) -> c` for the monomial `c m^i n^j`; no zero entries.
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn m() -> Self {
        let mut p = Self::zero();
        p.add_term(1, 0, int(1));
        p
    }

    pub fn n() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 1, int(1));
        p
    }

    /// `C(x + shift, k)` as a polynomial in `x`, where `x` is `m` or `n`.
    pub fn binomial(x: &BiPoly, shift: i64, k: u32) -> Self {
        let mut p = Self::constant(Rational::one() / factorial(k));
        for i in 0..k as i64 {
            p = p * (x.clone() + Self::constant(int(shift - i)));
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        for (&(i, j), v) in &self.terms {
            p.add_term(i, j, v * c);
        }
        p
    }

    pub fn eval(&self, m: &Rational, n: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * pow(m, i) * pow(n, j))
            .sum()
    }

    /// The restriction to the anti-diagonal `n = -m`, as a polynomial in `m`.
    pub fn antidiagonal(&self) -> UniPoly {
        let degree = self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (&(i, j), c) in &self.terms {
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            coeffs[(i + j) as usize] += c * sign;
        }
        UniPoly::new(coeffs)
    }

    /// Substitutes fixed values for `m` and keeps `n` as the variable.
    pub fn fix_m(&self, m: &Rational) -> UniPoly {
        let degree = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] += c * pow(m, i);
        }
        UniPoly::new(coeffs)
    }
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(mut self, rhs: BiPoly) -> BiPoly {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        self + (-rhs)
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&int(-1))
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        let mut p = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                p.add_term(i + k, j + l, a * b);
            }
        }
        p
    }
}

impl Mul<BiPoly> for i64 {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        rhs.scale(&int(self))
    }
}

impl Mul<BiPoly> for Rational {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        rhs.scale(&self)
    }
}

impl Add<i64> for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: i64) -> BiPoly {
        self + BiPoly::constant(int(rhs))
    }
}

impl Sub<i64> for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: i64) -> BiPoly {
        self + BiPoly::constant(int(-rhs))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            match i {
                0 => {}
                1 => write!(f, "*m")?,
                _ => write!(f, "*m^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*n")?,
                _ => write!(f, "*n^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn binomial_matches_scalar_binomial() {
        let p = BiPoly::binomial(&BiPoly::m(), 1, 5);
        for m in -6..8 {
            let expected = crate::exact::gen_binomial(&int(m + 1), 5);
            assert_eq!(p.eval(&int(m), &int(0)), expected);
        }
    }

    #[test]
    fn antidiagonal_restriction() {
        let p = (BiPoly::m() - BiPoly::n()) * BiPoly::n();
        let u = p.antidiagonal();
        assert_eq!(u.eval(&int(3)), int(-18));
    }

    proptest! {
        #[test]
        fn ring_operations_commute_with_evaluation(a in -5i64..5, b in -5i64..5, c in 1i64..4) {
            let x = BiPoly::m() * BiPoly::m() - 3 * BiPoly::n() + 2;
            let y = rat(1, c) * (BiPoly::m() * BiPoly::n()) - BiPoly::n();
            let (m, n) = (int(a), int(b));
            prop_assert_eq!((x.clone() * y.clone()).eval(&m, &n), x.eval(&m, &n) * y.eval(&m, &n));
            prop_assert_eq!((x.clone() + y.clone()).eval(&m, &n), x.eval(&m, &n) + y.eval(&m, &n));
            prop_assert_eq!((x.clone() - x).eval(&m, &n), int(0));
        }
    }
}
