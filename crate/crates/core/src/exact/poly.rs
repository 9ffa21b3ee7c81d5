use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{format_rational, gen_binomial, int, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn variable() -> Self {
        Self::new(vec![int(0), int(1)])
    }

    /// `t - c`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![-c, int(1)])
    }

    /// Monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::constant(int(1)), |acc, r| &acc * &Self::linear(r.clone()))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// `p(-t)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = &rem[top] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[top - dd + i] -= &c * d;
            }
            quot[top - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&(Rational::one() / l)),
            None => a,
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Coefficients of `self` in the basis `(t - c)^j`.
    pub fn taylor_shift(&self, c: &Rational) -> Vec<Rational> {
        // p(t) = sum_k a_k ((t - c) + c)^k
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (k, a) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let binom = gen_binomial(&int(k as i64), j as u32);
                *slot += a * binom * pow(c, (k - j) as u32);
            }
        }
        out
    }

    /// Lagrange interpolation through `(x_i, y_i)`; the `x_i` must be distinct.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let denom = xi - xj;
                    basis = (&basis * &Self::linear(xj.clone())).scale(&(Rational::one() / denom));
                }
            }
            acc = &acc + &basis;
        }
        acc
    }
}

pub(crate) fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})t", format_rational(c))?,
                _ => write!(f, "({})t^{i}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

/// The odd-power expansion of `(-1)^(r-1) 2r C(n+r-1, r-1) C(n, r)` in `n`.
///
/// Returns `(c_1, ..., c_r)` with the product equal to `sum c_i n^(2i-1)`.
pub fn odd_poly_coeffs(r: u32) -> Result<Vec<Rational>> {
    if r == 0 {
        return Err(Error::InvalidArgument("odd_poly_coeffs needs r >= 1".into()));
    }
    let r_i = r as i64;
    let mut p = UniPoly::constant(int(if r % 2 == 1 { 2 * r_i } else { -2 * r_i }));
    // C(n + r - 1, r - 1)
    for j in 0..(r_i - 1) {
        p = &p * &UniPoly::new(vec![int(r_i - 1 - j), int(1)]);
        p = p.scale(&(Rational::one() / int(j + 1)));
    }
    // C(n, r)
    for j in 0..r_i {
        p = &p * &UniPoly::new(vec![int(-j), int(1)]);
        p = p.scale(&(Rational::one() / int(j + 1)));
    }
    let mut out = Vec::with_capacity(r as usize);
    for (deg, c) in p.coeffs().iter().enumerate() {
        if deg % 2 == 0 {
            if !c.is_zero() {
                return Err(Error::Internal(format!(
                    "even coefficient of degree {deg} is nonzero for r = {r}"
                )));
            }
        } else {
            out.push(c.clone());
        }
    }
    out.resize(r as usize, Rational::zero());
    if out[r as usize - 1].is_zero() {
        return Err(Error::Internal(format!("leading constant vanishes for r = {r}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn odd_coefficients_small_r() {
        assert_eq!(odd_poly_coeffs(1).unwrap(), vec![int(2)]);
        assert_eq!(odd_poly_coeffs(2).unwrap(), vec![int(2), int(-2)]);
        assert_eq!(odd_poly_coeffs(3).unwrap(), vec![int(2), rat(-5, 2), rat(1, 2)]);
        assert!(odd_poly_coeffs(0).is_err());
    }

    #[test]
    fn odd_coefficients_reproduce_product() {
        for r in 1..=6u32 {
            let cs = odd_poly_coeffs(r).unwrap();
            for n in 1..=(2 * r as i64) {
                let x = int(n);
                let sign = if r % 2 == 1 { 1 } else { -1 };
                let direct = int(sign * 2 * r as i64)
                    * gen_binomial(&(x.clone() + int(r as i64 - 1)), r - 1)
                    * gen_binomial(&x, r);
                let via: Rational = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * pow(&x, 2 * i as u32 + 1))
                    .sum();
                assert_eq!(direct, via, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn division_and_gcd() {
        let f = UniPoly::from_roots(&[int(1), int(1), int(2)]);
        let (q, r) = f.div_rem(&UniPoly::linear(int(1)));
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_roots(&[int(1), int(2)]));
        assert!(!f.is_squarefree());
        assert!(UniPoly::from_roots(&[int(1), int(-1)]).is_squarefree());
        assert_eq!(f.gcd(&f.derivative()), UniPoly::linear(int(1)));
    }

    #[test]
    fn taylor_shift_and_interpolation() {
        // t^2 = 1 + 2(t-1) + (t-1)^2
        let t2 = UniPoly::new(vec![int(0), int(0), int(1)]);
        assert_eq!(t2.taylor_shift(&int(1)), vec![int(1), int(2), int(1)]);
        let pts: Vec<_> = (-3..=3).map(|x| (int(x), t2.eval(&int(x)))).collect();
        assert_eq!(UniPoly::interpolate(&pts), t2);
        assert_eq!(t2.reflect(), t2);
        assert_eq!(UniPoly::variable().reflect(), UniPoly::new(vec![int(0), int(-1)]));
    }
}
