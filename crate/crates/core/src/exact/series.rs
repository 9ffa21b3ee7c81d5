use num_traits::{One, Zero};
use std::collections::BTreeMap;

use super::{gen_binomial, int, rat, Rational};

/// Truncated power series in two commuting variables `x`, `y`.
///
/// Only exponent pairs `(m, n)` with `m + n <= order` are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    order: u32,
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl BiSeries {
    pub fn zero(order: u32) -> Self {
        BiSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(order: u32, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.set(0, 0, c);
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, m: u32, n: u32) -> Rational {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    fn set(&mut self, m: u32, n: u32, c: Rational) {
        if m + n > self.order {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&(m, n));
        } else {
            self.coeffs.insert((m, n), c);
        }
    }

    fn accumulate(&mut self, m: u32, n: u32, c: Rational) {
        if m + n > self.order || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((m, n)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(m, n));
        }
    }

    /// `(1 + x)^e` truncated, with `e` rational.
    pub fn binomial_x(order: u32, e: &Rational) -> Self {
        let mut s = Self::zero(order);
        for m in 0..=order {
            s.set(m, 0, gen_binomial(e, m));
        }
        s
    }

    pub fn swap_variables(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (&(m, n), c) in &self.coeffs {
            s.set(n, m, c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.order = self.order.min(other.order);
        s.coeffs.retain(|&(m, n), _| m + n <= s.order);
        for (&(m, n), c) in &other.coeffs {
            s.accumulate(m, n, c.clone());
        }
        s
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut s = Self::zero(self.order);
        for (&(m, n), c) in &self.coeffs {
            s.set(m, n, c * r);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut s = Self::zero(self.order.min(other.order));
        for (&(m1, n1), a) in &self.coeffs {
            for (&(m2, n2), b) in &other.coeffs {
                s.accumulate(m1 + m2, n1 + n2, a * b);
            }
        }
        s
    }

    /// `log(1 + u)` for a series `u` with zero constant term.
    pub fn log1p(&self) -> Self {
        assert!(self.coeff(0, 0).is_zero(), "log1p needs a zero constant term");
        let mut out = Self::zero(self.order);
        let mut power = Self::constant(self.order, Rational::one());
        for k in 1..=self.order {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&rat(sign, k as i64)));
        }
        out
    }
}

/// `-log((sqrt(1 + x) + sqrt(1 + y)) / 2)` truncated to total degree `order`.
///
/// Its coefficients are the quadratic contraction constants of the
/// twisted vertex operators.
pub fn delta_series(order: u32) -> BiSeries {
    let half = rat(1, 2);
    let sx = BiSeries::binomial_x(order, &half);
    let sy = sx.swap_variables();
    // u = (sqrt(1+x) + sqrt(1+y))/2 - 1
    let u = sx.add(&sy).scale(&half).add(&BiSeries::constant(order, int(-1)));
    u.log1p().scale(&int(-1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_coefficients() {
        let d = delta_series(4);
        assert_eq!(d.coeff(0, 0), int(0));
        assert_eq!(d.coeff(1, 1), rat(1, 16));
        assert!(delta_series(0).is_zero());
        // pure x part is -log((sqrt(1+x)+1)/2); its linear term is -1/4
        assert_eq!(d.coeff(1, 0), rat(-1, 4));
    }

    #[test]
    fn symmetric_in_both_variables() {
        let d = delta_series(12);
        for m in 0..=12 {
            for n in 0..=(12 - m) {
                assert_eq!(d.coeff(m, n), d.coeff(n, m));
            }
        }
    }

    #[test]
    fn log_of_geometric_factor() {
        // log(1 + x) has coefficients (-1)^(k+1)/k
        let mut x = BiSeries::zero(6);
        x.set(1, 0, int(1));
        let l = x.log1p();
        for k in 1..=6u32 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coeff(k, 0), rat(sign, k as i64));
        }
    }
}
