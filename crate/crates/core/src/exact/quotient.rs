use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Rational, Scalar, UniPoly};

/// Element of `Q[t]/(f)`.
///
/// Constants created without a ring context (`zero`, `one`, `t`) carry no
/// modulus; they pick one up from the first operand that has it, so ring
/// arithmetic never needs an explicit context argument.
#[derive(Clone, Debug)]
pub struct QuotientRingElem {
    rep: UniPoly,
    modulus: Option<Arc<UniPoly>>,
}

impl QuotientRingElem {
    /// `modulus` must be monic of degree at least one.
    pub fn new(rep: UniPoly, modulus: Arc<UniPoly>) -> Self {
        assert!(
            modulus.is_monic() && modulus.degree().unwrap_or(0) >= 1,
            "quotient modulus must be monic of positive degree"
        );
        let rep = rep.rem(&modulus);
        QuotientRingElem { rep, modulus: Some(modulus) }
    }

    pub fn free(rep: UniPoly) -> Self {
        QuotientRingElem { rep, modulus: None }
    }

    pub fn representative(&self) -> &UniPoly {
        &self.rep
    }

    pub fn modulus(&self) -> Option<&Arc<UniPoly>> {
        self.modulus.as_ref()
    }

    /// Reduces against `modulus`, attaching it.
    pub fn in_ring(&self, modulus: &Arc<UniPoly>) -> Self {
        Self::new(self.rep.clone(), modulus.clone())
    }

    /// `f(t) -> f(-t)`.
    pub fn reflect(&self) -> Self {
        let rep = self.rep.reflect();
        match &self.modulus {
            Some(m) => Self::new(rep, m.clone()),
            None => Self::free(rep),
        }
    }

    fn combine(&self, rhs: &Self, rep: UniPoly) -> Self {
        match self.modulus.as_ref().or(rhs.modulus.as_ref()) {
            Some(m) => Self::new(rep, m.clone()),
            None => Self::free(rep),
        }
    }

    fn reduced_rep(&self, other: &Self) -> UniPoly {
        match (&self.modulus, &other.modulus) {
            (None, Some(m)) => self.rep.rem(m),
            _ => self.rep.clone(),
        }
    }
}

impl PartialEq for QuotientRingElem {
    fn eq(&self, other: &Self) -> bool {
        self.reduced_rep(other) == other.reduced_rep(self)
    }
}

impl Add for QuotientRingElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let rep = &self.rep + &rhs.rep;
        self.combine(&rhs, rep)
    }
}

impl Sub for QuotientRingElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let rep = &self.rep - &rhs.rep;
        self.combine(&rhs, rep)
    }
}

impl Mul for QuotientRingElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let rep = &self.rep * &rhs.rep;
        self.combine(&rhs, rep)
    }
}

impl Neg for QuotientRingElem {
    type Output = Self;
    fn neg(self) -> Self {
        QuotientRingElem { rep: -&self.rep, modulus: self.modulus }
    }
}

impl Zero for QuotientRingElem {
    fn zero() -> Self {
        Self::free(UniPoly::zero())
    }
    // Exact only for reduced elements or free constants.
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl One for QuotientRingElem {
    fn one() -> Self {
        Self::free(UniPoly::constant(Rational::one()))
    }
}

impl Scalar for QuotientRingElem {
    fn from_rational(r: Rational) -> Self {
        Self::free(UniPoly::constant(r))
    }

    fn formal_variable() -> Option<Self> {
        Some(Self::free(UniPoly::variable()))
    }

    fn scale(&self, r: &Rational) -> Self {
        QuotientRingElem { rep: self.rep.scale(r), modulus: self.modulus.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn reduction_mod_square() {
        let f = Arc::new(UniPoly::from_roots(&[int(1), int(1)]));
        let one = QuotientRingElem::new(UniPoly::constant(int(1)), f.clone());
        let t = QuotientRingElem::formal_variable().unwrap();
        // t^2 = 2t - 1 mod (t-1)^2
        let t2 = one * t.clone() * t;
        assert_eq!(t2.representative(), &UniPoly::new(vec![int(-1), int(2)]));
    }

    #[test]
    fn free_constants_compare_after_reduction() {
        let f = Arc::new(UniPoly::linear(int(3)));
        let t = QuotientRingElem::formal_variable().unwrap();
        let three = QuotientRingElem::new(UniPoly::constant(int(3)), f);
        assert_eq!(t, three);
        assert!((t - three).is_zero());
    }

    #[test]
    fn reflection_respects_modulus() {
        let f = Arc::new(UniPoly::new(vec![int(0), int(0), int(1)]));
        let t = QuotientRingElem::new(UniPoly::variable(), f);
        assert_eq!(t.reflect(), -t);
    }
}
