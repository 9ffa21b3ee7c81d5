//! States of the rank-one Fock modules.
//!
//! A [`Monomial`] is `b(-n_1) ... b(-n_s) g` for a ground state `g` that is
//! either a momentum state `e^{c b}`, the twisted vacuum `1_tw`, or the
//! formal ground of the polynomial-parametrised module. Mode indices are
//! stored doubled so that twisted half-integers stay integral.

use num_traits::{One, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, rat, Rational, Scalar};

/// The norm `(b, b)` of the Heisenberg generator a workspace uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorProfile {
    norm: Rational,
}

impl GeneratorProfile {
    pub fn new(norm: Rational) -> Result<Self> {
        if norm <= Rational::zero() {
            return Err(Error::InvalidArgument(format!(
                "generator norm must be positive, got {}",
                format_rational(&norm)
            )));
        }
        Ok(GeneratorProfile { norm })
    }

    /// `(h, h) = 1`.
    pub fn orthonormal() -> Self {
        GeneratorProfile { norm: Rational::one() }
    }

    /// Lattice generator with `(alpha, alpha) = 2k`.
    pub fn lattice(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("lattice level k must be at least 1".into()));
        }
        Ok(GeneratorProfile { norm: int(2 * k as i64) })
    }

    pub fn norm(&self) -> &Rational {
        &self.norm
    }

    pub fn is_orthonormal(&self) -> bool {
        self.norm.is_one()
    }
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        Self::orthonormal()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Untwisted,
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ground {
    /// `e^{c b}`; the zero mode acts by `c (b, b)`.
    Momentum(Rational),
    /// `1_tw`.
    Twisted,
    /// Ground of `M(1)[t]`; the zero mode acts by the ring variable `t`.
    Formal,
}

impl Ground {
    pub fn vacuum() -> Self {
        Ground::Momentum(Rational::zero())
    }

    pub fn sector(&self) -> Sector {
        match self {
            Ground::Twisted => Sector::Twisted,
            _ => Sector::Untwisted,
        }
    }

    /// Conformal weight of the ground state itself.
    pub fn weight(&self, profile: &GeneratorProfile) -> Rational {
        match self {
            Ground::Momentum(c) => c * c * profile.norm() / int(2),
            Ground::Twisted => rat(1, 16),
            Ground::Formal => Rational::zero(),
        }
    }
}

/// Doubled mode index: `2n` for `b(-n)`.
pub type Mode2 = u16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    modes: SmallVec<[Mode2; 8]>,
    ground: Ground,
}

impl Monomial {
    /// Validates parities and sorts the doubled indices descending.
    pub fn new(mut modes: SmallVec<[Mode2; 8]>, ground: Ground) -> Result<Self> {
        let twisted = ground.sector() == Sector::Twisted;
        for &m in &modes {
            if m == 0 {
                return Err(Error::InvalidArgument("mode index must be positive".into()));
            }
            if twisted != (m % 2 == 1) {
                return Err(Error::SectorMismatch(format!(
                    "mode {} does not belong to the {} sector",
                    format_rational(&rat(m as i64, 2)),
                    if twisted { "twisted" } else { "untwisted" }
                )));
            }
        }
        modes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Monomial { modes, ground })
    }

    pub(crate) fn from_sorted(modes: SmallVec<[Mode2; 8]>, ground: Ground) -> Self {
        debug_assert!(modes.windows(2).all(|w| w[0] >= w[1]));
        Monomial { modes, ground }
    }

    /// `b(-n_1) ... b(-n_s)` over an integral ground.
    pub fn untwisted(modes: &[u32], ground: Ground) -> Result<Self> {
        Self::new(modes.iter().map(|&n| (2 * n) as Mode2).collect(), ground)
    }

    /// Twisted monomial from doubled indices (`1` means `b(-1/2)`).
    pub fn twisted(doubled: &[u32]) -> Result<Self> {
        Self::new(doubled.iter().map(|&n| n as Mode2).collect(), Ground::Twisted)
    }

    pub fn vacuum() -> Self {
        Monomial { modes: SmallVec::new(), ground: Ground::vacuum() }
    }

    pub fn ground_state(ground: Ground) -> Self {
        Monomial { modes: SmallVec::new(), ground }
    }

    pub fn modes(&self) -> &[Mode2] {
        &self.modes
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn sector(&self) -> Sector {
        self.ground.sector()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn degree2(&self) -> u32 {
        self.modes.iter().map(|&m| m as u32).sum()
    }

    /// Sum of the mode indices.
    pub fn degree(&self) -> Rational {
        rat(self.degree2() as i64, 2)
    }

    pub fn weight(&self, profile: &GeneratorProfile) -> Rational {
        self.degree() + self.ground.weight(profile)
    }

    pub fn with_ground(&self, ground: Ground) -> Self {
        Monomial { modes: self.modes.clone(), ground }
    }

    /// Adds a creation mode (doubled index).
    pub fn with_mode(&self, m: Mode2) -> Result<Self> {
        let mut modes = self.modes.clone();
        modes.push(m);
        Self::new(modes, self.ground.clone())
    }

    /// Multiplicity of the doubled index `m`.
    pub fn count(&self, m: Mode2) -> usize {
        self.modes.iter().filter(|&&x| x == m).count()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree2()
            .cmp(&other.degree2())
            .then_with(|| self.modes.cmp(&other.modes))
            .then_with(|| self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &m) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(&rat(m as i64, 2)))?;
        }
        write!(f, "] @ ")?;
        match &self.ground {
            Ground::Momentum(c) => write!(f, "e^{}", format_rational(c)),
            Ground::Twisted => write!(f, "tw"),
            Ground::Formal => write!(f, "t"),
        }
    }
}

/// Finite linear combination of monomials; never stores zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<R: Scalar = Rational> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Scalar> Default for FockVector<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Scalar> FockVector<R> {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, R::one())
    }

    pub fn term(m: Monomial, c: R) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, R)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let sum = slot.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, c: &R) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &R::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &(-R::one()));
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.scale(r));
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), f(x));
        }
        out
    }

    /// The common sector, `None` for the zero vector.
    pub fn sector(&self) -> Result<Option<Sector>> {
        let mut sectors = self.terms.keys().map(Monomial::sector);
        let Some(first) = sectors.next() else { return Ok(None) };
        if sectors.any(|s| s != first) {
            return Err(Error::SectorMismatch("vector mixes twisted and untwisted terms".into()));
        }
        Ok(Some(first))
    }

    /// Splits into homogeneous components keyed by weight.
    pub fn components(&self, profile: &GeneratorProfile) -> BTreeMap<Rational, Self> {
        let mut out: BTreeMap<Rational, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(profile))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// The weight if every term shares it; `None` for the zero vector.
    pub fn homogeneous_weight(&self, profile: &GeneratorProfile) -> Result<Option<Rational>> {
        let comps = self.components(profile);
        match comps.len() {
            0 => Ok(None),
            1 => Ok(comps.into_keys().next()),
            _ => Err(Error::NotHomogeneous(format!(
                "weights {}",
                comps.keys().map(format_rational).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn max_weight(&self, profile: &GeneratorProfile) -> Option<Rational> {
        self.terms.keys().map(|m| m.weight(profile)).max()
    }
}

impl FockVector<Rational> {
    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::vacuum())
    }

    pub fn twisted_vacuum() -> Self {
        Self::from_monomial(Monomial::ground_state(Ground::Twisted))
    }

    pub fn momentum(c: Rational) -> Self {
        Self::from_monomial(Monomial::ground_state(Ground::Momentum(c)))
    }

    /// `b(-n_1) ... b(-n_s) 1`.
    pub fn heis(modes: &[u32]) -> Self {
        Self::from_monomial(Monomial::untwisted(modes, Ground::vacuum()).expect("positive modes"))
    }

    /// `sum c * b(-n_1)...b(-n_s) 1` from `(c, modes)` pairs.
    pub fn heis_combination(terms: &[(Rational, &[u32])]) -> Self {
        let mut v = Self::zero();
        for (c, modes) in terms {
            v.add_term(
                Monomial::untwisted(modes, Ground::vacuum()).expect("positive modes"),
                c.clone(),
            );
        }
        v
    }

    /// `theta`: sign `(-1)^(number of modes)` and momentum `c -> -c`.
    pub fn theta(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let ground = match &m.ground {
                Ground::Momentum(p) => Ground::Momentum(-p),
                g => g.clone(),
            };
            let sign = if m.len() % 2 == 0 { c.clone() } else { -c };
            out.add_term(m.with_ground(ground), sign);
        }
        out
    }

    /// Canonical text form: one `coef * [modes] @ ground` line per term.
    pub fn serialize(&self) -> String {
        self.terms
            .iter()
            .map(|(m, c)| format!("{} * {}", format_rational(c), m))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut v = Self::zero();
        let mut sector = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", lineno + 1));
            let (coef, rest) = line.split_once('*').ok_or_else(|| err("missing '*'"))?;
            let (modes, ground) = rest.split_once('@').ok_or_else(|| err("missing '@'"))?;
            let coef = parse_rational(coef).map_err(|_| err("bad coefficient"))?;
            let ground = match ground.trim() {
                "tw" => Ground::Twisted,
                "t" => Ground::Formal,
                g => match g.strip_prefix("e^") {
                    Some(c) => Ground::Momentum(parse_rational(c).map_err(|_| err("bad momentum"))?),
                    None => return Err(err("unknown ground state")),
                },
            };
            let modes = modes.trim();
            let inner = modes
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err("modes must be bracketed"))?;
            let mut doubled = SmallVec::new();
            for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let x = parse_rational(tok).map_err(|_| err("bad mode index"))? * int(2);
                if !x.is_integer() || x <= Rational::zero() || x > int(Mode2::MAX as i64) {
                    return Err(err("mode indices must be positive integers or half-integers"));
                }
                doubled.push(x.to_integer().try_into().map_err(|_| err("mode index too large"))?);
            }
            let m = Monomial::new(doubled, ground).map_err(|e| err(&e.to_string()))?;
            match sector {
                None => sector = Some(m.sector()),
                Some(s) if s != m.sector() => return Err(err("mixed sectors")),
                _ => {}
            }
            v.add_term(m, coef);
        }
        Ok(v)
    }
}

impl fmt::Display for FockVector<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.serialize().replace('\n', " + "))
    }
}

/// Partitions of `total` (doubled units) into parts of the sector's parity,
/// each listed in descending order.
pub fn partitions2(total: u32, sector: Sector) -> Vec<SmallVec<[Mode2; 8]>> {
    fn go(
        remaining: u32,
        max_part: u32,
        step_start: u32,
        cur: &mut SmallVec<[Mode2; 8]>,
        out: &mut Vec<SmallVec<[Mode2; 8]>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        let mut part = max_part.min(remaining);
        if part % 2 != step_start % 2 {
            part = part.saturating_sub(1);
        }
        while part >= step_start {
            cur.push(part as Mode2);
            go(remaining - part, part, step_start, cur, out);
            cur.pop();
            if part < 2 {
                break;
            }
            part -= 2;
        }
    }
    let start = match sector {
        Sector::Untwisted => 2,
        Sector::Twisted => 1,
    };
    let mut out = Vec::new();
    if sector == Sector::Untwisted && total % 2 == 1 {
        return out;
    }
    go(total, total, start, &mut SmallVec::new(), &mut out);
    out
}

/// All monomials over `ground` with mode degree at most `max_degree`.
pub fn basis(ground: &Ground, max_degree: &Rational) -> Vec<Monomial> {
    let max2 = (max_degree * int(2)).floor().to_integer();
    let max2: u32 = max2.try_into().unwrap_or(0);
    let sector = ground.sector();
    (0..=max2)
        .flat_map(|d| partitions2(d, sector))
        .map(|modes| Monomial::from_sorted(modes, ground.clone()))
        .collect()
}

/// Monomials over `ground` of mode degree exactly `degree`.
pub fn basis_of_degree(ground: &Ground, degree: &Rational) -> Vec<Monomial> {
    let d2 = degree * int(2);
    if !d2.is_integer() || d2 < Rational::zero() {
        return Vec::new();
    }
    let d2: u32 = d2.to_integer().try_into().unwrap_or(0);
    partitions2(d2, ground.sector())
        .into_iter()
        .map(|modes| Monomial::from_sorted(modes, ground.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega() -> FockVector {
        FockVector::heis_combination(&[(rat(1, 2), &[1, 1])])
    }

    #[test]
    fn weight_examples() {
        let p = GeneratorProfile::orthonormal();
        assert_eq!(Monomial::untwisted(&[3, 1], Ground::vacuum()).unwrap().weight(&p), int(4));
        for k in 1..=3u32 {
            let lattice = GeneratorProfile::lattice(k).unwrap();
            for r in 1..k {
                let m = Monomial::ground_state(Ground::Momentum(rat(r as i64, 2 * k as i64)));
                assert_eq!(m.weight(&lattice), rat((r * r) as i64, 4 * k as i64));
            }
        }
        assert_eq!(Monomial::twisted(&[1]).unwrap().weight(&p), rat(9, 16));
    }

    #[test]
    fn theta_examples() {
        let lam = rat(3, 2);
        let v = FockVector::from_monomial(Monomial::untwisted(&[1], Ground::Momentum(lam.clone())).unwrap());
        let expected = FockVector::term(Monomial::untwisted(&[1], Ground::Momentum(-lam)).unwrap(), int(-1));
        assert_eq!(v.theta(), expected);
        assert_eq!(omega().theta(), omega());
        let tw = FockVector::from_monomial(Monomial::twisted(&[3, 1]).unwrap());
        assert_eq!(tw.theta(), tw);
    }

    #[test]
    fn text_format() {
        assert_eq!(omega().serialize(), "1/2 * [1,1] @ e^0");
        assert_eq!(FockVector::parse("1/2 * [1,1] @ e^0").unwrap(), omega());
        assert_eq!(FockVector::<Rational>::zero().serialize(), "");
        assert!(FockVector::parse("").unwrap().is_zero());
        assert!(FockVector::parse("1 * [1] @ tw").is_err());
        assert!(FockVector::parse("1 * [1/2] @ e^0").is_err());
        assert!(FockVector::parse("1 * [0] @ e^0").is_err());
        assert!(FockVector::parse("1 * [1/2] @ tw\n1 * [1] @ e^0").is_err());
        assert!(FockVector::parse("1 [1] @ e^0").is_err());
        let tw = FockVector::parse("-3/4 * [1/2,3/2] @ tw").unwrap();
        assert_eq!(tw.serialize(), "-3/4 * [3/2,1/2] @ tw");
    }

    #[test]
    fn basis_counts_are_partition_numbers() {
        let p = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for w in 0..=10 {
            let expected: usize = p[..=w].iter().sum();
            assert_eq!(basis(&Ground::vacuum(), &int(w as i64)).len(), expected);
        }
        // twisted: partitions of 2d into odd parts; degree 2 -> 4 = 3+1 = 1+1+1+1
        assert_eq!(basis_of_degree(&Ground::Twisted, &int(2)).len(), 2);
        assert_eq!(basis_of_degree(&Ground::Twisted, &rat(1, 2)).len(), 1);
    }

    fn arb_vector() -> impl Strategy<Value = FockVector> {
        let mono = (proptest::collection::vec(1u32..6, 0..4), -2i64..3, any::<bool>());
        proptest::collection::vec((mono, -5i64..6, 1i64..4), 0..5).prop_map(|terms| {
            let mut v = FockVector::zero();
            for ((modes, mom, twisted), n, d) in terms {
                let m = if twisted {
                    Monomial::twisted(&modes.iter().map(|x| 2 * x - 1).collect::<Vec<_>>()).unwrap()
                } else {
                    Monomial::untwisted(&modes, Ground::Momentum(rat(mom, 2))).unwrap()
                };
                // keep one sector per vector
                if v.sector().ok().flatten().is_none_or(|s| s == m.sector()) {
                    v.add_term(m, rat(n, d));
                }
            }
            v
        })
    }

    proptest! {
        #[test]
        fn theta_is_an_involution(v in arb_vector()) {
            prop_assert_eq!(v.theta().theta(), v);
        }

        #[test]
        fn theta_preserves_weight(v in arb_vector()) {
            let p = GeneratorProfile::orthonormal();
            let w: Vec<_> = v.components(&p).into_keys().collect();
            let tw: Vec<_> = v.theta().components(&p).into_keys().collect();
            prop_assert_eq!(w, tw);
        }

        #[test]
        fn text_round_trip(v in arb_vector()) {
            prop_assert_eq!(FockVector::parse(&v.serialize()).unwrap(), v);
        }

        #[test]
        fn adding_a_mode_adds_its_index(modes in proptest::collection::vec(1u32..6, 0..4), n in 1u32..7) {
            let p = GeneratorProfile::orthonormal();
            let m = Monomial::untwisted(&modes, Ground::Momentum(rat(1, 3))).unwrap();
            let bigger = m.with_mode((2 * n) as Mode2).unwrap();
            prop_assert_eq!(bigger.weight(&p) - m.weight(&p), int(n as i64));
        }
    }
}
