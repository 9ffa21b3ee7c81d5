//! Mode actions of vertex operators on Fock states.
//!
//! Every public mode method takes the shifted index `n` of `a~(n) = a(wt a + n - 1)`
//! unless its name says `unshifted`.

mod lattice;
mod normal;
mod twisted;

pub use lattice::LatticeExp;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, gen_binomial, int, Rational, Scalar};
use crate::fock::{FockVector, GeneratorProfile, Ground, Monomial, Sector};
use crate::par;
use lattice::CreationSeries;
use normal::{factor_groups, NormalOrdered, ZeroMode};
use twisted::DeltaTable;

/// Splitting a source vector into its Heisenberg part and its exponentials.
struct Source {
    heis: FockVector,
    exps: Vec<(i64, Rational)>,
}

/// Vertex-operator engine for one generator profile.
pub struct Engine {
    profile: GeneratorProfile,
    delta: DeltaTable,
    creation: CreationSeries,
}

impl Engine {
    pub fn new(profile: GeneratorProfile) -> Self {
        Self::with_delta_sign(profile, 1)
    }

    /// Orthonormal generator `h` with `(h, h) = 1`.
    pub fn orthonormal() -> Self {
        Self::new(GeneratorProfile::orthonormal())
    }

    /// Engine whose twisted operators use `exp(sign * Delta)`; `sign` is `1` or `-1`.
    pub fn with_delta_sign(profile: GeneratorProfile, sign: i64) -> Self {
        Engine {
            profile,
            delta: DeltaTable::new(int(sign.signum())),
            creation: CreationSeries::default(),
        }
    }

    pub fn profile(&self) -> &GeneratorProfile {
        &self.profile
    }

    /// `b(-1) 1`.
    pub fn generator(&self) -> FockVector {
        FockVector::heis(&[1])
    }

    /// The conformal vector `b(-1)^2 1 / (2N)`.
    pub fn omega(&self) -> FockVector {
        FockVector::heis(&[1, 1]).scale(&(int(1) / (int(2) * self.profile.norm())))
    }

    fn split(&self, a: &FockVector) -> Result<Source> {
        let mut heis = FockVector::zero();
        let mut exps = Vec::new();
        for (m, c) in a.terms() {
            match m.ground() {
                Ground::Momentum(p) if p.is_zero() => heis.add_term(m.clone(), c.clone()),
                Ground::Momentum(p) if m.is_empty() && p.is_integer() => {
                    let k: i64 = p.to_integer().try_into().map_err(|_| {
                        Error::Unsupported("exponential momentum out of range".into())
                    })?;
                    exps.push((k, c.clone()));
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "vertex operators are available for the Heisenberg algebra and pure exponentials, not {m}"
                    )))
                }
            }
        }
        Ok(Source { heis, exps })
    }

    /// Weight of a homogeneous source vector (`None` for zero).
    pub fn source_weight(&self, a: &FockVector) -> Result<Option<Rational>> {
        a.homogeneous_weight(&self.profile)
    }

    /// `a~(n) v` for homogeneous `a`.
    pub fn mode<R: Scalar>(&self, a: &FockVector, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        let src = self.split(a)?;
        let Some(_) = self.source_weight(a)? else { return Ok(FockVector::zero()) };
        let mut out = FockVector::zero();
        if !src.heis.is_zero() {
            out = match v.sector()? {
                None => return Ok(FockVector::zero()),
                Some(Sector::Twisted) => self.twisted_apply(&src.heis, n, v)?,
                Some(Sector::Untwisted) => self.heis_apply(&src.heis, n, v)?,
            };
        }
        for (m, c) in src.exps {
            let part = self.lattice_mode_apply(&LatticeExp::new(m), n, v)?;
            out.add_assign_scaled(&part.scale_rational(&c), &R::one());
        }
        Ok(out)
    }

    /// `a(k) v` for any `a`, splitting it into homogeneous components.
    pub fn mode_unshifted<R: Scalar>(&self, a: &FockVector, k: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        let mut out = FockVector::zero();
        for (w, comp) in a.components(&self.profile) {
            let n = k - &w + int(1);
            out.add_assign_scaled(&self.mode(&comp, &n, v)?, &R::one());
        }
        Ok(out)
    }

    /// Vertex-algebra product `a(k) b`.
    pub fn product(&self, a: &FockVector, k: i64, b: &FockVector) -> Result<FockVector> {
        self.mode_unshifted(a, &int(k), b)
    }

    /// Untwisted Heisenberg mode action; `a` must lie in `M(1)`.
    pub fn heis_mode_apply<R: Scalar>(&self, a: &FockVector, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        let src = self.split(a)?;
        if !src.exps.is_empty() {
            return Err(Error::InvalidArgument("source vector must lie in M(1)".into()));
        }
        self.source_weight(a)?;
        if v.sector()? == Some(Sector::Twisted) {
            return Err(Error::SectorMismatch("untwisted action on a twisted state".into()));
        }
        self.heis_apply(a, n, v)
    }

    /// Twisted mode action through `exp(Delta)`; needs `(b, b) = 1`.
    pub fn twisted_mode_apply<R: Scalar>(&self, a: &FockVector, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        let src = self.split(a)?;
        if !src.exps.is_empty() {
            return Err(Error::InvalidArgument("source vector must lie in M(1)".into()));
        }
        self.source_weight(a)?;
        if v.sector()? == Some(Sector::Untwisted) {
            return Err(Error::SectorMismatch("twisted action on an untwisted state".into()));
        }
        self.twisted_apply(a, n, v)
    }

    /// `e^{m beta}~(n) v` on momentum states.
    pub fn lattice_mode_apply<R: Scalar>(&self, e: &LatticeExp, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        if v.sector()? == Some(Sector::Twisted) {
            return Err(Error::SectorMismatch("lattice exponentials act on untwisted sectors only".into()));
        }
        if v.terms().any(|(m, _)| matches!(m.ground(), Ground::Formal)) {
            return Err(Error::Unsupported("lattice exponentials need momentum grounds".into()));
        }
        let wt = int(e.m * e.m) * self.profile.norm() / int(2);
        let k = wt + n - int(1);
        Ok(lattice::apply(&self.creation, self.profile.norm(), e.m, &k, v))
    }

    /// `L(m) v`.
    pub fn virasoro<R: Scalar>(&self, m: i64, v: &FockVector<R>) -> Result<FockVector<R>> {
        self.mode(&self.omega(), &int(m), v)
    }

    /// `b(n) v`, with `n` half-integral on twisted states.
    pub fn heisenberg<R: Scalar>(&self, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        self.mode(&self.generator(), n, v)
    }

    /// `L(-1)^p a`.
    pub fn l_minus_one_power<R: Scalar>(&self, a: &FockVector<R>, p: u32) -> Result<FockVector<R>> {
        let mut v = a.clone();
        for _ in 0..p {
            v = self.virasoro(-1, &v)?;
        }
        Ok(v)
    }

    fn doubled_target(n: &Rational) -> Result<i64> {
        let t = n * int(2);
        if !t.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "mode index {} is not a half-integer",
                format_rational(n)
            )));
        }
        t.to_integer()
            .try_into()
            .map_err(|_| Error::InvalidArgument("mode index out of range".into()))
    }

    fn heis_apply<R: Scalar>(&self, a: &FockVector, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        if !n.is_integer() {
            return Ok(FockVector::zero());
        }
        let target2 = Self::doubled_target(n)?;
        let sources: Vec<_> = a.terms().map(|(m, c)| (factor_groups(m), c.clone())).collect();
        let norm = self.profile.norm();
        let terms: Vec<_> = v.terms().collect();
        let partials = par::map(&terms, |(mono, coef)| -> Result<FockVector<R>> {
            let zero = match mono.ground() {
                Ground::Momentum(c) if c.is_zero() => ZeroMode::Absent,
                Ground::Momentum(c) => ZeroMode::Scalar(R::from_rational(c * norm)),
                Ground::Formal => ZeroMode::Scalar(R::formal_variable().ok_or_else(|| {
                    Error::Unsupported("formal ground needs a polynomial coefficient ring".into())
                })?),
                Ground::Twisted => {
                    return Err(Error::SectorMismatch("untwisted action on a twisted state".into()))
                }
            };
            let mut out = FockVector::zero();
            for (groups, c) in &sources {
                NormalOrdered { groups, norm, twisted: false, zero: &zero }
                    .apply(c, target2, mono, coef, &mut out);
            }
            Ok(out)
        });
        sum(partials)
    }

    fn twisted_apply<R: Scalar>(&self, a: &FockVector, n: &Rational, v: &FockVector<R>) -> Result<FockVector<R>> {
        if !self.profile.is_orthonormal() {
            return Err(Error::Unsupported("twisted operators need (b, b) = 1".into()));
        }
        let target2 = Self::doubled_target(n)?;
        let mut corrected = FockVector::zero();
        for (m, c) in a.terms() {
            corrected.add_assign_scaled(&self.delta.exp_on(m), c);
        }
        let sources: Vec<_> = corrected.terms().map(|(m, c)| (factor_groups(m), c.clone())).collect();
        let norm = self.profile.norm();
        let terms: Vec<_> = v.terms().collect();
        let zero = ZeroMode::<R>::Absent;
        let partials = par::map(&terms, |(mono, coef)| -> Result<FockVector<R>> {
            let mut out = FockVector::zero();
            for (groups, c) in &sources {
                NormalOrdered { groups, norm, twisted: true, zero: &zero }
                    .apply(c, target2, mono, coef, &mut out);
            }
            Ok(out)
        });
        sum(partials)
    }

    /// Both sides of the Borcherds identity for `p` integral and `s`, `t`
    /// in the mode lattices of `a` and `b` on the sector of `u`.
    pub fn borcherds_sides(
        &self,
        a: &FockVector,
        b: &FockVector,
        u: &FockVector,
        p: i64,
        s: &Rational,
        t: &Rational,
    ) -> Result<(FockVector, FockVector)> {
        let wa = self.source_weight(a)?.unwrap_or_else(Rational::zero);
        let wb = self.source_weight(b)?.unwrap_or_else(Rational::zero);
        let twisted = u.sector()? == Some(Sector::Twisted);
        for (x, idx, name) in [(a, s, "s"), (b, t, "t")] {
            if !self.index_fits(x, idx, twisted) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {} is not in the mode lattice of its vector on this sector",
                    format_rational(idx)
                )));
            }
        }
        let top = u.max_weight(&self.profile).unwrap_or_else(Rational::zero);
        let pr = int(p);

        // sum_i C(s, i) (a(p+i) b)(s+t-i) u, with a(k) b = 0 once k >= wt a + wt b
        let mut left = FockVector::zero();
        let mut i = 0i64;
        while int(p + i) < &wa + &wb {
            let ab = self.product(a, p + i, b)?;
            let coef = gen_binomial(s, i as u32);
            if !ab.is_zero() && !coef.is_zero() {
                let idx = s + t - int(i);
                left.add_assign_scaled(&self.mode_unshifted(&ab, &idx, u)?, &coef);
            }
            i += 1;
        }

        // a mode of index k lowers weight by k - wt + 1; past `top` the result vanishes
        let limit = |wt: &Rational, start: &Rational| -> i64 {
            let span = &top + wt - int(1) - start;
            if span.is_negative() { -1 } else { span.floor().to_integer().try_into().unwrap_or(0) }
        };
        let mut right = FockVector::zero();
        let sign_p = if p.rem_euclid(2) == 0 { int(1) } else { int(-1) };
        let imax1 = limit(&wb, t);
        let imax2 = limit(&wa, s);
        let imax = imax1.max(imax2);
        for i in 0..=imax.max(-1) {
            let binom = gen_binomial(&pr, i as u32);
            if binom.is_zero() {
                if p >= 0 {
                    break;
                }
                continue;
            }
            let sign = if i % 2 == 0 { int(1) } else { int(-1) };
            if i <= imax1 {
                let bu = self.mode_unshifted(b, &(t + int(i)), u)?;
                let term = self.mode_unshifted(a, &(&pr + s - int(i)), &bu)?;
                right.add_assign_scaled(&term, &(&sign * &binom));
            }
            if i <= imax2 {
                let au = self.mode_unshifted(a, &(s + int(i)), u)?;
                let term = self.mode_unshifted(b, &(&pr + t - int(i)), &au)?;
                right.add_assign_scaled(&term, &(-(&sign * &binom * &sign_p)));
            }
        }
        Ok((left, right))
    }

    pub fn borcherds_check(
        &self,
        a: &FockVector,
        b: &FockVector,
        u: &FockVector,
        p: i64,
        s: &Rational,
        t: &Rational,
    ) -> Result<bool> {
        let (l, r) = self.borcherds_sides(a, b, u, p, s, t)?;
        Ok(l == r)
    }

    /// Whether unshifted modes `x(idx)` exist on the given sector.
    fn index_fits(&self, x: &FockVector, idx: &Rational, twisted: bool) -> bool {
        let doubled = idx * int(2);
        if !doubled.is_integer() {
            return false;
        }
        if !twisted {
            return idx.is_integer();
        }
        // theta-parity of x decides integral or half-integral modes
        let mut parities = x.terms().map(|(m, _)| m.len() % 2);
        match parities.next() {
            None => true,
            Some(first) => {
                parities.all(|q| q == first) && (idx.is_integer() == (first == 0))
            }
        }
    }
}

fn sum<R: Scalar>(parts: Vec<Result<FockVector<R>>>) -> Result<FockVector<R>> {
    let mut out = FockVector::zero();
    for p in parts {
        out.add_assign_scaled(&p?, &R::one());
    }
    Ok(out)
}

/// Shared engine for the orthonormal generator `h`.
pub fn standard() -> &'static Engine {
    static ENGINE: std::sync::OnceLock<Engine> = std::sync::OnceLock::new();
    ENGINE.get_or_init(Engine::orthonormal)
}

/// The state `b(-n_1)...b(-n_s) 1_tw` from doubled indices.
pub fn twisted_state(doubled: &[u32]) -> FockVector {
    FockVector::from_monomial(Monomial::twisted(doubled).expect("odd doubled indices"))
}

impl Engine {
    /// Scalar `lambda` with `x = lambda * target`, if any.
    pub fn scalar_multiple(x: &FockVector, target: &FockVector) -> Option<Rational> {
        let (m, c) = target.terms().next()?;
        let lambda = x.coefficient(m) / c;
        (target.scale(&lambda) == *x).then_some(lambda)
    }

    /// `true` if `1` acts as the identity on `v`; used as a sanity check.
    pub fn vacuum_is_identity(&self, v: &FockVector) -> Result<bool> {
        Ok(self.mode(&FockVector::vacuum(), &Rational::zero(), v)? == *v
            && self.mode(&FockVector::vacuum(), &Rational::one(), v)?.is_zero())
    }
}

#[cfg(test)]
mod tests;
