//! The parametrised module `M(1)[t]` and its finite quotients `M(1)[t]/(f)`.
//!
//! States are Fock vectors over the formal ground whose coefficients live in
//! `Q[t]/(f)`. The Heisenberg zero mode multiplies by `t`, so `t = c` recovers
//! `M(1, c)` while repeated roots produce indecomposable extensions.

use num_traits::{One, Zero};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::engine::standard;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, rat, QuotientRingElem, Rational, SpanSolver, SparseVec, UniPoly};
use crate::fock::{basis_of_degree, partitions2, FockVector, Ground, Monomial, Sector};
use crate::hvec::{h_eigenvalue, h_vector};
use crate::par;
use crate::report::{CaseResult, VerificationReport};

pub type ParamState = FockVector<QuotientRingElem>;

/// `M(1)[t]/(f)` for a monic `f` of positive degree.
#[derive(Clone, Debug)]
pub struct ParamModule {
    modulus: Arc<UniPoly>,
}

impl ParamModule {
    pub fn new(f: UniPoly) -> Result<Self> {
        if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidArgument(format!("modulus {f} must be monic of positive degree")));
        }
        Ok(ParamModule { modulus: Arc::new(f) })
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn ring_dimension(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// Mean of the roots of `f`; the ring basis is `(t - centre)^j`.
    pub fn centre(&self) -> Rational {
        let k = self.ring_dimension();
        -self.modulus.coeff(k - 1) / int(k as i64)
    }

    /// `(t - centre)^j` as a ring element.
    pub fn ring_basis(&self, j: usize) -> QuotientRingElem {
        let shifted = UniPoly::linear(self.centre());
        let p = (0..j).fold(UniPoly::constant(Rational::one()), |acc, _| &acc * &shifted);
        self.scalar(p)
    }

    pub fn scalar(&self, p: UniPoly) -> QuotientRingElem {
        QuotientRingElem::new(p, self.modulus.clone())
    }

    /// `p(t) h(-n_1)...h(-n_k) 1`.
    pub fn state(&self, modes: &[u32], p: UniPoly) -> Result<ParamState> {
        let m = Monomial::untwisted(modes, Ground::Formal)?;
        Ok(ParamState::term(m, self.scalar(p)))
    }

    /// The ground state `1̄`.
    pub fn ground(&self) -> ParamState {
        self.state(&[], UniPoly::constant(Rational::one())).expect("empty monomial")
    }

    /// Reduces every coefficient into the ring and drops zeros.
    pub fn reduce(&self, v: &ParamState) -> ParamState {
        let mut out = ParamState::zero();
        for (m, c) in v.terms() {
            let c = c.in_ring(&self.modulus);
            if !c.is_zero() {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    /// `a~(n) v`, with `h(0)` acting by `t`.
    pub fn apply(&self, a: &FockVector, n: &Rational, v: &ParamState) -> Result<ParamState> {
        Ok(self.reduce(&standard().mode(a, n, v)?))
    }

    pub fn virasoro(&self, m: i64, v: &ParamState) -> Result<ParamState> {
        self.apply(&standard().omega(), &int(m), v)
    }

    pub fn heisenberg(&self, n: i64, v: &ParamState) -> Result<ParamState> {
        self.apply(&FockVector::heis(&[1]), &int(n), v)
    }

    /// `theta`, defined when `f(-t) = ±f(t)`.
    pub fn theta(&self, v: &ParamState) -> Result<ParamState> {
        let r = self.modulus.reflect();
        if r != *self.modulus && r != -&*self.modulus {
            return Err(Error::Precondition(format!("theta needs f(-t) = ±f(t), got f = {}", self.modulus)));
        }
        let mut out = ParamState::zero();
        for (m, c) in v.terms() {
            let c = c.in_ring(&self.modulus).reflect();
            out.add_term(m.clone(), if m.len() % 2 == 0 { c } else { -c });
        }
        Ok(out)
    }

    /// Canonical basis of the Fock-degree-`d` block: monomials times
    /// `(t - centre)^j`.
    pub fn block_basis(&self, degree: u32) -> Vec<(Monomial, usize)> {
        basis_of_degree(&Ground::Formal, &int(degree as i64))
            .into_iter()
            .flat_map(|m| (0..self.ring_dimension()).map(move |j| (m.clone(), j)))
            .collect()
    }

    /// Coordinates of `v` in the canonical basis.
    pub fn coordinates(&self, v: &ParamState) -> SparseVec<(Monomial, usize)> {
        let mut out = SparseVec::new();
        for (m, c) in v.terms() {
            let c = c.in_ring(&self.modulus);
            for (j, x) in c.representative().taylor_shift(&self.centre()).iter().enumerate() {
                if !x.is_zero() {
                    out.insert((m.clone(), j), x.clone());
                }
            }
        }
        out
    }

    fn basis_state(&self, (m, j): &(Monomial, usize)) -> ParamState {
        ParamState::term(m.clone(), self.ring_basis(*j))
    }

    /// Fock degrees `d <= w` for which `w - d` is a ground weight of the
    /// ring, meaning a root of the minimal polynomial of `t^2/2`.
    pub fn degrees_of_weight(&self, w: &Rational) -> Vec<u32> {
        let k = self.ring_dimension();
        let half_t2 = self.scalar(UniPoly::new(vec![int(0), int(0), rat(1, 2)]));
        let matrix: Vec<Vec<Rational>> = (0..k)
            .map(|j| {
                let img = half_t2.clone() * self.ring_basis(j);
                let coords = img.representative().taylor_shift(&self.centre());
                (0..k).map(|i| coords.get(i).cloned().unwrap_or_default()).collect()
            })
            .collect();
        let mu = minimal_polynomial(&matrix);
        let top: i64 = w.floor().to_integer().try_into().unwrap_or(-1);
        (0..=top.max(-1))
            .filter(|&d| mu.eval(&(w - int(d))).is_zero())
            .map(|d| d as u32)
            .collect()
    }
}

/// Grade-preserving zero modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedOperator {
    /// `L(0)`.
    L0,
    /// `H~^{2r}(0)`, `r >= 2`.
    H(u32),
}

impl GradedOperator {
    pub fn apply(&self, module: &ParamModule, v: &ParamState) -> Result<ParamState> {
        match self {
            GradedOperator::L0 => module.virasoro(0, v),
            GradedOperator::H(r) => module.apply(&h_vector(*r), &Rational::zero(), v),
        }
    }

    /// Index `r` of `H^{2r}`, with `L(0)` as `r = 1`.
    pub fn r(&self) -> u32 {
        match self {
            GradedOperator::L0 => 1,
            GradedOperator::H(r) => *r,
        }
    }
}

impl fmt::Display for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedOperator::L0 => write!(f, "L0"),
            GradedOperator::H(r) => write!(f, "H{}", 2 * r),
        }
    }
}

/// Matrix of a zero mode on one weight component of `M(1)[t]/(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanAnalysis {
    pub degrees: Vec<u32>,
    pub basis: Vec<String>,
    /// Row `i` holds the coordinates of the image of basis vector `i`, so
    /// `L(0)v_c = (c^2/2)v_c + c u_c` reads as the row `[c^2/2, c]`.
    pub matrix: Vec<Vec<Rational>>,
    pub minimal_polynomial: UniPoly,
    pub diagonalizable: bool,
}

impl JordanAnalysis {
    pub fn is_diagonal(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.matrix.len()).map(|i| self.matrix[i][i].clone()).collect()
    }

    pub fn format_matrix(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn flatten(m: &[Vec<Rational>]) -> SparseVec<usize> {
    let n = m.len();
    m.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i * n + j, x.clone())))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

/// Monic minimal polynomial of a square rational matrix.
pub fn minimal_polynomial(m: &[Vec<Rational>]) -> UniPoly {
    let n = m.len();
    let identity: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut solver = SpanSolver::new();
    let mut power = identity;
    for k in 0..=n {
        let flat = flatten(&power);
        if let Some(combo) = solver.solve(&flat) {
            let mut coeffs = vec![Rational::zero(); k + 1];
            coeffs[k] = Rational::one();
            for (i, c) in combo {
                coeffs[i] -= c;
            }
            return UniPoly::new(coeffs);
        }
        solver.push(&flat);
        power = mat_mul(&power, m);
    }
    unreachable!("Cayley-Hamilton bounds the degree by the size")
}

/// Matrix of `op` on the weight-`w` component of `M(1)[t]/(f)`.
///
/// The component is the sum of Fock-degree blocks `d` for which `w - d` is
/// a ground weight; when `f` has roots of different weights those blocks
/// also carry other eigenvalues.
pub fn jordan_analysis(f: &UniPoly, w: &Rational, op: GradedOperator) -> Result<JordanAnalysis> {
    let module = ParamModule::new(f.clone())?;
    let degrees = module.degrees_of_weight(w);
    let basis: Vec<(Monomial, usize)> = degrees.iter().flat_map(|&d| module.block_basis(d)).collect();
    let index: BTreeMap<&(Monomial, usize), usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let n = basis.len();
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for (row, b) in basis.iter().enumerate() {
        let image = op.apply(&module, &module.basis_state(b))?;
        for (key, x) in module.coordinates(&image) {
            let j = *index
                .get(&key)
                .ok_or_else(|| Error::Internal(format!("{op} leaves the weight component")))?;
            matrix[row][j] = x;
        }
    }
    let minimal_polynomial = minimal_polynomial(&matrix);
    let diagonalizable = minimal_polynomial.is_squarefree();
    let centre = format_rational(&module.centre());
    let basis = basis.iter().map(|(m, j)| format!("(t-{centre})^{j} {m}")).collect();
    Ok(JordanAnalysis { degrees, basis, matrix, minimal_polynomial, diagonalizable })
}

/// The identities mixing the two `theta` sectors of `M(1)[t]/(t^2)`, with
/// `v^+ = 1̄` and `v^- = t̄`.
pub fn theta_sector_identities() -> Result<VerificationReport> {
    let module = ParamModule::new(UniPoly::from_roots(&[int(0), int(0)]))?;
    let v_plus = module.ground();
    let v_minus = module.state(&[], UniPoly::variable())?;
    let h_minus = |v: &ParamState| module.heisenberg(-1, v);
    let mut report = VerificationReport::new("theta-sectors").param("modulus", module.modulus().to_string());
    let cmp = |id: &str, lhs: ParamState, rhs: ParamState| {
        let (l, r) = (module.reduce(&lhs), module.reduce(&rhs));
        if l == r {
            CaseResult::pass(id)
        } else {
            CaseResult::fail(id, format!("{} != {}", show(&l), show(&r)))
        }
    };
    report.push(cmp("theta(v+)=v+", module.theta(&v_plus)?, v_plus.clone()));
    report.push(cmp("theta(v-)=-v-", module.theta(&v_minus)?, v_minus.scale_rational(&int(-1))));
    let hv_minus = h_minus(&v_minus)?;
    report.push(cmp("theta(h(-1)v-)=h(-1)v-", module.theta(&hv_minus)?, hv_minus.clone()));
    report.push(cmp("L(-1)v+=h(-1)v-", module.virasoro(-1, &v_plus)?, hv_minus));
    report.push(cmp("L(1)h(-1)v+=v-", module.virasoro(1, &h_minus(&v_plus)?)?, v_minus.clone()));
    report.push(cmp("h(0)v+=v-", module.heisenberg(0, &v_plus)?, v_minus.clone()));
    report.push(cmp("L(-1)v-=0", module.virasoro(-1, &v_minus)?, ParamState::zero()));
    Ok(report.finalize())
}

/// Readable form of a parametrised state.
pub fn show(v: &ParamState) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.terms()
        .map(|(m, c)| format!("({}) {}", c.representative(), m))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn p(m: usize) -> usize {
    partitions2(2 * m as u32, Sector::Untwisted).len()
}

/// The checks on `M(1)[t]/(f)` for `f = t - c`, `(t - c)^2`, `t^2` and
/// products of distinct linear factors.
pub fn verify_extensions(cs: &[Rational], extra_degree: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("ext")
        .param("c", json!(cs.iter().map(format_rational).collect::<Vec<_>>()))
        .param("extra_degree", extra_degree);

    for c in cs {
        let cf = format_rational(c);
        let half_c2 = c * c / int(2);

        let linear = ParamModule::new(UniPoly::linear(c.clone()))?;
        let l0 = linear.virasoro(0, &linear.ground())?;
        report.push(CaseResult::check(
            format!("quotient/L0-ground/c={cf}"),
            l0 == linear.ground().scale_rational(&half_c2),
        ));

        let square = ParamModule::new(UniPoly::from_roots(&[c.clone(), c.clone()]))?;
        let v_c = square.ground();
        let u_c = square.state(&[], UniPoly::linear(c.clone()))?;
        let lhs = square.virasoro(0, &v_c)?;
        let rhs = square.reduce(&v_c.scale_rational(&half_c2).add(&u_c.scale_rational(c)));
        report.push(
            CaseResult::check(format!("quotient/L0-vc/c={cf}"), lhs == rhs)
                .with_detail(format!("L(0)v_c = {}", show(&lhs))),
        );

        let jobs: Vec<(u32, GradedOperator)> = (0..=extra_degree)
            .flat_map(|d| [GradedOperator::L0, GradedOperator::H(2), GradedOperator::H(3)].map(|op| (d, op)))
            .collect();
        let f = UniPoly::linear(c.clone());
        let results = par::map(&jobs, |(d, op)| -> Result<CaseResult> {
            let w = &half_c2 + int(*d as i64);
            let ja = jordan_analysis(&f, &w, *op)?;
            let expected: Vec<Rational> = basis_of_degree(&Ground::Momentum(c.clone()), &int(*d as i64))
                .iter()
                .map(|m| h_eigenvalue(m, op.r()))
                .collect::<Result<_>>()?;
            let ok = ja.is_diagonal() && ja.diagonal() == expected && ja.degrees == vec![*d];
            let id = format!("linear/c={cf}/{op}/w={}", format_rational(&w));
            Ok(CaseResult::check(id, ok).with_detail(ja.format_matrix()))
        });
        for r in results {
            report.push(r?);
        }

        let sq = UniPoly::from_roots(&[c.clone(), c.clone()]);
        let ja = jordan_analysis(&sq, &half_c2, GradedOperator::L0)?;
        let id = format!("square/c={cf}/L0/w={}", format_rational(&half_c2));
        let ok = if c.is_zero() {
            ja.matrix.iter().flatten().all(Zero::is_zero) && ja.diagonalizable
        } else {
            let block = vec![vec![half_c2.clone(), c.clone()], vec![Rational::zero(), half_c2.clone()]];
            !ja.diagonalizable && ja.matrix == block
        };
        report.push(
            CaseResult::check(id, ok)
                .with_detail(format!("{} minimal polynomial {}", ja.format_matrix(), ja.minimal_polynomial)),
        );
        for d in 1..=extra_degree.min(2) {
            let w = &half_c2 + int(d as i64);
            let ja = jordan_analysis(&sq, &w, GradedOperator::L0)?;
            let ok = ja.diagonalizable == c.is_zero();
            report.push(
                CaseResult::check(format!("square/c={cf}/L0/w={}", format_rational(&w)), ok)
                    .with_detail(format!("minimal polynomial {}", ja.minimal_polynomial)),
            );
        }
    }

    let mut split: Vec<UniPoly> = vec![UniPoly::from_roots(&[int(1), int(-1)])];
    if cs.len() >= 2 {
        split.push(UniPoly::from_roots(cs));
    }
    for f in &split {
        let module = ParamModule::new(f.clone())?;
        let roots: Vec<Rational> = cs
            .iter()
            .chain([int(1), int(-1)].iter())
            .filter(|r| f.eval(r).is_zero())
            .cloned()
            .collect();
        let mut weights: Vec<Rational> = roots
            .iter()
            .flat_map(|r| (0..=extra_degree.min(2)).map(move |d| r * r / int(2) + int(d as i64)))
            .collect();
        weights.sort();
        weights.dedup();
        for w in &weights {
            for op in [GradedOperator::L0, GradedOperator::H(2)] {
                let ja = jordan_analysis(f, w, op)?;
                report.push(
                    CaseResult::check(format!("split/f={f}/{op}/w={}", format_rational(w)), ja.diagonalizable)
                        .with_detail(format!("minimal polynomial {}", ja.minimal_polynomial)),
                );
            }
        }
        for d in 0..=extra_degree {
            let dim = module.block_basis(d).len();
            let expected = module.ring_dimension() * p(d as usize);
            report.push(CaseResult::check(format!("dimension/f={f}/d={d}"), dim == expected)
                .with_detail(format!("{dim} = {} x {}", module.ring_dimension(), p(d as usize))));
        }
    }

    report.merge("theta", theta_sector_identities()?);
    Ok(report.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(c: i64) -> UniPoly {
        UniPoly::from_roots(&[int(c), int(c)])
    }

    #[test]
    fn l0_on_ground_states() {
        for c in [int(1), rat(1, 2), int(-3)] {
            let m = ParamModule::new(UniPoly::linear(c.clone())).unwrap();
            let out = m.virasoro(0, &m.ground()).unwrap();
            assert_eq!(out, m.ground().scale_rational(&(&c * &c / int(2))));
        }
    }

    #[test]
    fn l0_mixes_v_and_u() {
        let m = ParamModule::new(sq(1)).unwrap();
        let v = m.ground();
        let u = m.state(&[], UniPoly::linear(int(1))).unwrap();
        let expected = m.reduce(&v.scale_rational(&rat(1, 2)).add(&u));
        assert_eq!(m.virasoro(0, &v).unwrap(), expected);
    }

    #[test]
    fn zero_mode_is_t() {
        let m = ParamModule::new(UniPoly::from_roots(&[int(0), int(0)])).unwrap();
        let t = m.state(&[], UniPoly::variable()).unwrap();
        assert_eq!(m.heisenberg(0, &m.ground()).unwrap(), t);
        assert!(m.heisenberg(0, &t).unwrap().is_zero());
    }

    #[test]
    fn jordan_examples() {
        let ja = jordan_analysis(&sq(1), &rat(1, 2), GradedOperator::L0).unwrap();
        assert!(!ja.diagonalizable);
        assert_eq!(ja.minimal_polynomial, UniPoly::from_roots(&[rat(1, 2), rat(1, 2)]));
        assert_eq!(ja.matrix, vec![vec![rat(1, 2), int(1)], vec![int(0), rat(1, 2)]]);

        let ja = jordan_analysis(&UniPoly::from_roots(&[int(1), int(-1)]), &rat(1, 2), GradedOperator::L0).unwrap();
        assert!(ja.diagonalizable);
        assert_eq!(ja.minimal_polynomial, UniPoly::linear(rat(1, 2)));

        let ja = jordan_analysis(&sq(0), &int(0), GradedOperator::L0).unwrap();
        assert!(ja.diagonalizable);
        assert!(ja.matrix.iter().flatten().all(Zero::is_zero));
        assert_eq!(ja.matrix.len(), 2);
    }

    #[test]
    fn h4_ignores_the_ring() {
        let ja = jordan_analysis(&sq(2), &int(4), GradedOperator::H(2)).unwrap();
        assert!(ja.diagonalizable);
        assert_eq!(ja.degrees, vec![2]);
    }

    #[test]
    fn weights_pick_blocks() {
        let m = ParamModule::new(UniPoly::from_roots(&[int(1), int(3)])).unwrap();
        assert_eq!(m.degrees_of_weight(&rat(9, 2)), vec![0, 4]);
        assert!(m.degrees_of_weight(&rat(1, 3)).is_empty());
    }

    #[test]
    fn theta_needs_symmetric_modulus() {
        let m = ParamModule::new(sq(1)).unwrap();
        assert!(matches!(m.theta(&m.ground()), Err(Error::Precondition(_))));
    }

    #[test]
    fn sector_identities() {
        let r = theta_sector_identities().unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn minimal_polynomial_examples() {
        let nil = vec![vec![int(0), int(1)], vec![int(0), int(0)]];
        assert_eq!(minimal_polynomial(&nil), UniPoly::from_roots(&[int(0), int(0)]));
        let diag = vec![vec![int(2), int(0)], vec![int(0), int(2)]];
        assert_eq!(minimal_polynomial(&diag), UniPoly::linear(int(2)));
    }

    #[test]
    fn full_suite_small() {
        let r = verify_extensions(&[int(1), int(2), rat(1, 2)], 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
