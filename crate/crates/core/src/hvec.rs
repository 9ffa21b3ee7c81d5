//! The quadratic vectors `H^{2r}` and their zero-mode eigenvalues.

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::engine::{standard, Engine};
use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, int, odd_poly_coeffs, rat, Rational, SpanSolver, SparseVec};
use crate::fock::{basis, basis_of_degree, FockVector, Ground, Monomial, Sector};
use crate::par;
use crate::report::{CaseResult, VerificationReport, Witness};

#[derive(Clone, Debug, PartialEq)]
pub struct HVector {
    pub r: u32,
    pub vector: FockVector,
    /// `(c_1, ..., c_r)` of the odd expansion used in the recursion.
    pub constants: Vec<Rational>,
}

fn cache() -> &'static RwLock<BTreeMap<u32, Arc<HVector>>> {
    static CACHE: OnceLock<RwLock<BTreeMap<u32, Arc<HVector>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `H^{2r}` from the recursion over lower `H^{2i}`, cached per `r`.
pub fn build_h(r: u32) -> Result<Arc<HVector>> {
    if r == 0 {
        return Err(Error::InvalidArgument("H^{2r} needs r >= 1".into()));
    }
    if let Some(hit) = cache().read().expect("h cache").get(&r) {
        return Ok(hit.clone());
    }
    let built = Arc::new(compute_h(r)?);
    cache().write().expect("h cache").insert(r, built.clone());
    Ok(built)
}

/// Runs the recursion without consulting the cache for `r` itself.
pub fn compute_h(r: u32) -> Result<HVector> {
    if r == 0 {
        return Err(Error::InvalidArgument("H^{2r} needs r >= 1".into()));
    }
    let engine = standard();
    let constants = odd_poly_coeffs(r)?;
    let mut v = FockVector::heis(&[r, r]);
    for i in 1..r {
        let lower = build_h(i)?;
        let coef = &constants[(i - 1) as usize] * factorial(2 * i - 1) / factorial(2 * r - 1);
        let raised = engine.l_minus_one_power(&lower.vector, 2 * (r - i))?;
        v.add_assign_scaled(&raised, &-coef);
    }
    let vector = v.scale(&(Rational::one() / &constants[(r - 1) as usize]));
    Ok(HVector { r, vector, constants })
}

pub fn h_vector(r: u32) -> FockVector {
    build_h(r).expect("r >= 1").vector.clone()
}

/// `H~^{2r}(0) 1_tw / 1_tw`, computed through the twisted operators.
pub fn q_constant(r: u32) -> Result<Rational> {
    q_constant_with(standard(), r)
}

pub fn q_constant_with(engine: &Engine, r: u32) -> Result<Rational> {
    let vac = FockVector::twisted_vacuum();
    let out = engine.mode(&build_h(r)?.vector, &Rational::zero(), &vac)?;
    Engine::scalar_multiple(&out, &vac)
        .or_else(|| out.is_zero().then(Rational::zero))
        .ok_or_else(|| Error::Internal(format!("H~^{}(0) 1_tw is not proportional to 1_tw", 2 * r)))
}

fn q_cached(r: u32) -> Result<Rational> {
    static Q: OnceLock<RwLock<BTreeMap<u32, Rational>>> = OnceLock::new();
    let q = Q.get_or_init(Default::default);
    if let Some(v) = q.read().expect("q cache").get(&r) {
        return Ok(v.clone());
    }
    let v = q_constant(r)?;
    q.write().expect("q cache").insert(r, v.clone());
    Ok(v)
}

/// Predicted eigenvalue of `H~^{2r}(0)` on a basis monomial.
///
/// For `r = 1` this is the full `L(0)` weight, including the momentum term.
pub fn h_eigenvalue(m: &Monomial, r: u32) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let e = 2 * r - 1;
    let power_sum: Rational = m
        .modes()
        .iter()
        .map(|&m2| {
            let x = rat(m2 as i64, 2);
            (0..e).fold(Rational::one(), |acc, _| acc * &x)
        })
        .sum();
    match m.ground() {
        Ground::Momentum(c) if r == 1 => Ok(power_sum + c * c / int(2)),
        Ground::Momentum(_) => Ok(power_sum),
        Ground::Twisted => Ok(q_cached(r)? + power_sum),
        Ground::Formal => Err(Error::Unsupported("eigenvalues on the formal ground".into())),
    }
}

/// Test states: full bases up to Fock degree `max_degree` over each ground.
pub fn test_basis(grounds: &[Ground], max_degree: &Rational) -> Vec<FockVector> {
    grounds
        .iter()
        .flat_map(|g| basis(g, max_degree))
        .map(FockVector::from_monomial)
        .collect()
}

pub fn default_grounds(momenta: &[Rational]) -> Vec<Ground> {
    let mut g: Vec<Ground> = momenta.iter().cloned().map(Ground::Momentum).collect();
    g.push(Ground::Twisted);
    g
}

fn state_label(v: &FockVector) -> String {
    v.serialize()
}

/// `[H~^{2r}(0), h(n)] v = -n^{2r-1} h(n) v` for integral `|n| <= range` on
/// untwisted states and half-integral `|n| < range` on twisted ones.
pub fn verify_h_commutation(r: u32, range: i64, states: &[FockVector]) -> Result<VerificationReport> {
    let engine = standard();
    let h = build_h(r)?.vector.clone();
    let mut report = VerificationReport::new("hcomm")
        .param("r", r)
        .param("range", range)
        .param("states", states.len());
    let results = par::map(states, |v| -> Result<Vec<CaseResult>> {
        let twisted = v.sector()? == Some(Sector::Twisted);
        let indices: Vec<Rational> = if twisted {
            (-range..range).map(|k| int(k) + rat(1, 2)).collect()
        } else {
            (-range..=range).map(int).collect()
        };
        let hv = engine.mode(&h, &Rational::zero(), v)?;
        let mut cases = Vec::new();
        for n in indices {
            let hn_v = engine.heisenberg(&n, v)?;
            let lhs = engine.mode(&h, &Rational::zero(), &hn_v)?.sub(&engine.heisenberg(&n, &hv)?);
            let pow = (0..(2 * r - 1)).fold(Rational::one(), |acc, _| acc * &n);
            let rhs = hn_v.scale(&-pow);
            let id = format!("r={r}/n={}/{}", format_rational(&n), state_label(v));
            cases.push(CaseResult::compare(id, v, &lhs, &rhs));
        }
        Ok(cases)
    });
    for r in results {
        report.extend(r?);
    }
    Ok(report.finalize())
}

/// Every basis monomial is an eigenvector with the predicted eigenvalue.
pub fn verify_diagonal(r: u32, states: &[FockVector]) -> Result<VerificationReport> {
    let engine = standard();
    let h = build_h(r)?.vector.clone();
    let mut report = VerificationReport::new("hdiag").param("r", r).param("states", states.len());
    let results = par::map(states, |v| -> Result<CaseResult> {
        let (m, _) = v.terms().next().ok_or_else(|| Error::InvalidArgument("zero state".into()))?;
        let expected = v.scale(&h_eigenvalue(m, r)?);
        let got = engine.mode(&h, &Rational::zero(), v)?;
        Ok(CaseResult::compare(format!("r={r}/{}", state_label(v)), v, &got, &expected))
    });
    for c in results {
        report.push(c?);
    }
    Ok(report.finalize())
}

/// `[H~^{2r}(0), H~^{2s}(0)] = 0` on the given states.
pub fn verify_mutual_commutation(r_max: u32, states: &[FockVector]) -> Result<VerificationReport> {
    let engine = standard();
    let hs: Vec<FockVector> = (1..=r_max).map(h_vector).collect();
    let mut report = VerificationReport::new("hmutual").param("r_max", r_max).param("states", states.len());
    let results = par::map(states, |v| -> Result<Vec<CaseResult>> {
        let zero = Rational::zero();
        let images: Vec<FockVector> = hs.iter().map(|h| engine.mode(h, &zero, v)).collect::<Result<_>>()?;
        let mut cases = Vec::new();
        for r in 0..hs.len() {
            for s in (r + 1)..hs.len() {
                let rs = engine.mode(&hs[r], &zero, &images[s])?;
                let sr = engine.mode(&hs[s], &zero, &images[r])?;
                let id = format!("r={}/s={}/{}", r + 1, s + 1, state_label(v));
                cases.push(CaseResult::compare(id, v, &rs, &sr));
            }
        }
        Ok(cases)
    });
    for c in results {
        report.extend(c?);
    }
    Ok(report.finalize())
}

/// Whether `v` lies in `span{1, h(-n)h(-m)1}`.
pub fn in_s(v: &FockVector) -> bool {
    v.terms()
        .all(|(m, _)| *m.ground() == Ground::vacuum() && (m.is_empty() || m.len() == 2))
}

/// Basis of `S` restricted to `n, m <= max_index`, vacuum included.
pub fn s_basis(max_index: u32) -> Vec<FockVector> {
    let mut out = vec![FockVector::vacuum()];
    for n in 1..=max_index {
        for m in 1..=n {
            out.push(FockVector::heis(&[n, m]));
        }
    }
    out
}

/// `a(i) b` stays in `S` for basis vectors `a, b` and every `i >= 0`.
pub fn verify_s_closure(max_index: u32) -> Result<VerificationReport> {
    let engine = standard();
    let sb = s_basis(max_index);
    let pairs: Vec<(usize, usize)> = (0..sb.len()).flat_map(|i| (0..sb.len()).map(move |j| (i, j))).collect();
    let mut report = VerificationReport::new("s-closure").param("max_index", max_index);
    let results = par::map(&pairs, |&(i, j)| -> Result<CaseResult> {
        let (a, b) = (&sb[i], &sb[j]);
        let p = engine.profile();
        let top = a.max_weight(p).unwrap() + b.max_weight(p).unwrap();
        let top: i64 = top.to_integer().try_into().unwrap_or(0);
        let id = format!("{}|{}", a.serialize(), b.serialize());
        for k in 0..top {
            let prod = engine.product(a, k, b)?;
            if !in_s(&prod) {
                return Ok(CaseResult::fail(id, format!("a({k})b leaves S"))
                    .with_witness(Witness::sides(b, &prod, &FockVector::zero())));
            }
        }
        Ok(CaseResult::pass(id))
    });
    for c in results {
        report.push(c?);
    }
    Ok(report.finalize())
}

fn to_sparse(v: &FockVector) -> SparseVec<Monomial> {
    v.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// `S_{2r} = C H^{2r} + L(-1)^2 S_{2r-2}` as a direct sum, for each `r <= r_max`.
pub fn verify_decomposition(r_max: u32) -> Result<VerificationReport> {
    let engine = standard();
    let mut report = VerificationReport::new("s-decomposition").param("r_max", r_max);
    for r in 2..=r_max {
        let w = 2 * r;
        let full: Vec<FockVector> = (1..=r).map(|m| FockVector::heis(&[w - m, m])).collect();
        let mut solver = SpanSolver::new();
        for v in &full {
            solver.push(&to_sparse(v));
        }
        let dim = solver.rank();
        let mut gens = vec![build_h(r)?.vector.clone()];
        let lower: Vec<FockVector> = (1..r).map(|m| FockVector::heis(&[w - 2 - m, m])).collect();
        for v in &lower {
            gens.push(engine.l_minus_one_power(v, 2)?);
        }
        let mut parts = SpanSolver::new();
        let mut independent = true;
        for g in &gens {
            independent &= parts.push(&to_sparse(g));
        }
        let inside = gens.iter().all(|g| solver.solve(&to_sparse(g)).is_some() && in_s(g));
        let ok = independent && inside && parts.rank() == dim;
        report.push(CaseResult::check(format!("r={r}"), ok).with_detail(format!(
            "dim S_{w} = {dim}, generators = {}, rank = {}",
            gens.len(),
            parts.rank()
        )));
    }
    Ok(report.finalize())
}

/// The reference eigenvalue pairs of the three lowest-weight families.
pub fn reference_pairs() -> [(Rational, Rational); 3] {
    [
        (int(0), int(0)),
        (rat(-1, 128), rat(1, 256)),
        (rat(15, 128), rat(9, 256)),
    ]
}

/// `5(h-p)(h-p-1) + 9(k-q) - 1`.
pub fn gap_value(h: &Rational, k: &Rational, p: &Rational, q: &Rational) -> Rational {
    let d = h - p;
    int(5) * &d * (&d - int(1)) + int(9) * (k - q) - int(1)
}

/// No zero of the gap expression over both eigenvalue lattices with
/// lattice indices up to `bound`.
pub fn spectral_gap_check(bound: u32) -> VerificationReport {
    let mut report = VerificationReport::new("gap").param("bound", bound);
    let lattices: [(&str, Rational, Rational, Rational, Rational); 2] = [
        ("integral", int(0), int(1), int(0), int(1)),
        ("twisted", rat(-1, 128), rat(1, 8), rat(1, 256), rat(1, 32)),
    ];
    for (pi, (p, q)) in reference_pairs().iter().enumerate() {
        for (name, h0, hs, k0, ks) in &lattices {
            let mut zero = None;
            let mut count = 0u64;
            'outer: for a in 0..=bound {
                let h = h0 + hs * int(a as i64);
                for b in 0..=bound {
                    let k = k0 + ks * int(b as i64);
                    count += 1;
                    if gap_value(&h, &k, p, q).is_zero() {
                        zero = Some((h.clone(), k));
                        break 'outer;
                    }
                }
            }
            let id = format!("pair{pi}/{name}");
            report.push(match zero {
                None => CaseResult::pass(id).with_detail(format!("{count} points, no zero")),
                Some((h, k)) => CaseResult::fail(id, "zero found").with_witness(Witness::values(&h, &k)),
            });
        }
    }
    report.finalize()
}

/// The gap expression on joint eigenvalue pairs that actually occur on
/// `M(1, lambda)` and `M(1)(theta)` up to Fock degree `max_degree`.
pub fn realized_gap_check(max_degree: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gap-realized").param("max_degree", max_degree);
    let mut pairs: Vec<(String, Rational, Rational)> = Vec::new();
    for ground in [Ground::vacuum(), Ground::Twisted] {
        for m in basis(&ground, &int(max_degree as i64)) {
            pairs.push((format!("{m}"), h_eigenvalue(&m, 2)?, h_eigenvalue(&m, 3)?));
        }
    }
    for (pi, (p, q)) in reference_pairs().iter().enumerate() {
        let zero = pairs.iter().find(|(_, h, k)| gap_value(h, k, p, q).is_zero());
        let id = format!("pair{pi}");
        report.push(match zero {
            None => CaseResult::pass(id).with_detail(format!("{} eigenvalue pairs, no zero", pairs.len())),
            Some((label, h, k)) => CaseResult::fail(id, format!("zero at {label}"))
                .with_witness(Witness::values(h, k)),
        });
    }
    Ok(report.finalize())
}

/// Evaluates `5(H4-h)(H4-h-1)L(1)u + 9(H6-k)L(1)u - L(1)u` on `u`.
pub fn top_factor_check(u: &FockVector, h: &Rational, k: &Rational) -> Result<VerificationReport> {
    let engine = standard();
    let zero = Rational::zero();
    let h4 = h_vector(2);
    let h6 = h_vector(3);
    if engine.mode(&h4, &zero, u)? != u.scale(h) || engine.mode(&h6, &zero, u)? != u.scale(k) {
        return Err(Error::Precondition(format!(
            "state is not a joint eigenvector with eigenvalues ({}, {})",
            format_rational(h),
            format_rational(k)
        )));
    }
    let x = engine.virasoro(1, u)?;
    let shift = |v: &FockVector, c: &Rational| -> Result<FockVector> {
        Ok(engine.mode(&h4, &zero, v)?.sub(&v.scale(c)))
    };
    let a = shift(&shift(&x, &(h + int(1)))?, h)?.scale(&int(5));
    let b = engine.mode(&h6, &zero, &x)?.sub(&x.scale(k)).scale(&int(9));
    let total = a.add(&b).sub(&x);
    let mut report = VerificationReport::new("top-factor")
        .param("h", format_rational(h))
        .param("k", format_rational(k));
    report.push(CaseResult::compare(u.serialize(), u, &total, &FockVector::zero()));
    Ok(report.finalize())
}

/// Degree-`d` component helper used by callers that sweep single weights.
pub fn basis_states(ground: &Ground, degree: &Rational) -> Vec<FockVector> {
    basis_of_degree(ground, degree).into_iter().map(FockVector::from_monomial).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(h_vector(1), FockVector::heis_combination(&[(rat(1, 2), &[1, 1])]));
        let h4 = FockVector::heis_combination(&[(rat(1, 3), &[3, 1]), (rat(-1, 3), &[2, 2])]);
        assert_eq!(h_vector(2), h4);
        let h6 = FockVector::heis_combination(&[
            (rat(1, 5), &[5, 1]),
            (rat(-13, 10), &[4, 2]),
            (rat(11, 10), &[3, 3]),
        ]);
        assert_eq!(h_vector(3), h6);
        assert_eq!(compute_h(3).unwrap().vector, h6);
    }

    #[test]
    fn twisted_constants() {
        assert_eq!(q_constant(1).unwrap(), rat(1, 16));
        assert_eq!(q_constant(2).unwrap(), rat(-1, 128));
        assert_eq!(q_constant(3).unwrap(), rat(1, 256));
    }

    #[test]
    fn eigenvalue_oracle() {
        let m = Monomial::untwisted(&[3, 1], Ground::Momentum(rat(1, 2))).unwrap();
        assert_eq!(h_eigenvalue(&m, 2).unwrap(), int(28));
        let e = Monomial::ground_state(Ground::Momentum(int(5)));
        for r in 2..5 {
            assert_eq!(h_eigenvalue(&e, r).unwrap(), int(0));
        }
        assert_eq!(h_eigenvalue(&Monomial::twisted(&[1]).unwrap(), 2).unwrap(), rat(15, 128));
    }

    #[test]
    fn gap_examples() {
        for (p, q) in reference_pairs() {
            assert_eq!(gap_value(&p, &q, &p, &q), int(-1));
        }
        let r = spectral_gap_check(50);
        assert!(r.case("pair0/integral").unwrap().passed);
        assert!(r.case("pair0/twisted").unwrap().passed);
        // h - p = 1/2 and k - q = 1/4 solve the equation inside the twisted lattice
        let hit = r.case("pair1/twisted").unwrap();
        assert!(!hit.passed);
        assert_eq!(hit.witness.as_ref().unwrap().lhs.as_deref(), Some("63/128"));
        assert_eq!(gap_value(&rat(63, 128), &rat(65, 256), &rat(-1, 128), &rat(1, 256)), int(0));
        assert!(realized_gap_check(8).unwrap().passed());
    }

    #[test]
    fn top_factor_cases() {
        let r = top_factor_check(&FockVector::momentum(rat(3, 2)), &int(0), &int(0)).unwrap();
        assert!(r.passed());
        let r = top_factor_check(&FockVector::twisted_vacuum(), &rat(-1, 128), &rat(1, 256)).unwrap();
        assert!(r.passed());
        let bad = FockVector::heis(&[2, 1]);
        assert!(matches!(top_factor_check(&bad, &int(0), &int(0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn small_sweeps() {
        let states = test_basis(&default_grounds(&[int(0), int(1)]), &int(3));
        assert!(verify_h_commutation(2, 2, &states).unwrap().passed());
        assert!(verify_diagonal(3, &states).unwrap().passed());
        assert!(verify_mutual_commutation(3, &states).unwrap().passed());
        assert!(verify_s_closure(3).unwrap().passed());
        assert!(verify_decomposition(4).unwrap().passed());
    }
}
