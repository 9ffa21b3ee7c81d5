//! Vertex operators of the exponentials `e^{m beta}` on momentum states.
//!
//! `Y(e^{m beta}, z) = E^-(-m beta, z) E^+(-m beta, z) e^{m beta} z^{m beta(0)}`
//! with the trivial cocycle.

use smallvec::SmallVec;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::exact::{gen_binomial, int, Rational, Scalar};
use crate::fock::{FockVector, Ground, Monomial};

/// The exponential `e^{m beta}` of the workspace generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeExp {
    pub m: i64,
}

impl LatticeExp {
    pub fn new(m: i64) -> Self {
        LatticeExp { m }
    }

    pub fn state(&self) -> FockVector {
        FockVector::momentum(int(self.m))
    }
}

#[derive(Default)]
pub(crate) struct CreationSeries {
    /// `m -> [P_0, P_1, ...]`, coefficients of `exp(sum_n m b(-n) z^n / n)`.
    cache: RwLock<HashMap<i64, Arc<Vec<FockVector>>>>,
}

impl CreationSeries {
    pub fn upto(&self, m: i64, j: usize) -> Arc<Vec<FockVector>> {
        if let Some(hit) = self.cache.read().expect("series lock").get(&m) {
            if hit.len() > j {
                return hit.clone();
            }
        }
        let mut p: Vec<FockVector> = vec![FockVector::vacuum()];
        for k in 1..=j.max(8) {
            // k P_k = m sum_{n=1}^{k} b(-n) P_{k-n}
            let mut next = FockVector::zero();
            for n in 1..=k {
                for (mono, c) in p[k - n].terms() {
                    let raised = mono.with_mode((2 * n) as u16).expect("valid creation mode");
                    next.add_term(raised, c * int(m) / int(k as i64));
                }
            }
            p.push(next);
        }
        let p = Arc::new(p);
        self.cache.write().expect("series lock").insert(m, p.clone());
        p
    }
}

/// `e^{m beta}(k) v` for an unshifted index `k`.
pub(crate) fn apply<R: Scalar>(
    series: &CreationSeries,
    norm: &Rational,
    m: i64,
    k: &Rational,
    v: &FockVector<R>,
) -> FockVector<R> {
    let mut out = FockVector::zero();
    let mr = int(m);
    for (mono, coef) in v.terms() {
        let Ground::Momentum(c) = mono.ground() else { continue };
        // exponent of z from z^{m beta(0)} is N m c; need total -k-1
        let base = -k - int(1) - norm * &mr * c;
        if !base.is_integer() {
            continue;
        }
        let base: i64 = base.to_integer().try_into().unwrap_or(i64::MIN);
        // E^+ choices: remove e_n copies of b(-n), factor C(c_n, e_n)(-m N)^{e_n} z^{-n e_n}
        let mut groups: Vec<(u16, u32)> = Vec::new();
        for &m2 in mono.modes() {
            match groups.last_mut() {
                Some((last, cnt)) if *last == m2 => *cnt += 1,
                _ => groups.push((m2, 1)),
            }
        }
        let mut choices: Vec<(Rational, i64, SmallVec<[u16; 8]>)> =
            vec![(Rational::from_integer(1.into()), 0, SmallVec::new())];
        for &(m2, cnt) in &groups {
            let n = (m2 / 2) as i64;
            let mut next = Vec::new();
            for (f, q, rest) in &choices {
                for e in 0..=cnt {
                    let mut r = rest.clone();
                    for _ in 0..(cnt - e) {
                        r.push(m2);
                    }
                    let factor = gen_binomial(&int(cnt as i64), e) * pow(&(-&mr * norm), e);
                    next.push((f * factor, q + n * e as i64, r));
                }
            }
            choices = next;
        }
        let target = Ground::Momentum(c + &mr);
        for (f, q, rest) in choices {
            let j = base + q;
            if j < 0 {
                continue;
            }
            let p = series.upto(m, j as usize);
            for (pm, pc) in p[j as usize].terms() {
                let mut modes: SmallVec<[u16; 8]> = rest.clone();
                modes.extend(pm.modes().iter().copied());
                modes.sort_unstable_by(|a, b| b.cmp(a));
                out.add_term(Monomial::from_sorted(modes, target.clone()), coef.scale(&(&f * pc)));
            }
        }
    }
    out
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(int(1), |acc, _| acc * x)
}
