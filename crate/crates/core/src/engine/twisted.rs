//! The quadratic correction `exp(Delta)` used by twisted vertex operators.
//!
//! `Delta = sum_{m,n >= 1} c_{mn} b(m) b(n)` acts on generator monomials by
//! contracting pairs of factors, with `c_{mn}` read off [`delta_series`].

use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::exact::{delta_series, int, BiSeries, Rational};
use crate::fock::{FockVector, Monomial};

pub(crate) struct DeltaTable {
    series: RwLock<Arc<BiSeries>>,
    exp_cache: RwLock<HashMap<Monomial, Arc<FockVector>>>,
    sign: Rational,
}

impl DeltaTable {
    /// `sign = -1` selects the opposite convention `exp(-Delta)`.
    pub fn new(sign: Rational) -> Self {
        DeltaTable {
            series: RwLock::new(Arc::new(delta_series(8))),
            exp_cache: RwLock::new(HashMap::new()),
            sign,
        }
    }

    fn series(&self, order: u32) -> Arc<BiSeries> {
        {
            let s = self.series.read().expect("delta lock");
            if s.order() >= order {
                return s.clone();
            }
        }
        let mut s = self.series.write().expect("delta lock");
        if s.order() < order {
            *s = Arc::new(delta_series(order.max(2 * s.order())));
        }
        s.clone()
    }

    /// `Delta` applied once to a combination of vacuum-ground monomials.
    fn apply_once(&self, v: &FockVector, series: &BiSeries) -> FockVector {
        let mut out = FockVector::zero();
        for (mono, coef) in v.terms() {
            let modes = mono.modes();
            let mut distinct: Vec<(u32, u32)> = Vec::new();
            for &m2 in modes {
                let n = (m2 / 2) as u32;
                match distinct.last_mut() {
                    Some((last, c)) if *last == n => *c += 1,
                    _ => distinct.push((n, 1)),
                }
            }
            for (a, &(m, cm)) in distinct.iter().enumerate() {
                for (b, &(n, cn)) in distinct.iter().enumerate() {
                    // b(n) first, then b(m) on what is left
                    let count_m_after = if a == b { cm - 1 } else { cm };
                    if count_m_after == 0 {
                        continue;
                    }
                    let c = series.coeff(m, n);
                    if c.is_zero() {
                        continue;
                    }
                    let factor = c * int((cn * n) as i64) * int((count_m_after * m) as i64);
                    let mut rest: smallvec::SmallVec<[u16; 8]> = smallvec::SmallVec::new();
                    let (mut skip_m, mut skip_n) = (true, true);
                    for &m2 in modes {
                        let k = (m2 / 2) as u32;
                        if skip_n && k == n {
                            skip_n = false;
                            continue;
                        }
                        if skip_m && k == m {
                            skip_m = false;
                            continue;
                        }
                        rest.push(m2);
                    }
                    out.add_term(Monomial::from_sorted(rest, mono.ground().clone()), coef * factor);
                }
            }
        }
        out
    }

    /// `exp(sign * Delta)` applied to a vacuum-ground monomial.
    pub fn exp_on(&self, mono: &Monomial) -> Arc<FockVector> {
        if let Some(hit) = self.exp_cache.read().expect("delta lock").get(mono) {
            return hit.clone();
        }
        let series = self.series(mono.degree2() / 2);
        let mut total = FockVector::from_monomial(mono.clone());
        let mut current = total.clone();
        let mut k = 1i64;
        loop {
            current = self.apply_once(&current, &series).scale(&(self.sign.clone() / int(k)));
            if current.is_zero() {
                break;
            }
            total = total.add(&current);
            k += 1;
        }
        let total = Arc::new(total);
        self.exp_cache
            .write()
            .expect("delta lock")
            .insert(mono.clone(), total.clone());
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fock::Ground;

    #[test]
    fn omega_picks_up_one_sixteenth() {
        let table = DeltaTable::new(int(1));
        let mono = Monomial::untwisted(&[1, 1], Ground::vacuum()).unwrap();
        let e = table.exp_on(&mono);
        // b(1)b(1) b(-1)^2 1 = 2, times c_11 = 1/16
        assert_eq!(e.coefficient(&Monomial::vacuum()), rat(1, 8));
        assert_eq!(e.coefficient(&mono), int(1));
    }

    #[test]
    fn single_factor_is_untouched() {
        let table = DeltaTable::new(int(1));
        let mono = Monomial::untwisted(&[3], Ground::vacuum()).unwrap();
        assert_eq!(*table.exp_on(&mono), FockVector::from_monomial(mono));
    }
}
