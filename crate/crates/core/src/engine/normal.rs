//! Normal-ordered products of Heisenberg fields applied to a single monomial.
//!
//! For a generator monomial `b(-n_1) ... b(-n_s) 1` the target mode is
//! `sum_{i_1 + ... + i_s = n} prod_j C(-i_j - 1, n_j - 1) :b(i_1) ... b(i_s):`.
//! Indices are doubled: even in the untwisted sector, odd in the twisted one.
//! Factors with equal `n_j` are interchangeable, so each group of equal
//! factors picks a multiset of indices weighted by a multinomial coefficient.

use num_traits::Zero;
use smallvec::SmallVec;
use std::cell::RefCell;
use std::collections::HashMap;

use crate::exact::{gen_binomial, int, rat, Rational, Scalar};
use crate::fock::{FockVector, Mode2, Monomial};

thread_local! {
    static BINOMIALS: RefCell<HashMap<(i64, u32), Rational>> = RefCell::new(HashMap::new());
}

/// `C(-i - 1, n - 1)` for the doubled index `i2 = 2i`.
fn field_binomial(i2: i64, n: u32) -> Rational {
    BINOMIALS.with(|cache| {
        cache
            .borrow_mut()
            .entry((i2, n))
            .or_insert_with(|| gen_binomial(&(rat(-i2, 2) - int(1)), n - 1))
            .clone()
    })
}

/// Groups `(n, multiplicity)` of a generator monomial, largest `n` first.
pub(crate) fn factor_groups(m: &Monomial) -> SmallVec<[(u32, u32); 8]> {
    let mut groups: SmallVec<[(u32, u32); 8]> = SmallVec::new();
    for &m2 in m.modes() {
        let n = (m2 / 2) as u32;
        match groups.last_mut() {
            Some((last, count)) if *last == n => *count += 1,
            _ => groups.push((n, 1)),
        }
    }
    groups
}

/// Zero-mode behaviour on the ground of the target state.
pub(crate) enum ZeroMode<R> {
    /// Twisted sector, or a ground on which the zero mode vanishes.
    Absent,
    Scalar(R),
}

pub(crate) struct NormalOrdered<'a, R: Scalar> {
    pub groups: &'a [(u32, u32)],
    pub norm: &'a Rational,
    pub twisted: bool,
    pub zero: &'a ZeroMode<R>,
}

struct Walk {
    avail: SmallVec<[(i64, u32); 8]>,
    creators: SmallVec<[Mode2; 8]>,
    zeros: u32,
}

impl<R: Scalar> NormalOrdered<'_, R> {
    /// Adds `coef * :b(i_1)...b(i_s): v` summed over all index tuples with
    /// doubled sum `target2` into `out`.
    pub fn apply(
        &self,
        coef: &Rational,
        target2: i64,
        v: &Monomial,
        v_coef: &R,
        out: &mut FockVector<R>,
    ) {
        let parity = if self.twisted { 1 } else { 0 };
        let slots: u32 = self.groups.iter().map(|g| g.1).sum();
        if slots == 0 {
            if target2 == 0 {
                out.add_term(v.clone(), v_coef.scale(coef));
            }
            return;
        }
        if (target2 - parity * slots as i64).rem_euclid(2) != 0 {
            return;
        }
        let mut avail: SmallVec<[(i64, u32); 8]> = SmallVec::new();
        for &m2 in v.modes() {
            match avail.last_mut() {
                Some((last, c)) if *last == m2 as i64 => *c += 1,
                _ => avail.push((m2 as i64, 1)),
            }
        }
        let mut walk = Walk { avail, creators: SmallVec::new(), zeros: 0 };
        let mut leaves: Vec<(Rational, SmallVec<[Mode2; 8]>, u32)> = Vec::new();
        self.descend(0, 0, i64::MAX, 0, target2, slots, coef.clone(), &mut walk, &mut leaves);
        for (c, modes, zeros) in leaves {
            let mut value = v_coef.scale(&c);
            if zeros > 0 {
                match self.zero {
                    ZeroMode::Scalar(s) => {
                        for _ in 0..zeros {
                            value = value * s.clone();
                        }
                    }
                    ZeroMode::Absent => continue,
                }
            }
            out.add_term(Monomial::from_sorted(modes, v.ground().clone()), value);
        }
    }

    fn max_positive(avail: &[(i64, u32)], slots: u32) -> i64 {
        let mut left = slots;
        let mut total = 0;
        for &(m, c) in avail {
            if left == 0 {
                break;
            }
            let take = c.min(left);
            total += m * take as i64;
            left -= take;
        }
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        group: usize,
        placed: u32,
        prev: i64,
        run: u32,
        target2: i64,
        slots_left: u32,
        coef: Rational,
        walk: &mut Walk,
        leaves: &mut Vec<(Rational, SmallVec<[Mode2; 8]>, u32)>,
    ) {
        if slots_left == 0 {
            if target2 == 0 {
                let mut modes: SmallVec<[Mode2; 8]> = SmallVec::new();
                for &(m, c) in &walk.avail {
                    for _ in 0..c {
                        modes.push(m as Mode2);
                    }
                }
                modes.extend(walk.creators.iter().copied());
                modes.sort_unstable_by(|a, b| b.cmp(a));
                leaves.push((coef, modes, walk.zeros));
            }
            return;
        }
        let (n, size) = self.groups[group];
        if placed == size {
            self.descend(group + 1, 0, i64::MAX, 0, target2, slots_left, coef, walk, leaves);
            return;
        }
        let rest = slots_left - 1;
        let lower = if rest == 0 {
            target2
        } else {
            target2 - Self::max_positive(&walk.avail, rest)
        };
        let upper = if rest == 0 { target2 } else { prev };
        let slot_no = placed + 1;

        // Annihilators: indices present in the state.
        for k in 0..walk.avail.len() {
            let (m, c) = walk.avail[k];
            if c == 0 || m > prev || m > upper || m < lower {
                continue;
            }
            let repeat = if m == prev { run + 1 } else { 1 };
            let weight = field_binomial(m, n)
                * rat(c as i64 * m, 2)
                * self.norm
                * rat(slot_no as i64, repeat as i64);
            walk.avail[k].1 -= 1;
            self.descend(group, slot_no, m, repeat, target2 - m, rest, &coef * weight, walk, leaves);
            walk.avail[k].1 += 1;
        }

        // Zero mode.
        if !self.twisted && matches!(self.zero, ZeroMode::Scalar(_)) && 0 <= prev && 0 <= upper && 0 >= lower
        {
            let repeat = if prev == 0 { run + 1 } else { 1 };
            let weight = field_binomial(0, n) * rat(slot_no as i64, repeat as i64);
            walk.zeros += 1;
            self.descend(group, slot_no, 0, repeat, target2, rest, &coef * weight, walk, leaves);
            walk.zeros -= 1;
        }

        // Creators.
        let mut i2 = if self.twisted { -1 } else { -2 };
        let top = prev.min(upper);
        if i2 > top {
            // align to parity below `top`
            i2 = top;
            if (i2 - if self.twisted { 1 } else { 0 }).rem_euclid(2) != 0 {
                i2 -= 1;
            }
        }
        while i2 >= lower {
            let repeat = if i2 == prev { run + 1 } else { 1 };
            let weight = field_binomial(i2, n) * rat(slot_no as i64, repeat as i64);
            if !weight.is_zero() {
                walk.creators.push((-i2) as Mode2);
                self.descend(group, slot_no, i2, repeat, target2 - i2, rest, &coef * weight, walk, leaves);
                walk.creators.pop();
            }
            i2 -= 2;
        }
    }
}

/// The scalar `(s!) / prod(m_i!)` is folded into the walk; exposed for tests.
#[cfg(test)]
pub(crate) fn multinomial(counts: &[u32]) -> Rational {
    let total: u32 = counts.iter().sum();
    let mut r = crate::exact::factorial(total);
    for &c in counts {
        r = r / crate::exact::factorial(c);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Ground;

    #[test]
    fn binomial_cache_matches_direct() {
        assert_eq!(field_binomial(2, 2), gen_binomial(&int(-2), 1));
        assert_eq!(field_binomial(-1, 3), gen_binomial(&rat(-1, 2), 2));
        assert_eq!(multinomial(&[2, 1]), int(3));
    }

    #[test]
    fn groups_of_equal_factors() {
        let m = Monomial::untwisted(&[3, 1, 1], Ground::vacuum()).unwrap();
        assert_eq!(factor_groups(&m).as_slice(), &[(3, 1), (1, 2)]);
    }
}
