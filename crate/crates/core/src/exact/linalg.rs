use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// One echelon row: `sum_i combo[i] * G_i == entries`, where `G_i` is the
/// integer-scaled generator `i`.
#[derive(Clone, Debug)]
struct Row<K> {
    entries: BTreeMap<K, BigInt>,
    combo: BTreeMap<usize, BigInt>,
}

/// Incremental fraction-free echelon form over the integers.
///
/// Generators are cleared of denominators on entry and every row is kept
/// primitive (content divided out), which bounds coefficient growth.
#[derive(Clone, Debug)]
pub struct SpanSolver<K: Ord + Clone> {
    pivots: BTreeMap<K, Row<K>>,
    // generator i was multiplied by scales[i] to become integral
    scales: Vec<BigInt>,
}

impl<K: Ord + Clone> Default for SpanSolver<K> {
    fn default() -> Self {
        Self::new()
    }
}

fn integerize<K: Ord + Clone>(v: &SparseVec<K>) -> (BTreeMap<K, BigInt>, BigInt) {
    let lcm = v
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let entries = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k.clone(), c.numer() * (&lcm / c.denom())))
        .collect();
    (entries, lcm)
}

fn content<'a>(values: impl Iterator<Item = &'a BigInt>) -> BigInt {
    values.fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

impl<K: Ord + Clone> SpanSolver<K> {
    pub fn new() -> Self {
        SpanSolver { pivots: BTreeMap::new(), scales: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn generator_count(&self) -> usize {
        self.scales.len()
    }

    /// `x <- a x - b p` with `a = p_k / g`, `b = x_k / g`; returns `a`.
    fn eliminate(
        entries: &mut BTreeMap<K, BigInt>,
        combo: &mut BTreeMap<usize, BigInt>,
        key: &K,
        pivot: &Row<K>,
    ) -> BigInt {
        let xk = entries[key].clone();
        let pk = &pivot.entries[key];
        let g = xk.gcd(pk);
        let a = pk / &g;
        let b = &xk / &g;
        if !a.is_one() {
            for v in entries.values_mut() {
                *v *= &a;
            }
            for v in combo.values_mut() {
                *v *= &a;
            }
        }
        for (k, v) in &pivot.entries {
            let slot = entries.entry(k.clone()).or_insert_with(BigInt::zero);
            *slot -= &b * v;
            if slot.is_zero() {
                entries.remove(k);
            }
        }
        for (i, v) in &pivot.combo {
            let slot = combo.entry(*i).or_insert_with(BigInt::zero);
            *slot -= &b * v;
            if slot.is_zero() {
                combo.remove(i);
            }
        }
        a
    }

    /// Adds a generator; returns `true` if it enlarged the span.
    pub fn push(&mut self, generator: &SparseVec<K>) -> bool {
        let index = self.scales.len();
        let (mut entries, scale) = integerize(generator);
        self.scales.push(scale);
        let mut combo = BTreeMap::from([(index, BigInt::one())]);
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => entries.keys().next_back().cloned(),
                Some(c) => entries.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { return false };
            match self.pivots.get(&key) {
                Some(pivot) => {
                    Self::eliminate(&mut entries, &mut combo, &key, pivot);
                    cursor = Some(key);
                }
                None => {
                    let g = content(entries.values().chain(combo.values()));
                    let g = if entries[&key].is_negative() { -g } else { g };
                    for v in entries.values_mut() {
                        *v = &*v / &g;
                    }
                    for v in combo.values_mut() {
                        *v = &*v / &g;
                    }
                    self.pivots.insert(key, Row { entries, combo });
                    return true;
                }
            }
        }
    }

    /// Sparse combination `(generator index, coefficient)` reproducing
    /// `target`, or `None` if `target` lies outside the span.
    pub fn solve(&self, target: &SparseVec<K>) -> Option<Vec<(usize, Rational)>> {
        let (mut entries, t_scale) = integerize(target);
        let mut combo: BTreeMap<usize, BigInt> = BTreeMap::new();
        let mut multiplier = BigInt::one();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => entries.keys().next_back().cloned(),
                Some(c) => entries.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            let pivot = self.pivots.get(&key)?;
            multiplier *= Self::eliminate(&mut entries, &mut combo, &key, pivot);
            cursor = Some(key);
        }
        // multiplier * T_int + sum combo_i G_i = 0, G_i = scale_i g_i, T = T_int / t_scale
        let denom = multiplier * t_scale;
        Some(
            combo
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, Rational::new(-c * &self.scales[i], denom.clone())))
                .collect(),
        )
    }
}

/// Solves `target = sum c_i generators[i]` exactly.
pub fn solve_in_span<K: Ord + Clone>(
    target: &SparseVec<K>,
    generators: &[SparseVec<K>],
) -> Option<Vec<(usize, Rational)>> {
    let mut solver = SpanSolver::new();
    for g in generators {
        solver.push(g);
    }
    solver.solve(target)
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn reduce_mod(r: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = r.numer().mod_floor(&p);
    let d = r.denom().mod_floor(&p);
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, PRIME - 2)))
}

/// Echelon form modulo the Mersenne prime `2^61 - 1`.
///
/// Used only to pick a linearly independent subset of generators cheaply;
/// independence modulo a prime implies independence over the rationals.
#[derive(Clone, Debug, Default)]
pub struct ModularEchelon<K: Ord + Clone> {
    pivots: BTreeMap<K, BTreeMap<K, u64>>,
}

impl<K: Ord + Clone> ModularEchelon<K> {
    pub fn new() -> Self {
        ModularEchelon { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &SparseVec<K>) -> Option<BTreeMap<K, u64>> {
        let mut x = BTreeMap::new();
        for (k, c) in v {
            let c = reduce_mod(c)?;
            if c != 0 {
                x.insert(k.clone(), c);
            }
        }
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => x.keys().next_back().cloned(),
                Some(c) => x.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { return Some(x) };
            if let Some(row) = self.pivots.get(&key) {
                // rows are normalised to leading coefficient 1
                let f = x[&key];
                for (k, v) in row {
                    let slot = x.entry(k.clone()).or_insert(0);
                    *slot = (*slot + PRIME - mulmod(f, *v)) % PRIME;
                    if *slot == 0 {
                        x.remove(k);
                    }
                }
            }
            cursor = Some(key);
        }
    }

    /// Adds `v`; returns `true` if it was independent of the rows so far.
    /// Vectors whose denominators vanish modulo the prime are rejected.
    pub fn push(&mut self, v: &SparseVec<K>) -> bool {
        let Some(mut x) = self.reduce(v) else { return false };
        let Some((key, lead)) = x.iter().next_back().map(|(k, c)| (k.clone(), *c)) else {
            return false;
        };
        let inv = powmod(lead, PRIME - 2);
        for c in x.values_mut() {
            *c = mulmod(*c, inv);
        }
        // back-substitution is not needed: reduction walks keys downwards
        self.pivots.insert(key, x);
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_some_and(|x| x.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn vec2(a: Rational, b: Rational) -> SparseVec<usize> {
        let mut v = BTreeMap::new();
        if !a.is_zero() {
            v.insert(0, a);
        }
        if !b.is_zero() {
            v.insert(1, b);
        }
        v
    }

    #[test]
    fn spec_examples() {
        let gens = vec![vec2(int(1), int(0)), vec2(int(0), int(1))];
        assert_eq!(solve_in_span(&BTreeMap::new(), &gens), Some(vec![]));
        assert_eq!(
            solve_in_span(&vec2(int(1), int(1)), &gens),
            Some(vec![(0, int(1)), (1, int(1))])
        );
        assert_eq!(solve_in_span(&vec2(int(1), int(0)), &[vec2(int(0), int(1))]), None);
    }

    #[test]
    fn dependent_generators_and_fractions() {
        let gens = vec![
            vec2(rat(1, 2), rat(1, 3)),
            vec2(int(3), int(2)),
            vec2(rat(-2, 7), int(5)),
        ];
        let target = vec2(rat(5, 11), rat(-4, 9));
        let combo = solve_in_span(&target, &gens).unwrap();
        let mut acc = vec2(int(0), int(0));
        for (i, c) in combo {
            for (k, v) in &gens[i] {
                *acc.entry(*k).or_insert_with(Rational::zero) += c.clone() * v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        assert_eq!(acc, target);
    }

    #[test]
    fn modular_rank_matches_exact() {
        let gens = vec![
            vec2(rat(1, 2), rat(1, 3)),
            vec2(int(3), int(2)),
            vec2(int(0), int(5)),
        ];
        let mut m = ModularEchelon::new();
        let independent: Vec<bool> = gens.iter().map(|g| m.push(g)).collect();
        assert_eq!(independent, vec![true, false, true]);
        assert!(m.contains(&vec2(int(7), int(-1))));
    }

    fn arb_vec() -> impl Strategy<Value = SparseVec<u8>> {
        proptest::collection::btree_map(0u8..6, (-6i64..7, 1i64..5), 0..5).prop_map(|m| {
            m.into_iter()
                .filter(|(_, (n, _))| *n != 0)
                .map(|(k, (n, d))| (k, rat(n, d)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn solution_replays_exactly(gens in proptest::collection::vec(arb_vec(), 0..6), target in arb_vec()) {
            let result = solve_in_span(&target, &gens);
            // independent check: the target is in the span iff adding it keeps the rank
            let mut solver = SpanSolver::new();
            for g in &gens { solver.push(g); }
            let before = solver.rank();
            solver.push(&target);
            let in_span = solver.rank() == before;
            prop_assert_eq!(result.is_some(), in_span);
            if let Some(combo) = result {
                let mut acc: SparseVec<u8> = BTreeMap::new();
                for (i, c) in combo {
                    for (k, v) in &gens[i] {
                        *acc.entry(*k).or_insert_with(Rational::zero) += c.clone() * v;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                prop_assert_eq!(acc, target);
            }
        }
    }
}
