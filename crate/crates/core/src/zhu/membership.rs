//! Certified membership in `O(V)` by exact linear algebra on a weight-truncated space.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::exact::{format_rational, int, parse_rational, ModularEchelon, SpanSolver, SparseVec};
use crate::fock::{basis_of_degree, FockVector, Ground, Monomial};
use crate::par;

use super::{circ, Ambient};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub coefficient: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// `v = sum coefficient * circ(a, b)` with every generator of weight at most `cutoff`.
    Proved { cutoff: u32, combination: Vec<CertificateTerm> },
    /// No combination of generators of weight at most the cutoff reaches `v`.
    UndeterminedAt { cutoff: u32 },
}

impl MembershipCertificate {
    pub fn is_proved(&self) -> bool {
        matches!(self, MembershipCertificate::Proved { .. })
    }

    pub fn cutoff(&self) -> u32 {
        match self {
            MembershipCertificate::Proved { cutoff, .. } | MembershipCertificate::UndeterminedAt { cutoff } => *cutoff,
        }
    }

    /// Recomputes the combination and compares it with `v`.
    pub fn replay(&self, v: &FockVector) -> Result<bool> {
        let MembershipCertificate::Proved { combination, .. } = self else { return Ok(false) };
        let mut sum = FockVector::zero();
        for t in combination {
            let c = parse_rational(&t.coefficient)?;
            let term = circ(&FockVector::parse(&t.a)?, &FockVector::parse(&t.b)?)?;
            sum.add_assign_scaled(&term, &c);
        }
        Ok(sum == *v)
    }
}

/// Monomials of the ambient algebra of exact weight `w`.
pub fn ambient_monomials(ambient: Ambient, w: u32) -> Vec<Monomial> {
    basis_of_degree(&Ground::vacuum(), &int(w as i64))
        .into_iter()
        .filter(|m| ambient == Ambient::Free || m.len() % 2 == 0)
        .collect()
}

fn sparse(v: &FockVector) -> SparseVec<Monomial> {
    v.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

#[derive(Clone)]
struct Generator {
    a: Monomial,
    b: Monomial,
    vector: FockVector,
}

/// The generators `circ(a, b)` with `wt a + wt b + 1 <= cutoff`, screened for
/// independence modulo a prime; grows one weight at a time.
#[derive(Clone)]
pub struct OvSpace {
    ambient: Ambient,
    cutoff: u32,
    kept: Vec<Generator>,
    screened_out: Vec<Generator>,
    echelon: ModularEchelon<Monomial>,
    exact: SpanSolver<Monomial>,
}

impl OvSpace {
    pub fn new(ambient: Ambient) -> Self {
        OvSpace {
            ambient,
            cutoff: 0,
            kept: Vec::new(),
            screened_out: Vec::new(),
            echelon: ModularEchelon::new(),
            exact: SpanSolver::new(),
        }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Number of generators kept after screening.
    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn extend_to(&mut self, cutoff: u32) -> Result<()> {
        while self.cutoff < cutoff {
            let level = self.cutoff + 1;
            let mut pairs = Vec::new();
            for wa in 1..level {
                let wb = level - 1 - wa;
                for a in ambient_monomials(self.ambient, wa) {
                    for b in ambient_monomials(self.ambient, wb) {
                        pairs.push((a.clone(), b));
                    }
                }
            }
            let built = par::map_owned(pairs, |(a, b)| -> Result<Generator> {
                let vector = circ(&FockVector::from_monomial(a.clone()), &FockVector::from_monomial(b.clone()))?;
                Ok(Generator { a, b, vector })
            });
            for g in built {
                let g = g?;
                if g.vector.is_zero() {
                    continue;
                }
                let s = sparse(&g.vector);
                if self.echelon.push(&s) {
                    self.exact.push(&s);
                    self.kept.push(g);
                } else {
                    self.screened_out.push(g);
                }
            }
            self.cutoff = level;
        }
        Ok(())
    }

    /// Tries to write `v` in the current span.
    pub fn certify(&mut self, v: &FockVector) -> MembershipCertificate {
        let target = sparse(v);
        if v.is_zero() {
            return MembershipCertificate::Proved { cutoff: self.cutoff, combination: Vec::new() };
        }
        if !self.echelon.contains(&target) {
            return MembershipCertificate::UndeterminedAt { cutoff: self.cutoff };
        }
        let mut solution = self.exact.solve(&target);
        if solution.is_none() && !self.screened_out.is_empty() {
            // dependence modulo the prime does not imply dependence over Q
            for g in self.screened_out.drain(..) {
                self.exact.push(&sparse(&g.vector));
                self.kept.push(g);
            }
            solution = self.exact.solve(&target);
        }
        match solution {
            None => MembershipCertificate::UndeterminedAt { cutoff: self.cutoff },
            Some(combo) => MembershipCertificate::Proved {
                cutoff: self.cutoff,
                combination: combo
                    .into_iter()
                    .map(|(i, c)| CertificateTerm {
                        coefficient: format_rational(&c),
                        a: FockVector::from_monomial(self.kept[i].a.clone()).serialize(),
                        b: FockVector::from_monomial(self.kept[i].b.clone()).serialize(),
                    })
                    .collect(),
            },
        }
    }
}

type SpaceCache = Mutex<BTreeMap<(Ambient, u32), Arc<Mutex<OvSpace>>>>;

/// The space for `(ambient, cutoff)`, grown from the largest cached smaller one.
fn shared(ambient: Ambient, cutoff: u32) -> Result<Arc<Mutex<OvSpace>>> {
    static SPACES: OnceLock<SpaceCache> = OnceLock::new();
    let map = SPACES.get_or_init(Default::default);
    let mut map = map.lock().expect("ov spaces");
    if let Some(hit) = map.get(&(ambient, cutoff)) {
        return Ok(hit.clone());
    }
    let mut space = map
        .range((ambient, 0)..(ambient, cutoff))
        .next_back()
        .map(|(_, s)| s.lock().expect("ov space").clone())
        .unwrap_or_else(|| OvSpace::new(ambient));
    while space.cutoff() < cutoff {
        space.extend_to(space.cutoff() + 1)?;
        map.insert((ambient, space.cutoff()), Arc::new(Mutex::new(space.clone())));
    }
    Ok(map.get(&(ambient, cutoff)).cloned().unwrap_or_else(|| Arc::new(Mutex::new(space))))
}

fn top_weight(v: &FockVector) -> u32 {
    v.terms()
        .map(|(m, _)| m.degree().to_integer().try_into().unwrap_or(u32::MAX))
        .max()
        .unwrap_or(0)
}

/// Membership with all generators up to weight `cutoff`.
pub fn ov_membership(v: &FockVector, cutoff: u32, ambient: Ambient) -> Result<MembershipCertificate> {
    if top_weight(v) > cutoff {
        return Ok(MembershipCertificate::UndeterminedAt { cutoff });
    }
    let space = shared(ambient, cutoff)?;
    let mut space = space.lock().expect("ov space");
    Ok(space.certify(v))
}

/// Iterative deepening: the first cutoff from the top weight of `v` up to
/// `max_cutoff` at which membership is proved, or the last undetermined one.
pub fn ov_membership_deepening(v: &FockVector, max_cutoff: u32, ambient: Ambient) -> Result<MembershipCertificate> {
    let start = top_weight(v).max(1);
    let mut last = MembershipCertificate::UndeterminedAt { cutoff: max_cutoff };
    for w in start..=max_cutoff {
        last = ov_membership(v, w, ambient)?;
        if last.is_proved() {
            return Ok(last);
        }
    }
    Ok(last)
}
