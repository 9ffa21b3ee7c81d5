//! Seeded random sampling of the Borcherds identity over both sectors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::standard;
use crate::error::Result;
use crate::exact::{format_rational, int, rat, Rational};
use crate::fock::{basis, FockVector, Ground, Sector};
use crate::hvec::h_vector;
use crate::par;
use crate::report::{CaseResult, VerificationReport, Witness};

/// One instance `(a, b, u, p, s, t)` of the identity.
#[derive(Clone, Debug)]
pub struct BorcherdsSample {
    pub a: FockVector,
    pub b: FockVector,
    pub u: FockVector,
    pub p: i64,
    pub s: Rational,
    pub t: Rational,
}

impl BorcherdsSample {
    pub fn label(&self) -> String {
        format!(
            "a={} b={} u={} p={} s={} t={}",
            self.a.serialize().replace('\n', " + "),
            self.b.serialize().replace('\n', " + "),
            self.u.serialize().replace('\n', " + "),
            self.p,
            format_rational(&self.s),
            format_rational(&self.t)
        )
    }
}

fn sources() -> Vec<FockVector> {
    vec![
        FockVector::heis(&[1]),
        standard().omega(),
        FockVector::heis(&[2]),
        FockVector::heis(&[1, 1, 1]),
        FockVector::heis(&[2, 1]),
        h_vector(2),
    ]
}

fn states() -> Vec<FockVector> {
    let grounds = [
        Ground::vacuum(),
        Ground::Momentum(int(1)),
        Ground::Momentum(rat(-3, 2)),
        Ground::Twisted,
    ];
    grounds
        .iter()
        .flat_map(|g| basis(g, &int(3)))
        .map(FockVector::from_monomial)
        .collect()
}

fn index_for(rng: &mut ChaCha8Rng, x: &FockVector, twisted: bool) -> Rational {
    let odd = x.terms().next().map(|(m, _)| m.len() % 2 == 1).unwrap_or(false);
    let k = int(rng.gen_range(-2..=3));
    if twisted && odd {
        k + rat(1, 2)
    } else {
        k
    }
}

/// Draws `samples` instances, alternating untwisted and twisted states.
pub fn borcherds_samples(samples: usize, seed: u64) -> Vec<BorcherdsSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let src = sources();
    let all = states();
    let (twisted, untwisted): (Vec<_>, Vec<_>) =
        all.into_iter().partition(|v| v.sector().ok().flatten() == Some(Sector::Twisted));
    (0..samples)
        .map(|i| {
            let tw = i % 2 == 1;
            let pool = if tw { &twisted } else { &untwisted };
            let a = src.choose(&mut rng).expect("sources").clone();
            let b = src.choose(&mut rng).expect("sources").clone();
            let u = pool.choose(&mut rng).expect("states").clone();
            let p = rng.gen_range(-2..=2);
            let s = index_for(&mut rng, &a, tw);
            let t = index_for(&mut rng, &b, tw);
            BorcherdsSample { a, b, u, p, s, t }
        })
        .collect()
}

/// Checks every sample exactly; the seed is recorded in the report.
pub fn verify_borcherds(samples: usize, seed: u64) -> Result<VerificationReport> {
    let draws = borcherds_samples(samples, seed);
    let engine = standard();
    let mut report = VerificationReport::new("borcherds").param("samples", samples).param("seed", seed);
    let results = par::map(&draws.iter().enumerate().collect::<Vec<_>>(), |(i, d)| -> Result<CaseResult> {
        let (l, r) = engine.borcherds_sides(&d.a, &d.b, &d.u, d.p, &d.s, &d.t)?;
        let sector = if d.u.sector()? == Some(Sector::Twisted) { "tw" } else { "untw" };
        let id = format!("{i:04}/{sector}");
        Ok(if l == r {
            CaseResult::pass(id).with_detail(d.label())
        } else {
            CaseResult::fail(id, d.label()).with_witness(Witness::sides(&d.u, &l, &r))
        })
    });
    for c in results {
        report.push(c?);
    }
    Ok(report.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_seeded_and_cover_both_sectors() {
        let a = borcherds_samples(20, 7);
        let b = borcherds_samples(20, 7);
        assert_eq!(
            a.iter().map(BorcherdsSample::label).collect::<Vec<_>>(),
            b.iter().map(BorcherdsSample::label).collect::<Vec<_>>()
        );
        assert!(a.iter().any(|s| s.u.sector().unwrap() == Some(Sector::Twisted)));
        assert!(a.iter().any(|s| s.u.sector().unwrap() == Some(Sector::Untwisted)));
    }

    #[test]
    fn small_run_passes() {
        let r = verify_borcherds(24, 1).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.to_json(), verify_borcherds(24, 1).unwrap().to_json());
    }
}
