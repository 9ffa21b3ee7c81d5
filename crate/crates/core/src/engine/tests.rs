use super::*;
use crate::exact::rat;
use crate::fock::{basis, basis_of_degree};

fn h1() -> FockVector {
    FockVector::heis(&[1])
}

fn mono(modes: &[u32], c: Rational) -> FockVector {
    FockVector::from_monomial(Monomial::untwisted(modes, Ground::Momentum(c)).unwrap())
}

#[test]
fn heisenberg_examples() {
    let e = Engine::orthonormal();
    // h(1) h(-1) e^0 = e^0
    let out = e.heis_mode_apply(&h1(), &int(1), &h1()).unwrap();
    assert_eq!(out, FockVector::vacuum());
    // L(0) e^{c} = c^2/2 e^c
    let c = rat(3, 2);
    let out = e.virasoro(0, &FockVector::momentum(c.clone())).unwrap();
    assert_eq!(out, FockVector::momentum(c.clone()).scale(&(&c * &c / int(2))));
    // L(-1) h(-1) e^0 = h(-2) e^0
    assert_eq!(e.virasoro(-1, &h1()).unwrap(), FockVector::heis(&[2]));
}

#[test]
fn twisted_examples() {
    let e = Engine::orthonormal();
    let v = twisted_state(&[1]);
    let out = e.twisted_mode_apply(&h1(), &rat(1, 2), &v).unwrap();
    assert_eq!(out, FockVector::twisted_vacuum().scale(&rat(1, 2)));
    let out = e.virasoro(0, &FockVector::twisted_vacuum()).unwrap();
    assert_eq!(out, FockVector::twisted_vacuum().scale(&rat(1, 16)));
    let out = e.virasoro(0, &v).unwrap();
    assert_eq!(out, v.scale(&rat(9, 16)));
    assert!(e.twisted_mode_apply(&h1(), &rat(1, 2), &h1()).is_err());
    assert!(e.heis_mode_apply(&h1(), &int(1), &v).is_err());
}

#[test]
fn lattice_examples() {
    let e = Engine::new(GeneratorProfile::lattice(1).unwrap());
    let em = FockVector::momentum(int(-1));
    let plus = LatticeExp::new(1);
    let out = e.lattice_mode_apply(&plus, &int(-1), &em).unwrap();
    let expected = FockVector::heis_combination(&[(rat(1, 2), &[1, 1]), (rat(1, 2), &[2])]);
    assert_eq!(out, expected);
    assert_eq!(e.lattice_mode_apply(&plus, &int(0), &em).unwrap(), h1());
    let ep = FockVector::momentum(int(1));
    for n in -1..6 {
        assert!(e.lattice_mode_apply(&plus, &int(n), &ep).unwrap().is_zero());
    }
    assert!(e.lattice_mode_apply(&plus, &int(0), &FockVector::twisted_vacuum()).is_err());
}

#[test]
fn exponential_pair_product_is_four_omega() {
    let e = Engine::new(GeneratorProfile::lattice(1).unwrap());
    let big_e = FockVector::momentum(int(1)).add(&FockVector::momentum(int(-1)));
    let mut star = FockVector::zero();
    for j in 0..=2 {
        let c = gen_binomial(&int(1), j);
        star.add_assign_scaled(&e.product(&big_e, j as i64 - 1, &big_e).unwrap(), &c);
    }
    assert_eq!(star, e.omega().scale(&int(4)));
}

#[test]
fn non_homogeneous_source_is_rejected() {
    let e = Engine::orthonormal();
    let a = h1().add(&e.omega());
    assert!(matches!(e.mode(&a, &int(0), &h1()), Err(Error::NotHomogeneous(_))));
    // the unshifted accessor splits it instead
    assert!(e.mode_unshifted(&a, &int(0), &h1()).is_ok());
}

fn commutator<F, G>(f: F, g: G, v: &FockVector) -> FockVector
where
    F: Fn(&FockVector) -> FockVector,
    G: Fn(&FockVector) -> FockVector,
{
    f(&g(v)).sub(&g(&f(v)))
}

fn test_states(max_degree: i64) -> Vec<FockVector> {
    let mut out = Vec::new();
    for g in [Ground::vacuum(), Ground::Momentum(rat(3, 2)), Ground::Twisted] {
        for m in basis(&g, &int(max_degree)) {
            out.push(FockVector::from_monomial(m));
        }
    }
    out
}

#[test]
fn heisenberg_relations_both_sectors() {
    let e = Engine::orthonormal();
    for v in test_states(4) {
        let twisted = v.sector().unwrap() == Some(Sector::Twisted);
        let offset = if twisted { rat(1, 2) } else { int(0) };
        for m in -3..=3 {
            for n in -3..=3 {
                let (mr, nr) = (int(m) + &offset, int(n) - &offset);
                let lhs = commutator(
                    |x| e.heisenberg(&mr, x).unwrap(),
                    |x| e.heisenberg(&nr, x).unwrap(),
                    &v,
                );
                let rhs = if (&mr + &nr).is_zero() { v.scale(&mr) } else { FockVector::zero() };
                assert_eq!(lhs, rhs, "m={mr} n={nr} v={v}");
            }
        }
    }
}

#[test]
fn virasoro_relations_both_sectors() {
    let e = Engine::orthonormal();
    for v in test_states(3) {
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let lhs = commutator(|x| e.virasoro(m, x).unwrap(), |x| e.virasoro(n, x).unwrap(), &v);
                let mut rhs = e.virasoro(m + n, &v).unwrap().scale(&int(m - n));
                if m + n == 0 {
                    rhs = rhs.add(&v.scale(&rat(m * m * m - m, 12)));
                }
                assert_eq!(lhs, rhs, "m={m} n={n} v={v}");
            }
        }
    }
}

#[test]
fn modes_lower_weight_by_index() {
    let e = Engine::orthonormal();
    let p = GeneratorProfile::orthonormal();
    let a = FockVector::heis(&[3, 1]).sub(&FockVector::heis(&[2, 2]));
    for v in basis_of_degree(&Ground::Momentum(int(1)), &int(3)) {
        let v: FockVector = FockVector::from_monomial(v);
        let w = v.max_weight(&p).unwrap();
        for n in -2..=3 {
            let out = e.mode(&a, &int(n), &v).unwrap();
            if let Some(wo) = out.homogeneous_weight(&p).unwrap() {
                assert_eq!(wo, &w - int(n));
            }
        }
    }
}

#[test]
fn theta_equivariance() {
    let e = Engine::orthonormal();
    let sources = [h1(), e.omega(), FockVector::heis(&[2, 1, 1]), FockVector::heis(&[3, 1])];
    let states = [
        mono(&[2, 1], rat(1, 2)),
        mono(&[1], int(-1)),
        FockVector::from_monomial(Monomial::twisted(&[3, 1]).unwrap()),
    ];
    for a in &sources {
        let twisted_shift = if a.terms().next().unwrap().0.len() % 2 == 1 { rat(1, 2) } else { int(0) };
        for v in &states {
            let is_tw = v.sector().unwrap() == Some(Sector::Twisted);
            for n in -2..=2 {
                let n = if is_tw { int(n) + &twisted_shift } else { int(n) };
                let lhs = e.mode(a, &n, v).unwrap().theta();
                let rhs = e.mode(&a.theta(), &n, &v.theta()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn l_minus_one_is_a_derivative() {
    // (L(-1)a)(k) = -k a(k-1)
    let e = Engine::orthonormal();
    for a in [h1(), e.omega(), FockVector::heis(&[2, 1])] {
        let la = e.virasoro(-1, &a).unwrap();
        for v in [mono(&[1, 1], rat(1, 3)), twisted_state(&[3])] {
            let tw = v.sector().unwrap() == Some(Sector::Twisted);
            let odd = a.terms().next().unwrap().0.len() % 2 == 1;
            let shift = if tw && odd { rat(1, 2) } else { int(0) };
            for k in -2..=3 {
                let k = int(k) + &shift;
                let lhs = e.mode_unshifted(&la, &k, &v).unwrap();
                let rhs = e.mode_unshifted(&a, &(&k - int(1)), &v).unwrap().scale(&-k.clone());
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn borcherds_examples() {
    let e = Engine::orthonormal();
    let w = e.omega();
    assert!(e.borcherds_check(&w, &w, &FockVector::vacuum(), 1, &int(0), &int(0)).unwrap());
    assert!(e
        .borcherds_check(&h1(), &h1(), &FockVector::momentum(int(1)), 0, &int(1), &int(0))
        .unwrap());
    let tw = twisted_state(&[1]);
    assert!(e.borcherds_check(&w, &h1(), &tw, 0, &int(1), &rat(1, 2)).unwrap());
    assert!(e.borcherds_check(&h1(), &w, &tw, 0, &rat(1, 2), &int(1)).unwrap());
    assert!(e.borcherds_check(&w, &h1(), &tw, 0, &rat(1, 2), &rat(1, 2)).is_err());
}
