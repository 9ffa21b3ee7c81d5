use super::*;

#[test]
fn vacuum_is_the_unit() {
    let b = FockVector::heis(&[3, 1]);
    assert_eq!(star(&FockVector::vacuum(), &b).unwrap(), b);
}

#[test]
fn omega_star_vacuum() {
    // omega(-1)1 + 2 omega(0)1 + omega(1)1 = omega
    let w = standard().omega();
    assert_eq!(star(&w, &FockVector::vacuum()).unwrap(), w);
}

#[test]
fn circ_with_vacuum() {
    let w = standard().omega();
    let expected = standard().virasoro(-1, &w).unwrap().add(&w.scale(&int(2)));
    assert_eq!(circ(&w, &FockVector::vacuum()).unwrap(), expected);
    assert!(circ(&FockVector::zero(), &w).unwrap().is_zero());
    let a = FockVector::heis(&[2, 1]);
    let expected = standard().virasoro(-1, &a).unwrap().add(&a.scale(&int(3)));
    assert_eq!(circ(&a, &FockVector::vacuum()).unwrap(), expected);
}

#[test]
fn exponential_pair() {
    assert!(exponential_pair_product().unwrap().passed);
}

#[test]
fn membership_examples() {
    let w = standard().omega();
    let v = circ(&w, &h_vector(2)).unwrap();
    let cert = ov_membership(&v, 7, Ambient::FixedPoints).unwrap();
    assert!(cert.is_proved());
    assert!(cert.replay(&v).unwrap());
    let v = standard().virasoro(-1, &w).unwrap().add(&w.scale(&int(2)));
    assert!(ov_membership_deepening(&v, 6, Ambient::FixedPoints).unwrap().is_proved());
    for cutoff in 2..=8 {
        assert!(!ov_membership(&w, cutoff, Ambient::FixedPoints).unwrap().is_proved());
    }
}

#[test]
fn certificate_round_trips_through_json() {
    let v = circ(&standard().omega(), &FockVector::heis(&[1, 1])).unwrap();
    let cert = ov_membership(&v, 5, Ambient::FixedPoints).unwrap();
    let back: MembershipCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(back, cert);
    assert!(back.replay(&v).unwrap());
}

#[test]
fn o_action_examples() {
    let w = standard().omega();
    let h1 = FockVector::heis(&[1]);
    assert_eq!(o_action(&w, &h1).unwrap(), h1);
    let tw = FockVector::twisted_vacuum();
    assert_eq!(o_action(&h_vector(2), &tw).unwrap(), tw.scale(&rat(-1, 128)));
    assert!(o_action(&h_vector(3), &FockVector::momentum(rat(3, 2))).unwrap().is_zero());
}

#[test]
fn top_actions_reproduced() {
    let r = verify_top_actions(&default_lambdas()).unwrap();
    assert_eq!(r.cases.len(), 15);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn j_identity() {
    let e = standard();
    let w = e.omega();
    let rhs = h_vector(2)
        .scale(&int(-9))
        .add(&e.virasoro(-2, &w).unwrap().scale(&int(4)))
        .sub(&e.virasoro(-4, &FockVector::vacuum()).unwrap().scale(&int(3)));
    assert_eq!(j_vector_singular(), rhs);
    assert_ne!(j_vector(), rhs);
}

#[test]
fn omega_test_examples() {
    assert!(omega_test(&FockVector::momentum(int(1)), &rat(1, 2)).unwrap());
    assert!(omega_test(&FockVector::heis(&[1]), &int(1)).unwrap());
    assert!(!omega_test(&FockVector::heis(&[2]), &int(1)).unwrap());
}

#[test]
fn relation_vectors_vanish_on_tops() {
    for rel in relation_vectors(JReading::Corrected).unwrap() {
        assert!(vanishes_on_tops(rel.name, &rel.vector, &default_lambdas()).unwrap().passed, "{}", rel.name);
    }
}

#[test]
fn stated_a_has_the_opposite_sign() {
    let all = idempotents().unwrap();
    let h1 = FockVector::heis(&[1]);
    assert_eq!(o_action(&all[0].vector, &h1).unwrap(), h1.scale(&int(-1)));
    assert_eq!(o_action(&all[1].vector, &h1).unwrap(), h1);
}

#[test]
fn lattice_lowest_weights() {
    for k in 1..=3 {
        let r = verify_lattice(k).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn only_the_singular_reading_of_j_is_singular() {
    let e = standard();
    let stated = j_vector();
    assert_eq!(e.virasoro(1, &stated).unwrap(), FockVector::heis(&[2, 1]).scale(&int(-3)));
    let j = j_vector_singular();
    assert!(e.virasoro(1, &j).unwrap().is_zero());
    assert!(e.virasoro(2, &j).unwrap().is_zero());
    let values: Vec<Rational> = Top::families(&[int(1)])
        .iter()
        .map(|t| eigenvalue(&j, &t.state()).unwrap().unwrap())
        .collect();
    assert_eq!(values, vec![int(0), int(-6), rat(1, 2), rat(3, 128), rat(-45, 128)]);
}

