use super::*;
use crate::exact::rat;

fn small() -> FamilyOptions {
    FamilyOptions { range: 2, max_degree: 3, momentum: rat(3, 2) }
}

#[test]
fn omega_products() {
    let w = standard().omega();
    let prods = ope_products(&w, &w).unwrap();
    let get = |i: u32| prods.iter().find(|(j, _)| *j == i).unwrap().1.clone();
    assert_eq!(get(0), standard().virasoro(-1, &w).unwrap());
    assert_eq!(get(1), w.scale(&int(2)));
    assert!(get(2).is_zero());
    assert_eq!(get(3), FockVector::vacuum().scale(&rat(1, 2)));
    assert!(get(4).is_zero());
}

#[test]
fn omega_zero_product_is_derivative() {
    let h4 = h_vector(2);
    let out = standard().product(&standard().omega(), 0, &h4).unwrap();
    assert_eq!(out, standard().virasoro(-1, &h4).unwrap());
}

#[test]
fn decomposition_examples() {
    let parts = decompose_s(&FockVector::heis(&[2, 2])).unwrap();
    assert_eq!(
        parts,
        vec![
            SComponent { power: 2, r: 1, coefficient: rat(1, 3) },
            SComponent { power: 0, r: 2, coefficient: int(-2) },
        ]
    );
    assert_eq!(decompose_s(&h_vector(3)).unwrap(), vec![SComponent { power: 0, r: 3, coefficient: int(1) }]);
    let lw = standard().virasoro(-1, &standard().omega()).unwrap();
    assert_eq!(decompose_s(&lw).unwrap(), vec![SComponent { power: 1, r: 1, coefficient: int(1) }]);
    assert!(decompose_s(&FockVector::heis(&[1])).is_err());
}

#[test]
fn derived_virasoro_bracket() {
    let derived = derive_formula(OpSymbol::L, OpSymbol::L).unwrap();
    assert!(derived.differences(&virasoro_formula()).is_empty(), "{derived}");
}

#[test]
fn predicted_examples() {
    let p = predicted_commutator(OpSymbol::L, OpSymbol::H4, 1, 0).unwrap();
    let mut expected = OperatorExpr::default();
    expected.add_mode(OpSymbol::H4, 1, int(3));
    expected.add_mode(OpSymbol::L, 1, int(1));
    assert_eq!(p, expected);

    let p = predicted_commutator(OpSymbol::L, OpSymbol::H4, 4, -4).unwrap();
    let mut expected = OperatorExpr::default();
    expected.add_mode(OpSymbol::H4, 0, int(16));
    expected.add_mode(OpSymbol::L, 0, rat(80, 3));
    // L(4)H^4 = (1/3)*3 - (1/3)*4 from h(3)h(1)h(-3)h(-1)1 = 3 and h(2)^2 h(-2)^2 1 = 8
    expected.scalar = rat(-1, 3);
    assert_eq!(p, expected);
}

#[test]
fn lh4_central_term_is_a_third_of_the_display() {
    let derived = derive_formula(OpSymbol::L, OpSymbol::H4).unwrap();
    let stated = stated_formula(Relation::LH4);
    assert_eq!(derived.terms.len(), 2);
    assert!(derived.differences(&CommutatorFormula { central: derived.central.clone(), ..stated.clone() }).is_empty());
    assert_eq!(derived.central.scale(&int(5)), stated.central);
}

#[test]
fn central_terms_from_display() {
    assert_eq!(stated_formula(Relation::H4H4).central.eval(&int(4)), rat(5, 3));
    assert_eq!(stated_formula(Relation::LH4).central.eval(&int(4)), rat(-5, 3));
    assert_eq!(stated_formula(Relation::LH4).central.eval(&int(3)), int(0));
}

#[test]
fn commutator_families_on_small_bases() {
    for rel in [Relation::LH6, Relation::H4ZeroL, Relation::H6ZeroL, Relation::H4OneLShifted] {
        let r = verify_relation(rel, &small()).unwrap();
        assert!(r.passed(), "{}", serde_json::to_string_pretty(&r.failures().collect::<Vec<_>>()).unwrap());
    }
}

#[test]
fn lh4_failures_are_confined_to_the_central_term() {
    let r = verify_relation(Relation::LH4, &small()).unwrap();
    let failed: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(
        failed,
        vec![
            "assembly-symbolic",
            "central-interpolation",
            "central-support",
            "state/m=-2,n=2/e0",
            "state/m=-2,n=2/ec",
            "state/m=-2,n=2/tw",
        ]
    );
}

#[test]
fn h4_one_records_the_shifted_reading() {
    let r = verify_h4_one_readings(&small()).unwrap();
    assert!(r.passed());
    assert!(r.case("surviving-reading").unwrap().detail.as_ref().unwrap().starts_with("shifted"));
}

#[test]
fn relation_ids_round_trip() {
    for rel in Relation::ALL {
        assert_eq!(Relation::parse(rel.id()).unwrap(), rel);
    }
}

