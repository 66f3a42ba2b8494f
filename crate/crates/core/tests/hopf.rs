use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::comod::*;
#[allow(unused_imports)]
use kqext::algebra::*;


fn el(base: Base, level: u8, parts: &[(Gm, Am)]) -> AlgebroidElement {
    let h = algebroid(base, level);
    let mut terms: Terms = parts.iter().map(|&(g, m)| (h.index(m).unwrap(), g)).collect();
    xor_normalize(&mut terms);
    AlgebroidElement { base, level, terms }
}

#[test]
fn tau0_squared() {
    let t0 = el(Base::R, 1, &[(Gm::ONE, Am::TAU0)]);
    let sq = t0.multiply(&t0).unwrap();
    let expect = el(Base::R, 1, &[(Gm::TAU, Am::XI1), (Gm::RHO, Am::TAU1)]);
    assert_eq!(sq, expect);
    let t0 = el(Base::R, 0, &[(Gm::ONE, Am::TAU0)]);
    assert!(t0.multiply(&t0).unwrap().is_zero());
}

#[test]
fn squares_and_products() {
    let x1 = el(Base::R, 1, &[(Gm::ONE, Am::XI1)]);
    assert!(x1.multiply(&x1).unwrap().is_zero());
    let t0 = el(Base::R, 1, &[(Gm::ONE, Am::TAU0)]);
    let t1 = el(Base::R, 1, &[(Gm::ONE, Am::TAU1)]);
    assert_eq!(t0.multiply(&t1).unwrap(), el(Base::R, 1, &[(Gm::ONE, Am { e: 0, a: 1, b: 1 })]));
    let other = el(Base::R, 0, &[(Gm::ONE, Am::TAU0)]);
    assert_eq!(t0.multiply(&other), Err(HopfError::ParentMismatch));
}

#[test]
fn coproducts_of_generators() {
    for base in [Base::R, Base::C] {
        let d = el(base, 1, &[(Gm::ONE, Am::TAU1)]).comultiply();
        let expect = TensorElement::from_pairs(
            base,
            1,
            &[(Gm::ONE, Am::TAU1, Am::ONE), (Gm::ONE, Am::TAU0, Am::XI1), (Gm::ONE, Am::ONE, Am::TAU1)],
        );
        assert_eq!(d, expect);
        let d = el(base, 1, &[(Gm::ONE, Am::XI1)]).comultiply();
        let expect = TensorElement::from_pairs(base, 1, &[(Gm::ONE, Am::XI1, Am::ONE), (Gm::ONE, Am::ONE, Am::XI1)]);
        assert_eq!(d, expect);
    }
}

#[test]
fn right_unit() {
    let h = algebroid(Base::R, 1);
    let mut expect = vec![(0, Gm::TAU), (h.index(Am::TAU0).unwrap(), Gm::RHO)];
    xor_normalize(&mut expect);
    assert_eq!(h.eta_r(Gm::TAU), expect);
    assert_eq!(h.eta_r(Gm::RHO), vec![(0, Gm::RHO)]);
    assert_eq!(h.eta_r(Gm::new(4, 0)), vec![(0, Gm::new(4, 0))]);
    assert_ne!(h.eta_r(Gm::new(2, 0)), vec![(0, Gm::new(2, 0))]);
    let h0 = algebroid(Base::R, 0);
    assert_eq!(h0.eta_r(Gm::new(2, 0)), vec![(0, Gm::new(2, 0))]);
    assert_eq!(algebroid(Base::C, 1).eta_r(Gm::TAU), vec![(0, Gm::TAU)]);
}

#[test]
fn axioms_hold() {
    for base in [Base::R, Base::C] {
        for level in [0, 1] {
            let rep = algebroid(base, level).check_axioms((-6, 8));
            assert!(rep.passed(), "{base} {level}: {:?}", rep.failures);
            assert!(rep.checked > 20);
        }
    }
}

#[test]
fn extra_term_relation_breaks_coproduct() {
    let h = HopfAlgebroid::with_relation(Base::R, 1, SquareRelation::ExtraTerm);
    let rep = h.check_axioms((-6, 8));
    assert!(rep.failed_identities().contains(&"coproduct multiplicativity"));
}

#[test]
fn corrupted_table_is_caught() {
    let mut h = HopfAlgebroid::new(Base::C, 1);
    let i = h.index(Am::XI1).unwrap();
    h.set_product(i, i, vec![(0, Gm::new(0, 0))]);
    let rep = h.check_axioms((-6, 8));
    assert!(!rep.passed());
}
