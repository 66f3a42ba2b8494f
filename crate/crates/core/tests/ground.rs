use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::comod::*;
#[allow(unused_imports)]
use kqext::algebra::*;

use proptest::prelude::*;

#[test]
fn degrees() {
    assert_eq!(monomial_degree(1, 0).unwrap(), TriDegree::new(0, 0, -1));
    assert_eq!(monomial_degree(0, 1).unwrap(), TriDegree::new(-1, 0, -1));
    assert_eq!(monomial_degree(2, 3).unwrap(), TriDegree::new(-3, 0, -5));
    assert!(monomial_degree(-1, 0).is_err());
}

#[test]
fn basis_in_degree() {
    let b = ground_basis_in_degree(Base::R, TriDegree::new(0, 0, 0)).unwrap();
    assert_eq!(b, vec![GroundElement::one(Base::R)]);
    let b = ground_basis_in_degree(Base::R, TriDegree::new(-2, 0, -3)).unwrap();
    assert_eq!(b[0].terms(), &[Gm::new(1, 2)]);
    assert!(ground_basis_in_degree(Base::R, TriDegree::new(1, 0, 0)).unwrap().is_empty());
    assert!(ground_basis_in_degree(Base::C, TriDegree::new(-1, 0, -1)).unwrap().is_empty());
}

#[test]
fn rendering() {
    let x = GroundElement::from_terms(Base::R, [Gm::new(0, 2), Gm::new(1, 0)]).unwrap();
    assert_eq!(x.to_string(), "t^0 r^2 + t^1 r^0");
    assert_eq!(x.to_json().to_string(), "[[0,2],[1,0]]");
}

fn arb_elem() -> impl Strategy<Value = GroundElement> {
    prop::collection::vec((0u32..5, 0u32..5), 0..5)
        .prop_map(|v| GroundElement::from_terms(Base::R, v.into_iter().map(|(t, r)| Gm::new(t, r))).unwrap())
}

proptest! {
    #[test]
    fn characteristic_two(x in arb_elem()) {
        prop_assert!((&x + &x).is_zero());
    }

    #[test]
    fn ring_axioms(x in arb_elem(), y in arb_elem(), z in arb_elem()) {
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&(&y + &z)), &x.mul(&y) + &x.mul(&z));
    }

    #[test]
    fn degree_additive(a in 0u32..9, b in 0u32..9, c in 0u32..9, d in 0u32..9) {
        let (m, n) = (Gm::new(a, b), Gm::new(c, d));
        prop_assert_eq!(m.mul(n).degree(), m.degree() + n.degree());
        prop_assert_eq!(ground_mono_in_degree(Base::R, m.degree().s, m.degree().w), Some(m));
    }
}
