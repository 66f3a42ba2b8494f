use kqext::dual::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::comod::*;
#[allow(unused_imports)]
use kqext::algebra::*;


#[test]
fn weights_and_degrees() {
    let mut m = DualMono::xi(2);
    m.tau = 2;
    assert_eq!(m.weight(), 6);
    assert_eq!(DualMono::xi(1).tw(), (2, 1));
    assert_eq!(DualMono::tau(1).tw(), (3, 1));
    assert_eq!(DualMono::xi(2).tw(), (6, 3));
    assert_eq!(DualMono::tau(2).tw(), (7, 3));
    assert_eq!(DualMono::ONE.weight(), 0);
}

#[test]
fn squares_of_tau() {
    let t1 = DualMono::tau(1);
    let sq = mul(Base::R, &t1, &t1);
    assert_eq!(sq, {
        let mut v = vec![(Gm::TAU, DualMono::xi(2)), (Gm::RHO, DualMono::tau(2))];
        xor_normalize(&mut v);
        v
    });
    assert_eq!(mul(Base::C, &t1, &t1), vec![(Gm::TAU, DualMono::xi(2))]);
}

#[test]
fn coaction_of_tau2() {
    let c = coaction(Base::R, &DualMono::tau(2));
    let h = algebroid(Base::R, 1);
    let mut x1sq = DualMono::ONE;
    x1sq.xi[1] = 2;
    let mut expect = vec![
        (Gm::ONE, 0, DualMono::tau(2)),
        (Gm::ONE, h.index(Am::TAU0).unwrap(), DualMono::xi(2)),
        (Gm::ONE, h.index(Am::TAU1).unwrap(), x1sq),
    ];
    xor_normalize(&mut expect);
    assert_eq!(c, expect);
}

#[test]
fn enumeration_counts() {
    let b02 = monomials_up_to(4, |m| m.in_a_mod_a0());
    assert_eq!(b02.len(), 7);
    let b11 = monomials_up_to(4, |m| m.in_a_mod_a1());
    assert_eq!(b11.len(), 4);
}
