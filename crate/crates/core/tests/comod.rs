use kqext::comod::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::algebra::*;


#[test]
fn small_brown_gitler() {
    for base in [Base::R, Base::C] {
        assert_eq!(Comodule::brown_gitler_b0(0, base).rank(), 1);
        let b1 = Comodule::brown_gitler_b0(1, base);
        let labels: Vec<&str> = b1.basis.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, vec!["1", "x1", "t1"]);
        let h = b1.hopf();
        assert!(b1.coaction[2].contains(&(Gm::ONE, h.index(Am::TAU0).unwrap(), 1)));
        assert_eq!(Comodule::brown_gitler_b0(2, base).rank(), 7);
        assert_eq!(Comodule::brown_gitler_b1(1, base).rank(), 4);
        assert_eq!(Comodule::brown_gitler_b1(0, base).rank(), 1);
    }
}

#[test]
fn b1_coaction_of_tau2() {
    let b = Comodule::brown_gitler_b1(1, Base::R);
    let h = b.hopf();
    let i = b.basis.iter().position(|x| x.label == "t2").unwrap();
    let j = |l: &str| b.basis.iter().position(|x| x.label == l).unwrap() as u32;
    let terms = &b.coaction[i];
    assert!(terms.contains(&(Gm::ONE, h.index(Am::TAU0).unwrap(), j("x2"))));
    assert!(terms.contains(&(Gm::ONE, h.index(Am::TAU1).unwrap(), j("x1^2"))));
}

#[test]
fn shifts_and_units() {
    let b = Comodule::brown_gitler_b0(1, Base::R).shift(4, 2);
    assert_eq!(b.basis[1].deg, TriDegree::new(6, 0, 3));
    assert_eq!(b.basis[2].deg.cw(), 4);
    let m = Comodule::brown_gitler_b0(1, Base::R);
    let t = m.tensor(&Comodule::brown_gitler_b0(0, Base::R)).unwrap();
    assert_eq!(t.coaction, m.coaction);
    let sq = m.tensor(&m).unwrap();
    assert_eq!(sq.rank(), 9);
    sq.validate().unwrap();
}

#[test]
fn rho_quotient_matches_c() {
    for k in 0..4 {
        let r = Comodule::brown_gitler_b0(k, Base::R).quotient_rho().unwrap();
        let c = Comodule::brown_gitler_b0(k, Base::C);
        assert_eq!(r.coaction, c.coaction);
    }
    let r = Comodule::regular(Base::R, 1).quotient_rho().unwrap();
    assert_eq!(r.coaction, Comodule::regular(Base::C, 1).coaction);
    assert!(Comodule::ground(Base::C, 1).quotient_rho().is_err());
}

#[test]
fn level_zero_restriction() {
    let b = Comodule::brown_gitler_b1(2, Base::R).restrict_to_level0();
    b.validate().unwrap();
    Comodule::regular(Base::R, 1).restrict_to_level0().check_counit().unwrap();
}

#[test]
fn ses_exact() {
    for base in [Base::R, Base::C] {
        for k in 1..=2 {
            for odd in [false, true] {
                let ses = ses_bg(k, odd, base);
                check_exact(&ses.inclusion, &ses.projection, 8).unwrap();
                let id = &ses.identification;
                assert_eq!(id.source.rank(), id.target.rank());
                assert_eq!(basis_dims(&id.source), basis_dims(&id.target));
                // the tensor description is a comodule isomorphism only while
                // B1(k-1) has nothing in weight 4
                assert_eq!(id.check().is_ok(), k == 1, "{base} {k} {odd}");
            }
        }
    }
    let ses = ses_bg(1, true, Base::R);
    assert_eq!((ses.inclusion.source.rank(), ses.inclusion.target.rank(), ses.projection.target.rank()), (9, 13, 4));
}

#[test]
fn broken_map_detected() {
    let mut i = ses_bg(1, false, Base::R).inclusion;
    i.images[1] = vec![(Gm::ONE, 0)];
    assert!(i.check().is_err());
}

#[test]
fn splitting() {
    for bound in [0, 4, 8] {
        check_a_mod_a1_splitting(bound, Base::R).unwrap();
        check_a_mod_a1_splitting(bound, Base::C).unwrap();
    }
    assert_eq!(Comodule::a_mod_a1_truncated(0, Base::R).rank(), 1);
}

#[test]
fn json_dump() {
    let j = Comodule::brown_gitler_b0(1, Base::R).to_json();
    assert_eq!(j["basis"].as_array().unwrap().len(), 3);
    assert_eq!(j["basis"][1]["wt"], 2);
}
