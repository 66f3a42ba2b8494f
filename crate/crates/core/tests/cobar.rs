use std::collections::BTreeMap;

use kqext::chart::Chart;
use kqext::cobar::{self, Cobar, ExtClass};
use kqext::comod::Comodule;
use kqext::ext::{ExtComputer, Range};
use kqext::ground::{Base, Gm, TriDegree};
use kqext::hopf::Am;
use kqext::torsion::{chart_mod_b, extended_range, DEFAULT_MAX_POWER};

fn window() -> Range {
    Range::new((-3, 6), (0, 3), (-5, 4))
}

fn resolution_dims(m: &Comodule, range: &Range) -> BTreeMap<TriDegree, usize> {
    let e = ExtComputer::for_comodule("m", m.clone(), range);
    range.degrees().into_iter().map(|d| (d, e.dim(d))).filter(|&(_, n)| n > 0).collect()
}

#[test]
fn agrees_with_resolution() {
    let r = window();
    for base in [Base::R, Base::C] {
        for m in [Comodule::ground(base, 1), Comodule::brown_gitler_b0(1, base), Comodule::ground(base, 0)] {
            let c = Cobar::new(m.clone()).dims(&r).unwrap();
            assert_eq!(c, resolution_dims(&m, &r), "{base} {}", m.name);
        }
    }
}

#[test]
fn basis_order_irrelevant() {
    let r = window();
    for base in [Base::R, Base::C] {
        let m = Comodule::brown_gitler_b1(1, base);
        let a = Cobar::new(m.clone()).dims(&r).unwrap();
        let b = Cobar::reversed(m).dims(&r).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn d_squared_vanishes() {
    let c = Cobar::new(Comodule::brown_gitler_b0(1, Base::R));
    for d in window().degrees() {
        for w in c.words(d) {
            assert!(c.d_sum(&c.d(&w)).is_empty(), "{d} {}", c.label(&w));
        }
    }
}

#[test]
fn f0_line_is_tau4_rho_polynomial() {
    let r = Range::new((-6, 2), (0, 0), (-14, 2));
    let chart = cobar::f0_line(&Comodule::ground(Base::R, 1), &r).unwrap();
    let mut expect = BTreeMap::new();
    for a in 0..4 {
        for b in 0..7 {
            let d = TriDegree::new(-b, 0, -4 * a - b);
            if r.contains(d) {
                expect.insert(d, 1);
            }
        }
    }
    assert_eq!(chart.dims, expect);
}

#[test]
fn products_and_massey() {
    let unit = Cobar::new(Comodule::ground(Base::R, 1));
    let h0 = ExtClass::letter(&unit, "h0", Am::TAU0).unwrap();
    let h1 = ExtClass::letter(&unit, "h1", Am::XI1).unwrap();
    let rho = ExtClass::ground(&unit, "rho", Gm::RHO).unwrap();
    let h0h1 = unit.product(&h0.rep, &h1.rep);
    assert!(unit.class_of(TriDegree::new(1, 2, 1), &h0h1).unwrap().is_zero());
    let rho_h0 = unit.product(&rho.rep, &h0.rep);
    assert!(unit.class_of(TriDegree::new(-1, 1, -1), &rho_h0).unwrap().is_zero());
    let m = cobar::massey_triple(&unit, &unit, &rho, &h0, &h1).unwrap();
    let th1 = ExtClass::located(&unit, "tau_h1", TriDegree::new(1, 1, 0)).unwrap();
    let g = unit.class_of(TriDegree::new(1, 1, 0), &th1.rep).unwrap();
    assert!(m.contains(&g));
    assert_eq!(m.indeterminacy_dim(), 0);
}

#[test]
fn rho_is_not_a_class_over_c() {
    let unit = Cobar::new(Comodule::ground(Base::C, 1));
    assert!(ExtClass::named(&unit, "rho").unwrap().is_none());
    assert!(ExtClass::named(&unit, "h0").unwrap().is_some());
}

#[test]
fn b_torsion_quotient_matches_extended_computation() {
    let r = Range::new((-2, 12), (0, 6), (-4, 8));
    for m in [Comodule::ground(Base::C, 1), Comodule::brown_gitler_b0(1, Base::R)] {
        let wide = extended_range(&r, DEFAULT_MAX_POWER);
        let e = ExtComputer::for_comodule("m", m, &wide);
        let big = Chart::compute_with(&e, &wide, &["h0", "h1", "b"]);
        let own = cobar::b_torsion_quotient(&big).filtered(|d| r.contains(*d));
        let (_, q) = chart_mod_b(&e, &r, &["h0", "h1"], DEFAULT_MAX_POWER);
        for d in r.degrees() {
            if !q.uncertified.contains(&d) && !own.uncertified.contains(&d) {
                assert_eq!(own.dim(d), q.dim(d), "{d}");
            }
        }
        assert_eq!(q.dim(TriDegree::ZERO), 1);
    }
}
