use std::collections::BTreeMap;

use kqext::cobar::Cobar;
use kqext::comod::Comodule;
use kqext::ext::Range;
use kqext::ground::{Base, TriDegree};
use kqext::sseq::{self, FilteredComodule, SseqError};

fn small() -> Range {
    Range::new((-2, 6), (0, 2), (-3, 4))
}

fn totals(p: &sseq::SseqPage, r: &Range) -> BTreeMap<TriDegree, usize> {
    r.degrees().into_iter().map(|d| (d, p.total(d))).filter(|(_, n)| *n > 0).collect()
}

#[test]
fn reversed_filtration_rejected() {
    let m = Comodule::brown_gitler_b0(1, Base::R);
    let top = m.basis.iter().map(|b| b.deg.s).max().unwrap();
    let f = m.basis.iter().map(|b| top - b.deg.s).collect();
    assert!(matches!(FilteredComodule::new(m.clone(), f, vec![]), Err(SseqError::NotSubcomodule(_))));
    assert!(matches!(FilteredComodule::new(m, vec![0], vec![]), Err(SseqError::Length(1, 3))));
}

#[test]
fn cellular_aahss_converges() {
    let r = small();
    for base in [Base::R, Base::C] {
        let fm = sseq::cellular_filtration_b01(base);
        assert_eq!(fm.top(), 3);
        let s = sseq::aahss(&fm, &r).unwrap();
        assert!(s.homology_failures.is_empty(), "{base}");
        assert!(s.convergence_failures.is_empty(), "{base}");
        let direct = Cobar::new(fm.ambient.clone()).dims(&r).unwrap();
        assert_eq!(totals(&s.infinity, &r), direct);
        // E1 is Ext of the ground ring, once per cell
        let unit = Cobar::new(Comodule::ground(base, 1));
        for d in r.degrees() {
            let expect: usize = fm.cells.iter().map(|c| unit.dim(d - c.deg).unwrap()).sum();
            assert_eq!(s.pages[0].total(d), expect, "{base} {d}");
        }
    }
}

#[test]
fn tensor_left_stays_filtered() {
    let fm = sseq::cellular_filtration_b01(Base::C);
    let t = fm.tensor_left(&Comodule::brown_gitler_b0(1, Base::C)).unwrap();
    assert_eq!(t.ambient.rank(), 9);
    t.validate().unwrap();
    let s = sseq::aahss_pages(&t, &Range::new((0, 6), (0, 1), (0, 4)), 4).unwrap();
    assert!(s.convergence_failures.is_empty());
}

#[test]
fn d3_zig_zag() {
    let (l, r) = sseq::d3_rho_cell().unwrap();
    assert!(!l.is_zero());
    assert_eq!(l, r);
}

#[test]
fn cell_differentials_in_small_window() {
    let c = sseq::check_cell_differentials(Base::R, &small()).unwrap();
    assert!(c.checked > 0);
    assert!(c.passed());
}

#[test]
fn rho_bockstein_of_ground() {
    let r = Range::new((-4, 6), (0, 3), (-6, 4));
    let b = sseq::rho_bockstein(&Comodule::ground(Base::R, 1), &r, 4).unwrap();
    assert!(b.e1_failures.is_empty(), "{:?}", b.e1_failures);
    assert!(b.sseq.convergence_failures.is_empty());
    assert!(b.sseq.homology_failures.is_empty());
    assert!(sseq::rho_bockstein(&Comodule::ground(Base::C, 1), &r, 2).is_err());
}

#[test]
fn a0_ground_answer() {
    let r = Range::new((-4, 6), (0, 4), (-6, 4));
    let direct = Cobar::new(Comodule::ground(Base::R, 0)).dims(&r).unwrap();
    assert_eq!(direct, sseq::a0_answer_dims(&r, &[0]));
}
