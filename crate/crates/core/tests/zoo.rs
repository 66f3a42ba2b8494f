use kqext::chart::{Chart, Element};
use kqext::comod::Comodule;
use kqext::ext::Range;
use kqext::ground::{Base, TriDegree};
use kqext::linalg::BitVec;
use kqext::suites;
use kqext::zoo::{self, Presentation};

fn wide() -> Range {
    Range::new((-12, 16), (0, 10), (-16, 16))
}

/// Apply each term's operators to its generator and sum; None when some
/// product leaves the range or the generator degree is not one-dimensional.
fn relation_value(c: &Chart, p: &Presentation, rel: &str) -> Option<Element> {
    let mut total: Option<Element> = None;
    for term in rel.replace('=', "+").split('+') {
        let mut ops = Vec::new();
        let mut gen = None;
        for factor in term.split('*').map(str::trim) {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<usize>().unwrap()),
                None => (factor, 1),
            };
            if let Some((_, d)) = p.gens.iter().find(|(g, _)| g == name) {
                gen = Some(*d);
            } else {
                ops.extend(std::iter::repeat(name).take(e));
            }
        }
        let d = gen.unwrap_or(p.gens[0].1);
        if c.dim(d) != 1 {
            return None;
        }
        let mut x = c.basis_element(d, 0);
        for op in ops {
            x = c.apply(op, &x)?;
        }
        match &mut total {
            None => total = Some(x),
            Some(t) => {
                assert_eq!(t.deg, x.deg, "{rel}");
                t.coords.xor_assign(&x.coords);
            }
        }
    }
    total
}

#[test]
fn presentations_satisfy_their_relations() {
    let r = wide();
    let all = [
        zoo::shape_p(),
        zoo::shape_h(),
        zoo::shape_ph(),
        zoo::shape_d(),
        zoo::shape_s(),
        zoo::shape_t(),
        zoo::shape_j(),
        zoo::shape_jd(),
        zoo::big_flag(4, 1, 2),
        zoo::c_ground(),
        zoo::c_tower(),
        zoo::c_h1_segment(),
    ];
    for p in all {
        p.validate().unwrap();
        let c = p.instantiate(&r);
        let mut checked = 0;
        for rel in &p.rels {
            if let Some(v) = relation_value(&c, &p, rel) {
                assert!(v.is_zero(), "{}: {rel}", p.name);
                checked += 1;
            }
        }
        assert!(checked > 0, "{}", p.name);
        assert!(zoo::commutation_failures(&c, &zoo::COMPARE_OPS).is_empty(), "{}", p.name);
    }
}

#[test]
fn shape_sizes() {
    // one τ⁴-translate
    let r = Range::new((-6, 6), (0, 4), (-2, 2));
    assert_eq!(zoo::shape_d().instantiate(&r).total(), 4);
    assert_eq!(zoo::shape_t().instantiate(&r).total(), 2);
    assert_eq!(zoo::shape_j().instantiate(&r).dims.keys().filter(|d| d.f == 0).count(), 3);
}

#[test]
fn inhomogeneous_relation_rejected() {
    let p = Presentation::new("bad", zoo::Ring::shapes_r(), &[("e", TriDegree::ZERO)], &["rho + h0"]);
    assert!(p.validate().is_err());
    let p = Presentation::new("bad", zoo::Ring::shapes_r(), &[("e", TriDegree::ZERO)], &["q*e"]);
    assert!(p.validate().is_err());
}

#[test]
fn chart_json_round_trip() {
    let r = Range::new((-4, 10), (0, 5), (-6, 8));
    for c in [zoo::ext_m2_r().instantiate(&r), zoo::big_flag(4, 1, 2).instantiate(&r), zoo::shape_s().instantiate(&r)] {
        let j = c.to_json();
        let back = Chart::from_json(&j).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().to_string(), j.to_string());
    }
    assert!(Chart::from_json(&serde_json::json!({"dims": 3})).is_err());
}

#[test]
fn compare_detects_changes() {
    let r = Range::new((-4, 10), (0, 5), (-6, 8));
    let c = zoo::ext_m2_c().instantiate(&r);
    assert!(zoo::compare(&c, &c, &zoo::COMPARE_OPS).is_empty());
    let mut extra = c.clone();
    *extra.dims.entry(TriDegree::new(3, 1, 5)).or_default() += 1;
    let d = zoo::compare(&c, &extra, &zoo::COMPARE_OPS);
    assert_eq!(d.dims.len(), 1);
    let mut broken = c.clone();
    let h0 = broken.actions.get_mut("h0").unwrap();
    let m = h0.get_mut(&TriDegree::ZERO).unwrap();
    for col in m.iter_mut() {
        *col = BitVec::zeros(col.len());
    }
    assert!(!zoo::compare(&c, &broken, &zoo::COMPARE_OPS).is_empty());
}

#[test]
fn ext_m2_c_table_matches_computation() {
    let r = Range::new((-2, 12), (0, 6), (-2, 8));
    let m = Comodule::ground(Base::C, 1);
    let computed = zoo::computed_chart("M2", &m, &r, false);
    let diff = zoo::compare(&zoo::ext_m2_c().instantiate(&r), &computed, &["h0", "h1"]);
    assert!(diff.is_empty(), "{diff}");
}

#[test]
fn alpha_counts_binary_ones() {
    assert_eq!((0..9).map(zoo::alpha).collect::<Vec<_>>(), vec![0, 1, 1, 2, 1, 2, 2, 3, 1]);
}

#[test]
fn uncorrected_nested_shift_fails() {
    let r = Range::new((-4, 16), (0, 6), (-8, 10));
    let (bad, _) = suites::nested_failures_by(2, 1, TriDegree::new(8, 2, 4), &r);
    assert!(!bad.is_empty());
    let (ok, _) = suites::nested_failures(2, 1, &r);
    assert!(ok.is_empty(), "{ok:?}");
}
