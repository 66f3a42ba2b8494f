use kqext::resolution::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::comod::*;
#[allow(unused_imports)]
use kqext::algebra::*;


fn degrees(r: &Resolution, f: usize) -> Vec<(i32, i32)> {
    r.gens(f).iter().map(|g| (g.t, g.q)).collect()
}

#[test]
fn low_generators() {
    let mut r = Resolution::new(Base::R, 1, Shape::Reduced);
    r.ensure(2, 8);
    assert_eq!(degrees(&r, 0), vec![(0, 0)]);
    assert_eq!(degrees(&r, 1), vec![(1, 0), (2, 1)]);
    assert_eq!(degrees(&r, 2), vec![(2, 0), (4, 2), (6, 2)]);
    r.check_d_squared().unwrap();
}

#[test]
fn full_resolution_is_exact() {
    for (base, level) in [(Base::R, 1), (Base::C, 1), (Base::R, 0), (Base::C, 0)] {
        let mut r = Resolution::new(base, level, Shape::Full);
        r.ensure(4, 10);
        r.check_d_squared().unwrap();
        for f in 0..=4 {
            for t in 0..=10 {
                for q in 0..=12 {
                    assert_eq!(r.homology_dim(f, t, q), 0, "{base} {level} f={f} ({t},{q})");
                }
            }
        }
    }
}

#[test]
fn extension_matches_direct() {
    let mut a = Resolution::new(Base::R, 1, Shape::Full);
    a.ensure(2, 6);
    a.ensure(4, 12);
    let mut b = Resolution::new(Base::R, 1, Shape::Full);
    b.ensure(4, 12);
    for f in 0..=4 {
        assert_eq!(degrees(&a, f), degrees(&b, f));
    }
}

#[test]
fn lifts_solve() {
    let r = resolution(Base::R, 1, 3, 8);
    let g = &r.gens(2)[0];
    let y = r.d(1, &g.d);
    assert!(y.is_empty());
    let x = r.lift(2, g.t, g.q, &g.d).unwrap();
    assert_eq!(r.d(2, &x), g.d);
}
