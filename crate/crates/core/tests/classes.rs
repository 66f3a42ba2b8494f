use kqext::classes::*;
use kqext::cobar::Cobar;
use kqext::comod::Comodule;
use kqext::ground::{Base, TriDegree};
use kqext::resolution::resolution;

#[test]
fn located_dims_match_cobar() {
    for base in [Base::R, Base::C] {
        let res = resolution(base, 1, 6, 40);
        let cobar = Cobar::new(Comodule::ground(base, 1));
        for d in [
            TriDegree::new(0, 1, 0),
            TriDegree::new(1, 1, 1),
            TriDegree::new(1, 1, 0),
            TriDegree::new(0, 1, -2),
            TriDegree::new(4, 3, 2),
            TriDegree::new(4, 3, 0),
        ] {
            let n = locate(&res, d).map_or(0, |(n, _)| n);
            assert_eq!(n, cobar.dim(d).unwrap(), "{base} {d}");
        }
        let (n, h0) = locate(&res, TriDegree::new(0, 1, 0)).unwrap();
        // over R, ρh1 shares the degree of h0
        assert_eq!(n, if base == Base::R { 2 } else { 1 });
        assert_eq!(h0.deg, TriDegree::new(0, 1, 0));
    }
}
