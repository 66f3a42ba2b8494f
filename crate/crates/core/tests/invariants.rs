use kqext::chart::Chart;
use kqext::comod::{basis_dims, Comodule};
use kqext::dual::{self, DualMono};
use kqext::ext::Range;
use kqext::ground::{Base, Gm, TriDegree};
use kqext::hopf::algebroid;
use kqext::zoo;
use proptest::prelude::*;

/// Exponent vectors over generators of the given weights, each with an
/// exponent step and an optional cap, of total weight at most `bound`.
fn count(gens: &[(u32, u32, Option<u32>)], bound: u32) -> usize {
    let Some((&(w, step, cap), rest)) = gens.split_first() else { return 1 };
    let mut n = 0;
    let mut e = 0;
    while e * w <= bound && cap.map_or(true, |c| e <= c) {
        n += count(rest, bound - e * w);
        e += step;
    }
    n
}

fn b0_count(k: u32) -> usize {
    // ξi for i ≥ 1, τi for i ≥ 1 exterior
    let mut g: Vec<(u32, u32, Option<u32>)> = (1..6).map(|i| (1 << i, 1, None)).collect();
    g.extend((1..6).map(|i| (1 << i, 1, Some(1))));
    count(&g, 2 * k)
}

fn b1_count(k: u32) -> usize {
    // ξ1², ξi for i ≥ 2, τi for i ≥ 2 exterior
    let mut g: Vec<(u32, u32, Option<u32>)> = vec![(2, 2, None)];
    g.extend((2..6).map(|i| (1 << i, 1, None)));
    g.extend((2..6).map(|i| (1 << i, 1, Some(1))));
    count(&g, 4 * k)
}

fn small_comodule(i: usize, base: Base) -> Comodule {
    match i % 5 {
        0 => Comodule::ground(base, 1),
        1 => Comodule::brown_gitler_b0(1, base),
        2 => Comodule::brown_gitler_b1(1, base),
        3 => Comodule::a1_mod_a0(base),
        _ => Comodule::brown_gitler_b0(1, base).shift(4, 2),
    }
}

fn arb_base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::R), Just(Base::C)]
}

fn arb_mono() -> impl Strategy<Value = DualMono> {
    (prop::collection::vec(0u8..3, 4), 0u16..32).prop_map(|(xs, tau)| {
        let mut m = DualMono::ONE;
        for (i, e) in xs.into_iter().enumerate() {
            m.xi[i + 1] = e;
        }
        m.tau = tau;
        m
    })
}

fn m2_chart() -> &'static Chart {
    use std::sync::OnceLock;
    static C: OnceLock<Chart> = OnceLock::new();
    C.get_or_init(|| {
        let r = Range::new((-4, 8), (0, 4), (-8, 6));
        zoo::computed_chart("M2", &Comodule::ground(Base::R, 1), &r, false)
    })
}

#[test]
fn brown_gitler_ranks_match_enumeration() {
    for k in 0..=5 {
        for base in [Base::R, Base::C] {
            assert_eq!(Comodule::brown_gitler_b0(k, base).rank(), b0_count(k), "B0({k})");
        }
    }
    for k in 0..=3 {
        assert_eq!(Comodule::brown_gitler_b1(k, Base::R).rank(), b1_count(k), "B1({k})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weight_is_additive(x in arb_mono(), y in arb_mono(), base in arb_base()) {
        for (_, m) in dual::mul(base, &x, &y) {
            prop_assert_eq!(m.weight(), x.weight() + y.weight());
        }
    }

    #[test]
    fn right_unit_trivial_over_c(t in 0u32..12) {
        prop_assert_eq!(algebroid(Base::C, 1).eta_r(Gm::new(t, 0)), vec![(0, Gm::new(t, 0))]);
        prop_assert_eq!(algebroid(Base::C, 0).eta_r(Gm::new(t, 0)), vec![(0, Gm::new(t, 0))]);
    }

    #[test]
    fn constructed_comodules_validate(i in 0usize..5, j in 0usize..5, base in arb_base(), quotient in any::<bool>()) {
        let m = small_comodule(i, base).tensor(&small_comodule(j, base)).unwrap();
        m.validate().unwrap();
        if quotient && base == Base::R {
            m.quotient_rho().unwrap().validate().unwrap();
        }
        m.restrict_to_level0().validate().unwrap();
    }

    #[test]
    fn tensor_associative_up_to_relabeling(i in 0usize..5, j in 0usize..5, k in 0usize..5, base in arb_base()) {
        let (a, b, c) = (small_comodule(i, base), small_comodule(j, base), small_comodule(k, base));
        let l = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let r = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert_eq!(basis_dims(&l), basis_dims(&r));
        prop_assert_eq!(l.rank(), a.rank() * b.rank() * c.rank());
    }

    #[test]
    fn translations_compose(a in (-3i32..3, 0i32..2, -3i32..3), b in (-3i32..3, 0i32..2, -3i32..3)) {
        let c = zoo::shape_s().instantiate(&Range::new((-6, 8), (0, 5), (-8, 8)));
        let (a, b) = (TriDegree::new(a.0, a.1, a.2), TriDegree::new(b.0, b.1, b.2));
        let big = Range::new((-20, 20), (0, 12), (-20, 20));
        prop_assert_eq!(c.translate(a, big).translate(b, big).dims, c.translate(a + b, big).dims);
    }

    #[test]
    fn ground_action_associates(idx in 0usize..64, bits in any::<u64>()) {
        let c = m2_chart();
        let degrees: Vec<TriDegree> = c.dims.keys().copied().collect();
        let d = degrees[idx % degrees.len()];
        let mut x = c.zero(d);
        for i in 0..c.dim(d) {
            if bits >> i & 1 == 1 {
                x.coords.xor_assign(&c.basis_element(d, i).coords);
            }
        }
        for (p, q) in [("tau4", "h0"), ("tau4", "h1"), ("rho", "h1"), ("h0", "h1")] {
            let pq = c.apply(p, &x).and_then(|y| c.apply(q, &y));
            let qp = c.apply(q, &x).and_then(|y| c.apply(p, &y));
            if let (Some(u), Some(v)) = (pq, qp) {
                prop_assert_eq!(u, v);
            }
        }
    }

    #[test]
    fn tau4_injective_on_ground_ext(idx in 0usize..64) {
        let c = m2_chart();
        let degrees: Vec<TriDegree> = c.dims.keys().copied().collect();
        let d = degrees[idx % degrees.len()];
        if let Some(r) = c.action_rank("tau4", d) {
            prop_assert_eq!(r, c.dim(d));
        }
    }
}
