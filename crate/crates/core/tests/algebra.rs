use kqext::algebra::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::comod::*;


fn elements(alg: &DualAlgebra, tmax: i32) -> Vec<(u8, Gm)> {
    let mut v = Vec::new();
    for t in 0..=tmax {
        for q in 0..=tmax + 2 {
            for k in 0..alg.rank as u8 {
                if let Some(c) = alg.coeff_in_degree(k, t, q) {
                    v.push((k, c));
                }
            }
        }
    }
    v
}

#[test]
fn scalars_act_by_multiplication() {
    let m = CModule::new(Comodule::brown_gitler_b0(1, Base::R), Shape::Full, false);
    let x = vec![(Gm::new(3, 1), 2u32)];
    assert_eq!(m.act(0, Gm::new(1, 2), &x), vec![(Gm::new(4, 3), 2)]);
}

#[test]
fn sq1_tau_is_rho() {
    let m = CModule::new(Comodule::ground(Base::R, 1), Shape::Full, false);
    let h = algebroid(Base::R, 1);
    let k = h.index(kqext::hopf::Am::TAU0).unwrap();
    assert_eq!(m.act(k, Gm::ONE, &[(Gm::TAU, 0)]), vec![(Gm::RHO, 0)]);
    let m = CModule::new(Comodule::ground(Base::C, 1), Shape::Full, false);
    assert!(m.act(k, Gm::ONE, &[(Gm::TAU, 0)]).is_empty());
}

#[test]
fn module_axiom_and_associativity() {
    for base in [Base::R, Base::C] {
        for level in [0u8, 1] {
            let alg = dual_algebra(base, level, Shape::Full);
            let els = elements(alg, 5);
            let mut mods = vec![Comodule::ground(base, level), Comodule::regular(base, level)];
            if level == 1 {
                mods.push(Comodule::brown_gitler_b0(1, base));
                mods.push(Comodule::brown_gitler_b1(1, base));
            } else {
                mods.push(Comodule::brown_gitler_b1(1, base).restrict_to_level0());
            }
            for m in mods {
                let cm = CModule::new(m, Shape::Full, false);
                for &(k, c) in els.iter().step_by(3) {
                    for &(k2, c2) in els.iter().step_by(5) {
                        let fg = alg.mul(&[(k, c)], &[(k2, c2)]);
                        for b in 0..cm.rank() as u32 {
                            for x in [Gm::ONE, Gm::TAU, Gm::new(2, 0), Gm::new(3, 0)] {
                                let v = vec![(x, b)];
                                let lhs = fg.iter().fold(Vec::new(), |mut acc, &(m, g)| {
                                    acc.extend(cm.act(m, g, &v));
                                    acc
                                });
                                let mut lhs = lhs;
                                xor_normalize(&mut lhs);
                                let inner = cm.act(k2, c2, &v);
                                let rhs = cm.act(k, c, &inner);
                                assert_eq!(lhs, rhs, "{base} {level} {k} {c} {k2} {c2}");
                            }
                        }
                    }
                }
            }
            for &x in els.iter().step_by(4) {
                for &y in els.iter().step_by(3) {
                    for &z in els.iter().step_by(7) {
                        let l = alg.mul(&alg.mul(&[x], &[y]), &[z]);
                        let r = alg.mul(&[x], &alg.mul(&[y], &[z]));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }
}

#[test]
fn reduced_algebra_is_finite() {
    let e = dual_algebra(Base::R, 1, Shape::Reduced);
    let n: usize = (0..12).map(|t| (0..12).filter(|&q| (0..8).any(|k| e.coeff_in_degree(k, t, q).is_some())).count()).sum();
    assert!(n <= 8);
    assert_eq!(e.period, 4);
    assert_eq!(dual_algebra(Base::R, 0, Shape::Full).period, 2);
    assert_eq!(dual_algebra(Base::C, 1, Shape::Full).period, 1);
}
