//! Named classes of Ext of the ground ring.

use std::sync::Arc;

use crate::algebra::{CModule, Shape};
use crate::comod::Comodule;
use crate::ext::{primitive_class, unit_class_from_vector, ExtComputer, UnitClass};
use crate::ground::{xor_normalize, Base, Gm, TriDegree};
use crate::hopf::Am;
use crate::resolution::Resolution;

#[derive(Clone, Debug)]
pub enum ClassSpec {
    /// Multiplication by a central ground monomial.
    Ground(Gm),
    Cocycle(UnitClass),
}

/// Right normal form of Σ c·m for monomials m of the algebroid.
fn right_of(res: &Resolution, terms: &[(Gm, Am)]) -> Vec<(u8, Gm)> {
    let h = res.alg.hopf;
    let mut out = Vec::new();
    for &(c, m) in terms {
        out.extend(h.right_form(c, h.index(m).unwrap()));
    }
    xor_normalize(&mut out);
    out
}

/// Classes located by degree: the unique nonzero class, or the first basis
/// class when the group is larger.
pub fn locate(res: &Arc<Resolution>, d: TriDegree) -> Option<(usize, UnitClass)> {
    let cm = CModule::new(Comodule::ground(res.base(), res.level()), Shape::Full, false);
    let ext = ExtComputer::with_resolution("M2", cm, res.clone());
    if !ext.covers(d.f as usize, d.s + d.f - d.w) {
        return None;
    }
    let g = ext.group(d);
    let z = g.reps().first()?.clone();
    Some((g.dim(), unit_class_from_vector("", &g, &z)))
}

fn named(name: &str, mut c: UnitClass) -> UnitClass {
    c.name = name.into();
    c
}

/// The named classes available over the resolution's base and level.
pub fn named_classes(res: &Arc<Resolution>) -> Vec<(String, ClassSpec)> {
    let base = res.base();
    let level = res.level();
    let mut out: Vec<(String, ClassSpec)> = Vec::new();
    let tau_period = res.alg.period;
    if base == Base::R {
        out.push(("rho".into(), ClassSpec::Ground(Gm::RHO)));
    }
    out.push((format!("tau{tau_period}").replace("tau1", "tau"), ClassSpec::Ground(Gm::new(tau_period, 0))));
    if level == 1 && tau_period < 4 {
        out.push(("tau4".into(), ClassSpec::Ground(Gm::new(4, 0))));
    }
    let tau = if base == Base::R { vec![(Gm::TAU, Am::XI1), (Gm::RHO, Am::TAU1)] } else { vec![(Gm::TAU, Am::XI1)] };
    let mut prims = vec![("h0", vec![(Gm::ONE, Am::TAU0)], TriDegree::new(0, 1, 0))];
    if level == 1 {
        prims.push(("h1", vec![(Gm::ONE, Am::XI1)], TriDegree::new(1, 1, 1)));
        prims.push(("tau_h1", tau, TriDegree::new(1, 1, 0)));
    }
    for (name, x, d) in prims {
        if res.covers(1, 0) {
            out.push((name.into(), ClassSpec::Cocycle(primitive_class(res, name, &right_of(res, &x), d))));
        }
    }
    if level == 1 {
        for (name, d) in [
            ("tau2_h0", TriDegree::new(0, 1, -2)),
            ("a", TriDegree::new(4, 3, 2)),
            ("tau2_a", TriDegree::new(4, 3, 0)),
            ("b", TriDegree::new(8, 4, 4)),
        ] {
            if let Some((_, c)) = locate(res, d) {
                out.push((name.into(), ClassSpec::Cocycle(named(name, c))));
            }
        }
    }
    out
}
