//! Quotients of Ext by b-power torsion.
//!
//! Torsion is computed exactly: the b-multiples of a class are followed past
//! the chart's range with groups computed on demand. A tridegree is certified
//! when ker b^m = ker b^(m+1) there for some m below the power cap.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::chart::{operator_degree, Chart};
use crate::ext::{ExtComputer, ExtGroup, Range, UnitProducts};
use crate::ground::TriDegree;
use crate::linalg::{apply, kernel_and_image, BitVec, Echelon, Subquotient};

pub const DEFAULT_MAX_POWER: usize = 3;

/// The range an Ext computer must cover to follow b^max_power out of `range`.
pub fn extended_range(range: &Range, max_power: usize) -> Range {
    let m = max_power as i32;
    Range::new((range.s.0, range.s.1 + 8 * m), (range.f.0, range.f.1 + 4 * m), (range.w.0, range.w.1 + 4 * m))
}

/// Per-tridegree torsion data.
#[derive(Clone, Debug)]
pub struct Torsion {
    /// Basis of the torsion subspace, in coordinates of the group.
    pub basis: Vec<BitVec>,
    /// Exponent at which the kernels stabilized, if they did.
    pub stable_at: Option<usize>,
}

/// Torsion subspaces of every nonzero tridegree of `full`.
pub fn b_torsion(ext: &ExtComputer, full: &Chart, max_power: usize) -> BTreeMap<TriDegree, Torsion> {
    let bd = operator_degree("b").unwrap();
    let prods = UnitProducts::for_resolution(&ext.res);
    let Some(bmap) = prods.map("b") else {
        return full.dims.iter().map(|(d, _)| (*d, Torsion { basis: Vec::new(), stable_at: None })).collect();
    };
    let mut needed: BTreeSet<TriDegree> = BTreeSet::new();
    for d in full.dims.keys() {
        for j in 0..=max_power as i32 {
            needed.insert(*d + TriDegree::new(8 * j, 4 * j, 4 * j));
        }
    }
    let groups: HashMap<TriDegree, ExtGroup> =
        needed.into_par_iter().map(|d| (d, ext.group(d))).filter(|(_, g)| g.dim() > 0).collect();
    let steps: HashMap<TriDegree, Vec<BitVec>> = groups
        .par_iter()
        .filter_map(|(d, g)| groups.get(&(*d + bd)).map(|t| (*d, ext.apply_map(bmap, g, t))))
        .collect();
    full.dims
        .par_iter()
        .map(|(d, &n)| {
            let mut cols: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
            let mut deg = *d;
            let mut prev_rank = 0;
            let mut basis = Vec::new();
            let mut stable_at = None;
            for m in 1..=max_power {
                let tdim = groups.get(&(deg + bd)).map(|g| g.dim()).unwrap_or(0);
                cols = match steps.get(&deg) {
                    Some(step) => cols.iter().map(|c| apply(step, tdim, c)).collect(),
                    None => vec![BitVec::zeros(tdim); n],
                };
                deg = deg + bd;
                let (kernel, _) = kernel_and_image(&cols, tdim);
                if m > 1 && kernel.len() == prev_rank {
                    stable_at = Some(m - 1);
                    break;
                }
                prev_rank = kernel.len();
                basis = kernel;
                if prev_rank == n {
                    stable_at = Some(m);
                    break;
                }
            }
            (*d, Torsion { basis, stable_at })
        })
        .collect()
}

/// The quotient of a chart by b-power torsion, with induced actions.
/// Tridegrees whose torsion did not stabilize are marked uncertified.
pub fn quotient_chart(full: &Chart, torsion: &BTreeMap<TriDegree, Torsion>) -> Chart {
    let mut q = Chart::empty(full.base, format!("{} mod b-torsion", full.module), full.range);
    let quots: BTreeMap<TriDegree, Subquotient> = full
        .dims
        .iter()
        .map(|(d, &n)| {
            let mut e = Echelon::new(n, 0);
            if let Some(t) = torsion.get(d) {
                for v in &t.basis {
                    e.insert(v.clone());
                }
            }
            let all: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
            (*d, Subquotient::new(n, &e, &all))
        })
        .collect();
    for (d, sq) in &quots {
        if sq.dim() > 0 {
            q.dims.insert(*d, sq.dim());
        }
        if torsion.get(d).is_some_and(|t| t.stable_at.is_none()) {
            q.uncertified.insert(*d);
        }
    }
    for (op, rows) in &full.actions {
        let od = operator_degree(op).unwrap();
        let entry = q.actions.entry(op.clone()).or_default();
        for (d, m) in rows {
            let Some(src) = quots.get(d) else { continue };
            if src.dim() == 0 {
                continue;
            }
            let td = *d + od;
            let tn = full.dim(td);
            let mat = src
                .reps()
                .iter()
                .map(|r| match quots.get(&td) {
                    Some(tq) => tq.coords(&apply(m, tn, r)).expect("quotient coordinates"),
                    None => BitVec::zeros(0),
                })
                .collect();
            entry.insert(*d, mat);
        }
    }
    q.border = full.border.iter().filter(|d| q.dims.contains_key(d)).copied().collect();
    q
}

/// Ext of a computer's module over `range`, and its quotient by b-torsion.
/// The computer must cover `extended_range(range, max_power)`.
pub fn chart_mod_b(ext: &ExtComputer, range: &Range, ops: &[&str], max_power: usize) -> (Chart, Chart) {
    let mut ops: Vec<&str> = ops.to_vec();
    if !ops.contains(&"b") {
        ops.push("b");
    }
    let full = Chart::compute_with(ext, range, &ops);
    let t = b_torsion(ext, &full, max_power);
    let q = quotient_chart(&full, &t);
    (full, q)
}
