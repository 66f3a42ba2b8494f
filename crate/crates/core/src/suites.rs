//! Named verification suites. Each runs a group of exact checks over pinned
//! windows and reports pass/fail per check.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::chart::{Chart, Element, OPERATORS};
use crate::cobar::{self, Cobar, ExtClass, Word};
use crate::comod::{basis_dims, check_a_mod_a1_splitting, check_exact, ses_bg, Comodule};
use crate::ext::{ExtComputer, Range};
use crate::ground::{Base, Gm, TriDegree};
use crate::hopf::{algebroid, Am};
use crate::linalg::{rank, BitVec};
use crate::sseq::{self, FilteredCobar};
use crate::torsion::{chart_mod_b, extended_range, DEFAULT_MAX_POWER};
use crate::zoo::{self, compare, computed_chart, Presentation, COMPARE_OPS};

/// Window where the cobar complex is run against the resolution engine.
pub const COBAR_WINDOW: Range = Range { s: (-4, 8), f: (0, 4), w: (-6, 5) };
/// Window for the aAHSS of B0(1).
pub const AAHSS_WINDOW: Range = Range { s: (-2, 8), f: (0, 3), w: (-4, 5) };
/// Window for the ρ-Bockstein spectral sequences at level 0.
pub const BOCKSTEIN_WINDOW: Range = Range { s: (-4, 16), f: (0, 4), w: (-8, 10) };

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub criterion: u8,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "criterion": self.criterion,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

pub struct Suite {
    pub name: &'static str,
    pub criterion: u8,
    pub title: &'static str,
    run: fn(&Range, &mut Vec<Check>),
}

impl Suite {
    /// Run over `range` (the default chart window when `None`). Cobar and
    /// spectral sequence windows are fixed.
    pub fn run(&self, range: Option<Range>) -> SuiteReport {
        let mut checks = Vec::new();
        (self.run)(&range.unwrap_or(Range::DEFAULT), &mut checks);
        SuiteReport { suite: self.name, criterion: self.criterion, checks }
    }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "hopf-axioms", criterion: 1, title: "Hopf algebroid axioms for A(0) and A(1) over R and C", run: hopf_axioms },
    Suite { name: "ext-m2-c", criterion: 2, title: "Ext of the complex ground ring against its presentation", run: ext_m2_c },
    Suite { name: "ext-m2-r", criterion: 3, title: "Ext of the real ground ring against its presentation", run: ext_m2_r },
    Suite { name: "a0-level", criterion: 4, title: "A(0)-level Ext of B1(k) and the rho-Bockstein", run: a0_level },
    Suite { name: "brown-gitler", criterion: 5, title: "Brown-Gitler short exact sequences and splitting", run: brown_gitler },
    Suite { name: "aahss-b01", criterion: 6, title: "Algebraic Atiyah-Hirzebruch spectral sequence of B0(1)", run: aahss_b01 },
    Suite { name: "ext-b01", criterion: 7, title: "Ext of B0(1) over R", run: ext_b01 },
    Suite { name: "tensor-powers", criterion: 8, title: "Ext of tensor powers of B0(1) modulo b-torsion", run: tensor_powers },
    Suite { name: "b0k", criterion: 9, title: "Ext of B0(k) modulo b-torsion", run: b0k },
    Suite { name: "e2-coop", criterion: 10, title: "E2 page of the cooperations spectral sequence", run: e2_coop },
    Suite { name: "base-change", criterion: 11, title: "Base change along rho", run: base_change },
    Suite { name: "determinism", criterion: 12, title: "Determinism and soundness", run: determinism },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    out.push(Check { name: name.into(), passed, detail: detail.into() });
}

fn err_check<E: std::fmt::Display>(out: &mut Vec<Check>, name: impl Into<String>, e: E) {
    check(out, name, false, format!("error: {e}"));
}

/// Empty diff and no uncertified tridegree in the computed chart.
fn diff_check(out: &mut Vec<Check>, name: impl Into<String>, expected: &Chart, computed: &Chart, ops: &[&str]) {
    let d = compare(expected, computed, ops);
    let unc = expected.uncertified.len() + computed.uncertified.len();
    let detail = if d.is_empty() && unc == 0 {
        format!("{} classes in {} tridegrees agree", computed.total(), computed.dims.len())
    } else {
        format!("{} dim and {} action mismatches, {} uncertified\n{d}", d.dims.len(), d.actions.len(), unc)
    };
    check(out, name, d.is_empty() && unc == 0, detail);
}

fn dims_check(out: &mut Vec<Check>, name: impl Into<String>, range: &Range, a: &BTreeMap<TriDegree, usize>, b: &BTreeMap<TriDegree, usize>) {
    let bad: Vec<String> = range
        .degrees()
        .into_iter()
        .filter_map(|d| {
            let (x, y) = (a.get(&d).copied().unwrap_or(0), b.get(&d).copied().unwrap_or(0));
            (x != y).then(|| format!("{d}: {x} vs {y}"))
        })
        .collect();
    let detail = if bad.is_empty() {
        format!("{} classes agree", a.values().sum::<usize>())
    } else {
        format!("{} mismatches: {}", bad.len(), bad.iter().take(8).cloned().collect::<Vec<_>>().join(", "))
    };
    check(out, name, bad.is_empty(), detail);
}

fn resolution_dims(label: &str, m: &Comodule, range: &Range) -> BTreeMap<TriDegree, usize> {
    let ext = ExtComputer::for_comodule(label, m.clone(), range);
    range.degrees().into_iter().map(|d| (d, ext.dim(d))).filter(|(_, n)| *n > 0).collect()
}

fn cobar_oracle(out: &mut Vec<Check>, label: &str, m: &Comodule) {
    let name = format!("cobar complex agrees with the resolution for {label} on {}", COBAR_WINDOW);
    match Cobar::new(m.clone()).dims(&COBAR_WINDOW) {
        Ok(c) => dims_check(out, name, &COBAR_WINDOW, &c, &resolution_dims(label, m, &COBAR_WINDOW)),
        Err(e) => err_check(out, name, e),
    }
}

// ---------------------------------------------------------------------------

fn hopf_axioms(_: &Range, out: &mut Vec<Check>) {
    for base in [Base::R, Base::C] {
        for level in [0, 1] {
            let rep = algebroid(base, level).check_axioms((-8, 8));
            let detail = if rep.passed() {
                format!("{} identities", rep.checked)
            } else {
                format!("failed: {}", rep.failed_identities().join(", "))
            };
            check(out, format!("A({level}) over {base}"), rep.passed(), detail);
        }
    }
}

fn ext_m2_c(range: &Range, out: &mut Vec<Check>) {
    let m = Comodule::ground(Base::C, 1);
    let computed = computed_chart("M2", &m, range, false);
    let p = zoo::ext_m2_c();
    diff_check(out, format!("{} on {range}", p.name), &p.instantiate(range), &computed, &["h0", "h1", "a", "b", "tau4"]);
    cobar_oracle(out, "M2 over C", &m);
}

/// Evaluate a sum of products of chart operators on the unit class. `None`
/// when no ordering of the factors stays inside the range.
fn evaluate(c: &Chart, expr: &str) -> Option<Element> {
    let unit = c.basis_element(TriDegree::ZERO, 0);
    let mut total: Option<Element> = None;
    for term in expr.replace('=', "+").split('+') {
        let mut ops: Vec<String> = Vec::new();
        for factor in term.split('*') {
            let (name, e) = match factor.trim().split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<usize>().ok()?),
                None => (factor.trim(), 1),
            };
            ops.extend(std::iter::repeat(name.to_string()).take(e));
        }
        let mut x = unit.clone();
        while !ops.is_empty() {
            let i = ops.iter().position(|op| c.apply(op, &x).is_some())?;
            x = c.apply(&ops.remove(i), &x)?;
        }
        match &mut total {
            None => total = Some(x),
            Some(t) if t.deg == x.deg => t.coords.xor_assign(&x.coords),
            Some(_) => return None,
        }
    }
    total
}


fn ext_m2_r(range: &Range, out: &mut Vec<Check>) {
    let m = Comodule::ground(Base::R, 1);
    let computed = computed_chart("M2", &m, range, false);
    let p: Presentation = zoo::ext_m2_r();
    let ops: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).collect();
    diff_check(out, format!("{} on {range}", p.name), &p.instantiate(range), &computed, &ops);

    // generators are indecomposable classes at their tridegrees
    let mut bad = Vec::new();
    for (g, d) in &p.ring.gens {
        let x = c_apply(&computed, g);
        let decomposables: Vec<BitVec> = OPERATORS
            .iter()
            .filter_map(|(op, od)| {
                let src = *d - *od;
                if !range.contains(src) || src == TriDegree::ZERO {
                    return None;
                }
                computed.actions.get(*op)?.get(&src).cloned()
            })
            .flatten()
            .collect();
        let n = computed.dim(*d);
        let ok = match &x {
            Some(x) if !x.is_zero() => rank(&decomposables, n) < rank(&[decomposables.clone(), vec![x.coords.clone()]].concat(), n),
            _ => false,
        };
        if !ok {
            bad.push(format!("{g} at {d}"));
        }
    }
    check(out, "generators are indecomposable at their tridegrees", bad.is_empty(), if bad.is_empty() { format!("{} generators", p.ring.gens.len()) } else { bad.join(", ") });

    let mut bad = Vec::new();
    let mut skipped = Vec::new();
    for r in &p.rels {
        match evaluate(&computed, r) {
            Some(x) if x.is_zero() => {}
            Some(_) => bad.push(r.clone()),
            None => skipped.push(r.clone()),
        }
    }
    let detail = if bad.is_empty() && skipped.is_empty() {
        format!("{} relations hold", p.rels.len())
    } else {
        format!("violated: {:?}; out of range: {:?}", bad, skipped)
    };
    check(out, "relations hold as action identities", bad.is_empty() && skipped.is_empty(), detail);

    let f0 = Range::new(range.s, (0, 0), range.w);
    match cobar::f0_line(&m, &f0) {
        Ok(line) => {
            let expect: BTreeMap<TriDegree, usize> = f0
                .degrees()
                .into_iter()
                .filter(|d| d.s <= 0 && (d.s - d.w) % 4 == 0 && d.w <= d.s)
                .map(|d| (d, 1))
                .collect();
            dims_check(out, "cobar filtration-zero line is F2[tau^4, rho]", &f0, &line.dims, &expect);
        }
        Err(e) => err_check(out, "cobar filtration-zero line is F2[tau^4, rho]", e),
    }
    cobar_oracle(out, "M2 over R", &m);
}

fn c_apply(c: &Chart, op: &str) -> Option<Element> {
    c.apply(op, &c.basis_element(TriDegree::ZERO, 0))
}

fn a0_level(_: &Range, out: &mut Vec<Check>) {
    let r = BOCKSTEIN_WINDOW;
    for k in 0..=3u32 {
        let m = Comodule::brown_gitler_b1(k, Base::R).restrict_to_level0();
        let name = format!("B1({k}) at level 0 on {r}");
        let b = match sseq::rho_bockstein(&m, &r, 2) {
            Ok(b) => b,
            Err(e) => {
                err_check(out, name, e);
                continue;
            }
        };
        let cells = sseq::a0_free_cells(&m);
        let shifts: Vec<i32> = (0..=k as i32).collect();
        let mut expect = sseq::a0_answer_dims(&r, &shifts);
        for (d, n) in sseq::free_cell_dims(&r, &cells) {
            *expect.entry(d).or_default() += n;
        }
        dims_check(out, format!("{name}: Ext equals the tower sum plus {} cofree cells", cells.len()), &r, &b.sseq.abutment, &expect);
        check(
            out,
            format!("{name}: Bockstein E1 is Ext over C of the rho-quotient, tensored with F2[rho]"),
            b.e1_failures.is_empty(),
            format!("{} failures", b.e1_failures.len()),
        );
        check(
            out,
            format!("{name}: Bockstein E-infinity totals equal Ext"),
            b.sseq.convergence_failures.is_empty() && b.sseq.homology_failures.is_empty(),
            format!("{} convergence, {} homology failures", b.sseq.convergence_failures.len(), b.sseq.homology_failures.len()),
        );
    }
    let name = "Bockstein d1(tau) = rho h0 for M2 at level 0";
    match d1_tau() {
        Ok((l, r)) => check(out, name, l.is_some() && l == r, format!("{l:?} vs {r:?}")),
        Err(e) => err_check(out, name, e),
    }
}

fn d1_tau() -> Result<(Option<BitVec>, Option<BitVec>), crate::cobar::CobarError> {
    let m = Comodule::ground(Base::R, 0);
    let c = Cobar::new(m);
    let fc = FilteredCobar::rho_adic(&c);
    let t0 = c.hopf().index(Am::TAU0).expect("τ̄0");
    let lhs = fc.d_of(TriDegree::new(0, 0, -1), 0, 1, &[Word::new(Gm::TAU, vec![], 0)])?;
    let tgt = TriDegree::new(-1, 1, -1);
    let v = c.slice(tgt)?.vector(&[Word::new(Gm::RHO, vec![t0], 0)]).expect("ρ[τ̄0] in slice");
    let rhs = fc.class(tgt, -1, 1, &v)?;
    Ok((lhs, rhs))
}

fn brown_gitler(_: &Range, out: &mut Vec<Check>) {
    for base in [Base::R, Base::C] {
        for k in 1..=2 {
            for odd in [false, true] {
                let ses = ses_bg(k, odd, base);
                let name = format!("0 -> S B0({k}){} -> B0({}) -> Q -> 0 over {base}", if odd { " (x) B0(1)" } else { "" }, 2 * k + odd as u32);
                match check_exact(&ses.inclusion, &ses.projection, 8) {
                    Ok(ranks) => {
                        let bad = ranks.iter().filter(|(_, [a, b, c])| a + c != *b).count();
                        check(out, name, bad == 0, format!("{} degrees, {bad} rank failures", ranks.len()));
                    }
                    Err(e) => err_check(out, name, e),
                }
                let id = &ses.identification;
                check(
                    out,
                    format!("Q has the rank of B1({}) (x) (A(1)//A(0)) over {base}, {}", k - 1, if odd { "odd" } else { "even" }),
                    basis_dims(&id.source) == basis_dims(&id.target),
                    format!("rank {}", id.source.rank()),
                );
            }
        }
        let name = format!("(A//A(1)) through weight 8 splits into shifted B0(k) over {base}");
        match check_a_mod_a1_splitting(8, base) {
            Ok(()) => check(out, name, true, "dims and layer maps agree"),
            Err(e) => err_check(out, name, e),
        }
    }
}

fn aahss_b01(_: &Range, out: &mut Vec<Check>) {
    let r = AAHSS_WINDOW;
    match sseq::check_cell_differentials(Base::R, &r) {
        Ok(c) => check(
            out,
            format!("d1 = h0 and d2 = h1 on every class of Ext(M2) in {r}"),
            c.passed(),
            format!("{} classes, {} d1 and {} d2 failures, {} nonzero cw2 d3", c.checked, c.d1_failures.len(), c.d2_failures.len(), c.d3_cw2_nonzero.len()),
        ),
        Err(e) => err_check(out, "cell differentials", e),
    }
    let d3 = sseq::d3_rho_cell();
    match &d3 {
        Ok((l, r)) => check(out, "zig-zag: d3(rho[3]) = (tau h1)[0]", l == r && !l.is_zero(), format!("{l:?} vs {r:?}")),
        Err(e) => err_check(out, "zig-zag: d3(rho[3]) = (tau h1)[0]", e),
    }
    match massey_rho_h0_h1() {
        Ok((contains, ind)) => check(out, "Massey <rho, h0, h1> = tau h1 with zero indeterminacy", contains && ind == 0, format!("contains tau h1: {contains}, indeterminacy {ind}")),
        Err(e) => err_check(out, "Massey <rho, h0, h1>", e),
    }
    let fm = sseq::cellular_filtration_b01(Base::R);
    match sseq::aahss(&fm, &r) {
        Ok(s) => {
            let e4: BTreeMap<TriDegree, usize> = r.degrees().into_iter().map(|d| (d, s.pages[3].total(d))).filter(|(_, n)| *n > 0).collect();
            let inf: BTreeMap<TriDegree, usize> = r.degrees().into_iter().map(|d| (d, s.infinity.total(d))).filter(|(_, n)| *n > 0).collect();
            dims_check(out, format!("E4 totals equal E-infinity on {r}"), &r, &e4, &inf);
            match Cobar::new(fm.ambient.clone()).dims(&r) {
                Ok(direct) => dims_check(out, "E4 totals equal direct cobar Ext(B0(1))", &r, &e4, &direct),
                Err(e) => err_check(out, "direct cobar Ext(B0(1))", e),
            }
            check(
                out,
                "pages are the homology of the previous page",
                s.homology_failures.is_empty() && s.convergence_failures.is_empty(),
                format!("{} homology, {} convergence failures", s.homology_failures.len(), s.convergence_failures.len()),
            );
        }
        Err(e) => err_check(out, "aAHSS(B0(1))", e),
    }
}

fn massey_rho_h0_h1() -> Result<(bool, usize), crate::cobar::CobarError> {
    let unit = Cobar::new(Comodule::ground(Base::R, 1));
    let rho = ExtClass::ground(&unit, "rho", Gm::RHO)?;
    let h0 = ExtClass::letter(&unit, "h0", Am::TAU0)?;
    let h1 = ExtClass::letter(&unit, "h1", Am::XI1)?;
    let m = cobar::massey_triple(&unit, &unit, &rho, &h0, &h1)?;
    let th1 = ExtClass::located(&unit, "tau_h1", TriDegree::new(1, 1, 0))?;
    let v = unit.class_of(th1.degree, &th1.rep)?;
    Ok((m.contains(&v), m.indeterminacy_dim()))
}

fn ext_b01(range: &Range, out: &mut Vec<Check>) {
    let computed = computed_chart("B0(1)", &Comodule::brown_gitler_b0(1, Base::R), range, false);
    let pages = sseq::coweight_pages(&computed);
    check(out, "cw = 1 mod 4 page is empty", pages[1].total() == 0, format!("{} classes", pages[1].total()));
    diff_check(out, "cw = 2 mod 4 page is the big flag F(4,1,2)", &zoo::big_flag(4, 1, 2).instantiate(range).coweight_page(2), &pages[2], &COMPARE_OPS);
    let ops: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).filter(|n| *n != "b").collect();
    diff_check(out, format!("full chart on {range}, all operators but b"), &zoo::ext_b01_r().chart(range), &computed, &ops);
    let modb = computed_chart("B0(1)", &Comodule::brown_gitler_b0(1, Base::R), range, true);
    let torsion: BTreeMap<TriDegree, usize> = computed.dims.iter().map(|(d, n)| (*d, n - modb.dim(*d))).filter(|(_, n)| *n > 0).collect();
    let expect: BTreeMap<TriDegree, usize> =
        range.degrees().into_iter().filter(|d| d.f == 0 && d.s <= -3 && (d.s - d.w) % 4 == 0 && d.w <= d.s).map(|d| (d, 1)).collect();
    dims_check(out, "b-power torsion is the rho^3-divisible part of the filtration-zero rho-tower", range, &torsion, &expect);
}

fn b01_power(i: u32, range: &Range) -> Chart {
    if i == 0 {
        return computed_chart("M2", &Comodule::ground(Base::R, 1), range, true);
    }
    computed_chart(&format!("B0(1)^{i}"), &Comodule::brown_gitler_b0(1, Base::R).power(i), range, true)
}

fn shifted(range: &Range, by: TriDegree) -> Range {
    Range::new((range.s.0 - by.s, range.s.1 - by.s), (range.f.0.saturating_sub(by.f).max(0), range.f.1 - by.f), (range.w.0 - by.w, range.w.1 - by.w))
}

fn tensor_powers(range: &Range, out: &mut Vec<Check>) {
    for i in 1..=3u32 {
        let c = b01_power(i, range);
        diff_check(out, format!("B0(1)^{i} mod b against Z_{i} on {range}"), &zoo::z_r(i).chart(range), &c, &COMPARE_OPS);
        let empty = if i % 2 == 1 { 1 } else { 3 };
        let n = c.coweight_page(empty).total();
        check(out, format!("B0(1)^{i} mod b vanishes for cw = {empty} mod 4"), n == 0, format!("{n} classes"));
    }
    for (i, j) in [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)] {
        let bad = nested_failures(i, j, range);
        check(out, format!("S^({},{}) B0(1)^{j}<{}> fits inside B0(1)^{i}", 4 * (i - j), 2 * (i - j), i - j), bad.0.is_empty(), format!("{} failures over {} classes", bad.0.len(), bad.1));
    }
}

/// Tridegrees where Σ^{4(i−j),2(i−j)}Ext(B0(1)^j)⟨i−j⟩ is larger than
/// Ext(B0(1)^i) modulo b-torsion, and the number of shifted classes.
pub fn nested_failures(i: i32, j: i32, range: &Range) -> (Vec<TriDegree>, usize) {
    nested_failures_by(i, j, TriDegree::new(4 * (i - j), i - j, 2 * (i - j)), range)
}

pub fn nested_failures_by(i: i32, j: i32, by: TriDegree, range: &Range) -> (Vec<TriDegree>, usize) {
    let inner = b01_power(j as u32, &shifted(range, by)).translate(by, *range);
    let outer = b01_power(i as u32, range);
    (sseq::nested_failures(&outer, &inner, TriDegree::ZERO), inner.total())
}

fn b0k(range: &Range, out: &mut Vec<Check>) {
    for (base, ks) in [(Base::R, 1..=4u32), (Base::C, 1..=3u32)] {
        for k in ks {
            let c = computed_chart(&format!("B0({k})"), &Comodule::brown_gitler_b0(k, base), range, true);
            diff_check(out, format!("B0({k}) over {base} mod b on {range}"), &zoo::predicted_ext_b0(k, base).chart(range), &c, &COMPARE_OPS);
        }
    }
}

/// Largest k for which Σ^{4k,2k}B0(k) can meet the range: its classes have
/// coweight at least 2k.
pub fn e2_k_max(range: &Range) -> u32 {
    ((range.s.1 - range.w.0) / 2).max(0) as u32
}

fn shifted_b0(k: u32, range: &Range) -> Chart {
    let kk = k as i32;
    let by = TriDegree::new(4 * kk, 0, 2 * kk);
    let m = if k == 0 { Comodule::ground(Base::R, 1) } else { Comodule::brown_gitler_b0(k, Base::R) };
    computed_chart(&format!("B0({k})"), &m, &shifted(range, by), true).translate(by, *range)
}

fn e2_coop(range: &Range, out: &mut Vec<Check>) {
    let k_max = e2_k_max(range);
    let parts: Vec<Chart> = (0..=k_max).map(|k| shifted_b0(k, range)).collect();
    let sum = Chart::direct_sum(Base::R, "E2", *range, &parts);
    let unsound = zoo::e2_truncation_unsound(range, k_max);
    check(out, format!("k <= {k_max} covers the range"), unsound.is_empty(), format!("{} unreachable tridegrees", unsound.len()));
    diff_check(out, format!("predicted E2 through k = {k_max} on {range}"), &zoo::predicted_e2_coop(Base::R, k_max).chart(range), &sum, &COMPARE_OPS);
    let mut checked = 0;
    let mut bad = Vec::new();
    for (d, n) in &sum.dims {
        if let Some(r) = sum.action_rank("tau4", *d) {
            checked += 1;
            if r != *n {
                bad.push(*d);
            }
        }
    }
    check(
        out,
        "tau^4 acts injectively on every class whose image is in range",
        bad.is_empty(),
        format!("{checked} tridegrees, {} failures {:?}", bad.len(), bad.iter().take(6).collect::<Vec<_>>()),
    );
}

/// dim Ext_R(M/ρ) from the long exact sequence of ρ: coker of ρ into a
/// tridegree plus ker of ρ out of (s, f+1, w+1).
pub fn rho_cofiber_dims(m: &Comodule, range: &Range) -> BTreeMap<TriDegree, usize> {
    let wide = Range::new((range.s.0 - 1, range.s.1 + 1), (range.f.0, range.f.1 + 1), (range.w.0, range.w.1 + 1));
    let ext = ExtComputer::for_comodule(&m.name, m.clone(), &wide);
    let c = Chart::compute_with(&ext, &wide, &["rho"]);
    let rk = |d: TriDegree| c.action_rank("rho", d).expect("ρ target in range");
    let mut out = BTreeMap::new();
    for d in range.degrees() {
        let coker = c.dim(d) - rk(d + TriDegree::new(1, 0, 1));
        let src = d + TriDegree::new(0, 1, 1);
        let ker = c.dim(src) - rk(src);
        if coker + ker > 0 {
            out.insert(d, coker + ker);
        }
    }
    out
}

fn base_change(range: &Range, out: &mut Vec<Check>) {
    let r = *range;
    let cases: [(&str, fn(Base) -> Comodule); 4] = [
        ("M2", |b| Comodule::ground(b, 1)),
        ("B0(1)", |b| Comodule::brown_gitler_b0(1, b)),
        ("B0(2)", |b| Comodule::brown_gitler_b0(2, b)),
        ("B0(1)^2", |b| Comodule::brown_gitler_b0(1, b).power(2)),
    ];
    for (label, mk) in cases {
        let lhs = rho_cofiber_dims(&mk(Base::R), &r);
        let rhs = resolution_dims(label, &mk(Base::C), &r);
        dims_check(out, format!("Ext_R({label}/rho) = Ext_C({label}) on {r}"), &r, &lhs, &rhs);
    }
}

fn determinism(range: &Range, out: &mut Vec<Check>) {
    let m = Comodule::brown_gitler_b0(2, Base::R);
    let ops: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).collect();
    let run = || {
        let ext = ExtComputer::for_comodule("B0(2)", m.clone(), &extended_range(range, DEFAULT_MAX_POWER));
        chart_mod_b(&ext, range, &ops, DEFAULT_MAX_POWER).1.to_json().to_string()
    };
    let (a, b) = (run(), run());
    check(out, "mod-b chart JSON of B0(2) is byte-identical across reruns", a == b, format!("{} bytes", a.len()));
    let run = || Cobar::new(Comodule::brown_gitler_b0(1, Base::R)).chart(&COBAR_WINDOW, &["h0", "h1", "rho"]).map(|c| c.to_json().to_string());
    match (run(), run()) {
        (Ok(a), Ok(b)) => check(out, "cobar chart JSON of B0(1) is byte-identical across reruns", a == b, format!("{} bytes", a.len())),
        (Err(e), _) | (_, Err(e)) => err_check(out, "cobar chart reruns", e),
    }

    let mut slices = 0;
    let mut failures = Vec::new();
    for (label, m) in [
        ("M2 over R", Comodule::ground(Base::R, 1)),
        ("M2 over C", Comodule::ground(Base::C, 1)),
        ("B0(1) over R", Comodule::brown_gitler_b0(1, Base::R)),
        ("M2 over R at level 0", Comodule::ground(Base::R, 0)),
    ] {
        for d in COBAR_WINDOW.degrees() {
            match cobar::build_slice(&m, d) {
                Ok(_) => slices += 1,
                Err(e) => failures.push(format!("{label} {d}: {e}")),
            }
        }
    }
    check(out, format!("d^2 = 0 on every cobar slice in {}", COBAR_WINDOW), failures.is_empty(), format!("{slices} slices; {}", failures.join("; ")));

    let mut charts: Vec<(String, Chart)> = Vec::new();
    for i in 1..=3 {
        charts.push((format!("B0(1)^{i}"), b01_power(i, range)));
    }
    for k in 1..=4 {
        charts.push((format!("B0({k}) over R"), computed_chart(&format!("B0({k})"), &Comodule::brown_gitler_b0(k, Base::R), range, true)));
    }
    for k in 1..=3 {
        charts.push((format!("B0({k}) over C"), computed_chart(&format!("B0({k})"), &Comodule::brown_gitler_b0(k, Base::C), range, true)));
    }
    for k in 0..=e2_k_max(range) {
        charts.push((format!("S B0({k})"), shifted_b0(k, range)));
    }
    let bad: Vec<String> = charts.iter().filter(|(_, c)| !c.uncertified.is_empty()).map(|(l, c)| format!("{l}: {}", c.uncertified.len())).collect();
    check(out, "no chart read by a suite has an uncertified tridegree", bad.is_empty(), format!("{} charts; {}", charts.len(), bad.join(", ")));
}
