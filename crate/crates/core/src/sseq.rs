//! Spectral sequences of filtered cobar complexes: the algebraic
//! Atiyah–Hirzebruch spectral sequence of a cellular filtration and the
//! ρ-Bockstein spectral sequence.
//!
//! Pages are computed from the filtered complex directly,
//! E_r^a = Z_r^a / (Z_{r−1}^{a−1} + d Z_{r−1}^{a+r−1}), with
//! Z_r^a = {x ∈ F_a : dx ∈ F_{a−r}}. Differentials lower the filtration key.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::chart::Chart;
use crate::cobar::{Cobar, CobarError, CobarSlice, ExtClass, Word};
use crate::comod::{ComodError, Comodule};
use crate::ext::{ExtComputer, Range};
use crate::ground::{Base, Gm, TriDegree};
use crate::hopf::Am;
use crate::linalg::{apply, kernel_and_image, BitVec, Echelon, Subquotient};

const D: TriDegree = TriDegree::new(-1, 1, 0);

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SseqError {
    #[error(transparent)]
    Cobar(#[from] CobarError),
    #[error(transparent)]
    Comod(#[from] ComodError),
    #[error("filtration stage {0} is not a subcomodule")]
    NotSubcomodule(i32),
    #[error("filtration has {0} entries for a comodule of rank {1}")]
    Length(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub a: i32,
    pub deg: TriDegree,
}

/// A comodule with an increasing filtration by subcomodules, recorded as the
/// filtration index of each basis element.
#[derive(Clone, Debug)]
pub struct FilteredComodule {
    pub ambient: Comodule,
    pub filtration: Vec<i32>,
    pub cells: Vec<Cell>,
}

impl FilteredComodule {
    pub fn new(ambient: Comodule, filtration: Vec<i32>, cells: Vec<Cell>) -> Result<Self, SseqError> {
        if filtration.len() != ambient.rank() {
            return Err(SseqError::Length(filtration.len(), ambient.rank()));
        }
        let fm = FilteredComodule { ambient, filtration, cells };
        fm.validate()?;
        Ok(fm)
    }

    /// Filtration by internal degree t of the basis.
    pub fn by_degree(ambient: Comodule) -> Result<Self, SseqError> {
        let filtration = ambient.basis.iter().map(|b| b.deg.s).collect();
        let cells = ambient.basis.iter().map(|b| Cell { label: b.label.clone(), a: b.deg.s, deg: b.deg }).collect();
        Self::new(ambient, filtration, cells)
    }

    pub fn top(&self) -> i32 {
        self.filtration.iter().copied().max().unwrap_or(0)
    }

    pub fn stage(&self, a: i32) -> Vec<usize> {
        (0..self.filtration.len()).filter(|&i| self.filtration[i] <= a).collect()
    }

    /// Every stage is coaction-closed.
    pub fn validate(&self) -> Result<(), SseqError> {
        for (i, terms) in self.ambient.coaction.iter().enumerate() {
            for &(_, _, j) in terms {
                if self.filtration[j as usize] > self.filtration[i] {
                    return Err(SseqError::NotSubcomodule(self.filtration[j as usize] - 1));
                }
            }
        }
        Ok(())
    }

    /// N ⊗ (this), filtered through the second factor.
    pub fn tensor_left(&self, n: &Comodule) -> Result<Self, SseqError> {
        let ambient = n.tensor(&self.ambient)?;
        let k = self.ambient.rank();
        let filtration = (0..ambient.rank()).map(|i| self.filtration[i % k]).collect();
        Self::new(ambient, filtration, self.cells.clone())
    }
}

/// B0(1) with cells M2{[1]}, M2{[ξ̄1]}, M2{[τ̄1]} in AH-filtrations 0, 2, 3.
pub fn cellular_filtration_b01(base: Base) -> FilteredComodule {
    FilteredComodule::by_degree(Comodule::brown_gitler_b0(1, base)).expect("B0(1) cells are subcomodules")
}

/// The filtered cobar complex of a comodule under a filtration of words.
pub struct FilteredCobar<'a> {
    pub cobar: &'a Cobar,
    key: Box<dyn Fn(&Word) -> i32 + Send + Sync + 'a>,
    zs: Mutex<HashMap<(TriDegree, i32, i32), Arc<Vec<BitVec>>>>,
}

fn mask(v: &BitVec, keep: &[bool]) -> BitVec {
    BitVec::from_ones(v.len(), v.ones().filter(|&i| keep[i]))
}

impl<'a> FilteredCobar<'a> {
    pub fn new(cobar: &'a Cobar, key: impl Fn(&Word) -> i32 + Send + Sync + 'a) -> Self {
        FilteredCobar { cobar, key: Box::new(key), zs: Mutex::default() }
    }

    /// Filtered by the cell of the module index.
    pub fn cellular(cobar: &'a Cobar, fm: &'a FilteredComodule) -> Self {
        Self::new(cobar, move |w: &Word| fm.filtration[w.m as usize])
    }

    /// Filtered by minus the ρ-exponent, so d raises ρ-powers and lowers keys.
    pub fn rho_adic(cobar: &'a Cobar) -> Self {
        Self::new(cobar, |w: &Word| -(w.c.r as i32))
    }

    pub fn key(&self, w: &Word) -> i32 {
        (self.key)(w)
    }

    fn keys(&self, s: &CobarSlice) -> Vec<i32> {
        s.basis.iter().map(|w| self.key(w)).collect()
    }

    /// The filtration keys occurring at a tridegree.
    pub fn key_range(&self, d: TriDegree) -> Result<Option<(i32, i32)>, CobarError> {
        let s = self.cobar.slice(d)?;
        let k = self.keys(&s);
        Ok(k.iter().min().map(|&lo| (lo, *k.iter().max().unwrap())))
    }

    /// Basis of Z_r^a at `d`, in slice coordinates.
    pub fn z(&self, d: TriDegree, a: i32, r: i32) -> Result<Arc<Vec<BitVec>>, CobarError> {
        if let Some(z) = self.zs.lock().unwrap().get(&(d, a, r)) {
            return Ok(z.clone());
        }
        let s = self.cobar.slice(d)?;
        let keys = self.keys(&s);
        let out = if d.f < 0 || s.dim() == 0 {
            Vec::new()
        } else {
            let t = self.cobar.slice(d + D)?;
            let high: Vec<bool> = self.keys(&t).into_iter().map(|k| k > a - r).collect();
            let idx: Vec<usize> = (0..s.dim()).filter(|&i| keys[i] <= a).collect();
            let imgs: Vec<BitVec> = idx.iter().map(|&i| mask(&s.differential[i], &high)).collect();
            let (kernel, _) = kernel_and_image(&imgs, t.dim());
            kernel.iter().map(|k| BitVec::from_ones(s.dim(), k.ones().map(|j| idx[j]))).collect()
        };
        let out = Arc::new(out);
        self.zs.lock().unwrap().insert((d, a, r), out.clone());
        Ok(out)
    }

    fn denominators(&self, d: TriDegree, a: i32, r: i32) -> Result<Vec<BitVec>, CobarError> {
        let mut b: Vec<BitVec> = self.z(d, a - 1, r - 1)?.as_ref().clone();
        if d.f > 0 {
            let inc = self.cobar.slice(d - D)?;
            let n = self.cobar.slice(d)?.dim();
            for x in self.z(d - D, a + r - 1, r - 1)?.iter() {
                b.push(apply(&inc.differential, n, x));
            }
        }
        Ok(b)
    }

    /// E_r^a at `d`.
    pub fn page(&self, d: TriDegree, a: i32, r: i32) -> Result<Subquotient, CobarError> {
        let n = self.cobar.slice(d)?.dim();
        let mut e = Echelon::new(n, 0);
        for v in self.denominators(d, a, r)? {
            e.insert(v);
        }
        Ok(Subquotient::new(n, &e, &self.z(d, a, r)?))
    }

    /// Class in E_r^a of a vector of Z_r^a.
    pub fn class(&self, d: TriDegree, a: i32, r: i32, x: &BitVec) -> Result<Option<BitVec>, CobarError> {
        Ok(self.page(d, a, r)?.coords(x))
    }

    /// d_r out of E_r^a at `d`, as a matrix into E_r^{a−r} at d + (−1, 1, 0).
    pub fn differential(&self, d: TriDegree, a: i32, r: i32) -> Result<Vec<BitVec>, CobarError> {
        let src = self.page(d, a, r)?;
        let tgt = self.page(d + D, a - r, r)?;
        let s = self.cobar.slice(d)?;
        Ok(src
            .reps()
            .iter()
            .map(|x| tgt.coords(&apply(&s.differential, s.target_dim, x)).expect("boundaries are r-cycles"))
            .collect())
    }

    /// An element of Z_r^a congruent to `leading` modulo F_{a−1}.
    pub fn lift(&self, d: TriDegree, a: i32, r: i32, leading: &[Word]) -> Result<Option<BitVec>, CobarError> {
        let s = self.cobar.slice(d)?;
        let Some(v) = s.vector(leading) else { return Ok(None) };
        let keys = self.keys(&s);
        let top: Vec<bool> = keys.iter().map(|&k| k >= a).collect();
        let z = self.z(d, a, r)?;
        let mut e = Echelon::new(s.dim(), z.len());
        for (i, x) in z.iter().enumerate() {
            let _ = e.insert_tagged(mask(x, &top), BitVec::unit(z.len(), i));
        }
        let Some(tag) = e.solve(&mask(&v, &top)) else { return Ok(None) };
        Ok(Some(apply(&z, s.dim(), &tag)))
    }

    /// Class of d_r applied to the lift of `leading`, in E_r^{a−r}.
    pub fn d_of(&self, d: TriDegree, a: i32, r: i32, leading: &[Word]) -> Result<Option<BitVec>, CobarError> {
        let Some(x) = self.lift(d, a, r, leading)? else { return Ok(None) };
        let s = self.cobar.slice(d)?;
        let dx = apply(&s.differential, s.target_dim, &x);
        self.class(d + D, a - r, r, &dx)
    }
}

/// Filtration-indexed dimensions and differentials of one page.
#[derive(Clone, Debug, Default)]
pub struct SseqPage {
    pub r: i32,
    pub dims: BTreeMap<(TriDegree, i32), usize>,
    /// d_r out of (tridegree, filtration), in page coordinates.
    pub differentials: BTreeMap<(TriDegree, i32), Vec<BitVec>>,
}

impl SseqPage {
    pub fn dim(&self, d: TriDegree, a: i32) -> usize {
        self.dims.get(&(d, a)).copied().unwrap_or(0)
    }

    pub fn total(&self, d: TriDegree) -> usize {
        self.dims.range((d, i32::MIN)..=(d, i32::MAX)).map(|(_, n)| *n).sum()
    }

    pub fn rank(&self, d: TriDegree, a: i32) -> usize {
        self.differentials.get(&(d, a)).map(|m| crate::linalg::rank(m, m.first().map_or(0, |v| v.len()))).unwrap_or(0)
    }
}

/// Pages of a filtered cobar complex over a range, with the abutment.
#[derive(Clone, Debug)]
pub struct Sseq {
    pub pages: Vec<SseqPage>,
    pub infinity: SseqPage,
    /// Direct Ext of the ambient comodule.
    pub abutment: BTreeMap<TriDegree, usize>,
    /// (tridegree, Σ_a dim E_∞, dim Ext) where they differ.
    pub convergence_failures: Vec<(TriDegree, usize, usize)>,
    /// (page, tridegree, filtration) where E_{r+1} ≠ H(E_r, d_r).
    pub homology_failures: Vec<(i32, TriDegree, i32)>,
}

fn compute_page(fc: &FilteredCobar, degrees: &[TriDegree], r: i32, with_d: bool) -> Result<SseqPage, CobarError> {
    let rows: Result<Vec<Vec<((TriDegree, i32), usize, Option<Vec<BitVec>>)>>, CobarError> = degrees
        .par_iter()
        .map(|&d| {
            let Some((lo, hi)) = fc.key_range(d)? else { return Ok(Vec::new()) };
            let mut out = Vec::new();
            for a in lo..=hi {
                let n = fc.page(d, a, r)?.dim();
                if n == 0 {
                    continue;
                }
                let m = if with_d { Some(fc.differential(d, a, r)?) } else { None };
                out.push(((d, a), n, m));
            }
            Ok(out)
        })
        .collect();
    let mut page = SseqPage { r, ..Default::default() };
    for (k, n, m) in rows?.into_iter().flatten() {
        page.dims.insert(k, n);
        if let Some(m) = m {
            page.differentials.insert(k, m);
        }
    }
    Ok(page)
}

/// Pages E_1 … E_last with differentials, and E_∞, over a range. Homology
/// of each page is checked against the next on tridegrees whose neighbours
/// along d also lie in the range.
pub fn run(fc: &FilteredCobar, range: &Range, last: i32, abutment: BTreeMap<TriDegree, usize>) -> Result<Sseq, CobarError> {
    let degrees = range.degrees();
    let mut pages = Vec::new();
    for r in 1..=last {
        pages.push(compute_page(fc, &degrees, r, true)?);
    }
    let spread = degrees
        .iter()
        .filter_map(|&d| fc.key_range(d).ok().flatten())
        .map(|(lo, hi)| hi - lo)
        .max()
        .unwrap_or(0);
    let infinity = compute_page(fc, &degrees, spread.max(last) + 2, false)?;
    let mut homology_failures = Vec::new();
    for w in pages.windows(2) {
        let (p, next) = (&w[0], &w[1]);
        for &d in &degrees {
            if !range.contains(d + D) || !range.contains(d - D) {
                continue;
            }
            let Some((lo, hi)) = fc.key_range(d)? else { continue };
            for a in lo..=hi {
                let n = p.dim(d, a);
                let out = p.rank(d, a);
                let inc = p.rank(d - D, a + p.r);
                if next.dim(d, a) + out + inc != n {
                    homology_failures.push((p.r, d, a));
                }
            }
        }
    }
    let mut convergence_failures = Vec::new();
    for &d in &degrees {
        let e = infinity.total(d);
        let x = abutment.get(&d).copied().unwrap_or(0);
        if e != x {
            convergence_failures.push((d, e, x));
        }
    }
    Ok(Sseq { pages, infinity, abutment, convergence_failures, homology_failures })
}

fn resolution_dims(name: &str, m: &Comodule, range: &Range) -> BTreeMap<TriDegree, usize> {
    let ext = ExtComputer::for_comodule(name, m.clone(), range);
    range.degrees().into_iter().map(|d| (d, ext.dim(d))).filter(|(_, n)| *n > 0).collect()
}

/// The aAHSS of a filtered comodule: E_1 … E_4 and E_∞, abutting to Ext
/// of the ambient computed by a minimal resolution.
pub fn aahss(fm: &FilteredComodule, range: &Range) -> Result<Sseq, SseqError> {
    aahss_pages(fm, range, 4)
}

/// The aAHSS with differentials through E_last.
pub fn aahss_pages(fm: &FilteredComodule, range: &Range, last: i32) -> Result<Sseq, SseqError> {
    let cobar = Cobar::new(fm.ambient.clone());
    let fc = FilteredCobar::cellular(&cobar, fm);
    let abut = resolution_dims(&fm.ambient.name, &fm.ambient, range);
    Ok(run(&fc, range, last, abut)?)
}

/// Outcome of the closed-form checks on the B0(1) aAHSS.
#[derive(Clone, Debug, Default)]
pub struct CellChecks {
    /// Classes α checked for d₁(α[3]) = h0α[2] and d₂(α[2]) = h1α[0].
    pub checked: usize,
    pub d1_failures: Vec<TriDegree>,
    pub d2_failures: Vec<TriDegree>,
    /// Sources of d₃ on classes α[3] with cw(α) ≡ 2 (4) that are nonzero.
    pub d3_cw2_nonzero: Vec<TriDegree>,
}

impl CellChecks {
    pub fn passed(&self) -> bool {
        self.d1_failures.is_empty() && self.d2_failures.is_empty() && self.d3_cw2_nonzero.is_empty()
    }
}

/// Compare the connecting-map differentials of the B0(1) aAHSS with h0·
/// and h1· on every class α of Ext(M2) whose cells stay in `range`.
pub fn check_cell_differentials(base: Base, range: &Range) -> Result<CellChecks, SseqError> {
    let fm = cellular_filtration_b01(base);
    let cobar = Cobar::new(fm.ambient.clone());
    let fc = FilteredCobar::cellular(&cobar, &fm);
    let unit = Cobar::new(Comodule::ground(base, 1));
    let h0 = ExtClass::letter(&unit, "h0", Am::TAU0)?;
    let h1 = ExtClass::letter(&unit, "h1", Am::XI1)?;
    let cell = |a: i32| fm.filtration.iter().position(|&x| x == a).expect("cell") as u32;
    let cdeg = |a: i32| fm.ambient.basis[cell(a) as usize].deg;
    let on = |z: &[Word], a: i32| cobar.product(z, &[Word::new(Gm::ONE, vec![], cell(a))]);
    let mut out = CellChecks::default();
    for e in range.degrees() {
        let d3 = e + cdeg(3);
        let d2 = e + cdeg(2);
        if !(range.contains(d3) && range.contains(d3 + D) && range.contains(d2) && range.contains(d2 + D)) {
            continue;
        }
        let g = unit.group(e)?;
        for rep in g.reps() {
            let z = g.slice.words(rep);
            out.checked += 1;
            let lhs = fc.d_of(d3, 3, 1, &on(&z, 3))?;
            let rhs_words = on(&unit.product(&h0.rep, &z), 2);
            let rhs = fc.class(d3 + D, 2, 1, &cobar.slice(d3 + D)?.vector(&rhs_words).expect("in slice"))?;
            if lhs.is_none() || lhs != rhs {
                out.d1_failures.push(e);
            }
            let lhs = fc.d_of(d2, 2, 2, &on(&z, 2))?;
            let rhs_words = on(&unit.product(&h1.rep, &z), 0);
            let rhs = fc.class(d2 + D, 0, 2, &cobar.slice(d2 + D)?.vector(&rhs_words).expect("in slice"))?;
            if lhs.is_none() || lhs != rhs {
                out.d2_failures.push(e);
            }
        }
        if (e.cw()).rem_euclid(4) == 2 && range.contains(d3 + D) {
            let m = fc.differential(d3, 3, 3)?;
            if m.iter().any(|v| !v.is_zero()) {
                out.d3_cw2_nonzero.push(e);
            }
        }
    }
    Ok(out)
}

/// d₃ applied to the lift of ρ[3], compared with (τh1)[0]. Returns both
/// classes in E_3^0 at (1, 1, 0).
pub fn d3_rho_cell() -> Result<(BitVec, BitVec), SseqError> {
    let fm = cellular_filtration_b01(Base::R);
    let cobar = Cobar::new(fm.ambient.clone());
    let fc = FilteredCobar::cellular(&cobar, &fm);
    let unit = Cobar::new(Comodule::ground(Base::R, 1));
    let th1 = ExtClass::located(&unit, "tau_h1", TriDegree::new(1, 1, 0))?;
    let cell = |a: i32| fm.filtration.iter().position(|&x| x == a).expect("cell") as u32;
    let src = TriDegree::new(2, 0, 0);
    let lhs = fc.d_of(src, 3, 3, &[Word::new(Gm::RHO, vec![], cell(3))])?.expect("ρ[3] survives to E3");
    let words = cobar.product(&th1.rep, &[Word::new(Gm::ONE, vec![], cell(0))]);
    let v = cobar.slice(src + D)?.vector(&words).expect("in slice");
    let rhs = fc.class(src + D, 0, 3, &v)?.expect("(τh1)[0] is a 3-cycle");
    Ok((lhs, rhs))
}

/// The ρ-Bockstein spectral sequence of a comodule over R.
#[derive(Clone, Debug)]
pub struct Bockstein {
    pub sseq: Sseq,
    /// (tridegree, E_1 total, Σ_j dim Ext_C(M/ρ) at the ρ^j-shifted degree) where they differ.
    pub e1_failures: Vec<(TriDegree, usize, usize)>,
}

/// Pages keyed by minus the ρ-exponent. E_1 is compared with
/// Ext_C(M/ρ) ⊗ F2[ρ] and E_∞ with Ext_R(M), both from minimal resolutions.
pub fn rho_bockstein(m: &Comodule, range: &Range, last: i32) -> Result<Bockstein, SseqError> {
    if m.base != Base::R {
        return Err(ComodError::NeedsR("rho_bockstein").into());
    }
    let cobar = Cobar::new(m.clone());
    let fc = FilteredCobar::rho_adic(&cobar);
    let abut = resolution_dims(&m.name, m, range);
    let sseq = run(&fc, range, last, abut)?;
    let quot = m.quotient_rho()?;
    let top = m.basis.iter().map(|b| b.deg.s).max().unwrap_or(0);
    let s_hi = range.s.1.max(2 * range.f.1 + top + 4);
    let wide = Range::new((range.s.0, s_hi), range.f, (range.w.0, range.w.1 + s_hi - range.s.0));
    let c = ExtComputer::for_comodule("quotient", quot, &wide);
    let mut e1_failures = Vec::new();
    let e1 = &sseq.pages[0];
    for d in range.degrees() {
        let total = e1.total(d);
        let mut expect = 0;
        for j in 0.. {
            let dj = d + TriDegree::new(j, 0, j);
            if !wide.contains(dj) {
                break;
            }
            expect += c.dim(dj);
        }
        if total != expect {
            e1_failures.push((d, total, expect));
        }
    }
    Ok(Bockstein { sseq, e1_failures })
}

/// Dimensions of Σ^{4j,2j} F2[ρ, τ², h0]/(ρh0) summed over `shifts`.
pub fn a0_answer_dims(range: &Range, shifts: &[i32]) -> BTreeMap<TriDegree, usize> {
    let mut out = BTreeMap::new();
    for d in range.degrees() {
        let mut n = 0;
        for &j in shifts {
            let e = d - TriDegree::new(4 * j, 0, 2 * j);
            let (i, k) = (-e.s, e.f);
            let tau = -e.w - i;
            if i < 0 || k < 0 || tau < 0 || tau % 2 != 0 || (i > 0 && k > 0) {
                continue;
            }
            n += 1;
        }
        if n > 0 {
            out.insert(d, n);
        }
    }
    out
}

/// The four coweight pages cw ≡ 0, 1, 2, 3 (mod 4).
pub fn coweight_pages(chart: &Chart) -> [Chart; 4] {
    [0, 1, 2, 3].map(|r| chart.coweight_page(r))
}

/// Tridegrees where dim(outer) < dim(inner shifted by `by`).
pub fn nested_failures(outer: &Chart, inner: &Chart, by: TriDegree) -> Vec<TriDegree> {
    inner
        .dims
        .iter()
        .map(|(d, n)| (*d + by, *n))
        .filter(|(d, n)| outer.range.contains(*d) && outer.dim(*d) < *n && !outer.uncertified.contains(d))
        .map(|(d, _)| d)
        .collect()
}

/// Bottom cells of the cofree A(0)∨-summands of a level-0 comodule: for
/// each degree, the rank of the τ̄0-component of the coaction into it.
pub fn a0_free_cells(m: &Comodule) -> Vec<TriDegree> {
    let t0 = m.hopf().index(Am::TAU0).expect("τ̄0");
    let mut by_deg: BTreeMap<TriDegree, Vec<usize>> = BTreeMap::new();
    for (i, b) in m.basis.iter().enumerate() {
        by_deg.entry(b.deg).or_default().push(i);
    }
    let mut out = Vec::new();
    for (d, targets) in &by_deg {
        let Some(sources) = by_deg.get(&(*d + TriDegree::new(1, 0, 0))) else { continue };
        let pos: HashMap<usize, usize> = targets.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let rows: Vec<BitVec> = sources
            .iter()
            .map(|&i| {
                let ones = m.coaction[i].iter().filter(|&&(g, a, _)| a == t0 && g == Gm::ONE).filter_map(|&(_, _, j)| pos.get(&(j as usize)).copied());
                let mut v = BitVec::zeros(targets.len());
                for k in ones {
                    v.flip(k);
                }
                v
            })
            .collect();
        for _ in 0..crate::linalg::rank(&rows, targets.len()) {
            out.push(*d);
        }
    }
    out
}

/// Σ^{cell} F2[ρ, τ] on the filtration-zero line, summed over cells.
pub fn free_cell_dims(range: &Range, cells: &[TriDegree]) -> BTreeMap<TriDegree, usize> {
    let mut out = BTreeMap::new();
    for d in range.degrees().into_iter().filter(|d| d.f == 0) {
        let n = cells
            .iter()
            .filter(|c| {
                let e = d - **c;
                let i = -e.s;
                i >= 0 && -e.w - i >= 0
            })
            .count();
        if n > 0 {
            out.insert(d, n);
        }
    }
    out
}
