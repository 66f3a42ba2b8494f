//! The reduced cobar complex of a comodule, sliced by tridegree.
//!
//! A word c·[a₁|…|a_f]m has every ground scalar moved to the far left through
//! η_R, so each slice is a finite F2 basis. Letters range over non-unit
//! monomials of the algebroid.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;

use crate::chart::{operator_degree, Chart, OPERATORS};
use crate::comod::Comodule;
use crate::ext::Range;
use crate::ground::{xor_normalize, Base, Gm, TriDegree};
use crate::hopf::{Am, HopfAlgebroid};
use crate::linalg::{apply, kernel_and_image, BitVec, Echelon, Subquotient};
use crate::torsion::{quotient_chart, Torsion};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub c: Gm,
    pub letters: Vec<u8>,
    pub m: u32,
}

impl Word {
    pub fn new(c: Gm, letters: Vec<u8>, m: u32) -> Self {
        Word { c, letters, m }
    }

    pub fn filtration(&self) -> usize {
        self.letters.len()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CobarError {
    #[error("d∘d is nonzero on {0}")]
    NotDifferential(String),
    #[error("differential of {0} leaves the reduced complex")]
    Unreduced(String),
    #[error("{0} is not a cocycle")]
    NotCocycle(String),
    #[error("{0} is zero in cohomology")]
    ZeroClass(String),
    #[error("Massey product undefined: {0} is nonzero")]
    Undefined(String),
    #[error("no class named {0} in degree {1}")]
    NoClass(String, TriDegree),
}

/// One tridegree of the complex with the differential into filtration f+1.
#[derive(Clone, Debug)]
pub struct CobarSlice {
    pub degree: TriDegree,
    pub basis: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Images of the basis in the basis of the slice at degree + (−1, 1, 0).
    pub differential: Vec<BitVec>,
    pub target_dim: usize,
}

impl CobarSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn vector(&self, words: &[Word]) -> Option<BitVec> {
        let mut v = BitVec::zeros(self.dim());
        for w in words {
            v.flip(self.position(w)?);
        }
        Some(v)
    }

    pub fn words(&self, v: &BitVec) -> Vec<Word> {
        v.ones().map(|i| self.basis[i].clone()).collect()
    }
}

/// Cohomology of the complex at one tridegree.
#[derive(Clone, Debug)]
pub struct CobarGroup {
    pub degree: TriDegree,
    pub slice: Arc<CobarSlice>,
    pub sq: Subquotient,
    /// Boundaries, tagged by the incoming slice's basis.
    boundaries: Echelon,
}

impl CobarGroup {
    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    pub fn reps(&self) -> &[BitVec] {
        self.sq.reps()
    }

    pub fn coords(&self, z: &BitVec) -> Option<BitVec> {
        self.sq.coords(z)
    }

    /// A cochain with coboundary `z`, in the incoming slice's basis.
    pub fn bound(&self, z: &BitVec) -> Option<BitVec> {
        self.boundaries.solve(z)
    }
}

/// A named cohomology class of Ext of the ground ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub name: String,
    pub degree: TriDegree,
    pub rep: Vec<Word>,
}

impl fmt::Display for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.degree)
    }
}

pub fn word_label(h: &HopfAlgebroid, m: &Comodule, w: &Word) -> String {
    let letters: Vec<String> = w.letters.iter().map(|&k| h.monomial(k).label()).collect();
    format!("{}[{}]{}", w.c, letters.join("|"), m.basis[w.m as usize].label)
}

fn letter_degree(h: &HopfAlgebroid, k: u8) -> (i32, i32) {
    h.tw(k)
}

pub fn word_degree(h: &HopfAlgebroid, m: &Comodule, w: &Word) -> TriDegree {
    let mb = m.basis[w.m as usize].deg;
    let (mut t, mut wt) = (mb.s, mb.w);
    for &k in &w.letters {
        let (a, b) = letter_degree(h, k);
        t += a;
        wt += b;
    }
    let (gs, gw) = w.c.sw();
    let f = w.letters.len() as i32;
    TriDegree::new(t + gs - f, f, wt + gw)
}

/// The cobar complex of a comodule with cached slices.
pub struct Cobar {
    pub module: Comodule,
    hopf: &'static HopfAlgebroid,
    reversed: bool,
    slices: Mutex<HashMap<TriDegree, Arc<CobarSlice>>>,
    groups: Mutex<HashMap<TriDegree, Arc<CobarGroup>>>,
    moves: RwLock<HashMap<(u8, Gm), Arc<Vec<(u8, Gm)>>>>,
}

const D: TriDegree = TriDegree::new(-1, 1, 0);

impl Cobar {
    pub fn new(module: Comodule) -> Self {
        let hopf = module.hopf();
        Cobar { module, hopf, reversed: false, slices: Mutex::default(), groups: Mutex::default(), moves: RwLock::default() }
    }

    /// Same complex with every slice basis listed in reverse order.
    pub fn reversed(module: Comodule) -> Self {
        Cobar { reversed: true, ..Cobar::new(module) }
    }

    pub fn hopf(&self) -> &'static HopfAlgebroid {
        self.hopf
    }

    pub fn base(&self) -> Base {
        self.module.base
    }

    pub fn label(&self, w: &Word) -> String {
        word_label(self.hopf, &self.module, w)
    }

    fn letters(&self) -> Vec<u8> {
        (1..self.hopf.rank() as u8).collect()
    }

    /// All reduced words of a tridegree, sorted.
    pub fn words(&self, d: TriDegree) -> Vec<Word> {
        if d.f < 0 {
            return Vec::new();
        }
        let f = d.f as usize;
        let slack = self.module.basis.iter().map(|b| b.deg.w - b.deg.s).max();
        let Some(slack) = slack else { return Vec::new() };
        let k = d.s + d.f - d.w + slack;
        let letters: Vec<(u8, i32, i32)> = self
            .letters()
            .into_iter()
            .map(|l| {
                let (t, w) = letter_degree(self.hopf, l);
                (l, t, w)
            })
            .collect();
        let mut out = Vec::new();
        let mut stack: Vec<u8> = Vec::with_capacity(f);
        self.extend_words(d, f, k, &letters, &mut stack, 0, 0, &mut out);
        out.sort();
        if self.reversed {
            out.reverse();
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_words(&self, d: TriDegree, f: usize, k: i32, letters: &[(u8, i32, i32)], stack: &mut Vec<u8>, t: i32, w: i32, out: &mut Vec<Word>) {
        if (t - w) + (f - stack.len()) as i32 > k {
            return;
        }
        if stack.len() == f {
            for (j, b) in self.module.basis.iter().enumerate() {
                let r = t + b.deg.s - d.s - d.f;
                if r < 0 || (r > 0 && !self.module.base.has_rho()) {
                    continue;
                }
                let tt = w + b.deg.w - r - d.w;
                if tt < 0 {
                    continue;
                }
                out.push(Word::new(Gm::new(tt as u32, r as u32), stack.clone(), j as u32));
            }
            return;
        }
        for &(l, lt, lw) in letters {
            stack.push(l);
            self.extend_words(d, f, k, letters, stack, t + lt, w + lw, out);
            stack.pop();
        }
    }

    /// prefix ⊗ c·(…) rewritten with c on the far left.
    fn push_left(&self, prefix: &[u8], c: Gm, out: &mut Vec<(Gm, Vec<u8>)>) {
        if prefix.is_empty() || c.t == 0 {
            out.push((c, prefix.to_vec()));
            return;
        }
        let (&last, rest) = prefix.split_last().unwrap();
        let moved = self.move_through(last, c);
        for &(k, g) in moved.iter() {
            let mut sub = Vec::new();
            self.push_left(rest, g, &mut sub);
            for (g2, mut p) in sub {
                p.push(k);
                out.push((g2, p));
            }
        }
    }

    /// e_k·η_R(c) in left normal form.
    fn move_through(&self, k: u8, c: Gm) -> Arc<Vec<(u8, Gm)>> {
        if let Some(v) = self.moves.read().unwrap().get(&(k, c)) {
            return v.clone();
        }
        let v = Arc::new(self.hopf.mul(&vec![(k, Gm::ONE)], &self.hopf.eta_r(c)));
        self.moves.write().unwrap().insert((k, c), v.clone());
        v
    }

    /// The coboundary of a single word, reduced mod 2.
    pub fn d(&self, w: &Word) -> Vec<Word> {
        let h = self.hopf;
        let mut out: Vec<Word> = Vec::new();
        for (k, g) in h.eta_r(w.c) {
            let mut letters = Vec::with_capacity(w.letters.len() + 1);
            letters.push(k);
            letters.extend_from_slice(&w.letters);
            out.push(Word::new(g, letters, w.m));
        }
        let mut moved = Vec::new();
        for i in 0..w.letters.len() {
            for &(g, l, r) in h.delta_basis(w.letters[i]) {
                moved.clear();
                self.push_left(&w.letters[..i], g, &mut moved);
                for (g2, p) in moved.drain(..) {
                    let mut letters = p;
                    letters.push(l);
                    letters.push(r);
                    letters.extend_from_slice(&w.letters[i + 1..]);
                    out.push(Word::new(w.c.mul(g2), letters, w.m));
                }
            }
        }
        for &(g, a, m2) in &self.module.coaction[w.m as usize] {
            moved.clear();
            self.push_left(&w.letters, g, &mut moved);
            for (g2, p) in moved.drain(..) {
                let mut letters = p;
                letters.push(a);
                out.push(Word::new(w.c.mul(g2), letters, m2));
            }
        }
        xor_normalize(&mut out);
        out
    }

    pub fn d_sum(&self, ws: &[Word]) -> Vec<Word> {
        let mut out: Vec<Word> = ws.iter().flat_map(|w| self.d(w)).collect();
        xor_normalize(&mut out);
        out
    }

    fn build(&self, d: TriDegree) -> Result<CobarSlice, CobarError> {
        let basis = self.words(d);
        let index: HashMap<Word, usize> = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let target = self.words(d + D);
        let tindex: HashMap<&Word, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut differential = Vec::with_capacity(basis.len());
        for w in &basis {
            let dw = self.d(w);
            let mut v = BitVec::zeros(target.len());
            for x in &dw {
                match tindex.get(x) {
                    Some(&i) => v.flip(i),
                    None => return Err(CobarError::Unreduced(self.label(w))),
                }
            }
            differential.push(v);
        }
        Ok(CobarSlice { degree: d, basis, index, differential, target_dim: target.len() })
    }

    /// The slice at `d`. Composites d∘d are checked when groups are formed.
    pub fn slice(&self, d: TriDegree) -> Result<Arc<CobarSlice>, CobarError> {
        if let Some(s) = self.slices.lock().unwrap().get(&d) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.build(d)?);
        self.slices.lock().unwrap().insert(d, s.clone());
        Ok(s)
    }

    pub fn group(&self, d: TriDegree) -> Result<Arc<CobarGroup>, CobarError> {
        if let Some(g) = self.groups.lock().unwrap().get(&d) {
            return Ok(g.clone());
        }
        let slice = self.slice(d)?;
        let (cycles, _) = kernel_and_image(&slice.differential, slice.target_dim);
        let boundaries = if d.f > 0 {
            let inc = self.slice(d - D)?;
            check_square_zero(&inc, &slice).map_err(|i| CobarError::NotDifferential(self.label(&inc.basis[i])))?;
            kernel_and_image(&inc.differential, inc.target_dim).1
        } else {
            Echelon::new(slice.dim(), 0)
        };
        let sq = Subquotient::new(slice.dim(), &boundaries, &cycles);
        let g = Arc::new(CobarGroup { degree: d, slice, sq, boundaries });
        self.groups.lock().unwrap().insert(d, g.clone());
        Ok(g)
    }

    pub fn dim(&self, d: TriDegree) -> Result<usize, CobarError> {
        Ok(self.group(d)?.dim())
    }

    /// α·x for a cochain α of the ground ring's complex and x of this one.
    pub fn product(&self, alpha: &[Word], x: &[Word]) -> Vec<Word> {
        let mut out = Vec::new();
        let mut moved = Vec::new();
        for a in alpha {
            for w in x {
                moved.clear();
                self.push_left(&a.letters, w.c, &mut moved);
                for (g, p) in moved.drain(..) {
                    let mut letters = p;
                    letters.extend_from_slice(&w.letters);
                    out.push(Word::new(a.c.mul(g), letters, w.m));
                }
            }
        }
        xor_normalize(&mut out);
        out
    }

    /// Cohomology coordinates of a cocycle given as words.
    pub fn class_of(&self, d: TriDegree, z: &[Word]) -> Result<BitVec, CobarError> {
        let g = self.group(d)?;
        let v = g.slice.vector(z).ok_or_else(|| CobarError::NotCocycle(format!("cochain in {d}")))?;
        g.coords(&v).ok_or_else(|| CobarError::NotCocycle(format!("cochain in {d}")))
    }

    /// Matrix of x ↦ α·x from `d` to `d + |α|`, in cohomology bases.
    pub fn action_matrix(&self, alpha: &ExtClass, d: TriDegree) -> Result<Vec<BitVec>, CobarError> {
        let src = self.group(d)?;
        let tgt = self.group(d + alpha.degree)?;
        src.reps()
            .iter()
            .map(|z| {
                let p = self.product(&alpha.rep, &src.slice.words(z));
                let v = tgt.slice.vector(&p).ok_or_else(|| CobarError::Unreduced(alpha.name.clone()))?;
                tgt.coords(&v).ok_or_else(|| CobarError::NotCocycle(format!("{}·x", alpha.name)))
            })
            .collect()
    }

    /// Ext dimensions over a range, in parallel over tridegrees.
    pub fn dims(&self, range: &Range) -> Result<BTreeMap<TriDegree, usize>, CobarError> {
        let res: Result<Vec<(TriDegree, usize)>, CobarError> =
            range.degrees().into_par_iter().map(|d| Ok((d, self.dim(d)?))).collect();
        Ok(res?.into_iter().filter(|(_, n)| *n > 0).collect())
    }

    /// A chart with the actions of the named classes available in this base.
    pub fn chart(&self, range: &Range, ops: &[&str]) -> Result<Chart, CobarError> {
        let mut chart = Chart::empty(self.base(), self.module.name.clone(), *range);
        chart.dims = self.dims(range)?;
        let unit = Cobar::new(Comodule::ground(self.base(), self.module.level));
        for &op in ops {
            let Some(alpha) = ExtClass::named(&unit, op)? else { continue };
            let od = alpha.degree;
            let rows: Result<Vec<(TriDegree, Option<Vec<BitVec>>)>, CobarError> = chart
                .dims
                .par_iter()
                .map(|(d, _)| {
                    if !range.contains(*d + od) {
                        return Ok((*d, None));
                    }
                    Ok((*d, Some(self.action_matrix(&alpha, *d)?)))
                })
                .collect();
            let entry = chart.actions.entry(op.to_string()).or_default();
            for (d, m) in rows? {
                match m {
                    Some(m) => {
                        entry.insert(d, m);
                    }
                    None => {
                        chart.border.insert(d);
                    }
                }
            }
        }
        Ok(chart)
    }
}

impl ExtClass {
    /// c·[a₁|…] from explicit words; checked to be a nonzero class.
    pub fn from_words(unit: &Cobar, name: &str, rep: Vec<Word>) -> Result<Self, CobarError> {
        let d = word_degree(unit.hopf(), &unit.module, &rep[0]);
        let coords = unit.class_of(d, &rep).map_err(|_| CobarError::NotCocycle(name.to_string()))?;
        if coords.is_zero() {
            return Err(CobarError::ZeroClass(name.to_string()));
        }
        Ok(ExtClass { name: name.to_string(), degree: d, rep })
    }

    pub fn ground(unit: &Cobar, name: &str, c: Gm) -> Result<Self, CobarError> {
        Self::from_words(unit, name, vec![Word::new(c, vec![], 0)])
    }

    pub fn letter(unit: &Cobar, name: &str, m: Am) -> Result<Self, CobarError> {
        let k = unit.hopf().index(m).ok_or_else(|| CobarError::NoClass(name.to_string(), TriDegree::ZERO))?;
        Self::from_words(unit, name, vec![Word::new(Gm::ONE, vec![k], 0)])
    }

    /// The unique nonzero class in a tridegree of dimension one.
    pub fn located(unit: &Cobar, name: &str, d: TriDegree) -> Result<Self, CobarError> {
        let g = unit.group(d)?;
        if g.dim() != 1 {
            return Err(CobarError::NoClass(name.to_string(), d));
        }
        Ok(ExtClass { name: name.to_string(), degree: d, rep: g.slice.words(&g.reps()[0]) })
    }

    /// Chart operators by name: h0 = [τ̄0], h1 = [ξ̄1], ground monomials, and
    /// the rest located by degree. `None` when absent over this base.
    pub fn named(unit: &Cobar, op: &str) -> Result<Option<Self>, CobarError> {
        let level = unit.module.level;
        let r = match op {
            "h0" => Self::letter(unit, op, Am::TAU0),
            "h1" if level == 1 => Self::letter(unit, op, Am::XI1),
            "rho" if unit.base().has_rho() => Self::ground(unit, op, Gm::RHO),
            "tau4" => Self::ground(unit, op, Gm::new(4, 0)),
            "tau" | "tau2" => Self::ground(unit, op, Gm::new(if op == "tau" { 1 } else { 2 }, 0)),
            "h1" | "rho" => return Ok(None),
            _ if level == 0 => return Ok(None),
            _ => match operator_degree(op) {
                Some(d) => Self::located(unit, op, d),
                None => return Ok(None),
            },
        };
        match r {
            Ok(c) => Ok(Some(c)),
            Err(CobarError::ZeroClass(_)) | Err(CobarError::NotCocycle(_)) | Err(CobarError::NoClass(..)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Index of a word of `a` on which the composite differential is nonzero.
fn check_square_zero(a: &CobarSlice, b: &CobarSlice) -> Result<(), usize> {
    for (i, v) in a.differential.iter().enumerate() {
        if !apply(&b.differential, b.target_dim, v).is_zero() {
            return Err(i);
        }
    }
    Ok(())
}

/// The slice at `d`, with d∘d = 0 checked against the next slice.
pub fn build_slice(m: &Comodule, d: TriDegree) -> Result<CobarSlice, CobarError> {
    let c = Cobar::new(m.clone());
    let s = c.build(d)?;
    let next = c.build(d + D)?;
    check_square_zero(&s, &next).map_err(|i| CobarError::NotDifferential(c.label(&s.basis[i])))?;
    Ok(s)
}

/// Ext over a range with the actions of h0, h1, ρ and τ⁴.
pub fn ext_dimensions(m: &Comodule, range: &Range) -> Result<Chart, CobarError> {
    Cobar::new(m.clone()).chart(range, &["h0", "h1", "rho", "tau4"])
}

/// Primitives: the filtration-zero line.
pub fn f0_line(m: &Comodule, range: &Range) -> Result<Chart, CobarError> {
    let r = Range::new(range.s, (0, 0), range.w);
    Cobar::new(m.clone()).chart(&r, &["rho", "tau4"])
}

/// Record the action of a class on a chart computed from the same complex.
/// Sources whose target leaves the range go to the border set.
pub fn act(alpha: &ExtClass, chart: &mut Chart, cobar: &Cobar) -> Result<(), CobarError> {
    let mut rows = BTreeMap::new();
    for d in chart.dims.keys() {
        let td = *d + alpha.degree;
        if chart.range.contains(td) {
            rows.insert(*d, cobar.action_matrix(alpha, *d)?);
        } else {
            chart.border.insert(*d);
        }
    }
    chart.actions.insert(alpha.name.clone(), rows);
    Ok(())
}

/// ⟨α, β, γ⟩ with its indeterminacy α·Ext + Ext·γ, all in the cohomology
/// basis of the target tridegree.
#[derive(Clone, Debug)]
pub struct Massey {
    pub degree: TriDegree,
    pub value: BitVec,
    pub indeterminacy: Vec<BitVec>,
}

impl Massey {
    pub fn contains(&self, x: &BitVec) -> bool {
        let mut e = Echelon::new(x.len(), 0);
        for v in &self.indeterminacy {
            e.insert(v.clone());
        }
        let mut y = x.clone();
        y.xor_assign(&self.value);
        e.contains(&y)
    }

    pub fn indeterminacy_dim(&self) -> usize {
        crate::linalg::rank(&self.indeterminacy, self.value.len())
    }
}

/// α, β in Ext of the ground ring (the `unit` complex), γ in Ext of `m`.
pub fn massey_triple(unit: &Cobar, m: &Cobar, alpha: &ExtClass, beta: &ExtClass, gamma: &ExtClass) -> Result<Massey, CobarError> {
    let shift = TriDegree::new(1, -1, 0);
    let ab_deg = alpha.degree + beta.degree;
    let bg_deg = beta.degree + gamma.degree;
    let ab = unit.product(&alpha.rep, &beta.rep);
    let bg = m.product(&beta.rep, &gamma.rep);
    let a_bound = bounding(unit, ab_deg, &ab).ok_or_else(|| CobarError::Undefined(format!("{}·{}", alpha.name, beta.name)))?;
    let b_bound = bounding(m, bg_deg, &bg).ok_or_else(|| CobarError::Undefined(format!("{}·{}", beta.name, gamma.name)))?;
    let mut z = m.product(&a_bound, &gamma.rep);
    z.extend(m.product(&alpha.rep, &b_bound));
    xor_normalize(&mut z);
    let degree = ab_deg + gamma.degree + shift;
    let value = m.class_of(degree, &z)?;
    let mut indeterminacy = Vec::new();
    let left_src = bg_deg + shift;
    let g = m.group(left_src)?;
    for r in g.reps() {
        let p = m.product(&alpha.rep, &g.slice.words(r));
        indeterminacy.push(m.class_of(degree, &p)?);
    }
    let right_src = ab_deg + shift;
    let g = unit.group(right_src)?;
    for r in g.reps() {
        let p = m.product(&g.slice.words(r), &gamma.rep);
        indeterminacy.push(m.class_of(degree, &p)?);
    }
    Ok(Massey { degree, value, indeterminacy })
}

/// A cochain whose coboundary is `z`, if `z` is a coboundary.
pub fn bounding(c: &Cobar, d: TriDegree, z: &[Word]) -> Option<Vec<Word>> {
    if z.is_empty() {
        return Some(Vec::new());
    }
    if d.f == 0 {
        return None;
    }
    let g = c.group(d).ok()?;
    let v = g.slice.vector(z)?;
    let pre = g.bound(&v)?;
    let inc = c.slice(d - D).ok()?;
    Some(inc.words(&pre))
}

/// The quotient of a chart by b-power torsion using only the chart's own
/// b-action. A class whose b-multiples leave the range before the kernels
/// stabilize is flagged uncertified.
pub fn b_torsion_quotient(chart: &Chart) -> Chart {
    let bd = operator_degree("b").expect("b");
    let empty = BTreeMap::new();
    let bmaps = chart.actions.get("b").unwrap_or(&empty);
    let mut torsion = BTreeMap::new();
    for (d, &n) in &chart.dims {
        let mut cols: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
        let mut deg = *d;
        let mut prev = 0;
        let mut basis = Vec::new();
        let mut stable_at = None;
        for m in 1.. {
            let tdim = chart.dim(deg + bd);
            let Some(step) = bmaps.get(&deg) else { break };
            cols = cols.iter().map(|c| apply(step, tdim, c)).collect();
            deg = deg + bd;
            let (kernel, _) = kernel_and_image(&cols, tdim);
            if m > 1 && kernel.len() == prev {
                stable_at = Some(m - 1);
                break;
            }
            prev = kernel.len();
            basis = kernel;
            if prev == n {
                stable_at = Some(m);
                break;
            }
        }
        torsion.insert(*d, Torsion { basis, stable_at });
    }
    quotient_chart(chart, &torsion)
}

/// Names of every chart operator, for callers wanting the full set.
pub fn all_operators() -> Vec<&'static str> {
    OPERATORS.iter().map(|(n, _)| *n).collect()
}
