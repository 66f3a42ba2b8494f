//! Minimal free resolutions of the ground ring over the dual algebra.
//!
//! Generator degrees are read off from a resolution over the finite algebra
//! C/(τ, ρ), which is computed by exhaustive sweep. The full resolution then
//! only visits those degrees.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use crate::algebra::{dual_algebra, CModule, DualAlgebra, Shape};
use crate::comod::Comodule;
use crate::ground::{xor_normalize, Base, Gm};
use crate::linalg::{kernel_and_image, BitVec, Echelon};

/// Σ f_{k,c}·g as triples (g, k, c). In filtration −1, the target of the
/// augmentation, triples (b, 0, c) denote c·b in the ground module.
pub type FreeElement = Vec<(u32, u8, Gm)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub t: i32,
    pub q: i32,
    pub d: FreeElement,
}

/// A basis of one bidegree of a free module.
#[derive(Clone, Debug, Default)]
pub struct FreeSlice {
    pub entries: Vec<(u32, u8, Gm)>,
    index: HashMap<(u32, u8), u32>,
}

impl FreeSlice {
    fn from_entries(entries: Vec<(u32, u8, Gm)>) -> Self {
        let index = entries.iter().enumerate().map(|(i, &(g, k, _))| ((g, k), i as u32)).collect();
        FreeSlice { entries, index }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn position(&self, g: u32, k: u8) -> Option<usize> {
        self.index.get(&(g, k)).map(|&i| i as usize)
    }

    pub fn vector(&self, x: &FreeElement) -> BitVec {
        let mut v = BitVec::zeros(self.dim());
        for &(g, k, c) in x {
            let i = self.position(g, k).unwrap_or_else(|| panic!("term ({g},{k},{c}) outside slice"));
            debug_assert_eq!(self.entries[i].2, c);
            v.flip(i);
        }
        v
    }

    pub fn element(&self, v: &BitVec) -> FreeElement {
        v.ones().map(|i| self.entries[i]).collect()
    }
}

pub struct Resolution {
    pub alg: &'static DualAlgebra,
    unit: CModule,
    gens: Vec<Vec<Generator>>,
    computed: Option<(usize, i32)>,
    reduced: Option<Box<Resolution>>,
    lifts: RwLock<HashMap<(usize, i32, i32), Arc<(FreeSlice, Echelon)>>>,
}

impl Clone for Resolution {
    fn clone(&self) -> Self {
        Resolution {
            alg: self.alg,
            unit: self.unit.clone(),
            gens: self.gens.clone(),
            computed: self.computed,
            reduced: self.reduced.clone(),
            lifts: RwLock::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Resolution({:?}, {:?})", self.alg, self.computed)
    }
}

impl Resolution {
    pub fn new(base: Base, level: u8, shape: Shape) -> Self {
        let reduced = (shape == Shape::Full).then(|| Box::new(Resolution::new(base, level, Shape::Reduced)));
        Resolution {
            alg: dual_algebra(base, level, shape),
            unit: CModule::new(Comodule::ground(base, level), shape, false),
            gens: Vec::new(),
            computed: None,
            reduced,
            lifts: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> Base {
        self.alg.base
    }

    pub fn level(&self) -> u8 {
        self.alg.level
    }

    /// Highest filtration and internal degree resolved so far.
    pub fn range(&self) -> Option<(usize, i32)> {
        self.computed
    }

    pub fn covers(&self, f: usize, t: i32) -> bool {
        matches!(self.computed, Some((fm, tm)) if f <= fm && t <= tm)
    }

    pub fn gens(&self, f: usize) -> &[Generator] {
        self.gens.get(f).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn unit(&self) -> &CModule {
        &self.unit
    }

    /// Basis of P_f in bidegree (t, q).
    pub fn slice(&self, f: usize, t: i32, q: i32) -> FreeSlice {
        let mut entries = Vec::new();
        for (gi, g) in self.gens(f).iter().enumerate() {
            if g.t > t || g.q > q {
                continue;
            }
            for k in 0..self.alg.rank as u8 {
                if let Some(c) = self.alg.coeff_in_degree(k, t - g.t, q - g.q) {
                    entries.push((gi as u32, k, c));
                }
            }
        }
        FreeSlice::from_entries(entries)
    }

    /// Basis of the ground module in cohomological bidegree (t, q).
    fn unit_slice(&self, t: i32, q: i32) -> FreeSlice {
        let ok = t >= 0 && q >= t && (self.alg.base == Base::R || t == 0) && (self.alg.shape == Shape::Full || (t == 0 && q == 0));
        FreeSlice::from_entries(if ok { vec![(0, 0, Gm::new((q - t) as u32, t as u32))] } else { Vec::new() })
    }

    /// Target of d_f in bidegree (t, q).
    pub fn target_slice(&self, f: usize, t: i32, q: i32) -> FreeSlice {
        if f == 0 {
            self.unit_slice(t, q)
        } else {
            self.slice(f - 1, t, q)
        }
    }

    /// d_f(f_{k,c}·g), unnormalized, appended to `out`.
    fn d_into(&self, f: usize, g: u32, k: u8, c: Gm, out: &mut FreeElement) {
        let gen = &self.gens[f][g as usize];
        if f == 0 {
            let mut v = Vec::new();
            for &(b, _, c2) in &gen.d {
                self.unit.act_into(k, c, c2, b, &mut v);
            }
            out.extend(v.into_iter().map(|(r, b)| (b, 0, r)));
            return;
        }
        let mut v = Vec::new();
        for &(h, k2, c2) in &gen.d {
            v.clear();
            self.alg.mul_into(k, c, k2, c2, &mut v);
            out.extend(v.iter().map(|&(m, r)| (h, m, r)));
        }
    }

    pub fn d(&self, f: usize, x: &FreeElement) -> FreeElement {
        let mut out = Vec::new();
        for &(g, k, c) in x {
            self.d_into(f, g, k, c, &mut out);
        }
        xor_normalize(&mut out);
        out
    }

    fn d_matrix(&self, f: usize, src: &FreeSlice, tgt: &FreeSlice) -> Vec<BitVec> {
        let mut buf = Vec::new();
        src.entries
            .iter()
            .map(|&(g, k, c)| {
                buf.clear();
                self.d_into(f, g, k, c, &mut buf);
                xor_normalize(&mut buf);
                tgt.vector(&buf)
            })
            .collect()
    }

    /// Kernel of d_{f-1} modulo the image of d_f in bidegree (t, q).
    fn cokernel_reps(&self, f: usize, t: i32, q: i32) -> (FreeSlice, Vec<BitVec>) {
        let tgt = self.target_slice(f, t, q);
        let kernel = if f == 0 {
            (0..tgt.dim()).map(|i| BitVec::unit(tgt.dim(), i)).collect()
        } else {
            let nxt = self.target_slice(f - 1, t, q);
            kernel_and_image(&self.d_matrix(f - 1, &tgt, &nxt), nxt.dim()).0
        };
        let src = self.slice(f, t, q);
        let mut ech = Echelon::new(tgt.dim(), 0);
        for v in self.d_matrix(f, &src, &tgt) {
            ech.insert(v);
        }
        let mut reps = Vec::new();
        for z in kernel {
            let mut v = z.clone();
            ech.reduce(&mut v);
            if !v.is_zero() {
                ech.insert(v);
                reps.push(z);
            }
        }
        (tgt, reps)
    }

    /// Dimension of the homology of the augmented complex at P_{f-1} in
    /// bidegree (t, q). Zero everywhere in the resolved range.
    pub fn homology_dim(&self, f: usize, t: i32, q: i32) -> usize {
        assert!(self.covers(f, t));
        self.cokernel_reps(f, t, q).1.len()
    }

    fn process(&mut self, f: usize, t: i32, q: i32, expect: Option<usize>) {
        let (tgt, reps) = self.cokernel_reps(f, t, q);
        if let Some(n) = expect {
            assert_eq!(reps.len(), n, "generator count mismatch at f={f} ({t},{q})");
        }
        for z in reps {
            self.gens[f].push(Generator { t, q, d: tgt.element(&z) });
        }
    }

    /// Resolve through filtration `f_max` and internal degree `t_max`.
    pub fn ensure(&mut self, f_max: usize, t_max: i32) {
        if self.covers(f_max, t_max) {
            return;
        }
        let (old_f, old_t) = match self.computed {
            Some((a, b)) => (a as i64, b),
            None => (-1, -1),
        };
        let nf = f_max.max(old_f.max(0) as usize);
        let nt = t_max.max(old_t);
        if let Some(r) = &mut self.reduced {
            r.ensure(nf, nt);
        }
        self.lifts.write().unwrap().clear();
        while self.gens.len() <= nf {
            self.gens.push(Vec::new());
        }
        for f in 0..=nf {
            let t_from = if (f as i64) <= old_f { old_t + 1 } else { 0 };
            match &self.reduced {
                Some(r) => {
                    let mut degs: Vec<(i32, i32)> = r.gens(f).iter().filter(|g| g.t >= t_from && g.t <= nt).map(|g| (g.t, g.q)).collect();
                    degs.sort_unstable();
                    let mut i = 0;
                    while i < degs.len() {
                        let mut j = i;
                        while j < degs.len() && degs[j] == degs[i] {
                            j += 1;
                        }
                        self.process(f, degs[i].0, degs[i].1, Some(j - i));
                        i = j;
                    }
                }
                None => {
                    for t in t_from..=nt {
                        for q in 0..=t {
                            self.process(f, t, q, None);
                        }
                    }
                }
            }
        }
        self.computed = Some((nf, nt));
    }

    /// Some x in P_f with d_f(x) = y, where y lies in bidegree (t, q).
    pub fn lift(&self, f: usize, t: i32, q: i32, y: &FreeElement) -> Option<FreeElement> {
        assert!(self.covers(f, t), "lift outside resolved range");
        let cached = self.lifts.read().unwrap().get(&(f, t, q)).cloned();
        let entry = match cached {
            Some(e) => e,
            None => {
                let src = self.slice(f, t, q);
                let tgt = self.target_slice(f, t, q);
                let (_, ech) = kernel_and_image(&self.d_matrix(f, &src, &tgt), tgt.dim());
                let e = Arc::new((src, ech));
                self.lifts.write().unwrap().insert((f, t, q), e.clone());
                e
            }
        };
        let tgt = self.target_slice(f, t, q);
        let tag = entry.1.solve(&tgt.vector(y))?;
        Some(entry.0.element(&tag))
    }

    /// Verify d∘d = 0 on every generator.
    pub fn check_d_squared(&self) -> Result<(), String> {
        for f in 1..self.gens.len() {
            for (i, g) in self.gens[f].iter().enumerate() {
                if !self.d(f - 1, &g.d).is_empty() {
                    return Err(format!("d∘d ≠ 0 on generator {i} of P_{f}"));
                }
            }
        }
        Ok(())
    }
}

fn cache() -> &'static Mutex<HashMap<(Base, u8), Arc<Resolution>>> {
    static C: OnceLock<Mutex<HashMap<(Base, u8), Arc<Resolution>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// A shared resolution over C covering at least (f_max, t_max).
pub fn resolution(base: Base, level: u8, f_max: usize, t_max: i32) -> Arc<Resolution> {
    let mut map = cache().lock().unwrap();
    if let Some(r) = map.get(&(base, level)) {
        if r.covers(f_max, t_max) {
            return r.clone();
        }
    }
    let mut r = match map.get(&(base, level)) {
        Some(r) => (**r).clone(),
        None => Resolution::new(base, level, Shape::Full),
    };
    let (f0, t0) = r.range().unwrap_or((0, 0));
    r.ensure(f_max.max(f0), t_max.max(t0));
    let r = Arc::new(r);
    map.insert((base, level), r.clone());
    r
}
