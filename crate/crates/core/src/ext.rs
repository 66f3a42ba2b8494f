//! Ext of comodules as the cohomology of Hom from a minimal resolution of the
//! ground ring, with Yoneda products by classes of Ext of the ground ring.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{CModule, Shape};
use crate::comod::Comodule;
use crate::ground::{xor_normalize, Base, Gm, TriDegree};
use crate::linalg::{kernel_and_image, BitVec, Echelon, Subquotient};
use crate::resolution::{resolution, FreeElement, Resolution};

/// Closed intervals of stem, filtration and weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Range {
    pub s: (i32, i32),
    pub f: (i32, i32),
    pub w: (i32, i32),
}

impl std::fmt::Display for Range {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s={}..{} f={}..{} w={}..{}", self.s.0, self.s.1, self.f.0, self.f.1, self.w.0, self.w.1)
    }
}

impl Range {
    pub const DEFAULT: Range = Range { s: (-8, 20), f: (0, 12), w: (-12, 14) };

    pub fn new(s: (i32, i32), f: (i32, i32), w: (i32, i32)) -> Self {
        Range { s, f, w }
    }

    pub fn contains(&self, d: TriDegree) -> bool {
        (self.s.0..=self.s.1).contains(&d.s) && (self.f.0..=self.f.1).contains(&d.f) && (self.w.0..=self.w.1).contains(&d.w)
    }

    pub fn degrees(&self) -> Vec<TriDegree> {
        let mut v = Vec::new();
        for s in self.s.0..=self.s.1 {
            for f in self.f.0.max(0)..=self.f.1 {
                for w in self.w.0..=self.w.1 {
                    v.push(TriDegree::new(s, f, w));
                }
            }
        }
        v
    }

    /// Largest t − w + 1 over the range, the quantity bounding the
    /// resolution degrees that Hom slices can see.
    fn max_coweight_plus_f(&self) -> i32 {
        self.s.1 + self.f.1 + 1 - self.w.0
    }
}

/// A map of free resolutions of filtration shift `q` and internal bidegree
/// `tw`, stored by generator: `rev[n][g]` lists (g′, k, c) such that the
/// image of g′ ∈ P_{n+q} contains f_{k,c}·g with g ∈ P_n.
#[derive(Clone, Debug)]
pub struct GenMap {
    pub q: usize,
    pub tw: (i32, i32),
    rev: Vec<Vec<Vec<(u32, u8, Gm)>>>,
}

impl GenMap {
    /// `images[n][g′]` is the image of generator g′ of P_{n+q} in P_n.
    pub fn from_images(res: &Resolution, q: usize, tw: (i32, i32), images: &[Vec<FreeElement>]) -> Self {
        let mut rev: Vec<Vec<Vec<(u32, u8, Gm)>>> = (0..images.len()).map(|n| vec![Vec::new(); res.gens(n).len()]).collect();
        for (n, imgs) in images.iter().enumerate() {
            for (gp, img) in imgs.iter().enumerate() {
                for &(g, k, c) in img {
                    rev[n][g as usize].push((gp as u32, k, c));
                }
            }
        }
        GenMap { q, tw, rev }
    }

    pub fn differential(res: &Resolution) -> Self {
        let (fm, _) = res.range().expect("resolution computed");
        let images: Vec<Vec<FreeElement>> = (0..fm).map(|n| res.gens(n + 1).iter().map(|g| g.d.clone()).collect()).collect();
        Self::from_images(res, 1, (0, 0), &images)
    }

    /// Highest source filtration n for which the map is known.
    pub fn depth(&self) -> usize {
        self.rev.len()
    }

    fn terms(&self, n: usize, g: u32) -> &[(u32, u8, Gm)] {
        self.rev.get(n).and_then(|v| v.get(g as usize)).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Cochains φ: P_f → M of internal bidegree (t, w), with basis the
/// functions sending one generator g to c·b.
#[derive(Clone, Debug)]
pub struct CochainSlice {
    pub f: usize,
    pub t: i32,
    pub w: i32,
    pub entries: Vec<(u32, u32, Gm)>,
    index: HashMap<(u32, u32), u32>,
}

impl CochainSlice {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn position(&self, g: u32, b: u32) -> Option<usize> {
        self.index.get(&(g, b)).map(|&i| i as usize)
    }

    pub fn degree(&self) -> TriDegree {
        TriDegree::new(self.t - self.f as i32, self.f as i32, self.w)
    }
}

/// One Ext group together with the cochain model it was computed in.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub deg: TriDegree,
    pub cochains: CochainSlice,
    pub sq: Subquotient,
}

impl ExtGroup {
    pub fn dim(&self) -> usize {
        self.sq.dim()
    }

    pub fn reps(&self) -> &[BitVec] {
        self.sq.reps()
    }

    /// Coordinates of a cocycle in the chosen basis.
    pub fn coords(&self, z: &BitVec) -> BitVec {
        self.sq.coords(z).expect("not a cocycle")
    }
}

/// Ext of a comodule over A(n)∨, computed slice by slice.
pub struct ExtComputer {
    pub res: Arc<Resolution>,
    pub module: CModule,
    pub name: String,
    dmap: GenMap,
}

/// Resolution degree needed so that Hom slices through filtration `f_top`
/// and coweight-plus-filtration `cwf` are complete.
fn t_cap(module: &CModule, cwf: i32) -> i32 {
    let slack = (0..module.rank() as u32).map(|b| module.tw(b)).map(|(t, w)| w - t).max().unwrap_or(0);
    (2 * (cwf + slack)).max(0) + 2
}

impl ExtComputer {
    /// Ext of `module`, complete for every tridegree of `range`.
    pub fn new(name: impl Into<String>, module: CModule, range: &Range) -> Self {
        let f_top = range.f.1.max(0) as usize + 1;
        let cap = t_cap(&module, range.max_coweight_plus_f());
        let res = resolution(module.comod.base, module.comod.level, f_top, cap);
        Self::with_resolution(name, module, res)
    }

    pub fn with_resolution(name: impl Into<String>, module: CModule, res: Arc<Resolution>) -> Self {
        assert_eq!(module.alg.shape, Shape::Full);
        let dmap = GenMap::differential(&res);
        ExtComputer { res, module, name: name.into(), dmap }
    }

    pub fn for_comodule(name: impl Into<String>, m: Comodule, range: &Range) -> Self {
        Self::new(name, CModule::new(m, Shape::Full, false), range)
    }

    pub fn base(&self) -> Base {
        self.module.comod.base
    }

    /// Whether every tridegree with filtration ≤ f and the given
    /// coweight-plus-filtration bound is fully resolved.
    pub fn covers(&self, f: usize, cwf: i32) -> bool {
        self.res.covers(f + 1, t_cap(&self.module, cwf))
    }

    pub fn cochains(&self, f: usize, t: i32, w: i32) -> CochainSlice {
        let mut entries = Vec::new();
        let m = &self.module;
        let rank = m.rank() as u32;
        for (gi, g) in self.res.gens(f).iter().enumerate() {
            for b in 0..rank {
                let (tb, wb) = m.tw(b);
                let j = g.t + tb - t;
                if j < 0 {
                    continue;
                }
                let i = g.q + wb - w - j;
                if i < 0 {
                    continue;
                }
                let c = Gm::new(i as u32, j as u32);
                if m.allows(c) {
                    entries.push((gi as u32, b, c));
                }
            }
        }
        let index = entries.iter().enumerate().map(|(i, &(g, b, _))| ((g, b), i as u32)).collect();
        CochainSlice { f, t, w, entries, index }
    }

    /// Matrix, by columns, of the cochain map induced by `map` from `src`
    /// (on P_n) to `tgt` (on P_{n+q}).
    pub fn map_matrix(&self, map: &GenMap, src: &CochainSlice, tgt: &CochainSlice) -> Vec<BitVec> {
        src.entries.iter().map(|&(g, b, x)| self.column(map, src.f, g, b, x, tgt)).collect()
    }

    fn column(&self, map: &GenMap, n: usize, g: u32, b: u32, x: Gm, tgt: &CochainSlice) -> BitVec {
        let mut v = BitVec::zeros(tgt.dim());
        let mut buf = Vec::new();
        for &(gp, k, c) in map.terms(n, g) {
            buf.clear();
            self.module.act_into(k, c, x, b, &mut buf);
            for &(r, b2) in &buf {
                let i = tgt.position(gp, b2).unwrap_or_else(|| panic!("cochain map leaves slice: ({gp},{b2},{r})"));
                debug_assert_eq!(tgt.entries[i].2, r);
                v.flip(i);
            }
        }
        v
    }

    pub fn delta(&self, src: &CochainSlice, tgt: &CochainSlice) -> Vec<BitVec> {
        self.map_matrix(&self.dmap, src, tgt)
    }

    /// Ext at one tridegree. Panics if d∘d ≠ 0 on the slice.
    pub fn group(&self, d: TriDegree) -> ExtGroup {
        assert!(d.f >= 0);
        let f = d.f as usize;
        let t = d.s + d.f;
        assert!(self.covers(f, t - d.w), "tridegree {d} outside the resolved range");
        let c = self.cochains(f, t, d.w);
        let next = self.cochains(f + 1, t, d.w);
        let dz = self.delta(&c, &next);
        let (kernel, _) = kernel_and_image(&dz, next.dim());
        let mut bound = Echelon::new(c.dim(), 0);
        if f > 0 {
            let prev = self.cochains(f - 1, t, d.w);
            for col in self.delta(&prev, &c) {
                let image = crate::linalg::apply(&dz, next.dim(), &col);
                assert!(image.is_zero(), "d∘d ≠ 0 at {d}");
                bound.insert(col);
            }
        }
        let sq = Subquotient::new(c.dim(), &bound, &kernel);
        ExtGroup { deg: d, cochains: c, sq }
    }

    pub fn dim(&self, d: TriDegree) -> usize {
        self.group(d).dim()
    }

    /// Image of every basis class of `src` under `map`, in coordinates of the
    /// target group.
    pub fn apply_map(&self, map: &GenMap, src: &ExtGroup, tgt: &ExtGroup) -> Vec<BitVec> {
        let cols = self.map_matrix(map, &src.cochains, &tgt.cochains);
        src.reps().iter().map(|z| tgt.coords(&crate::linalg::apply(&cols, tgt.cochains.dim(), z))).collect()
    }

    /// Ext groups over a range, computed in parallel.
    pub fn groups(&self, range: &Range) -> Vec<ExtGroup> {
        range.degrees().into_par_iter().map(|d| self.group(d)).filter(|g| g.dim() > 0).collect()
    }
}

/// Apply a cochain matrix to a cocycle.
pub fn image_of(cols: &[BitVec], dim: usize, z: &BitVec) -> BitVec {
    crate::linalg::apply(cols, dim, z)
}

/// A class of Ext of the ground ring given by a cocycle on P_q.
#[derive(Clone, Debug)]
pub struct UnitClass {
    pub name: String,
    pub deg: TriDegree,
    /// φ(g) for generators g of P_q, zero where absent.
    pub values: Vec<(u32, Gm)>,
}

impl UnitClass {
    pub fn q(&self) -> usize {
        self.deg.f as usize
    }

    pub fn tw(&self) -> (i32, i32) {
        (self.deg.s + self.deg.f, self.deg.w)
    }
}

/// The cocycle on P_1 attached to a primitive x of the augmentation ideal,
/// given in right normal form: φ(g) = ⟨d g, x⟩.
pub fn primitive_class(res: &Resolution, name: &str, x_right: &[(u8, Gm)], deg: TriDegree) -> UnitClass {
    let mut values = Vec::new();
    for (gi, g) in res.gens(1).iter().enumerate() {
        let mut v: Vec<Gm> = Vec::new();
        for &(_, k, c) in &g.d {
            for &(m, r) in x_right {
                if m == k {
                    v.push(c.mul(r));
                }
            }
        }
        xor_normalize(&mut v);
        assert!(v.len() <= 1, "inhomogeneous primitive pairing");
        if let Some(&c) = v.first() {
            values.push((gi as u32, c));
        }
    }
    UnitClass { name: name.into(), deg, values }
}

/// Cocycle of the ground module from a vector in a cochain slice.
pub fn unit_class_from_vector(name: &str, group: &ExtGroup, z: &BitVec) -> UnitClass {
    let values = z.ones().map(|i| (group.cochains.entries[i].0, group.cochains.entries[i].2)).collect();
    UnitClass { name: name.into(), deg: group.deg, values }
}

/// Multiplication by a central ground monomial, as a chain map.
pub fn ground_map(res: &Resolution, c: Gm) -> GenMap {
    let (fm, _) = res.range().unwrap();
    let images: Vec<Vec<FreeElement>> = (0..=fm).map(|n| (0..res.gens(n).len() as u32).map(|g| vec![(g, 0u8, c)]).collect()).collect();
    let (s, w) = c.sw();
    GenMap::from_images(res, 0, (s, w), &images)
}

/// The chain map P → P lifting a cocycle on P_q, through source filtration
/// `n_max + q` and resolution degree `t_max`.
pub fn chain_map(res: &Resolution, alpha: &UnitClass, n_max: usize) -> GenMap {
    let q = alpha.q();
    let (ta, wa) = alpha.tw();
    let alg = res.alg;
    let (fm, tm) = res.range().unwrap();
    let n_max = n_max.min(fm.saturating_sub(q));
    let mut images: Vec<Vec<FreeElement>> = Vec::new();
    let mut zero = vec![Vec::new(); res.gens(q).len()];
    for &(g, c) in &alpha.values {
        zero[g as usize] = vec![(0u32, 0u8, c)];
    }
    images.push(zero);
    for n in 1..=n_max {
        let layer: Vec<FreeElement> = res
            .gens(n + q)
            .par_iter()
            .map(|gp| {
                let mut y: FreeElement = Vec::new();
                let mut tmp = Vec::new();
                for &(h, k, c) in &gp.d {
                    for &(g2, k2, c2) in &images[n - 1][h as usize] {
                        tmp.clear();
                        alg.mul_into(k, c, k2, c2, &mut tmp);
                        y.extend(tmp.iter().map(|&(m, r)| (g2, m, r)));
                    }
                }
                xor_normalize(&mut y);
                let (t, w) = (gp.t - ta, gp.q - wa);
                if y.is_empty() || t > tm {
                    return Vec::new();
                }
                res.lift(n, t, w, &y).unwrap_or_else(|| panic!("chain map does not lift at n={n} ({t},{w})"))
            })
            .collect();
        images.push(layer);
    }
    GenMap::from_images(res, q, (ta, wa), &images)
}

/// Named classes of Ext of the ground ring and the chain maps realizing
/// multiplication by them.
pub struct UnitProducts {
    pub res: Arc<Resolution>,
    pub classes: HashMap<String, UnitClass>,
    pub maps: HashMap<String, Arc<GenMap>>,
}

fn products_cache() -> &'static Mutex<HashMap<(Base, u8), Arc<UnitProducts>>> {
    static C: OnceLock<Mutex<HashMap<(Base, u8), Arc<UnitProducts>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

pub use crate::classes::{named_classes, ClassSpec};

impl UnitProducts {
    /// Shared instance whose chain maps cover `res`.
    pub fn for_resolution(res: &Arc<Resolution>) -> Arc<UnitProducts> {
        let key = (res.base(), res.level());
        let mut cache = products_cache().lock().unwrap();
        if let Some(p) = cache.get(&key) {
            if p.res.range() == res.range() {
                return p.clone();
            }
            if let (Some((f1, t1)), Some((f2, t2))) = (p.res.range(), res.range()) {
                if f1 >= f2 && t1 >= t2 {
                    return p.clone();
                }
            }
        }
        let p = Arc::new(Self::build(res.clone()));
        cache.insert(key, p.clone());
        p
    }

    fn build(res: Arc<Resolution>) -> Self {
        let (fm, _) = res.range().unwrap();
        let specs = named_classes(&res);
        let mut classes = HashMap::new();
        let mut maps = HashMap::new();
        for (name, spec) in specs {
            let map = match &spec {
                ClassSpec::Ground(c) => ground_map(&res, *c),
                ClassSpec::Cocycle(cl) => chain_map(&res, cl, fm),
            };
            if let ClassSpec::Cocycle(cl) = spec {
                classes.insert(name.clone(), cl);
            }
            maps.insert(name, Arc::new(map));
        }
        UnitProducts { res, classes, maps }
    }

    pub fn map(&self, name: &str) -> Option<&Arc<GenMap>> {
        self.maps.get(name)
    }
}
