//! Finite free comodules over A(1)∨ and A(0)∨.

use std::collections::HashMap;

use serde_json::json;

use crate::dual::{self, DualMono};
use crate::ground::{xor_normalize, Base, Gm, TriDegree};
use crate::hopf::{algebroid, Am, HopfAlgebroid};
use crate::linalg::{BitVec, Echelon};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    /// Internal degree and weight; filtration is always 0.
    pub deg: TriDegree,
    pub wt: u32,
}

/// ψ(m) = Σ c·a ⊗ m′, stored as (c, index of a, index of m′).
pub type CoactionTerms = Vec<(Gm, u8, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    pub base: Base,
    pub level: u8,
    pub name: String,
    pub basis: Vec<BasisElement>,
    pub coaction: Vec<CoactionTerms>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComodError {
    #[error("base or level mismatch between {0} and {1}")]
    Mismatch(String, String),
    #[error("coaction of {0} leaves the basis")]
    NotClosed(String),
    #[error("counit law fails on {0}")]
    Counit(String),
    #[error("coassociativity fails on {0}")]
    Coassociativity(String),
    #[error("coaction raises weight on {0}")]
    Weight(String),
    #[error("{0} requires base R")]
    NeedsR(&'static str),
    #[error("map does not commute with coactions at {0}")]
    NotComoduleMap(String),
    #[error("map is not homogeneous at {0}")]
    Degree(String),
    #[error("sequence not exact in degree {0}: {1}")]
    Exactness(TriDegree, String),
}

fn project_level(level: u8, idx: u8) -> Option<u8> {
    match level {
        1 => Some(idx),
        _ => (idx & 0b101 == 0).then_some(idx >> 1),
    }
}

impl Comodule {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn hopf(&self) -> &'static HopfAlgebroid {
        algebroid(self.base, self.level)
    }

    /// Build a subquotient of the dual Steenrod algebra spanned by `monos`,
    /// projecting coaction left factors to A(level)∨. Right factors outside
    /// the span must be killed by `drop` or the construction fails.
    pub fn from_monomials(
        base: Base,
        level: u8,
        name: &str,
        monos: &[DualMono],
        drop: impl Fn(&DualMono) -> bool,
    ) -> Result<Self, ComodError> {
        let index: HashMap<DualMono, u32> = monos.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let mut basis = Vec::new();
        let mut coaction = Vec::new();
        for m in monos {
            let (t, w) = m.tw();
            basis.push(BasisElement { label: m.label(), deg: TriDegree::new(t, 0, w), wt: m.weight() });
            let mut terms = Vec::new();
            for (c, a, r) in dual::coaction(base, m) {
                let Some(a) = project_level(level, a) else { continue };
                match index.get(&r) {
                    Some(&j) => terms.push((c, a, j)),
                    None if drop(&r) => {}
                    None => return Err(ComodError::NotClosed(m.label())),
                }
            }
            xor_normalize(&mut terms);
            coaction.push(terms);
        }
        let c = Comodule { base, level, name: name.to_string(), basis, coaction };
        c.validate()?;
        Ok(c)
    }

    pub fn ground(base: Base, level: u8) -> Self {
        Comodule {
            base,
            level,
            name: "M2".into(),
            basis: vec![BasisElement { label: "1".into(), deg: TriDegree::ZERO, wt: 0 }],
            coaction: vec![vec![(Gm::ONE, 0, 0)]],
        }
    }

    /// B0(k): (A ∥ A(0))∨ truncated at weight 2k.
    pub fn brown_gitler_b0(k: u32, base: Base) -> Self {
        let monos = dual::monomials_up_to(2 * k, |m| m.in_a_mod_a0());
        Self::from_monomials(base, 1, &format!("B0({k})"), &monos, |_| false).expect("B0(k) is a comodule")
    }

    /// B1(k): (A ∥ A(1))∨ truncated at weight 4k.
    pub fn brown_gitler_b1(k: u32, base: Base) -> Self {
        let mut c = Self::a_mod_a1_truncated(4 * k, base);
        c.name = format!("B1({k})");
        c
    }

    pub fn a_mod_a1_truncated(bound: u32, base: Base) -> Self {
        let monos = dual::monomials_up_to(bound, |m| m.in_a_mod_a1());
        Self::from_monomials(base, 1, &format!("AmodA1({bound})"), &monos, |_| false)
            .expect("weight truncations are comodules")
    }

    /// (A(1) ∥ A(0))∨ on {1, ξ̄1, τ̄1, ξ̄1τ̄1}, with coaction given by the
    /// coproduct of A(1)∨.
    pub fn a1_mod_a0(base: Base) -> Self {
        let h = algebroid(base, 1);
        let ams = [Am::ONE, Am::XI1, Am::TAU1, Am { e: 1, a: 0, b: 1 }];
        let idx: Vec<u8> = ams.iter().map(|&m| h.index(m).unwrap()).collect();
        let mut basis = Vec::new();
        let mut coaction = Vec::new();
        for (n, &m) in ams.iter().enumerate() {
            let (t, w) = m.tw();
            basis.push(BasisElement { label: m.label(), deg: TriDegree::new(t, 0, w), wt: m.weight() });
            let mut terms = Vec::new();
            for &(c, l, r) in h.delta_basis(idx[n]) {
                let j = idx.iter().position(|&x| x == r).expect("right factors avoid τ̄0");
                terms.push((c, l, j as u32));
            }
            xor_normalize(&mut terms);
            coaction.push(terms);
        }
        let c = Comodule { base, level: 1, name: "A1modA0".into(), basis, coaction };
        c.validate().expect("A(1)//A(0) is a comodule");
        c
    }

    /// A(level)∨ with its left coaction Δ.
    pub fn regular(base: Base, level: u8) -> Self {
        let h = algebroid(base, level);
        let basis = (0..h.rank() as u8)
            .map(|k| {
                let m = h.monomial(k);
                BasisElement { label: m.label(), deg: h.degree(k), wt: m.weight() }
            })
            .collect();
        let coaction = (0..h.rank() as u8)
            .map(|k| h.delta_basis(k).iter().map(|&(c, l, r)| (c, l, r as u32)).collect())
            .collect();
        Comodule { base, level, name: format!("A({level})"), basis, coaction }
    }

    pub fn tensor(&self, o: &Comodule) -> Result<Self, ComodError> {
        if (self.base, self.level) != (o.base, o.level) {
            return Err(ComodError::Mismatch(self.name.clone(), o.name.clone()));
        }
        let h = self.hopf();
        let n = o.rank() as u32;
        let mut basis = Vec::new();
        let mut coaction = Vec::new();
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in o.basis.iter().enumerate() {
                basis.push(BasisElement {
                    label: format!("{}|{}", a.label, b.label),
                    deg: a.deg + b.deg,
                    wt: a.wt + b.wt,
                });
                let mut terms = Vec::new();
                for &(c1, l1, r1) in &self.coaction[i] {
                    for &(c2, l2, r2) in &o.coaction[j] {
                        let c = c1.mul(c2);
                        for &(l, g) in h.mul_basis(l1, l2) {
                            terms.push((c.mul(g), l, r1 * n + r2));
                        }
                    }
                }
                xor_normalize(&mut terms);
                coaction.push(terms);
            }
        }
        Ok(Comodule {
            base: self.base,
            level: self.level,
            name: format!("{} * {}", self.name, o.name),
            basis,
            coaction,
        })
    }

    pub fn power(&self, i: u32) -> Self {
        let mut acc = Self::ground(self.base, self.level);
        for _ in 0..i {
            acc = acc.tensor(self).expect("same parent");
        }
        if i > 0 {
            acc.name = format!("{}^{i}", self.name);
        }
        acc
    }

    pub fn shift(&self, p: i32, q: i32) -> Self {
        let mut c = self.clone();
        for b in &mut c.basis {
            b.deg = b.deg + TriDegree::new(p, 0, q);
        }
        c.name = format!("S({p},{q}) {}", self.name);
        c
    }

    /// Reduce mod ρ and regard the result over base C.
    pub fn quotient_rho(&self) -> Result<Self, ComodError> {
        if self.base != Base::R {
            return Err(ComodError::NeedsR("quotient_rho"));
        }
        let mut c = self.clone();
        for terms in &mut c.coaction {
            terms.retain(|(g, _, _)| g.r == 0);
        }
        c.base = Base::C;
        c.name = format!("{} / rho", self.name);
        Ok(c)
    }

    /// Restrict the coaction along A(1)∨ → A(0)∨.
    pub fn restrict_to_level0(&self) -> Self {
        let mut c = self.clone();
        if self.level == 0 {
            return c;
        }
        for terms in &mut c.coaction {
            *terms = terms.iter().filter_map(|&(g, a, m)| project_level(0, a).map(|a| (g, a, m))).collect();
            xor_normalize(terms);
        }
        c.level = 0;
        c
    }

    /// The subcomodule spanned by `keep` (which must be coaction-closed).
    pub fn sub(&self, keep: &[usize]) -> Result<Self, ComodError> {
        let pos: HashMap<u32, u32> = keep.iter().enumerate().map(|(i, &k)| (k as u32, i as u32)).collect();
        let mut c = self.clone();
        c.basis = keep.iter().map(|&k| self.basis[k].clone()).collect();
        c.coaction = Vec::new();
        for &k in keep {
            let mut terms = Vec::new();
            for &(g, a, m) in &self.coaction[k] {
                match pos.get(&m) {
                    Some(&j) => terms.push((g, a, j)),
                    None => return Err(ComodError::NotClosed(self.basis[k].label.clone())),
                }
            }
            c.coaction.push(terms);
        }
        Ok(c)
    }

    /// The quotient by the subcomodule spanned by the complement of `keep`.
    pub fn quotient(&self, keep: &[usize]) -> Self {
        let pos: HashMap<u32, u32> = keep.iter().enumerate().map(|(i, &k)| (k as u32, i as u32)).collect();
        let mut c = self.clone();
        c.basis = keep.iter().map(|&k| self.basis[k].clone()).collect();
        c.coaction = keep
            .iter()
            .map(|&k| self.coaction[k].iter().filter_map(|&(g, a, m)| pos.get(&m).map(|&j| (g, a, j))).collect())
            .collect();
        c
    }

    pub fn check_counit(&self) -> Result<(), ComodError> {
        for (m, terms) in self.coaction.iter().enumerate() {
            let unit: Vec<(Gm, u32)> = terms.iter().filter(|t| t.1 == 0).map(|&(g, _, r)| (g, r)).collect();
            if unit != vec![(Gm::ONE, m as u32)] {
                return Err(ComodError::Counit(self.basis[m].label.clone()));
            }
        }
        Ok(())
    }

    pub fn check_coassociativity(&self) -> Result<(), ComodError> {
        let h = self.hopf();
        for (m, terms) in self.coaction.iter().enumerate() {
            let mut lhs = Vec::new();
            for &(c, a, r) in terms {
                for &(c2, l, rr) in h.delta_basis(a) {
                    lhs.push((c.mul(c2), l, rr, r));
                }
            }
            xor_normalize(&mut lhs);
            let mut rhs = Vec::new();
            for &(c, a, r) in terms {
                for &(c2, a2, r2) in &self.coaction[r as usize] {
                    for (x, c3) in h.mul(&vec![(a, c)], &h.eta_r(c2)) {
                        rhs.push((c3, x, a2, r2));
                    }
                }
            }
            xor_normalize(&mut rhs);
            if lhs != rhs {
                return Err(ComodError::Coassociativity(self.basis[m].label.clone()));
            }
        }
        Ok(())
    }

    /// Right factors never have larger Mahowald weight than the source.
    pub fn check_weight(&self) -> Result<(), ComodError> {
        for (m, terms) in self.coaction.iter().enumerate() {
            if terms.iter().any(|&(_, _, r)| self.basis[r as usize].wt > self.basis[m].wt) {
                return Err(ComodError::Weight(self.basis[m].label.clone()));
            }
        }
        Ok(())
    }

    pub fn check_homogeneous(&self) -> Result<(), ComodError> {
        let h = self.hopf();
        for (m, terms) in self.coaction.iter().enumerate() {
            for &(c, a, r) in terms {
                let d = c.degree() + h.degree(a) + self.basis[r as usize].deg;
                if d != self.basis[m].deg {
                    return Err(ComodError::Degree(self.basis[m].label.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ComodError> {
        self.check_counit()?;
        self.check_coassociativity()?;
        self.check_homogeneous()?;
        self.check_weight()
    }

    /// Basis indices of elements of `M ⊗ ground` living in degree (s, w):
    /// pairs (basis index, ground monomial).
    pub fn degree_slice(&self, s: i32, w: i32) -> Vec<(u32, Gm)> {
        let mut out = Vec::new();
        for (i, b) in self.basis.iter().enumerate() {
            let j = b.deg.s - s;
            let t = b.deg.w - w - j;
            if j < 0 || t < 0 || (self.base == Base::C && j > 0) {
                continue;
            }
            out.push((i as u32, Gm::new(t as u32, j as u32)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let h = self.hopf();
        json!({
            "base": self.base.to_string(),
            "level": self.level,
            "name": self.name,
            "basis": self.basis.iter().map(|b| json!({
                "label": b.label, "s": b.deg.s, "f": b.deg.f, "w": b.deg.w, "wt": b.wt
            })).collect::<Vec<_>>(),
            "coaction": self.coaction.iter().map(|terms| terms.iter().map(|&(g, a, m)| {
                json!([h.monomial(a).label(), [g.t, g.r], m])
            }).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// A map of free M2-modules: basis element i ↦ Σ g·e_j.
#[derive(Clone, Debug)]
pub struct ComoduleMap {
    pub source: Comodule,
    pub target: Comodule,
    pub images: Vec<Vec<(Gm, u32)>>,
}

impl ComoduleMap {
    pub fn check(&self) -> Result<(), ComodError> {
        let h = self.source.hopf();
        for (i, img) in self.images.iter().enumerate() {
            let d = self.source.basis[i].deg;
            for &(g, j) in img {
                if g.degree() + self.target.basis[j as usize].deg != d {
                    return Err(ComodError::Degree(self.source.basis[i].label.clone()));
                }
            }
            let mut lhs = Vec::new();
            for &(g, j) in img {
                for &(c, a, r) in &self.target.coaction[j as usize] {
                    lhs.push((g.mul(c), a, r));
                }
            }
            xor_normalize(&mut lhs);
            let mut rhs = Vec::new();
            for &(c, a, r) in &self.source.coaction[i] {
                for &(g, j) in &self.images[r as usize] {
                    for (x, c2) in h.mul(&vec![(a, c)], &h.eta_r(g)) {
                        rhs.push((c2, x, j));
                    }
                }
            }
            xor_normalize(&mut rhs);
            if lhs != rhs {
                return Err(ComodError::NotComoduleMap(self.source.basis[i].label.clone()));
            }
        }
        Ok(())
    }

    /// Matrix of the map between degree slices in degree (s, w).
    fn slice_matrix(&self, s: i32, w: i32) -> (Vec<(u32, Gm)>, Vec<(u32, Gm)>, Vec<BitVec>) {
        let src = self.source.degree_slice(s, w);
        let tgt = self.target.degree_slice(s, w);
        let pos: HashMap<(u32, Gm), usize> = tgt.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let cols = src
            .iter()
            .map(|&(i, c)| {
                let mut v = BitVec::zeros(tgt.len());
                for &(g, j) in &self.images[i as usize] {
                    if self.target.base == Base::C && c.mul(g).r > 0 {
                        continue;
                    }
                    v.flip(pos[&(j, c.mul(g))]);
                }
                v
            })
            .collect();
        (src, tgt, cols)
    }
}

/// Degree window covering every basis element of the given modules.
pub fn degree_window(ms: &[&Comodule], depth: i32) -> Vec<(i32, i32)> {
    let smin = ms.iter().flat_map(|m| m.basis.iter().map(|b| b.deg.s)).min().unwrap_or(0);
    let smax = ms.iter().flat_map(|m| m.basis.iter().map(|b| b.deg.s)).max().unwrap_or(0);
    let wmin = ms.iter().flat_map(|m| m.basis.iter().map(|b| b.deg.w)).min().unwrap_or(0);
    let wmax = ms.iter().flat_map(|m| m.basis.iter().map(|b| b.deg.w)).max().unwrap_or(0);
    let mut out = Vec::new();
    for s in smin - depth..=smax {
        for w in wmin - 2 * depth..=wmax {
            out.push((s, w));
        }
    }
    out
}

/// Verify 0 → A → B → C → 0 is exact degreewise in a window, with both maps
/// comodule maps. Returns the per-degree ranks (dim A, dim B, dim C).
pub fn check_exact(i: &ComoduleMap, p: &ComoduleMap, depth: i32) -> Result<Vec<((i32, i32), [usize; 3])>, ComodError> {
    i.check()?;
    p.check()?;
    let mut out = Vec::new();
    for (s, w) in degree_window(&[&i.source, &i.target, &p.target], depth) {
        let d = TriDegree::new(s, 0, w);
        let (a, b, ic) = i.slice_matrix(s, w);
        let (_, c, pc) = p.slice_matrix(s, w);
        let mut im = Echelon::new(b.len(), 0);
        for v in &ic {
            im.insert(v.clone());
        }
        if im.rank() != a.len() {
            return Err(ComodError::Exactness(d, "inclusion not injective".into()));
        }
        let mut pim = Echelon::new(c.len(), 0);
        for v in &pc {
            pim.insert(v.clone());
        }
        if pim.rank() != c.len() {
            return Err(ComodError::Exactness(d, "projection not surjective".into()));
        }
        for v in &ic {
            let img = crate::linalg::apply(&pc, c.len(), v);
            if !img.is_zero() {
                return Err(ComodError::Exactness(d, "composite is nonzero".into()));
            }
        }
        if a.len() + c.len() != b.len() {
            return Err(ComodError::Exactness(d, "rank identity fails".into()));
        }
        if a.len() + b.len() + c.len() > 0 {
            out.push(((s, w), [a.len(), b.len(), c.len()]));
        }
    }
    Ok(out)
}

fn index_of(c: &Comodule) -> HashMap<&str, u32> {
    c.basis.iter().enumerate().map(|(i, b)| (b.label.as_str(), i as u32)).collect()
}

fn b0_monos(k: u32) -> Vec<DualMono> {
    dual::monomials_up_to(2 * k, |m| m.in_a_mod_a0())
}

/// The sequences 0 → Σ^{4k,2k}B0(k) → B0(2k) → Q → 0 and
/// 0 → Σ^{4k,2k}B0(k) ⊗ B0(1) → B0(2k+1) → Q → 0. The cokernel Q is the
/// quotient comodule; `identification` is the basis bijection y·z ↦ y ⊗ z
/// onto B1(k-1) ⊗ (A(1) ∥ A(0))∨.
pub struct SesBg {
    pub inclusion: ComoduleMap,
    pub projection: ComoduleMap,
    pub identification: ComoduleMap,
}

pub fn ses_bg(k: u32, odd: bool, base: Base) -> SesBg {
    assert!(k >= 1);
    let n = if odd { 2 * k + 1 } else { 2 * k };
    let mid = Comodule::brown_gitler_b0(n, base);
    let mid_idx = index_of(&mid);
    let small = b0_monos(k);
    let (source, src_monos): (Comodule, Vec<(DualMono, DualMono)>) = if odd {
        let b01 = b0_monos(1);
        let s = Comodule::brown_gitler_b0(k, base)
            .shift(4 * k as i32, 2 * k as i32)
            .tensor(&Comodule::brown_gitler_b0(1, base))
            .unwrap();
        let mut pairs = Vec::new();
        for x in &small {
            for z in &b01 {
                pairs.push((*x, *z));
            }
        }
        (s, pairs)
    } else {
        let s = Comodule::brown_gitler_b0(k, base).shift(4 * k as i32, 2 * k as i32);
        (s, small.iter().map(|x| (*x, DualMono::ONE)).collect())
    };
    let incl_images = src_monos
        .iter()
        .map(|(x, z)| {
            let mut y = x.raise();
            y.xi[1] += (2 * k - x.weight()) as u8;
            let m = y.disjoint_mul(z).expect("disjoint factors");
            vec![(Gm::ONE, mid_idx[m.label().as_str()])]
        })
        .collect();
    let inclusion = ComoduleMap { source, target: mid.clone(), images: incl_images };

    let monos = b0_monos(n);
    let keep: Vec<usize> = (0..monos.len()).filter(|&i| monos[i].split_a1().0.weight() + 4 <= 4 * k).collect();
    let mut quot = mid.quotient(&keep);
    quot.name = format!("{} / S({},{}) B0({k})", mid.name, 4 * k, 2 * k);
    let mut proj_images = vec![Vec::new(); monos.len()];
    for (j, &i) in keep.iter().enumerate() {
        proj_images[i] = vec![(Gm::ONE, j as u32)];
    }
    let projection = ComoduleMap { source: mid, target: quot.clone(), images: proj_images };

    let tensor = Comodule::brown_gitler_b1(k - 1, base).tensor(&Comodule::a1_mod_a0(base)).unwrap();
    let t_idx = index_of(&tensor);
    let id_images = keep
        .iter()
        .map(|&i| {
            let (y, z) = monos[i].split_a1();
            let zl = Am { e: z.xi[1], a: 0, b: z.has_tau(1) as u8 }.label();
            vec![(Gm::ONE, t_idx[format!("{}|{}", y.label(), zl).as_str()])]
        })
        .collect();
    let identification = ComoduleMap { source: quot, target: tensor, images: id_images };
    SesBg { inclusion, projection, identification }
}

/// Degreewise dimension counts of the basis: (s, w) ↦ count.
pub fn basis_dims(c: &Comodule) -> std::collections::BTreeMap<(i32, i32), usize> {
    let mut out = std::collections::BTreeMap::new();
    for b in &c.basis {
        *out.entry((b.deg.s, b.deg.w)).or_insert(0) += 1;
    }
    out
}

/// The weight-4k layer of (A ∥ A(1))∨ is Σ^{4k,2k}B0(k): check basis
/// dimensions through `bound` and that x ↦ ξ̄1^{2k-wt x}·raise(x) is a
/// comodule map onto the layer.
pub fn check_a_mod_a1_splitting(bound: u32, base: Base) -> Result<(), ComodError> {
    let full = Comodule::a_mod_a1_truncated(bound, base);
    let mut expect = std::collections::BTreeMap::new();
    for k in 0..=bound / 4 {
        let piece = Comodule::brown_gitler_b0(k, base).shift(4 * k as i32, 2 * k as i32);
        for (d, n) in basis_dims(&piece) {
            *expect.entry(d).or_insert(0) += n;
        }
        let layer: Vec<usize> = (0..full.rank()).filter(|&i| full.basis[i].wt == 4 * k).collect();
        let upper: Vec<usize> = (0..full.rank()).filter(|&i| full.basis[i].wt <= 4 * k).collect();
        let trunc = full.sub(&upper)?;
        let top_pos: Vec<usize> = (0..trunc.rank()).filter(|&i| trunc.basis[i].wt == 4 * k).collect();
        let layer_c = trunc.quotient(&top_pos);
        let idx = index_of(&layer_c);
        let images = b0_monos(k)
            .iter()
            .map(|x| {
                let mut y = x.raise();
                y.xi[1] += (2 * k - x.weight()) as u8;
                vec![(Gm::ONE, idx[y.label().as_str()])]
            })
            .collect();
        if layer.len() != piece.rank() {
            return Err(ComodError::Exactness(TriDegree::ZERO, format!("layer {k} has the wrong rank")));
        }
        ComoduleMap { source: piece, target: layer_c, images }.check()?;
    }
    if expect != basis_dims(&full) {
        return Err(ComodError::Exactness(TriDegree::ZERO, "graded dimensions differ".into()));
    }
    Ok(())
}
