//! The Hopf algebroids A(0)∨ and A(1)∨ over M2^R and M2^C.
//!
//! Basis monomials are ξ̄1^e τ̄0^a τ̄1^b with e, a, b ∈ {0,1}. Elements are
//! written in left normal form, ground coefficients on the left.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::ground::{xor_normalize, Base, Gm, GroundElement, TriDegree};

/// A basis monomial ξ̄1^e τ̄0^a τ̄1^b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Am {
    pub e: u8,
    pub a: u8,
    pub b: u8,
}

impl Am {
    pub const ONE: Am = Am { e: 0, a: 0, b: 0 };
    pub const XI1: Am = Am { e: 1, a: 0, b: 0 };
    pub const TAU0: Am = Am { e: 0, a: 1, b: 0 };
    pub const TAU1: Am = Am { e: 0, a: 0, b: 1 };

    /// Homological (t, w).
    pub fn tw(self) -> (i32, i32) {
        let (e, a, b) = (self.e as i32, self.a as i32, self.b as i32);
        (2 * e + a + 3 * b, e + b)
    }

    /// Mahowald weight, with wt(ξ̄1) = wt(τ̄1) = 2 and wt(τ̄0) = 1.
    pub fn weight(self) -> u32 {
        2 * self.e as u32 + self.a as u32 + 2 * self.b as u32
    }

    pub fn label(self) -> String {
        let mut parts = Vec::new();
        if self.e > 0 {
            parts.push("x1");
        }
        if self.a > 0 {
            parts.push("t0");
        }
        if self.b > 0 {
            parts.push("t1");
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Linear combination Σ g·e_k of basis monomials, sorted and reduced mod 2.
pub type Terms = Vec<(u8, Gm)>;
/// Σ g·e_l ⊗ e_r with all ground coefficients on the far left.
pub type TensorTerms = Vec<(Gm, u8, u8)>;

/// How τ̄0² is rewritten. `Standard` is τ̄0² = τξ̄1 + ρτ̄1; `ExtraTerm` adds
/// the extra ρτ̄0ξ̄1 term, which is incompatible with the coproduct and is
/// kept only to exercise the axiom checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareRelation {
    Standard,
    ExtraTerm,
}

pub struct HopfAlgebroid {
    pub base: Base,
    pub level: u8,
    basis: Vec<Am>,
    mul: Vec<Vec<Terms>>,
    delta: Vec<TensorTerms>,
    eta_pows: RwLock<Vec<Terms>>,
    right: RwLock<HashMap<(u32, u8), Arc<Terms>>>,
}

impl fmt::Debug for HopfAlgebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({})∨_{}", self.level, self.base)
    }
}

fn scale(terms: &Terms, g: Gm) -> Terms {
    terms.iter().map(|&(k, h)| (k, h.mul(g))).collect()
}

impl HopfAlgebroid {
    pub fn new(base: Base, level: u8) -> Self {
        Self::with_relation(base, level, SquareRelation::Standard)
    }

    /// Overwrite one product in the multiplication table.
    pub fn set_product(&mut self, i: u8, j: u8, value: Terms) {
        self.mul[i as usize][j as usize] = value;
    }

    pub fn with_relation(base: Base, level: u8, rel: SquareRelation) -> Self {
        assert!(level <= 1, "only A(0) and A(1) are modeled");
        let basis: Vec<Am> = if level == 0 {
            vec![Am::ONE, Am::TAU0]
        } else {
            let mut v = Vec::new();
            for b in 0..2 {
                for a in 0..2 {
                    for e in 0..2 {
                        v.push(Am { e, a, b });
                    }
                }
            }
            v
        };
        let mut h = HopfAlgebroid {
            base,
            level,
            basis,
            mul: Vec::new(),
            delta: Vec::new(),
            eta_pows: RwLock::new(Vec::new()),
            right: RwLock::new(HashMap::new()),
        };
        let n = h.basis.len();
        let mut mul = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (h.basis[i], h.basis[j]);
                let mut t = h.reduce(Gm::ONE, x.e + y.e, x.a + y.a, x.b + y.b, rel);
                xor_normalize(&mut t);
                mul[i][j] = t;
            }
        }
        h.mul = mul;
        let eta_tau: Terms = if base == Base::R {
            let mut t = vec![(0, Gm::TAU), (h.index(Am::TAU0).unwrap(), Gm::RHO)];
            xor_normalize(&mut t);
            t
        } else {
            vec![(0, Gm::TAU)]
        };
        *h.eta_pows.write().unwrap() = vec![vec![(0, Gm::ONE)], eta_tau];
        h.delta = (0..n).map(|k| h.compute_delta(h.basis[k])).collect();
        h
    }

    fn reduce(&self, c: Gm, e: u8, a: u8, b: u8, rel: SquareRelation) -> Terms {
        if self.level == 0 {
            if e > 0 || b > 0 || a >= 2 {
                return Vec::new();
            }
            return vec![(self.index(Am { e, a, b }).unwrap(), c)];
        }
        if e >= 2 || b >= 2 {
            return Vec::new();
        }
        if a >= 2 {
            let mut out = self.reduce(c.mul(Gm::TAU), e + 1, a - 2, b, rel);
            if self.base == Base::R {
                out.extend(self.reduce(c.mul(Gm::RHO), e, a - 2, b + 1, rel));
                if rel == SquareRelation::ExtraTerm {
                    out.extend(self.reduce(c.mul(Gm::RHO), e + 1, a - 1, b, rel));
                }
            }
            return out;
        }
        vec![(self.index(Am { e, a, b }).unwrap(), c)]
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Am] {
        &self.basis
    }

    pub fn monomial(&self, k: u8) -> Am {
        self.basis[k as usize]
    }

    pub fn index(&self, m: Am) -> Option<u8> {
        self.basis.iter().position(|&x| x == m).map(|i| i as u8)
    }

    pub fn degree(&self, k: u8) -> TriDegree {
        let (t, w) = self.basis[k as usize].tw();
        TriDegree::new(t, 0, w)
    }

    pub fn tw(&self, k: u8) -> (i32, i32) {
        self.basis[k as usize].tw()
    }

    pub fn weight(&self, k: u8) -> u32 {
        self.basis[k as usize].weight()
    }

    pub fn mul_basis(&self, i: u8, j: u8) -> &Terms {
        &self.mul[i as usize][j as usize]
    }

    pub fn mul(&self, x: &Terms, y: &Terms) -> Terms {
        let mut out = Vec::new();
        for &(i, g) in x {
            for &(j, h) in y {
                let gh = g.mul(h);
                out.extend(self.mul[i as usize][j as usize].iter().map(|&(k, c)| (k, c.mul(gh))));
            }
        }
        xor_normalize(&mut out);
        out
    }

    /// η_R(τ)^n.
    pub fn eta_tau_pow(&self, n: u32) -> Terms {
        {
            let p = self.eta_pows.read().unwrap();
            if let Some(t) = p.get(n as usize) {
                return t.clone();
            }
        }
        let mut p = self.eta_pows.write().unwrap();
        while p.len() <= n as usize {
            let next = self.mul(p.last().unwrap(), &p[1]);
            p.push(next);
        }
        p[n as usize].clone()
    }

    /// η_R(τ^t ρ^r) in left normal form.
    pub fn eta_r(&self, g: Gm) -> Terms {
        if g.t == 0 {
            return vec![(0, g)];
        }
        scale(&self.eta_tau_pow(g.t), Gm::new(0, g.r))
    }

    pub fn counit(&self, x: &Terms) -> Vec<Gm> {
        x.iter().filter(|(k, _)| *k == 0).map(|&(_, g)| g).collect()
    }

    /// x ⊗ g·y rewritten as (x·η_R(g)) ⊗ y.
    fn push_right_coefficient(&self, left: &Terms, g: Gm, r: u8, out: &mut TensorTerms) {
        if g == Gm::ONE {
            out.extend(left.iter().map(|&(l, c)| (c, l, r)));
            return;
        }
        let moved = self.mul(left, &self.eta_r(g));
        out.extend(moved.into_iter().map(|(l, c)| (c, l, r)));
    }

    pub fn tensor_mul(&self, x: &TensorTerms, y: &TensorTerms) -> TensorTerms {
        let mut out = Vec::new();
        for &(c1, l1, r1) in x {
            for &(c2, l2, r2) in y {
                let left = scale(self.mul_basis(l1, l2), c1.mul(c2));
                for &(r, g) in self.mul_basis(r1, r2) {
                    self.push_right_coefficient(&left, g, r, &mut out);
                }
            }
        }
        xor_normalize(&mut out);
        out
    }

    fn generator_delta(&self, m: Am) -> TensorTerms {
        let i = |m| self.index(m).unwrap();
        let mut t = vec![(Gm::ONE, i(m), 0), (Gm::ONE, 0, i(m))];
        if m == Am::TAU1 {
            t.push((Gm::ONE, i(Am::TAU0), i(Am::XI1)));
        }
        xor_normalize(&mut t);
        t
    }

    fn compute_delta(&self, m: Am) -> TensorTerms {
        let mut acc: TensorTerms = vec![(Gm::ONE, 0, 0)];
        for (exp, g) in [(m.e, Am::XI1), (m.a, Am::TAU0), (m.b, Am::TAU1)] {
            for _ in 0..exp {
                acc = self.tensor_mul(&acc, &self.generator_delta(g));
            }
        }
        acc
    }

    pub fn delta_basis(&self, k: u8) -> &TensorTerms {
        &self.delta[k as usize]
    }

    pub fn delta(&self, x: &Terms) -> TensorTerms {
        let mut out = Vec::new();
        for &(k, g) in x {
            out.extend(self.delta[k as usize].iter().map(|&(c, l, r)| (c.mul(g), l, r)));
        }
        xor_normalize(&mut out);
        out
    }

    /// Normal form of 1 ⊗ y.
    pub fn unit_tensor(&self, y: &Terms) -> TensorTerms {
        let mut out = Vec::new();
        for &(r, g) in y {
            self.push_right_coefficient(&vec![(0, Gm::ONE)], g, r, &mut out);
        }
        xor_normalize(&mut out);
        out
    }

    /// Rewrite τ^t e_k in right normal form Σ e_m η_R(c_m).
    fn right_form_tau(&self, t: u32, k: u8) -> Arc<Terms> {
        if let Some(v) = self.right.read().unwrap().get(&(t, k)) {
            return v.clone();
        }
        let mut out: Terms = vec![(k, Gm::new(t, 0))];
        if self.base == Base::R && t > 0 {
            let tau0 = vec![(self.index(Am::TAU0).unwrap(), Gm::ONE)];
            let mut pow: Terms = vec![(k, Gm::ONE)];
            for l in 1..=t {
                pow = self.mul(&tau0, &pow);
                if pow.is_empty() {
                    break;
                }
                // binomial(t, l) mod 2
                if l & !t != 0 {
                    continue;
                }
                for &(m, g) in &pow {
                    let sub = self.right_form_tau(g.t, m);
                    let shift = Gm::new(t - l, l + g.r);
                    out.extend(sub.iter().map(|&(m2, c)| (m2, c.mul(shift))));
                }
            }
            xor_normalize(&mut out);
        }
        let v = Arc::new(out);
        self.right.write().unwrap().insert((t, k), v.clone());
        v
    }

    /// Right normal form of g·e_k: pairs (m, c) meaning e_m·η_R(c).
    pub fn right_form(&self, g: Gm, k: u8) -> Terms {
        let base = self.right_form_tau(g.t, k);
        if g.r == 0 {
            return (*base).clone();
        }
        scale(&base, Gm::new(0, g.r))
    }

    /// Evaluate a right normal form back into left normal form.
    pub fn from_right_form(&self, x: &Terms) -> Terms {
        let mut out = Vec::new();
        for &(m, c) in x {
            out.extend(self.mul(&vec![(m, Gm::ONE)], &self.eta_r(c)));
        }
        xor_normalize(&mut out);
        out
    }

    /// Tensor product of three factors, ground on the far left.
    fn triple_left(&self, t: &TensorTerms) -> Vec<(Gm, u8, u8, u8)> {
        // (Δ ⊗ id): c·x⊗y ↦ c·Δ(x)⊗y
        let mut out = Vec::new();
        for &(c, x, y) in t {
            for &(c2, l, r) in &self.delta[x as usize] {
                out.push((c.mul(c2), l, r, y));
            }
        }
        xor_normalize(&mut out);
        out
    }

    fn triple_right(&self, t: &TensorTerms) -> Vec<(Gm, u8, u8, u8)> {
        // (id ⊗ Δ): c·x⊗y ↦ c·x⊗Δ(y), migrating the middle coefficient left
        let mut out = Vec::new();
        for &(c, x, y) in t {
            for &(c2, l, r) in &self.delta[y as usize] {
                let moved = self.mul(&vec![(x, c)], &self.eta_r(c2));
                out.extend(moved.into_iter().map(|(x2, c3)| (c3, x2, l, r)));
            }
        }
        xor_normalize(&mut out);
        out
    }

    /// Exhaustive structural check on basis monomials and on ground
    /// monomials τ^t ρ^r with stem -r in `stems` and t ≤ 8.
    pub fn check_axioms(&self, stems: (i32, i32)) -> AxiomReport {
        let mut rep = AxiomReport::default();
        let n = self.rank() as u8;
        let lab = |k: u8| self.basis[k as usize].label();
        let one = |k: u8| -> Terms { vec![(k, Gm::ONE)] };

        for i in 0..n {
            rep.check("unit", self.mul(&one(0), &one(i)) == one(i), || lab(i));
            for j in 0..n {
                rep.check("commutativity", self.mul_basis(i, j) == self.mul_basis(j, i), || format!("{} {}", lab(i), lab(j)));
                let dij = self.tw(i).0 + self.tw(j).0;
                let wij = self.weight(i) + self.weight(j);
                let homog = self.mul_basis(i, j).iter().all(|&(k, g)| {
                    self.tw(k).0 + g.sw().0 == dij && self.weight(k) == wij
                });
                rep.check("product homogeneity and weight additivity", homog, || format!("{} {}", lab(i), lab(j)));
                for k in 0..n {
                    let l = self.mul(&self.mul(&one(i), &one(j)), &one(k));
                    let r = self.mul(&one(i), &self.mul(&one(j), &one(k)));
                    rep.check("associativity", l == r, || format!("{} {} {}", lab(i), lab(j), lab(k)));
                }
                let lhs = self.delta(self.mul_basis(i, j));
                let rhs = self.tensor_mul(&self.delta[i as usize], &self.delta[j as usize]);
                rep.check("coproduct multiplicativity", lhs == rhs, || format!("{} {}", lab(i), lab(j)));
            }
            let d = &self.delta[i as usize];
            rep.check("coassociativity", self.triple_left(d) == self.triple_right(d), || lab(i));
            let mut left_counit: Terms = Vec::new();
            for &(c, l, r) in d {
                if l == 0 {
                    left_counit.push((r, c));
                }
            }
            xor_normalize(&mut left_counit);
            rep.check("left counit", left_counit == one(i), || lab(i));
            let mut right_counit: Terms = Vec::new();
            for &(c, l, r) in d {
                if r == 0 {
                    right_counit.push((l, c));
                }
            }
            xor_normalize(&mut right_counit);
            rep.check("right counit", right_counit == one(i), || lab(i));
            let wi = self.weight(i);
            rep.check(
                "coproduct right factors do not raise weight",
                d.iter().all(|&(_, _, r)| self.weight(r) <= wi),
                || lab(i),
            );
        }

        let r_range = (-stems.1).max(0)..=(-stems.0).max(0);
        let r_max = if self.base == Base::R { *r_range.end() } else { 0 };
        for t in 0..=8u32 {
            for r in *r_range.start()..=r_max {
                let g = Gm::new(t, r as u32);
                let eta = self.eta_r(g);
                let w = || format!("{g}");
                rep.check("counit of right unit", self.counit(&eta) == vec![g], w);
                rep.check("coproduct of right unit", self.delta(&eta) == self.unit_tensor(&eta), w);
                let back = self.from_right_form(&self.right_form(g, 0));
                rep.check("right normal form", back == vec![(0, g)], w);
                if self.base == Base::C {
                    rep.check("right unit equals left unit", eta == vec![(0, g)], w);
                }
                for k in 0..n {
                    let back = self.from_right_form(&self.right_form(g, k));
                    rep.check("right normal form", back == vec![(k, g)], || format!("{g} {}", lab(k)));
                }
            }
        }
        rep
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<(String, String)>,
}

impl AxiomReport {
    fn check(&mut self, identity: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push((identity.to_string(), witness()));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_identities(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.failures.iter().map(|(i, _)| i.as_str()).collect();
        v.dedup();
        v
    }
}

pub fn algebroid(base: Base, level: u8) -> &'static HopfAlgebroid {
    static CELLS: [OnceLock<HopfAlgebroid>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let idx = (if base == Base::R { 0 } else { 2 }) + level as usize;
    CELLS[idx].get_or_init(|| HopfAlgebroid::new(base, level))
}

/// An element of A(n)∨ together with its parent.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebroidElement {
    pub base: Base,
    pub level: u8,
    pub terms: Terms,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HopfError {
    #[error("elements live in different algebroids")]
    ParentMismatch,
    #[error("monomial {0:?} is not a basis monomial at this level")]
    NotInBasis(Am),
}

impl AlgebroidElement {
    pub fn parent(&self) -> &'static HopfAlgebroid {
        algebroid(self.base, self.level)
    }

    pub fn monomial(base: Base, level: u8, m: Am, g: Gm) -> Result<Self, HopfError> {
        let k = algebroid(base, level).index(m).ok_or(HopfError::NotInBasis(m))?;
        Ok(AlgebroidElement { base, level, terms: vec![(k, g)] })
    }

    pub fn from_ground(base: Base, level: u8, c: &GroundElement) -> Self {
        let mut terms: Terms = c.terms().iter().map(|&g| (0, g)).collect();
        xor_normalize(&mut terms);
        AlgebroidElement { base, level, terms }
    }

    pub fn add(&self, o: &Self) -> Result<Self, HopfError> {
        if (self.base, self.level) != (o.base, o.level) {
            return Err(HopfError::ParentMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().copied());
        xor_normalize(&mut terms);
        Ok(AlgebroidElement { terms, ..*self })
    }

    pub fn multiply(&self, o: &Self) -> Result<Self, HopfError> {
        if (self.base, self.level) != (o.base, o.level) {
            return Err(HopfError::ParentMismatch);
        }
        Ok(AlgebroidElement { terms: self.parent().mul(&self.terms, &o.terms), ..*self })
    }

    pub fn comultiply(&self) -> TensorElement {
        TensorElement { base: self.base, level: self.level, terms: self.parent().delta(&self.terms) }
    }

    pub fn eta_r(base: Base, level: u8, c: &GroundElement) -> Self {
        let h = algebroid(base, level);
        let mut terms = Vec::new();
        for &g in c.terms() {
            terms.extend(h.eta_r(g));
        }
        xor_normalize(&mut terms);
        AlgebroidElement { base, level, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for AlgebroidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let h = self.parent();
        for (n, &(k, g)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({g}) {}", h.monomial(k).label())?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebroidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    pub base: Base,
    pub level: u8,
    pub terms: TensorTerms,
}

impl TensorElement {
    pub fn from_pairs(base: Base, level: u8, pairs: &[(Gm, Am, Am)]) -> Self {
        let h = algebroid(base, level);
        let mut terms: TensorTerms =
            pairs.iter().map(|&(g, l, r)| (g, h.index(l).unwrap(), h.index(r).unwrap())).collect();
        xor_normalize(&mut terms);
        TensorElement { base, level, terms }
    }
}
