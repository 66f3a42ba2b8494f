//! The dual algebra C = Hom_{M2}(Γ, M2) of Γ = A(n)∨, and comodules viewed
//! as left C-modules.
//!
//! A basis of C is f_{k,c} = c·e_k^*, for e_k a basis monomial of Γ and c a
//! ground monomial. Cohomological bidegree of f_{k,τ^iρ^j} is
//! (t_k + j, w_k + i + j). A comodule element m with ψ(m) = Σ e_k ⊗ μ_k(m)
//! in right normal form is acted on by f_{k,c}·m = c·μ_k(m).

use std::sync::{Arc, OnceLock};

use crate::comod::Comodule;
use crate::ground::{xor_normalize, Base, Gm};
use crate::hopf::{algebroid, HopfAlgebroid, Terms};

/// `Full` is C itself; `Reduced` is C/(τ, ρ), a finite F2-algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Full,
    Reduced,
}

pub struct DualAlgebra {
    pub base: Base,
    pub level: u8,
    pub shape: Shape,
    pub hopf: &'static HopfAlgebroid,
    pub rank: usize,
    /// (t_k, w_k) of the basis monomials.
    pub deg: Vec<(i32, i32)>,
    /// τ^period is central: η_R(τ^period) = τ^period.
    pub period: u32,
    prod: Vec<Vec<Vec<Vec<(u8, Gm)>>>>,
}

impl std::fmt::Debug for DualAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "C(A({})∨_{}, {:?})", self.level, self.base, self.shape)
    }
}

/// Period of τ in the right unit: the least p with η_R(τ^p) = τ^p.
fn tau_period(h: &HopfAlgebroid) -> u32 {
    (1..=8).find(|&p| h.eta_r(Gm::new(p, 0)) == vec![(0, Gm::new(p, 0))]).expect("τ-period ≤ 8")
}

impl DualAlgebra {
    pub fn new(base: Base, level: u8, shape: Shape) -> Self {
        let h = algebroid(base, level);
        let rank = h.rank();
        let deg = (0..rank as u8).map(|k| h.tw(k)).collect();
        let period = tau_period(h);
        let mut a = DualAlgebra { base, level, shape, hopf: h, rank, deg, period, prod: Vec::new() };
        a.prod = (0..rank as u8)
            .map(|k| {
                (0..period)
                    .map(|i| (0..rank as u8).map(|k2| a.compute_product(k, i, k2)).collect())
                    .collect()
            })
            .collect();
        a
    }

    /// f_{k,1} applied to x ∈ Γ through the regular coaction.
    pub fn act_on_gamma(&self, k: u8, x: &Terms) -> Terms {
        let h = self.hopf;
        let mut out = Vec::new();
        for &(ex, cx) in x {
            for &(c, l, r) in h.delta_basis(ex) {
                for (m, rr) in h.right_form(cx.mul(c), l) {
                    if m == k {
                        out.push((r, rr));
                    }
                }
            }
        }
        xor_normalize(&mut out);
        out
    }

    /// f_{k,1}·f_{k2,τ^i} as Σ f_{m, v_m}.
    fn compute_product(&self, k: u8, i: u32, k2: u8) -> Vec<(u8, Gm)> {
        let mut out = Vec::new();
        for m in 0..self.rank as u8 {
            let g: Terms = self.act_on_gamma(k2, &vec![(m, Gm::ONE)]).into_iter().map(|(e, c)| (e, c.mul(Gm::new(i, 0)))).collect();
            let fg = self.act_on_gamma(k, &g);
            let mut v: Vec<Gm> = fg.into_iter().filter(|(e, _)| *e == 0).map(|(_, c)| c).collect();
            xor_normalize(&mut v);
            assert!(v.len() <= 1, "inhomogeneous product value");
            if let Some(&c) = v.first() {
                out.push((m, c));
            }
        }
        out
    }

    /// The ground monomial c making f_{k,c} live in bidegree (t, q), if any.
    #[inline]
    pub fn coeff_in_degree(&self, k: u8, t: i32, q: i32) -> Option<Gm> {
        let (tk, wk) = self.deg[k as usize];
        let j = t - tk;
        let i = q - wk - j;
        if j < 0 || i < 0 {
            return None;
        }
        if (self.base == Base::C && j > 0) || (self.shape == Shape::Reduced && (i > 0 || j > 0)) {
            return None;
        }
        Some(Gm::new(i as u32, j as u32))
    }

    /// f_{k,c}·f_{k2,c2}, appended to `out` scaled by nothing further.
    #[inline]
    pub fn mul_into(&self, k: u8, c: Gm, k2: u8, c2: Gm, out: &mut Vec<(u8, Gm)>) {
        let p = self.period;
        let scale = Gm::new(c.t + p * (c2.t / p), c.r + c2.r);
        for &(m, v) in &self.prod[k as usize][(c2.t % p) as usize][k2 as usize] {
            let g = v.mul(scale);
            if self.shape == Shape::Reduced && g != Gm::ONE {
                continue;
            }
            out.push((m, g));
        }
    }

    pub fn mul(&self, x: &[(u8, Gm)], y: &[(u8, Gm)]) -> Vec<(u8, Gm)> {
        let mut out = Vec::new();
        for &(k, c) in x {
            for &(k2, c2) in y {
                self.mul_into(k, c, k2, c2, &mut out);
            }
        }
        xor_normalize(&mut out);
        out
    }
}

pub fn dual_algebra(base: Base, level: u8, shape: Shape) -> &'static DualAlgebra {
    static CELLS: [OnceLock<DualAlgebra>; 8] = [const { OnceLock::new() }; 8];
    let i = (base == Base::C) as usize * 4 + level as usize * 2 + (shape == Shape::Reduced) as usize;
    CELLS[i].get_or_init(|| DualAlgebra::new(base, level, shape))
}

/// A comodule regarded as a left module over the dual algebra. With
/// `rho_quotient` set, the module is M/ρ: every ρ-multiple is zero.
#[derive(Clone)]
pub struct CModule {
    pub comod: Arc<Comodule>,
    pub alg: &'static DualAlgebra,
    pub rho_quotient: bool,
    /// table[b][i][k]: f_{k,1}·(τ^i b) = Σ r·b′ for i < period.
    table: Vec<Vec<Vec<Vec<(Gm, u32)>>>>,
}

impl CModule {
    pub fn new(comod: Comodule, shape: Shape, rho_quotient: bool) -> Self {
        assert!(!rho_quotient || comod.base == Base::R);
        let alg = dual_algebra(comod.base, comod.level, shape);
        let h = alg.hopf;
        let mut table = Vec::new();
        for terms in &comod.coaction {
            let mut per_i = Vec::new();
            for i in 0..alg.period {
                let mut per_k = vec![Vec::new(); alg.rank];
                for &(c, a, b2) in terms {
                    for (m, r) in h.right_form(c.mul(Gm::new(i, 0)), a) {
                        if shape == Shape::Reduced && r != Gm::ONE {
                            continue;
                        }
                        if rho_quotient && r.r > 0 {
                            continue;
                        }
                        per_k[m as usize].push((r, b2));
                    }
                }
                for v in &mut per_k {
                    xor_normalize(v);
                }
                per_i.push(per_k);
            }
            table.push(per_i);
        }
        CModule { comod: Arc::new(comod), alg, rho_quotient, table }
    }

    pub fn rank(&self) -> usize {
        self.comod.rank()
    }

    /// Internal degree and weight of basis element b.
    pub fn tw(&self, b: u32) -> (i32, i32) {
        let d = self.comod.basis[b as usize].deg;
        (d.s, d.w)
    }

    /// Whether the ground monomial c may multiply basis elements.
    pub fn allows(&self, c: Gm) -> bool {
        !(self.rho_quotient || self.comod.base == Base::C) || c.r == 0
    }

    /// f_{k,c}·(x·b), appended to `out`.
    #[inline]
    pub fn act_into(&self, k: u8, c: Gm, x: Gm, b: u32, out: &mut Vec<(Gm, u32)>) {
        let p = self.alg.period;
        let scale = Gm::new(c.t + p * (x.t / p), c.r + x.r);
        if self.rho_quotient && scale.r > 0 {
            return;
        }
        for &(r, b2) in &self.table[b as usize][(x.t % p) as usize][k as usize] {
            out.push((r.mul(scale), b2));
        }
    }

    pub fn act(&self, k: u8, c: Gm, x: &[(Gm, u32)]) -> Vec<(Gm, u32)> {
        let mut out = Vec::new();
        for &(g, b) in x {
            self.act_into(k, c, g, b, &mut out);
        }
        xor_normalize(&mut out);
        out
    }
}
