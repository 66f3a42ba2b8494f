//! Monomials of the full dual motivic Steenrod algebra and their coactions
//! over A(1)∨.

use std::fmt;

use crate::ground::{xor_normalize, Base, Gm};
use crate::hopf::{algebroid, Am, HopfAlgebroid};

pub const NGEN: usize = 8;

/// ξ̄1^{xi[1]} ⋯ ξ̄7^{xi[7]} · Π τ̄_i^{bit i of tau}. `xi[0]` is unused.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DualMono {
    pub xi: [u8; NGEN],
    pub tau: u16,
}

impl DualMono {
    pub const ONE: DualMono = DualMono { xi: [0; NGEN], tau: 0 };

    pub fn xi(i: usize) -> Self {
        let mut m = Self::ONE;
        m.xi[i] = 1;
        m
    }

    pub fn tau(i: usize) -> Self {
        DualMono { xi: [0; NGEN], tau: 1 << i }
    }

    pub fn weight(&self) -> u32 {
        let mut w = 0;
        for i in 1..NGEN {
            w += (self.xi[i] as u32) << i;
        }
        for i in 0..NGEN {
            if self.tau >> i & 1 == 1 {
                w += 1 << i;
            }
        }
        w
    }

    /// Homological (t, w).
    pub fn tw(&self) -> (i32, i32) {
        let (mut t, mut w) = (0i32, 0i32);
        for i in 1..NGEN {
            let e = self.xi[i] as i32;
            t += e * ((1 << (i + 1)) - 2);
            w += e * ((1 << i) - 1);
        }
        for i in 0..NGEN {
            if self.tau >> i & 1 == 1 {
                t += (1 << (i + 1)) - 1;
                w += (1 << i) - 1;
            }
        }
        (t, w)
    }

    pub fn has_tau(&self, i: usize) -> bool {
        self.tau >> i & 1 == 1
    }

    /// Lies in (A ∥ A(0))∨.
    pub fn in_a_mod_a0(&self) -> bool {
        !self.has_tau(0)
    }

    /// Lies in (A ∥ A(1))∨.
    pub fn in_a_mod_a1(&self) -> bool {
        !self.has_tau(0) && !self.has_tau(1) && self.xi[1] % 2 == 0
    }

    /// Split an (A ∥ A(0))∨ monomial as y·z with y ∈ (A ∥ A(1))∨ and
    /// z ∈ {1, ξ̄1, τ̄1, ξ̄1τ̄1}.
    pub fn split_a1(&self) -> (DualMono, DualMono) {
        debug_assert!(self.in_a_mod_a0());
        let mut y = *self;
        let mut z = Self::ONE;
        if y.xi[1] % 2 == 1 {
            y.xi[1] -= 1;
            z.xi[1] = 1;
        }
        if y.has_tau(1) {
            y.tau &= !2;
            z.tau |= 2;
        }
        (y, z)
    }

    /// Raise every index by one: ξ̄i ↦ ξ̄(i+1), τ̄i ↦ τ̄(i+1).
    pub fn raise(&self) -> DualMono {
        let mut m = Self::ONE;
        for i in 1..NGEN - 1 {
            m.xi[i + 1] = self.xi[i];
        }
        assert!(self.xi[NGEN - 1] == 0 && !self.has_tau(NGEN - 1), "generator index overflow");
        m.tau = self.tau << 1;
        m
    }

    /// Concatenation of exponents, valid when the τ̄ parts are disjoint.
    pub fn disjoint_mul(&self, o: &DualMono) -> Option<DualMono> {
        if self.tau & o.tau != 0 {
            return None;
        }
        let mut m = *self;
        for i in 1..NGEN {
            m.xi[i] += o.xi[i];
        }
        m.tau |= o.tau;
        Some(m)
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for i in 1..NGEN {
            match self.xi[i] {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        for i in 0..NGEN {
            if self.has_tau(i) {
                parts.push(format!("t{i}"));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for DualMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn times_tau(base: Base, c: Gm, m: DualMono, i: usize, out: &mut Vec<(Gm, DualMono)>) {
    if !m.has_tau(i) {
        let mut m = m;
        m.tau |= 1 << i;
        out.push((c, m));
        return;
    }
    assert!(i + 1 < NGEN, "generator index overflow");
    let mut rest = m;
    rest.tau &= !(1 << i);
    let mut a = rest;
    a.xi[i + 1] += 1;
    out.push((c.mul(Gm::TAU), a));
    if base == Base::R {
        times_tau(base, c.mul(Gm::RHO), rest, i + 1, out);
    }
}

/// Product in the dual Steenrod algebra, using τ̄i² = τξ̄(i+1) + ρτ̄(i+1).
pub fn mul(base: Base, x: &DualMono, y: &DualMono) -> Vec<(Gm, DualMono)> {
    let mut m = *x;
    for i in 1..NGEN {
        m.xi[i] += y.xi[i];
    }
    let mut cur = vec![(Gm::ONE, m)];
    for i in 0..NGEN {
        if y.has_tau(i) {
            let mut next = Vec::new();
            for (c, m) in cur {
                times_tau(base, c, m, i, &mut next);
            }
            cur = next;
        }
    }
    xor_normalize(&mut cur);
    cur
}

/// Left factor in A(1)∨, right factor in the dual Steenrod algebra.
pub type Coaction = Vec<(Gm, u8, DualMono)>;

fn mixed_mul(h: &HopfAlgebroid, x: &Coaction, y: &Coaction) -> Coaction {
    let mut out = Vec::new();
    for &(c1, l1, r1) in x {
        for &(c2, l2, r2) in y {
            let cc = c1.mul(c2);
            let left: Vec<(u8, Gm)> = h.mul_basis(l1, l2).iter().map(|&(k, g)| (k, g.mul(cc))).collect();
            for (g, r) in mul(h.base, &r1, &r2) {
                if g == Gm::ONE {
                    out.extend(left.iter().map(|&(k, c)| (c, k, r)));
                } else {
                    let moved = h.mul(&left, &h.eta_r(g));
                    out.extend(moved.into_iter().map(|(k, c)| (c, k, r)));
                }
            }
        }
    }
    xor_normalize(&mut out);
    out
}

fn generator_coaction(h: &HopfAlgebroid, is_tau: bool, i: usize) -> Coaction {
    let idx = |m| h.index(m).unwrap();
    let sq = |k: usize| {
        let mut m = DualMono::ONE;
        if k > 0 {
            m.xi[k] = 2;
        }
        m
    };
    let mut out = Vec::new();
    if is_tau {
        out.push((Gm::ONE, 0, DualMono::tau(i)));
        let xi_i = if i == 0 { DualMono::ONE } else { DualMono::xi(i) };
        out.push((Gm::ONE, idx(Am::TAU0), xi_i));
        if i >= 1 {
            out.push((Gm::ONE, idx(Am::TAU1), sq(i - 1)));
        }
    } else {
        out.push((Gm::ONE, 0, DualMono::xi(i)));
        out.push((Gm::ONE, idx(Am::XI1), sq(i - 1)));
    }
    xor_normalize(&mut out);
    out
}

/// The A(1)∨-coaction on a monomial, obtained by projecting the left factor
/// of the coproduct to A(1)∨. Ground coefficients sit on the far left.
pub fn coaction(base: Base, m: &DualMono) -> Coaction {
    let h = algebroid(base, 1);
    let mut acc: Coaction = vec![(Gm::ONE, 0, DualMono::ONE)];
    for i in 1..NGEN {
        for _ in 0..m.xi[i] {
            acc = mixed_mul(h, &acc, &generator_coaction(h, false, i));
        }
    }
    for i in 0..NGEN {
        if m.has_tau(i) {
            acc = mixed_mul(h, &acc, &generator_coaction(h, true, i));
        }
    }
    acc
}

/// All monomials of weight ≤ `bound` satisfying `keep`.
pub fn monomials_up_to(bound: u32, keep: impl Fn(&DualMono) -> bool) -> Vec<DualMono> {
    let mut out = Vec::new();
    let mut stack = vec![(DualMono::ONE, 1usize)];
    while let Some((m, i)) = stack.pop() {
        if i == NGEN {
            for mask in 0u16..(1 << NGEN) {
                let mut mm = m;
                mm.tau = mask;
                if mm.weight() <= bound && keep(&mm) {
                    out.push(mm);
                }
            }
            continue;
        }
        let step = 1u32 << i;
        let mut e = 0u32;
        while m.weight() + e * step <= bound {
            let mut mm = m;
            mm.xi[i] = e as u8;
            stack.push((mm, i + 1));
            e += 1;
        }
    }
    out.sort_by_key(|m| (m.weight(), m.tw().0, m.label()));
    out.dedup();
    out
}
