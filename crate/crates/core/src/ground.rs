//! The ground rings M2^C = F2[τ] and M2^R = F2[ρ,τ].

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    R,
    C,
}

impl Base {
    pub fn has_rho(self) -> bool {
        self == Base::R
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::R => "R",
            Base::C => "C",
        })
    }
}

impl std::str::FromStr for Base {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "R" | "r" => Ok(Base::R),
            "C" | "c" => Ok(Base::C),
            _ => Err(format!("unknown base {s:?}")),
        }
    }
}

/// Stem, filtration and weight. Ordered by (s, f, w).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriDegree {
    pub s: i32,
    pub f: i32,
    pub w: i32,
}

impl TriDegree {
    pub const ZERO: TriDegree = TriDegree { s: 0, f: 0, w: 0 };

    pub const fn new(s: i32, f: i32, w: i32) -> Self {
        TriDegree { s, f, w }
    }

    /// Coweight `s - w`.
    pub fn cw(self) -> i32 {
        self.s - self.w
    }

    /// Internal degree `t = s + f`.
    pub fn t(self) -> i32 {
        self.s + self.f
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s + o.s, self.f + o.f, self.w + o.w)
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s - o.s, self.f - o.f, self.w - o.w)
    }
}

impl Neg for TriDegree {
    type Output = TriDegree;
    fn neg(self) -> TriDegree {
        TriDegree::new(-self.s, -self.f, -self.w)
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.f, self.w)
    }
}

/// The monomial τ^t ρ^r. Ordered lexicographically on (t, r).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Gm {
    pub t: u32,
    pub r: u32,
}

impl Gm {
    pub const ONE: Gm = Gm { t: 0, r: 0 };
    pub const TAU: Gm = Gm { t: 1, r: 0 };
    pub const RHO: Gm = Gm { t: 0, r: 1 };

    pub const fn new(t: u32, r: u32) -> Self {
        Gm { t, r }
    }

    #[inline]
    pub fn mul(self, o: Gm) -> Gm {
        Gm { t: self.t + o.t, r: self.r + o.r }
    }

    /// Homological (stem, weight) of the monomial.
    pub fn sw(self) -> (i32, i32) {
        (-(self.r as i32), -(self.t as i32) - self.r as i32)
    }

    pub fn degree(self) -> TriDegree {
        let (s, w) = self.sw();
        TriDegree::new(s, 0, w)
    }
}

impl fmt::Display for Gm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} r^{}", self.t, self.r)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroundError {
    #[error("negative exponent ({0}, {1})")]
    NegativeExponent(i64, i64),
    #[error("ground degrees have filtration 0, got {0}")]
    NonzeroFiltration(TriDegree),
    #[error("rho does not exist over base C")]
    RhoOverC,
}

/// Degree of τ^i ρ^j.
pub fn monomial_degree(i: i64, j: i64) -> Result<TriDegree, GroundError> {
    if i < 0 || j < 0 {
        return Err(GroundError::NegativeExponent(i, j));
    }
    Ok(Gm::new(i as u32, j as u32).degree())
}

/// The unique monomial of a given degree, if any.
pub fn ground_mono_in_degree(base: Base, s: i32, w: i32) -> Option<Gm> {
    let j = -s;
    let i = -w - j;
    if j < 0 || i < 0 || (base == Base::C && j != 0) {
        return None;
    }
    Some(Gm::new(i as u32, j as u32))
}

pub fn ground_basis_in_degree(base: Base, d: TriDegree) -> Result<Vec<GroundElement>, GroundError> {
    if d.f != 0 {
        return Err(GroundError::NonzeroFiltration(d));
    }
    Ok(ground_mono_in_degree(base, d.s, d.w).map(|m| GroundElement::monomial(base, m)).into_iter().collect())
}

/// Sort and cancel pairs: the F2 normal form of a multiset.
pub fn xor_normalize<T: Ord>(v: &mut Vec<T>) {
    v.sort_unstable();
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v.drain(..) {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundElement {
    pub base: Base,
    terms: Vec<Gm>,
}

impl GroundElement {
    pub fn zero(base: Base) -> Self {
        GroundElement { base, terms: Vec::new() }
    }

    pub fn one(base: Base) -> Self {
        Self::monomial(base, Gm::ONE)
    }

    pub fn monomial(base: Base, m: Gm) -> Self {
        assert!(base == Base::R || m.r == 0, "rho over base C");
        GroundElement { base, terms: vec![m] }
    }

    pub fn from_terms(base: Base, terms: impl IntoIterator<Item = Gm>) -> Result<Self, GroundError> {
        let mut terms: Vec<Gm> = terms.into_iter().collect();
        if base == Base::C && terms.iter().any(|m| m.r > 0) {
            return Err(GroundError::RhoOverC);
        }
        xor_normalize(&mut terms);
        Ok(GroundElement { base, terms })
    }

    pub fn tau(base: Base) -> Self {
        Self::monomial(base, Gm::TAU)
    }

    pub fn rho() -> Self {
        Self::monomial(Base::R, Gm::RHO)
    }

    pub fn terms(&self) -> &[Gm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, o: &GroundElement) -> GroundElement {
        assert_eq!(self.base, o.base);
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                terms.push(a.mul(*b));
            }
        }
        xor_normalize(&mut terms);
        GroundElement { base: self.base, terms }
    }

    pub fn pow(&self, n: u32) -> GroundElement {
        let mut acc = Self::one(self.base);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<TriDegree> {
        let d = self.terms.first()?.degree();
        self.terms.iter().all(|m| m.degree() == d).then_some(d)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.terms.iter().map(|m| serde_json::json!([m.t, m.r])).collect())
    }
}

impl Add for &GroundElement {
    type Output = GroundElement;
    fn add(self, o: &GroundElement) -> GroundElement {
        assert_eq!(self.base, o.base);
        let mut terms: Vec<Gm> = self.terms.iter().chain(&o.terms).copied().collect();
        xor_normalize(&mut terms);
        GroundElement { base: self.base, terms }
    }
}

impl fmt::Display for GroundElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, m) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
