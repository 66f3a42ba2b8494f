//! Closed-form answers as data: finitely presented modules over polynomial
//! operator rings, the named module shapes, big flags, the Z tables, the
//! predicted Ext of Brown–Gitler comodules, and chart comparison.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chart::{operator_degree, Chart, OPERATORS};
use crate::comod::Comodule;
use crate::ext::{ExtComputer, Range};
use crate::ground::{Base, TriDegree};
use crate::linalg::{apply, BitVec, Echelon, Subquotient};
use crate::torsion::{chart_mod_b, extended_range, DEFAULT_MAX_POWER};

/// Number of ones in the binary expansion of k.
pub fn alpha(k: u32) -> u32 {
    k.count_ones()
}

type Mono = Vec<u16>;

/// A polynomial ring on named generators of known tridegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub base: Base,
    pub gens: Vec<(String, TriDegree)>,
}

const fn td(s: i32, f: i32, w: i32) -> TriDegree {
    TriDegree::new(s, f, w)
}

impl Ring {
    fn new(base: Base, gens: &[(&str, TriDegree)]) -> Self {
        Ring { base, gens: gens.iter().map(|(n, d)| (n.to_string(), *d)).collect() }
    }

    /// The nine generators of Ext of the real ground ring.
    pub fn ext_m2_r() -> Self {
        Self::new(
            Base::R,
            &[
                ("rho", td(-1, 0, -1)),
                ("h0", td(0, 1, 0)),
                ("h1", td(1, 1, 1)),
                ("tau2_a", td(4, 3, 0)),
                ("tau4", td(0, 0, -4)),
                ("b", td(8, 4, 4)),
                ("tau_h1", td(1, 1, 0)),
                ("tau2_h0", td(0, 1, -2)),
                ("a", td(4, 3, 2)),
            ],
        )
    }

    /// The operators through which the real module shapes are presented.
    pub fn shapes_r() -> Self {
        Self::new(Base::R, &[("rho", td(-1, 0, -1)), ("tau4", td(0, 0, -4)), ("h0", td(0, 1, 0)), ("h1", td(1, 1, 1)), ("b", td(8, 4, 4))])
    }

    /// Generators of Ext of the complex ground ring.
    pub fn ext_m2_c() -> Self {
        Self::new(Base::C, &[("tau", td(0, 0, -1)), ("h0", td(0, 1, 0)), ("h1", td(1, 1, 1)), ("a", td(4, 3, 2)), ("b", td(8, 4, 4))])
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|(n, _)| n == name)
    }

    fn degree(&self, m: &[u16]) -> TriDegree {
        m.iter().zip(&self.gens).fold(TriDegree::ZERO, |acc, (&e, (_, d))| {
            let e = e as i32;
            acc + TriDegree::new(e * d.s, e * d.f, e * d.w)
        })
    }

    fn unit(&self) -> Mono {
        vec![0; self.gens.len()]
    }

    /// Every monomial whose degree lies in `bx`, by degree.
    fn monomials(&self, bx: &Range) -> HashMap<TriDegree, Vec<Mono>> {
        let pos: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gens[i].1.f > 0).collect();
        let zero: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gens[i].1.f == 0).collect();
        for &i in &zero {
            let d = self.gens[i].1;
            assert!(d.w < 0 && d.s <= 0, "filtration-zero generator {} must lower weight", self.gens[i].0);
        }
        let mut out: HashMap<TriDegree, Vec<Mono>> = HashMap::new();
        let mut m = self.unit();
        self.walk_pos(&pos, 0, bx.f.1, &mut m, &mut |m: &Mono| {
            let mut m2 = m.clone();
            self.walk_zero(&zero, 0, bx, &mut m2, &mut out);
        });
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    fn walk_pos(&self, pos: &[usize], k: usize, budget: i32, m: &mut Mono, f: &mut impl FnMut(&Mono)) {
        if k == pos.len() {
            f(m);
            return;
        }
        let gf = self.gens[pos[k]].1.f;
        let mut e = 0;
        while e * gf <= budget {
            m[pos[k]] = e as u16;
            self.walk_pos(pos, k + 1, budget - e * gf, m, f);
            e += 1;
        }
        m[pos[k]] = 0;
    }

    fn walk_zero(&self, zero: &[usize], k: usize, bx: &Range, m: &mut Mono, out: &mut HashMap<TriDegree, Vec<Mono>>) {
        let d = self.degree(m);
        if d.w < bx.w.0 || d.s < bx.s.0 {
            return;
        }
        if k == zero.len() {
            if bx.contains(d) {
                out.entry(d).or_default().push(m.clone());
            }
            return;
        }
        let i = zero[k];
        let start = m[i];
        loop {
            let d = self.degree(m);
            if d.w < bx.w.0 || d.s < bx.s.0 {
                break;
            }
            self.walk_zero(zero, k + 1, bx, m, out);
            m[i] += 1;
        }
        m[i] = start;
    }

    /// Monomial realizing a chart operator, if the ring has it.
    pub fn operator(&self, op: &str) -> Option<Mono> {
        if let Some(i) = self.index(op) {
            let mut m = self.unit();
            m[i] = 1;
            return Some(m);
        }
        let word = match op {
            "tau4" => "tau^4",
            "tau_h1" => "tau*h1",
            "tau2_h0" => "tau^2*h0",
            "tau2_a" => "tau^2*a",
            _ => return None,
        };
        let mut m = self.unit();
        for factor in word.split('*') {
            let (name, e) = split_power(factor).ok()?;
            m[self.index(name)?] += e;
        }
        Some(m)
    }
}

fn split_power(factor: &str) -> Result<(&str, u16), String> {
    match factor.split_once('^') {
        Some((n, e)) => Ok((n.trim(), e.trim().parse().map_err(|_| format!("bad exponent in {factor:?}"))?)),
        None => Ok((factor.trim(), 1)),
    }
}

/// A finitely presented graded module over a ring: generators in given
/// tridegrees modulo homogeneous relations. Relations are written as sums of
/// products such as `"h1*t + rho*a"`; `=` is read as `+`. A term without a
/// generator factor refers to the only generator.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub ring: Ring,
    pub gens: Vec<(String, TriDegree)>,
    pub rels: Vec<String>,
    /// When nonempty, only the submodule generated by these elements.
    pub sub: Vec<String>,
}

type Rel = Vec<(Mono, usize)>;

impl Presentation {
    pub fn new(name: &str, ring: Ring, gens: &[(&str, TriDegree)], rels: &[&str]) -> Self {
        Presentation {
            name: name.into(),
            ring,
            gens: gens.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
            rels: rels.iter().map(|r| r.to_string()).collect(),
            sub: Vec::new(),
        }
    }

    /// The submodule generated by the given elements.
    pub fn submodule(mut self, name: &str, elements: &[&str]) -> Self {
        self.name = name.into();
        self.sub = elements.iter().map(|e| e.to_string()).collect();
        self
    }

    fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|(n, _)| n == name)
    }

    fn parse_term(&self, term: &str) -> Result<(Mono, usize), String> {
        let mut m = self.ring.unit();
        let mut g = None;
        for factor in term.split('*') {
            let (name, e) = split_power(factor)?;
            if name == "1" {
                continue;
            }
            if let Some(i) = self.gen_index(name) {
                if g.is_some() || e != 1 {
                    return Err(format!("{}: term {term:?} is not linear in generators", self.name));
                }
                g = Some(i);
            } else if let Some(i) = self.ring.index(name) {
                m[i] += e;
            } else {
                return Err(format!("{}: unknown symbol {name:?}", self.name));
            }
        }
        let g = match g {
            Some(g) => g,
            None if self.gens.len() == 1 => 0,
            None => return Err(format!("{}: term {term:?} names no generator", self.name)),
        };
        Ok((m, g))
    }

    fn term_degree(&self, t: &(Mono, usize)) -> TriDegree {
        self.ring.degree(&t.0) + self.gens[t.1].1
    }

    /// Parsed relations with their tridegrees. Fails on inhomogeneous input.
    fn parsed(&self) -> Result<Vec<(TriDegree, Rel)>, String> {
        let mut out = Vec::new();
        for r in &self.rels {
            let text = r.replace('=', "+");
            let terms: Vec<(Mono, usize)> = text.split('+').map(|t| self.parse_term(t)).collect::<Result<_, _>>()?;
            let d = self.term_degree(&terms[0]);
            for t in &terms {
                if self.term_degree(t) != d {
                    return Err(format!("{}: relation {r:?} is inhomogeneous ({} vs {})", self.name, d, self.term_degree(t)));
                }
            }
            out.push((d, terms));
        }
        Ok(out)
    }

    fn parsed_sub(&self) -> Result<Vec<(TriDegree, Rel)>, String> {
        let mut out = Vec::new();
        for e in &self.sub {
            let terms: Vec<(Mono, usize)> = e.split('+').map(|t| self.parse_term(t)).collect::<Result<_, _>>()?;
            let d = self.term_degree(&terms[0]);
            if terms.iter().any(|t| self.term_degree(t) != d) {
                return Err(format!("{}: element {e:?} is inhomogeneous", self.name));
            }
            out.push((d, terms));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), String> {
        self.parsed()?;
        self.parsed_sub().map(|_| ())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "base": self.ring.base.to_string(),
            "ring": self.ring.gens.iter().map(|(n, d)| json!({"name": n, "s": d.s, "f": d.f, "w": d.w})).collect::<Vec<_>>(),
            "generators": self.gens.iter().map(|(n, d)| json!({"name": n, "s": d.s, "f": d.f, "w": d.w})).collect::<Vec<_>>(),
            "relations": self.rels,
            "submodule": self.sub,
        })
    }

    /// Dimensions and operator actions over a range.
    pub fn instantiate(&self, range: &Range) -> Chart {
        let rels = self.parsed().unwrap_or_else(|e| panic!("{e}"));
        let sub = self.parsed_sub().unwrap_or_else(|e| panic!("{e}"));
        let mut shifts: Vec<TriDegree> = self.gens.iter().map(|(_, d)| *d).collect();
        shifts.extend(rels.iter().map(|(d, _)| *d));
        let bx = Range::new(
            (range.s.0 - shifts.iter().map(|d| d.s).max().unwrap_or(0), range.s.1 - shifts.iter().map(|d| d.s).min().unwrap_or(0)),
            (0, range.f.1 - shifts.iter().map(|d| d.f).min().unwrap_or(0)),
            (range.w.0 - shifts.iter().map(|d| d.w).max().unwrap_or(0), range.w.1 - shifts.iter().map(|d| d.w).min().unwrap_or(0)),
        );
        let monos = self.ring.monomials(&bx);
        let empty = Vec::new();
        let at = |d: TriDegree| monos.get(&d).unwrap_or(&empty);
        let degrees: Vec<TriDegree> = (range.s.0..=range.s.1)
            .flat_map(|s| (range.f.0..=range.f.1).flat_map(move |f| (range.w.0..=range.w.1).map(move |w| td(s, f, w))))
            .collect();
        let pieces: BTreeMap<TriDegree, Piece> = degrees
            .into_par_iter()
            .filter_map(|d| {
                let mut basis: Vec<(Mono, usize)> = Vec::new();
                for (g, (_, gd)) in self.gens.iter().enumerate() {
                    for m in at(d - *gd) {
                        basis.push((m.clone(), g));
                    }
                }
                if basis.is_empty() {
                    return None;
                }
                let index: HashMap<(Mono, usize), usize> = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
                let n = basis.len();
                let mut bound = Echelon::new(n, 0);
                for (rd, terms) in &rels {
                    for m in at(d - *rd) {
                        let mut v = BitVec::zeros(n);
                        for (tm, g) in terms {
                            let prod: Mono = tm.iter().zip(m).map(|(a, b)| a + b).collect();
                            v.flip(index[&(prod, *g)]);
                        }
                        bound.insert(v);
                    }
                }
                let cycles: Vec<BitVec> = if sub.is_empty() {
                    (0..n).map(|i| BitVec::unit(n, i)).collect()
                } else {
                    let mut span = Vec::new();
                    for (ed, terms) in &sub {
                        for m in at(d - *ed) {
                            let mut v = BitVec::zeros(n);
                            for (tm, g) in terms {
                                let prod: Mono = tm.iter().zip(m).map(|(a, b)| a + b).collect();
                                v.flip(index[&(prod, *g)]);
                            }
                            span.push(v);
                        }
                    }
                    span
                };
                let sq = Subquotient::new(n, &bound, &cycles);
                (sq.dim() > 0).then_some((d, Piece { basis, index, sq }))
            })
            .collect();
        let mut chart = Chart::empty(self.ring.base, self.name.clone(), *range);
        chart.dims = pieces.iter().map(|(d, p)| (*d, p.sq.dim())).collect();
        for (op, _) in OPERATORS {
            let Some(om) = self.ring.operator(op) else { continue };
            let od = operator_degree(op).unwrap();
            debug_assert_eq!(self.ring.degree(&om), od);
            let rows = chart.actions.entry(op.to_string()).or_default();
            for (d, p) in &pieces {
                let t = *d + od;
                if !range.contains(t) {
                    chart.border.insert(*d);
                    continue;
                }
                let m = match pieces.get(&t) {
                    None => vec![BitVec::zeros(0); p.sq.dim()],
                    Some(tp) => p
                        .sq
                        .reps()
                        .iter()
                        .map(|r| {
                            let mut v = BitVec::zeros(tp.basis.len());
                            for i in r.ones() {
                                let (m, g) = &p.basis[i];
                                let prod: Mono = m.iter().zip(&om).map(|(a, b)| a + b).collect();
                                v.flip(tp.index[&(prod, *g)]);
                            }
                            tp.sq.coords(&v).expect("relations are closed under operators")
                        })
                        .collect(),
                };
                rows.insert(*d, m);
            }
        }
        chart
    }
}

struct Piece {
    basis: Vec<(Mono, usize)>,
    index: HashMap<(Mono, usize), usize>,
    sq: Subquotient,
}

// ---------------------------------------------------------------------------
// Module shapes

/// Ext of the real ground ring: nine generators and twenty-two relations.
pub fn ext_m2_r() -> Presentation {
    Presentation::new(
        "ExtM2_R",
        Ring::ext_m2_r(),
        &[("1", TriDegree::ZERO)],
        &[
            "rho*h0",
            "h0*h1",
            "tau2_h0^2 + tau4*h0^2",
            "tau4*h1^3 + rho*tau2_a",
            "tau2_h0*a + h0*tau2_a",
            "h1*tau2_a + rho^3*b",
            "a^2 + h0^2*b",
            "tau2_a^2 + tau4*h0^2*b + rho^2*tau4*h1^2*b",
            "rho^2*tau_h1",
            "h0*tau_h1 + rho*h1*tau_h1",
            "h1^2*tau_h1",
            "tau_h1*tau2_a",
            "rho*tau2_h0",
            "rho^3*a",
            "tau2_h0*h1 + rho*tau_h1^2",
            "h1*tau_h1^2 + rho*a",
            "h1*a",
            "tau2_h0*tau2_a + tau4*h0*a",
            "a*tau2_a + tau2_h0*h0*b",
            "tau2_h0*tau_h1",
            "tau_h1^3",
            "tau_h1*a",
        ],
    )
}

/// Ext of the complex ground ring.
pub fn ext_m2_c() -> Presentation {
    Presentation::new("ExtM2_C", Ring::ext_m2_c(), &[("1", TriDegree::ZERO)], &["h0*h1", "tau*h1^3", "h1*a", "a^2 + h0^2*b"])
}

fn shape(name: &str, gens: &[(&str, TriDegree)], rels: &[&str]) -> Presentation {
    Presentation::new(name, Ring::shapes_r(), gens, rels)
}

const E: (&str, TriDegree) = ("e", TriDegree::ZERO);

/// ρ-tower.
pub fn shape_p() -> Presentation {
    shape("P", &[E], &["h0", "h1", "b"])
}

/// h0-tower.
pub fn shape_h() -> Presentation {
    shape("H", &[E], &["rho", "h1", "b"])
}

/// (ρ, h0)-tower.
pub fn shape_ph() -> Presentation {
    shape("PH", &[E], &["rho*h0", "h1", "b"])
}

/// Diamond.
pub fn shape_d() -> Presentation {
    shape("D", &[E], &["rho^2", "h0^2", "h1^2", "rho*h0", "h0*h1", "rho*h1 + h0", "b"])
}

/// Staircase.
pub fn shape_s() -> Presentation {
    shape(
        "S",
        &[E, ("t", td(2, 1, 2)), ("a", td(4, 2, 4))],
        &[
            "rho*e",
            "h1^3*e",
            "h0*h1*e",
            "b*e",
            "rho*t + h1*e",
            "h1*t + rho*a",
            "h0*t + h1^2*e",
            "h1^2*e + rho^2*a",
            "rho^2*t",
            "h0^2*t",
            "h1^2*t",
            "b*t",
            "rho^3*a",
            "h1*a",
            "h0*a",
            "b*a",
        ],
    )
}

/// Segment.
pub fn shape_t() -> Presentation {
    shape("T", &[E], &["rho^2", "h0", "h1", "b"])
}

/// J-tower.
pub fn shape_j() -> Presentation {
    shape("J", &[E], &["rho^3", "rho*h0", "h1", "b"])
}

/// JD-tower.
pub fn shape_jd() -> Presentation {
    shape(
        "JD",
        &[E, ("t", td(-2, -1, -2))],
        &["rho^3*e", "rho*h0*e", "h1*e", "b*e", "h1*t + rho*e", "h0*t + rho^2*e", "rho^2*t", "h0^2*t", "b*t"],
    )
}

/// The big flag with flag generator in tridegree (s,f,w).
pub fn big_flag(s: i32, f: i32, w: i32) -> Presentation {
    let base = td(s, f, w);
    let mut gens: Vec<(String, TriDegree)> = vec![("x0".into(), base), ("y0".into(), base + td(4, 3, 0))];
    let mut rels: Vec<String> = ["rho*h0*x0", "h0*h1*x0", "rho*y0 + tau4*h1^3*x0", "h1*y0 + rho^3*b*x0"].iter().map(|r| r.to_string()).collect();
    let mut m = 1;
    loop {
        let n = (m - 1) / 4;
        let r = (m - 1) % 4 + 1;
        let off = match r {
            1 => td(-4, -1, -4),
            2 => td(-6, -2, -6),
            3 => td(-7, -3, -7),
            _ => td(-8, -4, -8),
        };
        let d = base + off - td(8 * n, 4 * n, 8 * n);
        if d.f < 0 {
            break;
        }
        let x = format!("x{m}");
        let lower = format!("x{}", 4 * n);
        gens.push((x.clone(), d));
        match r {
            1 => {
                rels.push(format!("rho*h0*{x}"));
                rels.push(format!("h1*{x} + rho^3*{lower}"));
                if n == 0 {
                    rels.push(format!("b*{x} + y0"));
                } else {
                    rels.push(format!("b*{x} + tau4*x{}", m - 4));
                }
            }
            2 => {
                rels.push(format!("h0*{x}"));
                rels.push(format!("h1*{x} + rho*x{}", m - 1));
                rels.push(format!("b*{x} + tau4*h1^2*{lower}"));
            }
            3 => {
                rels.push(format!("h0*{x}"));
                rels.push(format!("h1*{x} + x{}", m - 1));
                rels.push(format!("b*{x} + tau4*h1*{lower}"));
            }
            _ => {
                rels.push(format!("rho*h0*{x}"));
                rels.push(format!("h1*{x} + x{}", m - 1));
                rels.push(format!("b*{x} + tau4*{lower}"));
            }
        }
        if (r == 1 && n >= 1) || r == 4 {
            let z = format!("z{m}");
            gens.push((z.clone(), d + td(0, 1, 4)));
            rels.push(format!("tau4*{z} + h0*{x}"));
            rels.push(format!("rho*{z}"));
            rels.push(format!("h1*{z}"));
            rels.push(format!("b*{z} + h0*x{}", m - 4));
        }
        if d.f == 0 {
            break;
        }
        m += 1;
    }
    if base.f == 0 {
        gens.truncate(2);
        rels.truncate(4);
    }
    Presentation {
        name: format!("F_{{{s},{f},{w}}}"),
        ring: Ring::shapes_r(),
        gens,
        rels,
        sub: Vec::new(),
    }
}

/// Generators of a big flag tail with their tridegrees.
pub fn big_flag_tail(s: i32, f: i32, w: i32) -> Vec<(String, TriDegree)> {
    big_flag(s, f, w).gens.into_iter().filter(|(n, _)| n != "x0" && n != "y0").collect()
}

/// h0-tower over the complex ground ring.
pub fn c_tower() -> Presentation {
    Presentation::new("M2[h0]", Ring::ext_m2_c(), &[E], &["h1", "a", "b"])
}

/// The complex ground ring alone.
pub fn c_ground() -> Presentation {
    Presentation::new("M2", Ring::ext_m2_c(), &[E], &["h0", "h1", "a", "b"])
}

/// M2[h1]/(h1²) over the complex ground ring.
pub fn c_h1_segment() -> Presentation {
    Presentation::new("M2[h1]/(h1^2)", Ring::ext_m2_c(), &[E], &["h0", "h1^2", "a", "b"])
}

// ---------------------------------------------------------------------------
// Chart expressions

/// A chart-valued expression: presentations, computed Ext, shifts, sums and
/// coweight pieces.
#[derive(Clone, Debug)]
pub enum Expr {
    Pres(Presentation),
    /// Ext of a comodule, optionally modulo b-power torsion.
    Ext { label: String, comod: Comodule, mod_b: bool },
    /// Σ^{p,q} X⟨n⟩: tridegrees move by (p, n, q).
    Shift { by: TriDegree, inner: Box<Expr> },
    Sum(Vec<Expr>),
    /// The cw ≡ residue (mod 4) part.
    Cw { residue: i32, inner: Box<Expr> },
    Named { name: String, inner: Box<Expr> },
    /// The submodule generated by the classes outside `drop`.
    Without { drop: BTreeSet<TriDegree>, inner: Box<Expr> },
}

impl Expr {
    pub fn shift(self, p: i32, q: i32, n: i32) -> Expr {
        if (p, q, n) == (0, 0, 0) {
            return self;
        }
        Expr::Shift { by: td(p, n, q), inner: Box::new(self) }
    }

    pub fn cw(self, residue: i32) -> Expr {
        Expr::Cw { residue, inner: Box::new(self) }
    }

    pub fn named(self, name: impl Into<String>) -> Expr {
        Expr::Named { name: name.into(), inner: Box::new(self) }
    }

    pub fn base(&self) -> Base {
        match self {
            Expr::Pres(p) => p.ring.base,
            Expr::Ext { comod, .. } => comod.base,
            Expr::Shift { inner, .. } | Expr::Cw { inner, .. } | Expr::Named { inner, .. } | Expr::Without { inner, .. } => inner.base(),
            Expr::Sum(v) => v.first().map(|e| e.base()).unwrap_or(Base::R),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Expr::Pres(p) => p.name.clone(),
            Expr::Ext { label, mod_b, .. } => {
                if *mod_b {
                    format!("Ext({label})/b-torsion")
                } else {
                    format!("Ext({label})")
                }
            }
            Expr::Shift { by, inner } => {
                let tag = if by.f != 0 { format!("<{}>", by.f) } else { String::new() };
                format!("S^{{{},{}}}{}{}", by.s, by.w, inner.label(), tag)
            }
            Expr::Sum(v) if v.is_empty() => "0".into(),
            Expr::Sum(v) => v.iter().map(|e| e.label()).collect::<Vec<_>>().join(" + "),
            Expr::Cw { residue, inner } => format!("{}[cw={residue}]", inner.label()),
            Expr::Named { name, .. } => name.clone(),
            Expr::Without { drop, inner } => format!("{}[without {} degrees]", inner.label(), drop.len()),
        }
    }

    /// Summands of a sum, flattened; anything else is a single summand.
    pub fn summands(&self) -> Vec<&Expr> {
        match self {
            Expr::Sum(v) => v.iter().flat_map(|e| e.summands()).collect(),
            Expr::Named { inner, .. } if matches!(**inner, Expr::Sum(_)) => inner.summands(),
            e => vec![e],
        }
    }

    pub fn chart(&self, range: &Range) -> Chart {
        let mut c = match self {
            Expr::Pres(p) => p.instantiate(range),
            Expr::Ext { label, comod, mod_b } => {
                let clipped = Range::new(range.s, (range.f.0.max(0), range.f.1), range.w);
                if clipped.f.1 < clipped.f.0 {
                    Chart::empty(comod.base, String::new(), *range)
                } else {
                    let mut c = computed_chart(label, comod, &clipped, *mod_b);
                    c.range = *range;
                    c
                }
            }
            Expr::Shift { by, inner } => {
                let back = Range::new((range.s.0 - by.s, range.s.1 - by.s), (range.f.0 - by.f, range.f.1 - by.f), (range.w.0 - by.w, range.w.1 - by.w));
                inner.chart(&back).translate(*by, *range)
            }
            Expr::Sum(v) => {
                let parts: Vec<Chart> = v.par_iter().map(|e| e.chart(range)).collect();
                Chart::direct_sum(self.base(), String::new(), *range, &parts)
            }
            Expr::Cw { residue, inner } => inner.chart(range).coweight_page(*residue),
            Expr::Named { inner, .. } => inner.chart(range),
            Expr::Without { drop, inner } => generated_without(&inner.chart(range), drop),
        };
        c.module = self.label();
        c
    }
}

/// The submodule of a chart generated by every class outside `drop`.
pub fn generated_without(c: &Chart, drop: &BTreeSet<TriDegree>) -> Chart {
    let mut order: Vec<TriDegree> = drop.iter().copied().filter(|d| c.dim(*d) > 0).collect();
    order.sort_by_key(|d| (d.f, -d.w, d.s));
    let mut spans: BTreeMap<TriDegree, Subquotient> = BTreeMap::new();
    for d in order {
        let n = c.dim(d);
        let mut gens = Vec::new();
        for (op, rows) in &c.actions {
            let od = operator_degree(op).unwrap();
            let src = d - od;
            let Some(m) = rows.get(&src) else { continue };
            let basis: Vec<BitVec> = match spans.get(&src) {
                Some(sq) => sq.reps().to_vec(),
                None if drop.contains(&src) => Vec::new(),
                None => (0..c.dim(src)).map(|i| BitVec::unit(c.dim(src), i)).collect(),
            };
            gens.extend(basis.iter().map(|v| apply(m, n, v)));
        }
        spans.insert(d, Subquotient::new(n, &Echelon::new(n, 0), &gens));
    }
    let mut out = c.clone();
    for (d, sq) in &spans {
        if sq.dim() == 0 {
            out.dims.remove(d);
        } else {
            out.dims.insert(*d, sq.dim());
        }
    }
    for (op, rows) in out.actions.iter_mut() {
        let od = operator_degree(op).unwrap();
        let orig = &c.actions[op];
        rows.clear();
        for (d, m) in orig {
            let t = *d + od;
            let tn = c.dim(t);
            let basis: Vec<BitVec> = match spans.get(d) {
                Some(sq) => sq.reps().to_vec(),
                None => (0..c.dim(*d)).map(|i| BitVec::unit(c.dim(*d), i)).collect(),
            };
            if basis.is_empty() {
                continue;
            }
            let mat = basis
                .iter()
                .map(|v| {
                    let img = apply(m, tn, v);
                    match spans.get(&t) {
                        Some(tq) => tq.coords(&img).expect("generated submodule is closed"),
                        None => img,
                    }
                })
                .collect();
            rows.insert(*d, mat);
        }
    }
    out.border.retain(|d| out.dims.contains_key(d));
    out.uncertified.retain(|d| out.dims.contains_key(d));
    out
}

/// Tridegrees d, h1·d, h1²·d, … up to filtration `f_max`.
pub fn h1_line(d: TriDegree, f_max: i32) -> BTreeSet<TriDegree> {
    (0..=(f_max - d.f).max(0)).map(|n| d + td(n, n, n)).collect()
}

type ChartKey = (String, Base, Range, bool);

fn chart_cache() -> &'static Mutex<HashMap<ChartKey, Arc<Chart>>> {
    static C: OnceLock<Mutex<HashMap<ChartKey, Arc<Chart>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Ext of a comodule over a range, optionally modulo b-power torsion, cached
/// per process.
pub fn computed_chart(label: &str, comod: &Comodule, range: &Range, mod_b: bool) -> Chart {
    let key = (label.to_string(), comod.base, *range, mod_b);
    if let Some(c) = chart_cache().lock().unwrap().get(&key) {
        return (**c).clone();
    }
    let c = if mod_b {
        let ext = ExtComputer::for_comodule(label, comod.clone(), &extended_range(range, DEFAULT_MAX_POWER));
        let ops: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).collect();
        chart_mod_b(&ext, range, &ops, DEFAULT_MAX_POWER).1
    } else {
        let ext = ExtComputer::for_comodule(label, comod.clone(), range);
        Chart::compute(&ext, range)
    };
    chart_cache().lock().unwrap().insert(key, Arc::new(c.clone()));
    c
}

fn pres(p: Presentation) -> Expr {
    Expr::Pres(p)
}

/// The cw ≡ 1 piece of Ext of the real ground ring.
pub fn big_diamond() -> Expr {
    pres(ext_m2_r()).cw(1).named("BigDiamond")
}

/// The cw ≡ 2 piece of Ext of the real ground ring.
pub fn big_staircase() -> Expr {
    pres(ext_m2_r()).cw(2).named("BigStaircase")
}

// ---------------------------------------------------------------------------
// Z tables

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZPiece {
    Flag,
    Diamond,
    Staircase,
    J,
    T,
    JD,
}

/// Linear expression a·i + c.
type Lin = (i32, i32);

/// One cell of a real Z table: a single shifted piece in a coweight column.
#[derive(Clone, Copy, Debug)]
pub struct ZCell {
    pub residue: u32,
    pub cw: u32,
    pub piece: ZPiece,
    /// Σ^{s,w} shift as functions of i; for flags, the flag tridegree's s and w.
    pub s: Lin,
    pub w: Lin,
    /// ⟨n⟩ tag; for flags the flag filtration coefficient of i.
    pub tag: i32,
}

/// One h0-tower sum of a real Z table: ⊕_{j=1}^{2k+top} Σ^{4j−4, 4⌊(j+shift)/2⌋+c}H.
#[derive(Clone, Copy, Debug)]
pub struct ZTowers {
    pub residue: u32,
    pub cw: u32,
    pub top: i32,
    pub shift: i32,
    pub c: i32,
}

pub const Z_R_CELLS: &[ZCell] = &[
    ZCell { residue: 0, cw: 0, piece: ZPiece::Flag, s: (4, 0), w: (2, 0), tag: 1 },
    ZCell { residue: 0, cw: 1, piece: ZPiece::Diamond, s: (2, 0), w: (1, 0), tag: 0 },
    ZCell { residue: 0, cw: 2, piece: ZPiece::Staircase, s: (2, 0), w: (1, 0), tag: 0 },
    ZCell { residue: 1, cw: 0, piece: ZPiece::Staircase, s: (2, 2), w: (1, 1), tag: 1 },
    ZCell { residue: 1, cw: 0, piece: ZPiece::J, s: (2, -2), w: (1, -1), tag: 0 },
    ZCell { residue: 1, cw: 2, piece: ZPiece::Flag, s: (4, 0), w: (2, 0), tag: 1 },
    ZCell { residue: 1, cw: 3, piece: ZPiece::Diamond, s: (2, 2), w: (1, 1), tag: 1 },
    ZCell { residue: 2, cw: 0, piece: ZPiece::Flag, s: (4, 0), w: (2, 0), tag: 1 },
    ZCell { residue: 2, cw: 1, piece: ZPiece::Diamond, s: (2, 4), w: (1, 2), tag: 2 },
    ZCell { residue: 2, cw: 1, piece: ZPiece::T, s: (2, -2), w: (1, -1), tag: 0 },
    ZCell { residue: 2, cw: 2, piece: ZPiece::Staircase, s: (2, 4), w: (1, 2), tag: 2 },
    ZCell { residue: 2, cw: 2, piece: ZPiece::JD, s: (2, 0), w: (1, 0), tag: 1 },
    ZCell { residue: 3, cw: 0, piece: ZPiece::Staircase, s: (2, -2), w: (1, -1), tag: -1 },
    ZCell { residue: 3, cw: 2, piece: ZPiece::Flag, s: (4, 0), w: (2, 0), tag: 1 },
    ZCell { residue: 3, cw: 3, piece: ZPiece::Diamond, s: (2, -2), w: (1, -1), tag: -1 },
];

pub const Z_R_TOWERS: &[ZTowers] = &[
    ZTowers { residue: 0, cw: 0, top: 0, shift: 1, c: -4 },
    ZTowers { residue: 0, cw: 2, top: 0, shift: 0, c: -2 },
    ZTowers { residue: 1, cw: 0, top: 0, shift: 1, c: -4 },
    ZTowers { residue: 1, cw: 2, top: 0, shift: 0, c: -2 },
    ZTowers { residue: 2, cw: 0, top: 1, shift: 1, c: -4 },
    ZTowers { residue: 2, cw: 2, top: 1, shift: 0, c: -2 },
    ZTowers { residue: 3, cw: 0, top: 1, shift: 0, c: 0 },
    ZTowers { residue: 3, cw: 2, top: 2, shift: 0, c: -2 },
];

fn lin(l: Lin, i: i32) -> i32 {
    l.0 * i + l.1
}

/// Z_i over the reals as a sum of shifted pieces.
pub fn z_r(i: u32) -> Expr {
    let ii = i as i32;
    let k = ii / 4;
    let r = i % 4;
    let mut parts = Vec::new();
    for c in Z_R_CELLS.iter().filter(|c| c.residue == r) {
        let (s, w) = (lin(c.s, ii), lin(c.w, ii));
        let e = match c.piece {
            ZPiece::Flag => pres(big_flag(s, c.tag * ii, w)),
            ZPiece::Diamond => big_diamond().shift(s, w, c.tag),
            ZPiece::Staircase => big_staircase().shift(s, w, c.tag),
            ZPiece::J => pres(shape_j()).shift(s, w, c.tag),
            ZPiece::T => pres(shape_t()).shift(s, w, c.tag),
            ZPiece::JD => pres(shape_jd()).shift(s, w, c.tag),
        };
        parts.push(e);
    }
    for t in Z_R_TOWERS.iter().filter(|t| t.residue == r) {
        for j in 1..=2 * k + t.top {
            parts.push(pres(shape_h()).shift(4 * j - 4, 4 * (j + t.shift).div_euclid(2) + t.c, 0));
        }
    }
    Expr::Sum(parts).named(format!("Z_{i}^R"))
}

/// Ext of B0(1) over the reals, torsion included: Z_1 with the J-tower
/// replaced by an untruncated (ρ, h0)-tower.
pub fn ext_b01_r() -> Expr {
    Expr::Sum(vec![
        big_staircase().shift(4, 2, 1),
        pres(shape_ph()).shift(0, 0, 0),
        pres(big_flag(4, 1, 2)),
        big_diamond().shift(4, 2, 1),
    ])
    .named("ExtB01_R")
}

/// Ext of B0(1) over the complex numbers, computed.
pub fn ext_b01_c() -> Expr {
    Expr::Ext { label: "B0(1)".into(), comod: Comodule::brown_gitler_b0(1, Base::C), mod_b: false }
}

fn b01_leaf(i: u32) -> Expr {
    if i < 4 {
        ext_b01_c()
    } else {
        Expr::Without { drop: h1_line(td(4, 1, 2), 64), inner: Box::new(ext_b01_c()) }
    }
}

/// Z_i over the complex numbers.
pub fn z_c(i: u32) -> Expr {
    let ii = i as i32;
    let mut parts = Vec::new();
    let towers = |n: i32, parts: &mut Vec<Expr>| {
        for j in 0..=n {
            parts.push(pres(c_tower()).shift(4 * j, 2 * j, 0));
        }
    };
    match i % 4 {
        0 => {
            towers(ii / 2 - 1, &mut parts);
            let top = match i {
                0 => ext_m2_c(),
                4 => ext_m2_c().submodule("ExtM2_C(tau,h0,a,b)", &["tau", "h0", "a", "b"]),
                _ => ext_m2_c().submodule("ExtM2_C(tau,h0,a,h1b,b^2)", &["tau", "h0", "a", "h1*b", "b^2"]),
            };
            parts.push(pres(top).shift(2 * ii, ii, 0));
        }
        1 => {
            towers((ii - 1) / 2 - 1, &mut parts);
            parts.push(b01_leaf(i).shift(2 * ii - 2, ii - 1, 0));
        }
        2 => {
            towers(ii / 2 - 1, &mut parts);
            parts.push(pres(c_ground()).shift(2 * ii - 2, ii - 1, 0));
            parts.push(b01_leaf(i).shift(2 * ii, ii, 1));
        }
        _ => {
            towers((ii - 1) / 2, &mut parts);
            parts.push(pres(c_h1_segment()).shift(2 * ii - 1, ii - 1, 0));
            parts.push(b01_leaf(i).shift(2 * ii + 2, ii + 1, 2));
        }
    }
    Expr::Sum(parts).named(format!("Z_{i}^C"))
}

/// Predicted Ext of B0(k) modulo b-power torsion: with m = k − α(k),
/// Σ^{4m,2m}Z_α(k) plus m pairs of h0-towers (one tower each over C).
pub fn predicted_ext_b0(k: u32, base: Base) -> Expr {
    assert!(k >= 1);
    let m = (k - alpha(k)) as i32;
    let mut parts = Vec::new();
    match base {
        Base::R => {
            parts.push(z_r(alpha(k)).shift(4 * m, 2 * m, 0));
            for j in 0..m {
                parts.push(pres(shape_h()).shift(4 * j, 2 * j, 0));
                parts.push(pres(shape_h()).shift(4 * j, 2 * j - 2, 0));
            }
        }
        Base::C => {
            parts.push(z_c(alpha(k)).shift(4 * m, 2 * m, 0));
            for j in 0..m {
                parts.push(pres(c_tower()).shift(4 * j, 2 * j, 0));
            }
        }
    }
    Expr::Sum(parts).named(format!("predicted Ext(B0({k})) over {base}"))
}

/// Predicted E2 page of the cooperations spectral sequence through k ≤ k_max.
pub fn predicted_e2_coop(base: Base, k_max: u32) -> Expr {
    let mut parts = vec![match base {
        Base::R => pres(ext_m2_r()),
        Base::C => pres(ext_m2_c()),
    }];
    for k in 1..=k_max {
        let kk = k as i32;
        parts.push(predicted_ext_b0(k, base).shift(4 * kk, 2 * kk, 0));
    }
    Expr::Sum(parts).named(format!("predicted E2 over {base}, k <= {k_max}"))
}

/// Tridegrees in `range` that summands Σ^{4k,2k}B0(k) with k > k_max could
/// reach: those with cw ≥ 2(k_max + 1).
pub fn e2_truncation_unsound(range: &Range, k_max: u32) -> BTreeSet<TriDegree> {
    range.degrees().into_iter().filter(|d| d.cw() >= 2 * (k_max as i32 + 1)).collect()
}

// ---------------------------------------------------------------------------
// Comparison

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimMismatch {
    pub deg: TriDegree,
    pub expected: usize,
    pub computed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMismatch {
    pub op: String,
    pub deg: TriDegree,
    pub expected_rank: usize,
    pub computed_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDiff {
    pub range: Range,
    pub dims: Vec<DimMismatch>,
    pub actions: Vec<ActionMismatch>,
    /// Tridegrees excluded for lack of certification.
    pub skipped: usize,
}

impl ChartDiff {
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty() && self.actions.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "range": {"s": [self.range.s.0, self.range.s.1], "f": [self.range.f.0, self.range.f.1], "w": [self.range.w.0, self.range.w.1]},
            "dims": self.dims.iter().map(|m| json!({"s": m.deg.s, "f": m.deg.f, "w": m.deg.w, "expected": m.expected, "computed": m.computed})).collect::<Vec<_>>(),
            "actions": self.actions.iter().map(|m| json!({"op": m.op, "s": m.deg.s, "f": m.deg.f, "w": m.deg.w, "expected_rank": m.expected_rank, "computed_rank": m.computed_rank})).collect::<Vec<_>>(),
            "skipped": self.skipped,
        })
    }
}

impl fmt::Display for ChartDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "no differences ({} tridegrees skipped)", self.skipped);
        }
        writeln!(f, "{:>14}  {:>8}  {:>8}", "tridegree", "expected", "computed")?;
        for m in &self.dims {
            writeln!(f, "{:>14}  {:>8}  {:>8}", m.deg.to_string(), m.expected, m.computed)?;
        }
        if !self.actions.is_empty() {
            writeln!(f, "{:>8} {:>14}  {:>8}  {:>8}", "op", "source", "expected", "computed")?;
            for m in &self.actions {
                writeln!(f, "{:>8} {:>14}  {:>8}  {:>8}", m.op, m.deg.to_string(), m.expected_rank, m.computed_rank)?;
            }
        }
        writeln!(f, "{} dimension and {} action mismatches ({} skipped)", self.dims.len(), self.actions.len(), self.skipped)
    }
}

/// Operators compared by default: those whose actions are determined by a
/// direct-sum description.
pub const COMPARE_OPS: [&str; 4] = ["h0", "h1", "rho", "tau4"];

/// Compare dimensions and operator ranks over the common range, skipping
/// tridegrees either side marks uncertified or that lie outside either
/// chart's range. Ranks are compared for `ops` present in both charts.
pub fn compare(expected: &Chart, computed: &Chart, ops: &[&str]) -> ChartDiff {
    let range = Range::new(
        (expected.range.s.0.max(computed.range.s.0), expected.range.s.1.min(computed.range.s.1)),
        (expected.range.f.0.max(computed.range.f.0), expected.range.f.1.min(computed.range.f.1)),
        (expected.range.w.0.max(computed.range.w.0), expected.range.w.1.min(computed.range.w.1)),
    );
    let skip = |d: &TriDegree| expected.uncertified.contains(d) || computed.uncertified.contains(d);
    let mut diff = ChartDiff { range, dims: Vec::new(), actions: Vec::new(), skipped: 0 };
    for d in range.degrees() {
        if skip(&d) {
            if expected.dim(d) + computed.dim(d) > 0 {
                diff.skipped += 1;
            }
            continue;
        }
        let (a, b) = (expected.dim(d), computed.dim(d));
        if a != b {
            diff.dims.push(DimMismatch { deg: d, expected: a, computed: b });
            continue;
        }
        if a == 0 {
            continue;
        }
        for op in ops {
            let Some(od) = operator_degree(op) else { continue };
            if !range.contains(d + od) || skip(&(d + od)) || expected.dim(d + od) != computed.dim(d + od) {
                continue;
            }
            if let (Some(x), Some(y)) = (expected.action_rank(op, d), computed.action_rank(op, d)) {
                if x != y {
                    diff.actions.push(ActionMismatch { op: op.to_string(), deg: d, expected_rank: x, computed_rank: y });
                }
            }
        }
    }
    diff
}

/// Check that a chart's operators commute pairwise wherever both composites
/// stay in range. Returns the failing (op, op, tridegree) triples.
pub fn commutation_failures(c: &Chart, ops: &[&str]) -> Vec<(String, String, TriDegree)> {
    let mut out = Vec::new();
    for (d, &n) in &c.dims {
        for (i, x) in ops.iter().enumerate() {
            for y in &ops[i + 1..] {
                for b in 0..n {
                    let e = c.basis_element(*d, b);
                    if let (Some(p), Some(q)) = (c.apply_word(&[x, y], &e), c.apply_word(&[y, x], &e)) {
                        if p != q {
                            out.push((x.to_string(), y.to_string(), *d));
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|(a, b, d)| (a.clone(), b.clone(), *d));
    out.dedup();
    out
}

/// Matrix of a chart operator at a tridegree applied to coordinates.
pub fn act(c: &Chart, op: &str, d: TriDegree, v: &BitVec) -> Option<BitVec> {
    let od = operator_degree(op)?;
    let m = c.actions.get(op)?.get(&d)?;
    Some(apply(m, c.dim(d + od), v))
}
