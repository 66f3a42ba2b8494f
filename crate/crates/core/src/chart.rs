//! Ext charts: dimensions over a range with the actions of named classes.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::ext::{ExtComputer, ExtGroup, Range, UnitProducts};
use crate::ground::{Base, TriDegree};
use crate::linalg::BitVec;

/// Operators recorded in every chart, with their tridegrees.
pub const OPERATORS: [(&str, TriDegree); 9] = [
    ("h0", TriDegree::new(0, 1, 0)),
    ("h1", TriDegree::new(1, 1, 1)),
    ("rho", TriDegree::new(-1, 0, -1)),
    ("tau4", TriDegree::new(0, 0, -4)),
    ("b", TriDegree::new(8, 4, 4)),
    ("a", TriDegree::new(4, 3, 2)),
    ("tau_h1", TriDegree::new(1, 1, 0)),
    ("tau2_h0", TriDegree::new(0, 1, -2)),
    ("tau2_a", TriDegree::new(4, 3, 0)),
];

pub fn operator_degree(name: &str) -> Option<TriDegree> {
    match name {
        "tau" => Some(TriDegree::new(0, 0, -1)),
        "tau2" => Some(TriDegree::new(0, 0, -2)),
        _ => OPERATORS.iter().find(|(n, _)| *n == name).map(|&(_, d)| d),
    }
}

/// Matrix of an operator out of one tridegree: images of the source basis in
/// target coordinates.
pub type ActionMatrix = Vec<BitVec>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub base: Base,
    pub module: String,
    pub range: Range,
    /// Nonzero dimensions only.
    pub dims: BTreeMap<TriDegree, usize>,
    /// Only sources with nonzero dimension and in-range targets.
    pub actions: BTreeMap<String, BTreeMap<TriDegree, ActionMatrix>>,
    /// Nonzero tridegrees with some operator target outside the range.
    pub border: BTreeSet<TriDegree>,
    /// Tridegrees of a torsion quotient whose torsion did not stabilize.
    pub uncertified: BTreeSet<TriDegree>,
}

/// An element of a chart: a tridegree and coordinates in its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub deg: TriDegree,
    pub coords: BitVec,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

impl Chart {
    pub fn empty(base: Base, module: impl Into<String>, range: Range) -> Self {
        Chart { base, module: module.into(), range, dims: BTreeMap::new(), actions: BTreeMap::new(), border: BTreeSet::new(), uncertified: BTreeSet::new() }
    }

    /// Compute Ext and all operator actions available over the base.
    pub fn compute(ext: &ExtComputer, range: &Range) -> Self {
        let ops: Vec<&str> = OPERATORS.iter().map(|(n, _)| *n).collect();
        Self::compute_with(ext, range, &ops)
    }

    pub fn compute_with(ext: &ExtComputer, range: &Range, ops: &[&str]) -> Self {
        let groups: BTreeMap<TriDegree, ExtGroup> = ext.groups(range).into_iter().map(|g| (g.deg, g)).collect();
        let mut chart = Chart::empty(ext.base(), ext.name.clone(), *range);
        chart.dims = groups.iter().map(|(d, g)| (*d, g.dim())).collect();
        let prods = UnitProducts::for_resolution(&ext.res);
        for &op in ops {
            let Some(map) = prods.map(op) else { continue };
            let od = operator_degree(op).expect("known operator");
            let rows: Vec<(TriDegree, Option<ActionMatrix>)> = groups
                .par_iter()
                .map(|(d, g)| {
                    let td = *d + od;
                    if !range.contains(td) {
                        return (*d, None);
                    }
                    let m = match groups.get(&td) {
                        Some(tg) => ext.apply_map(map, g, tg),
                        None => vec![BitVec::zeros(0); g.dim()],
                    };
                    (*d, Some(m))
                })
                .collect();
            let entry = chart.actions.entry(op.to_string()).or_default();
            for (d, m) in rows {
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
        chart
    }

    pub fn dim(&self, d: TriDegree) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn has_operator(&self, op: &str) -> bool {
        self.actions.contains_key(op)
    }

    pub fn basis_element(&self, d: TriDegree, i: usize) -> Element {
        Element { deg: d, coords: BitVec::unit(self.dim(d), i) }
    }

    pub fn zero(&self, d: TriDegree) -> Element {
        Element { deg: d, coords: BitVec::zeros(self.dim(d)) }
    }

    /// Apply an operator; `None` when the target leaves the range.
    pub fn apply(&self, op: &str, x: &Element) -> Option<Element> {
        let od = operator_degree(op)?;
        let td = x.deg + od;
        if !self.range.contains(td) {
            return None;
        }
        let n = self.dim(td);
        let mut out = BitVec::zeros(n);
        if x.coords.is_zero() || n == 0 {
            return Some(Element { deg: td, coords: out });
        }
        let m = self.actions.get(op)?.get(&x.deg)?;
        for i in x.coords.ones() {
            out.xor_assign(&m[i]);
        }
        Some(Element { deg: td, coords: out })
    }

    /// Apply a word of operators, right to left as written: `["h0","h1"]`
    /// computes h0·(h1·x).
    pub fn apply_word(&self, word: &[&str], x: &Element) -> Option<Element> {
        let mut cur = x.clone();
        for op in word.iter().rev() {
            cur = self.apply(op, &cur)?;
        }
        Some(cur)
    }

    /// Rank of an operator out of a tridegree, when the target is in range.
    pub fn action_rank(&self, op: &str, d: TriDegree) -> Option<usize> {
        let od = operator_degree(op)?;
        if !self.range.contains(d + od) || !self.has_operator(op) {
            return None;
        }
        if self.dim(d) == 0 {
            return Some(0);
        }
        let m = self.actions.get(op)?.get(&d)?;
        let n = self.dim(d + od);
        Some(crate::linalg::rank(&m.iter().map(|v| v.resized(n)).collect::<Vec<_>>(), n))
    }

    /// Sub-chart of the tridegrees with cw ≡ page mod 4.
    pub fn coweight_page(&self, page: i32) -> Chart {
        let keep = |d: &TriDegree| d.cw().rem_euclid(4) == page.rem_euclid(4);
        self.filtered(keep)
    }

    /// Sub-chart of filtration zero.
    pub fn f0_line(&self) -> Chart {
        self.filtered(|d| d.f == 0)
    }

    pub fn filtered(&self, keep: impl Fn(&TriDegree) -> bool) -> Chart {
        let mut c = Chart::empty(self.base, self.module.clone(), self.range);
        c.dims = self.dims.iter().filter(|(d, _)| keep(d)).map(|(d, n)| (*d, *n)).collect();
        for (op, rows) in &self.actions {
            let od = operator_degree(op).unwrap();
            let r: BTreeMap<_, _> = rows.iter().filter(|(d, _)| keep(d) && keep(&(**d + od))).map(|(d, m)| (*d, m.clone())).collect();
            c.actions.insert(op.clone(), r);
        }
        c.border = self.border.iter().filter(|d| keep(d)).copied().collect();
        c.uncertified = self.uncertified.iter().filter(|d| keep(d)).copied().collect();
        c
    }

    /// The chart moved by `by`, restricted to `range`. Operator rows whose
    /// target leaves the range become border marks.
    pub fn translate(&self, by: TriDegree, range: Range) -> Chart {
        let mut c = Chart::empty(self.base, self.module.clone(), range);
        c.dims = self.dims.iter().map(|(d, n)| (*d + by, *n)).filter(|(d, _)| range.contains(*d)).collect();
        for (op, rows) in &self.actions {
            let od = operator_degree(op).unwrap();
            let entry = c.actions.entry(op.clone()).or_default();
            for (d, m) in rows {
                let nd = *d + by;
                if !range.contains(nd) {
                    continue;
                }
                if range.contains(nd + od) {
                    entry.insert(nd, m.clone());
                } else {
                    c.border.insert(nd);
                }
            }
        }
        for d in c.dims.keys() {
            if c.actions.values().any(|r| !r.contains_key(d)) {
                c.border.insert(*d);
            }
        }
        c.uncertified = self.uncertified.iter().map(|d| *d + by).filter(|d| range.contains(*d)).collect();
        c
    }

    /// Direct sum over a common range. Operators missing from any part are
    /// dropped.
    pub fn direct_sum(base: Base, module: impl Into<String>, range: Range, parts: &[Chart]) -> Chart {
        let mut c = Chart::empty(base, module, range);
        for p in parts {
            for (d, n) in &p.dims {
                *c.dims.entry(*d).or_default() += n;
            }
            c.border.extend(p.border.iter().copied());
            c.uncertified.extend(p.uncertified.iter().copied());
        }
        let ops: Vec<String> = OPERATORS
            .iter()
            .map(|(n, _)| n.to_string())
            .filter(|op| !parts.is_empty() && parts.iter().all(|p| p.actions.contains_key(op)))
            .collect();
        for op in ops {
            let od = operator_degree(&op).unwrap();
            let mut rows = BTreeMap::new();
            for (d, n) in &c.dims {
                let td = *d + od;
                if !range.contains(td) {
                    continue;
                }
                let tn = c.dim(td);
                let mut m = Vec::with_capacity(*n);
                let mut offset = 0;
                for p in parts {
                    let pn = p.dim(*d);
                    if pn > 0 {
                        let pm = p.actions[&op].get(d);
                        for i in 0..pn {
                            let mut v = BitVec::zeros(tn);
                            if let Some(pm) = pm {
                                for j in pm[i].ones() {
                                    v.set(offset + j);
                                }
                            }
                            m.push(v);
                        }
                    }
                    offset += p.dim(td);
                }
                rows.insert(*d, m);
            }
            c.actions.insert(op, rows);
        }
        c
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .dims
            .iter()
            .map(|(d, n)| {
                let mut v = json!({"s": d.s, "f": d.f, "w": d.w, "dim": n, "border": self.border.contains(d)});
                if self.uncertified.contains(d) {
                    v["certified"] = json!(false);
                }
                v
            })
            .collect();
        let mut actions = serde_json::Map::new();
        for (op, rows) in &self.actions {
            let mut list = Vec::new();
            for (d, m) in rows {
                for (i, v) in m.iter().enumerate() {
                    let dst: Vec<usize> = v.ones().collect();
                    list.push(json!([[d.s, d.f, d.w], i, dst]));
                }
            }
            actions.insert(op.clone(), Value::Array(list));
        }
        json!({
            "base": self.base.to_string(),
            "module": self.module,
            "range": {"s": [self.range.s.0, self.range.s.1], "f": [self.range.f.0, self.range.f.1], "w": [self.range.w.0, self.range.w.1]},
            "classes": classes,
            "actions": Value::Object(actions),
        })
    }

    pub fn from_json(v: &Value) -> Result<Chart, String> {
        let err = |m: &str| format!("malformed chart JSON: {m}");
        let base: Base = v["base"].as_str().ok_or_else(|| err("base"))?.parse()?;
        let module = v["module"].as_str().ok_or_else(|| err("module"))?.to_string();
        let pair = |x: &Value| -> Result<(i32, i32), String> {
            Ok((x[0].as_i64().ok_or_else(|| err("range"))? as i32, x[1].as_i64().ok_or_else(|| err("range"))? as i32))
        };
        let range = Range::new(pair(&v["range"]["s"])?, pair(&v["range"]["f"])?, pair(&v["range"]["w"])?);
        let mut c = Chart::empty(base, module, range);
        for cl in v["classes"].as_array().ok_or_else(|| err("classes"))? {
            let d = TriDegree::new(cl["s"].as_i64().unwrap_or(0) as i32, cl["f"].as_i64().unwrap_or(0) as i32, cl["w"].as_i64().unwrap_or(0) as i32);
            c.dims.insert(d, cl["dim"].as_u64().ok_or_else(|| err("dim"))? as usize);
            if cl["border"].as_bool().unwrap_or(false) {
                c.border.insert(d);
            }
            if cl["certified"].as_bool() == Some(false) {
                c.uncertified.insert(d);
            }
        }
        if let Some(acts) = v["actions"].as_object() {
            for (op, list) in acts {
                let od = operator_degree(op).ok_or_else(|| err("operator"))?;
                let rows = c.actions.entry(op.clone()).or_default();
                for e in list.as_array().ok_or_else(|| err("actions"))? {
                    let d = TriDegree::new(e[0][0].as_i64().unwrap_or(0) as i32, e[0][1].as_i64().unwrap_or(0) as i32, e[0][2].as_i64().unwrap_or(0) as i32);
                    let i = e[1].as_u64().unwrap_or(0) as usize;
                    let n = c.dims.get(&(d + od)).copied().unwrap_or(0);
                    let m = rows.entry(d).or_insert_with(|| vec![BitVec::zeros(n); c.dims.get(&d).copied().unwrap_or(0)]);
                    if i < m.len() {
                        m[i] = BitVec::from_ones(n, e[2].as_array().into_iter().flatten().filter_map(|x| x.as_u64()).map(|x| x as usize));
                    }
                }
            }
        }
        Ok(c)
    }
}
