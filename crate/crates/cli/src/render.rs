//! Chart rendering on the (stem, filtration) plane with weight suppressed.
//! Classes are counted modulo τ⁴: a cell shows dim minus the rank of τ⁴
//! into it, summed over weights. A cell is on the border when an h0, h1 or
//! ρ line out of it would leave the range.

use std::collections::BTreeMap;
use std::fmt::Write;

use kqext::chart::Chart;
use kqext::ground::TriDegree;

/// One (s, f) cell of a collapsed chart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cell {
    /// Classes not divisible by τ⁴ within the range.
    pub count: usize,
    /// Some class here carries a nonzero τ⁴-multiple.
    pub periodic: bool,
    pub border: bool,
    pub h0: bool,
    pub h1: bool,
    pub rho: bool,
}

pub struct Grid {
    pub s: (i32, i32),
    pub f: (i32, i32),
    pub cells: BTreeMap<(i32, i32), Cell>,
}

fn nonzero(c: &Chart, op: &str, d: TriDegree) -> bool {
    c.actions.get(op).and_then(|m| m.get(&d)).is_some_and(|m| m.iter().any(|v| !v.is_zero()))
}

pub fn grid(c: &Chart) -> Grid {
    let tau4 = TriDegree::new(0, 0, 4);
    let mut cells: BTreeMap<(i32, i32), Cell> = BTreeMap::new();
    for (&d, &n) in &c.dims {
        let divisible = c.action_rank("tau4", d + tau4).unwrap_or(0);
        let cell = cells.entry((d.s, d.f)).or_default();
        cell.count += n - divisible.min(n);
        cell.periodic |= c.action_rank("tau4", d).unwrap_or(0) > 0;
        let drawn = [TriDegree::new(0, 1, 0), TriDegree::new(1, 1, 1), TriDegree::new(-1, 0, -1)];
        cell.border |= c.uncertified.contains(&d) || drawn.iter().any(|od| !c.range.contains(d + *od));
        cell.h0 |= nonzero(c, "h0", d);
        cell.h1 |= nonzero(c, "h1", d);
        cell.rho |= nonzero(c, "rho", d);
    }
    let f1 = c.range.f.1.max(c.range.f.0);
    Grid { s: c.range.s, f: (c.range.f.0.max(0), f1), cells }
}

/// Plain text: rows of filtration from the top, columns of stem. Counts
/// above 9 print as '#'; a trailing '+' marks a border cell.
pub fn text(c: &Chart, title: &str) -> String {
    let g = grid(c);
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{} over {}, classes modulo tau^4; '+' marks a border tridegree", c.module, c.base);
    for f in (g.f.0..=g.f.1).rev() {
        let _ = write!(out, "{f:>3} |");
        for s in g.s.0..=g.s.1 {
            let cell = g.cells.get(&(s, f));
            let sym = match cell {
                Some(x) if x.count > 9 => "#".to_string(),
                Some(x) if x.count > 0 => x.count.to_string(),
                _ => ".".to_string(),
            };
            let mark = if cell.is_some_and(|x| x.border) { "+" } else { " " };
            let _ = write!(out, " {sym:>2}{mark}");
        }
        out.push('\n');
    }
    let _ = write!(out, "    +");
    for _ in g.s.0..=g.s.1 {
        out.push_str("----");
    }
    out.push('\n');
    let _ = write!(out, "     ");
    for s in g.s.0..=g.s.1 {
        let _ = write!(out, " {s:>3}");
    }
    out.push('\n');
    out
}

const CELL: i32 = 28;
const MARGIN: i32 = 40;

/// SVG 1.1 chart: h0 vertical, h1 diagonal and ρ horizontal lines; a
/// square marks classes with τ⁴-multiples, a circle the others; border
/// cells are shaded.
pub fn svg(c: &Chart, title: &str) -> String {
    let g = grid(c);
    let cols = g.s.1 - g.s.0 + 1;
    let rows = g.f.1 - g.f.0 + 1;
    let width = 2 * MARGIN + cols * CELL;
    let height = 2 * MARGIN + rows * CELL;
    let x = |s: i32| MARGIN + (s - g.s.0) * CELL + CELL / 2;
    let y = |f: i32| height - MARGIN - (f - g.f.0) * CELL - CELL / 2;
    let mut o = String::new();
    let _ = writeln!(o, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(o, "<title>{}</title>", escape(title));
    let _ = writeln!(o, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
    for ((s, f), cell) in &g.cells {
        if cell.border {
            let _ = writeln!(o, r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="#dddddd"/>"##, x(*s) - CELL / 2, y(*f) - CELL / 2);
        }
    }
    let (x0, y0, x1, y1) = (MARGIN, height - MARGIN, width - MARGIN, MARGIN);
    let _ = writeln!(o, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(o, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(o, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(o, "</g>");
    let _ = writeln!(o, r#"<g text-anchor="middle">"#);
    for s in g.s.0..=g.s.1 {
        if s % 2 == 0 {
            let _ = writeln!(o, r#"<text x="{}" y="{}">{s}</text>"#, x(s), y0 + 14);
        }
    }
    for f in g.f.0..=g.f.1 {
        let _ = writeln!(o, r#"<text x="{}" y="{}">{f}</text>"#, x0 - 12, y(f) + 4);
    }
    let _ = writeln!(o, r#"<text x="{}" y="{}">s</text>"#, (x0 + x1) / 2, height - 8);
    let _ = writeln!(o, r#"<text x="12" y="{}">f</text>"#, (y0 + y1) / 2);
    let _ = writeln!(o, "</g>");

    let _ = writeln!(o, r#"<g stroke-width="1.5">"#);
    for ((s, f), cell) in &g.cells {
        let (sx, sy) = (x(*s), y(*f));
        let targets = [(cell.h0, (*s, *f + 1), "black"), (cell.h1, (*s + 1, *f + 1), "black"), (cell.rho, (*s - 1, *f), "#1f5fbf")];
        for (on, (ts, tf), colour) in targets {
            if on && g.cells.contains_key(&(ts, tf)) {
                let _ = writeln!(o, r#"<line x1="{sx}" y1="{sy}" x2="{}" y2="{}" stroke="{colour}"/>"#, x(ts), y(tf));
            }
        }
    }
    let _ = writeln!(o, "</g>");
    for ((s, f), cell) in &g.cells {
        if cell.count == 0 {
            continue;
        }
        let (sx, sy) = (x(*s), y(*f));
        if cell.periodic {
            let _ = writeln!(o, r#"<rect x="{}" y="{}" width="8" height="8" fill="black"/>"#, sx - 4, sy - 4);
        } else {
            let _ = writeln!(o, r#"<circle cx="{sx}" cy="{sy}" r="4" fill="black"/>"#);
        }
        if cell.count > 1 {
            let _ = writeln!(o, r##"<text x="{}" y="{}" fill="#b00000">{}</text>"##, sx + 6, sy - 5, cell.count);
        }
    }
    let _ = writeln!(o, "</svg>");
    o
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
