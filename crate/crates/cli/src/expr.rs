//! Module expressions.
//!
//! ```text
//! expr    := 'S(' int ',' int ')' expr | product
//! product := postfix ('*' postfix)*
//! postfix := atom ('/' 'rho')*
//! atom    := 'M2' | 'B0(' int ')' | 'B1(' int ')' | 'A1modA0' | 'AmodA1(' int ')' | '(' expr ')'
//! ```

use std::fmt;

use kqext::comod::{ComodError, Comodule};
use kqext::ground::Base;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    M2,
    B0(u32),
    B1(u32),
    A1ModA0,
    AModA1(u32),
    Shift(i32, i32, Box<ModuleExpr>),
    Tensor(Box<ModuleExpr>, Box<ModuleExpr>),
    RhoQuotient(Box<ModuleExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.char_indices().take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-')).count();
        match rest[..len].parse() {
            Ok(n) => {
                self.pos += len;
                Ok(n)
            }
            Err(_) => self.err("expected an integer"),
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let n = self.int()?;
        u32::try_from(n).map_err(|_| ParseError { pos: at, msg: "expected a nonnegative integer".into() })
    }

    fn expr(&mut self) -> Result<ModuleExpr, ParseError> {
        if self.eat("S(") {
            let p = self.int()? as i32;
            self.expect(",")?;
            let q = self.int()? as i32;
            self.expect(")")?;
            let inner = self.expr()?;
            return Ok(ModuleExpr::Shift(p, q, Box::new(inner)));
        }
        let mut e = self.postfix()?;
        while self.eat("*") {
            let r = self.postfix()?;
            e = ModuleExpr::Tensor(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<ModuleExpr, ParseError> {
        let mut e = self.atom()?;
        while self.eat("/") {
            self.expect("rho")?;
            e = ModuleExpr::RhoQuotient(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<ModuleExpr, ParseError> {
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        for (tok, mk) in [("B0(", ModuleExpr::B0 as fn(u32) -> ModuleExpr), ("B1(", ModuleExpr::B1), ("AmodA1(", ModuleExpr::AModA1)] {
            if self.eat(tok) {
                let n = self.nat()?;
                self.expect(")")?;
                return Ok(mk(n));
            }
        }
        if self.eat("A1modA0") {
            return Ok(ModuleExpr::A1ModA0);
        }
        if self.eat("M2") {
            return Ok(ModuleExpr::M2);
        }
        self.err("expected a module: M2, B0(k), B1(k), A1modA0, AmodA1(n), S(p,q) or '('")
    }
}

pub fn parse_module_expr(text: &str) -> Result<ModuleExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl ModuleExpr {
    /// Build the comodule over `base` at `level` (0 restricts to A(0)).
    pub fn build(&self, base: Base, level: u8) -> Result<Comodule, ComodError> {
        let m = self.build_full(base)?;
        Ok(if level == 0 { m.restrict_to_level0() } else { m })
    }

    fn build_full(&self, base: Base) -> Result<Comodule, ComodError> {
        Ok(match self {
            ModuleExpr::M2 => Comodule::ground(base, 1),
            ModuleExpr::B0(k) => Comodule::brown_gitler_b0(*k, base),
            ModuleExpr::B1(k) => Comodule::brown_gitler_b1(*k, base),
            ModuleExpr::A1ModA0 => Comodule::a1_mod_a0(base),
            ModuleExpr::AModA1(n) => Comodule::a_mod_a1_truncated(*n, base),
            ModuleExpr::Shift(p, q, e) => e.build_full(base)?.shift(*p, *q),
            ModuleExpr::Tensor(a, b) => a.build_full(base)?.tensor(&b.build_full(base)?)?,
            ModuleExpr::RhoQuotient(e) => e.build_full(base)?.quotient_rho()?,
        })
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::M2 => write!(f, "M2"),
            ModuleExpr::B0(k) => write!(f, "B0({k})"),
            ModuleExpr::B1(k) => write!(f, "B1({k})"),
            ModuleExpr::A1ModA0 => write!(f, "A1modA0"),
            ModuleExpr::AModA1(n) => write!(f, "AmodA1({n})"),
            ModuleExpr::Shift(p, q, e) => write!(f, "S({p},{q}) {e}"),
            ModuleExpr::Tensor(a, b) => {
                let side = |e: &ModuleExpr, f: &mut fmt::Formatter<'_>| match e {
                    ModuleExpr::Shift(..) => write!(f, "({e})"),
                    _ => write!(f, "{e}"),
                };
                side(a, f)?;
                write!(f, " * ")?;
                match **b {
                    ModuleExpr::Tensor(..) | ModuleExpr::Shift(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            ModuleExpr::RhoQuotient(e) => match **e {
                ModuleExpr::Shift(..) | ModuleExpr::Tensor(..) => write!(f, "({e}) / rho"),
                _ => write!(f, "{e} / rho"),
            },
        }
    }
}
