//! The description language: fields, profiles, expressions and symbol
//! algebras.
//!
//! ```text
//! field    := "Q" | "F" prime | field "[" ident "]/(" expr ")"
//! base     := field | "Qp(p=" prime ")" | "closed(char=" n ")"
//!           | "decl(" [entry ("," entry)*] ")"
//! entry    := ("cd" prime | "cdq" | "cd_q") ("=" n | "<=" n | "=inf") | "char=" n
//! profile  := base ("((" ident "))")*
//! algebra  := "symbol(" "n=" n ["," "omega=" (auto | expr)] "," "a=" expr "," "b=" expr ")" "over" profile
//! expr     := the usual + - * / ^ over integers, variables, generators and O(var^k)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement, FieldKind, Poly};
use crate::laurent::{Tower, TowerElement};
use crate::profile::{CdBound, DeclaredBase, FieldProfile, ResidueBase};
use crate::ring::Ring;
use crate::symbol::SymbolAlgebra;

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    BigO(String, i64),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    /// Value in a tower: variables of the tower, generators of its base
    /// field, integers and `O(var^k)`.
    pub fn eval(&self, tower: &Tower) -> Result<TowerElement> {
        Ok(match self {
            Expr::Int(n) => tower.from_rational(&BigRational::from_integer(n.clone()))?,
            Expr::Ident(name) => {
                if tower.depth_of(name).is_some() {
                    tower.var(name)?
                } else if let Some(g) = generator(tower.base(), name)? {
                    TowerElement::Const(g)
                } else {
                    return Err(Error::InvalidInput(format!("unknown name '{name}' in {tower}")));
                }
            }
            Expr::Neg(x) => -&x.eval(tower)?,
            Expr::Add(x, y) => &x.eval(tower)? + &y.eval(tower)?,
            Expr::Sub(x, y) => &x.eval(tower)? - &y.eval(tower)?,
            Expr::Mul(x, y) => &x.eval(tower)? * &y.eval(tower)?,
            Expr::Div(x, y) => {
                let d = y.eval(tower)?;
                if d.is_exact_zero() {
                    return Err(Error::DivisionByZero);
                }
                &x.eval(tower)? * &d.inv()?
            }
            Expr::Pow(x, e) => x.eval(tower)?.powi(*e)?,
            Expr::BigO(var, k) => {
                let d = tower
                    .depth_of(var)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown variable '{var}' in O(...)")))?;
                tower.big_o(d, *k)?
            }
        })
    }

    /// Polynomial in `var` over `base`.
    pub fn eval_poly(&self, base: &Field, var: &str) -> Result<Poly> {
        let constant = |c: FieldElement| Poly::constant(c);
        Ok(match self {
            Expr::Int(n) => constant(base.from_rational(&BigRational::from_integer(n.clone()))?),
            Expr::Ident(name) if name == var => Poly::monomial(base, 1),
            Expr::Ident(name) => match generator(base, name)? {
                Some(g) => constant(g),
                None => return Err(Error::InvalidInput(format!("unknown name '{name}' in polynomial"))),
            },
            Expr::Neg(x) => x.eval_poly(base, var)?.neg(),
            Expr::Add(x, y) => x.eval_poly(base, var)?.add(&y.eval_poly(base, var)?),
            Expr::Sub(x, y) => x.eval_poly(base, var)?.sub(&y.eval_poly(base, var)?),
            Expr::Mul(x, y) => x.eval_poly(base, var)?.mul(&y.eval_poly(base, var)?),
            Expr::Div(x, y) => {
                let d = y.eval_poly(base, var)?;
                if d.degree() != Some(0) {
                    return Err(Error::InvalidInput("polynomials may only be divided by nonzero constants".into()));
                }
                x.eval_poly(base, var)?.scale(&d.leading().inv()?)
            }
            Expr::Pow(x, e) => {
                let e = u64::try_from(*e)
                    .map_err(|_| Error::InvalidInput("negative exponent in polynomial".into()))?;
                Ring::pow(&x.eval_poly(base, var)?, e)
            }
            Expr::BigO(..) => return Err(Error::InvalidInput("O(...) is not allowed in a polynomial".into())),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.write_child(f, 3)
            }
            Expr::Add(x, y) => {
                x.write_child(f, 1)?;
                write!(f, " + ")?;
                y.write_child(f, 2)
            }
            Expr::Sub(x, y) => {
                x.write_child(f, 1)?;
                write!(f, " - ")?;
                y.write_child(f, 2)
            }
            Expr::Mul(x, y) => {
                x.write_child(f, 2)?;
                write!(f, "*")?;
                y.write_child(f, 3)
            }
            Expr::Div(x, y) => {
                x.write_child(f, 2)?;
                write!(f, "/")?;
                y.write_child(f, 3)
            }
            Expr::Pow(x, e) => {
                x.write_child(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::BigO(v, 1) => write!(f, "O({v})"),
            Expr::BigO(v, k) => write!(f, "O({v}^{k})"),
        }
    }
}

/// The adjoined generator called `name`, embedded into `field`.
fn generator(field: &Field, name: &str) -> Result<Option<FieldElement>> {
    match field.kind() {
        FieldKind::Extension { base, var, .. } => {
            if var == name {
                Ok(Some(field.generator()?))
            } else {
                match generator(base, name)? {
                    Some(g) => Ok(Some(field.embed(&g)?)),
                    None => Ok(None),
                }
            }
        }
        _ => Ok(None),
    }
}

/// A parsed symbol algebra description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub n: usize,
    /// `None` selects the smallest primitive root of unity.
    pub omega: Option<Expr>,
    pub a: Expr,
    pub b: Expr,
    pub over: FieldProfile,
}

impl AlgebraSpec {
    pub fn build(&self, precision: usize) -> Result<SymbolAlgebra> {
        let tower = self.over.tower(precision)?;
        let a = self.a.eval(&tower)?;
        let b = self.b.eval(&tower)?;
        match &self.omega {
            None => SymbolAlgebra::with_auto_omega(&tower, self.n, &a, &b),
            Some(w) => {
                let w = w.eval(&tower)?;
                let w = w
                    .as_const()
                    .ok_or_else(|| Error::InvalidInput("omega must be a constant".into()))?;
                SymbolAlgebra::new(&tower, self.n, w, &a, &b)
            }
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "symbol(n={}", self.n)?;
        if let Some(w) = &self.omega {
            write!(f, ", omega={w}")?;
        }
        write!(f, ", a={}, b={}) over {}", self.a, self.b, self.over)
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_field(text: &str) -> Result<Field> {
    let mut p = Parser::new(text);
    let f = p.field()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_profile(text: &str) -> Result<FieldProfile> {
    let mut p = Parser::new(text);
    let f = p.profile()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let mut p = Parser::new(text);
    let a = p.algebra()?;
    p.finish()?;
    Ok(a)
}

/// An element of `tower` written as an expression.
pub fn parse_element(text: &str, tower: &Tower) -> Result<TowerElement> {
    parse_expr(text)?.eval(tower)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn error_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse { line, column, msg: msg.into() }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        self.error_at(self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn mark(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn looking_at(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{s}'")))
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => {}
            _ => return Err(self.error("expected a name")),
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.mark();
        let d = self.digits()?;
        d.parse().map_err(|_| self.error_at(start, "number out of range"))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let start = self.mark();
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.error_at(start, "exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat("^") {
            let e = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                Ok(Expr::Int(d.parse().expect("decimal digits")))
            }
            Some(_) => {
                let start = self.pos;
                let name = self.ident()?;
                if name == "O" && self.eat("(") {
                    let var = self.ident()?;
                    let k = if self.eat("^") { self.signed_int()? } else { 1 };
                    self.expect(")")?;
                    return Ok(Expr::BigO(var, k));
                }
                if name == "O" {
                    return Err(self.error_at(start, "'O' is reserved for O(var^k)"));
                }
                Ok(Expr::Ident(name))
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn field(&mut self) -> Result<Field> {
        let start = self.mark();
        let name = self.ident()?;
        let mut field = if name == "Q" {
            Field::rational()
        } else if let Some(p) = name.strip_prefix('F').filter(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())) {
            let p: u64 = p.parse().map_err(|_| self.error_at(start, "characteristic out of range"))?;
            Field::prime(p).map_err(|e| self.error_at(start, e.to_string()))?
        } else {
            return Err(self.error_at(start, format!("unknown base '{name}'")));
        };
        while self.looking_at("[") {
            self.expect("[")?;
            let var = self.ident()?;
            self.expect("]")?;
            self.expect("/")?;
            self.expect("(")?;
            let at = self.pos;
            let modulus = self.expr()?;
            self.expect(")")?;
            let poly = modulus.eval_poly(&field, &var).map_err(|e| self.error_at(at, e.to_string()))?;
            field = Field::extension(&field, &poly, &var).map_err(|e| self.error_at(at, e.to_string()))?;
        }
        Ok(field)
    }

    fn bound(&mut self) -> Result<CdBound> {
        if self.eat("<=") {
            Ok(CdBound::AtMost(self.small()?))
        } else {
            self.expect("=")?;
            if self.eat("inf") {
                Ok(CdBound::Infinite)
            } else {
                Ok(CdBound::Exactly(self.small()?))
            }
        }
    }

    fn small(&mut self) -> Result<u32> {
        let start = self.mark();
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| self.error_at(start, "value out of range"))
    }

    fn base(&mut self) -> Result<ResidueBase> {
        if self.eat("Qp(") {
            self.expect("p")?;
            self.expect("=")?;
            let at = self.mark();
            let p = self.uint()?;
            if !crate::fields::is_prime(p) {
                return Err(self.error_at(at, format!("{p} is not prime")));
            }
            self.expect(")")?;
            return Ok(ResidueBase::PAdic(p));
        }
        if self.eat("closed(") {
            self.expect("char")?;
            self.expect("=")?;
            let p = self.char_value()?;
            self.expect(")")?;
            return Ok(ResidueBase::Closed(p));
        }
        if self.eat("decl(") {
            let mut d = DeclaredBase { entries: BTreeMap::new(), wildcard: None, characteristic: 0 };
            if self.eat(")") {
                return Ok(ResidueBase::Declared(d));
            }
            loop {
                let at = self.mark();
                if self.eat("char") {
                    self.expect("=")?;
                    d.characteristic = self.char_value()?;
                } else if self.eat("cd_q") || self.eat("cdq") {
                    if d.wildcard.is_some() {
                        return Err(self.error_at(at, "repeated cdq entry"));
                    }
                    d.wildcard = Some(self.bound()?);
                } else if self.eat("cd") {
                    let q = self.uint()?;
                    if !crate::fields::is_prime(q) {
                        return Err(self.error_at(at, format!("{q} is not prime")));
                    }
                    let b = self.bound()?;
                    if d.entries.insert(q, b).is_some() {
                        return Err(self.error_at(at, format!("repeated entry for cd{q}")));
                    }
                } else {
                    return Err(self.error("expected 'cd<q>', 'cdq' or 'char'"));
                }
                if self.eat(")") {
                    return Ok(ResidueBase::Declared(d));
                }
                self.expect(",")?;
            }
        }
        Ok(ResidueBase::Exact(self.field()?))
    }

    fn char_value(&mut self) -> Result<u64> {
        let at = self.mark();
        let p = self.uint()?;
        if p != 0 && !crate::fields::is_prime(p) {
            return Err(self.error_at(at, "characteristic must be 0 or prime"));
        }
        Ok(p)
    }

    fn profile(&mut self) -> Result<FieldProfile> {
        let start = self.mark();
        let base = self.base()?;
        let mut vars = Vec::new();
        while self.eat("((") {
            vars.push(self.ident()?);
            self.expect("))")?;
        }
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        FieldProfile::new(base, &refs).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn algebra(&mut self) -> Result<AlgebraSpec> {
        self.expect("symbol")?;
        self.expect("(")?;
        let mut n = None;
        let mut omega = None;
        let mut explicit_omega = false;
        let mut a = None;
        let mut b = None;
        loop {
            let at = self.mark();
            let key = self.ident()?;
            self.expect("=")?;
            let dup = match key.as_str() {
                "n" => {
                    let v = self.uint()?;
                    let v = usize::try_from(v).map_err(|_| self.error_at(at, "degree out of range"))?;
                    n.replace(v).is_some()
                }
                "omega" => {
                    if self.eat("auto") {
                        omega = None;
                    } else {
                        omega = Some(self.expr()?);
                    }
                    std::mem::replace(&mut explicit_omega, true)
                }
                "a" => a.replace(self.expr()?).is_some(),
                "b" => b.replace(self.expr()?).is_some(),
                other => return Err(self.error_at(at, format!("unknown key '{other}'"))),
            };
            if dup {
                return Err(self.error_at(at, format!("repeated key '{key}'")));
            }
            if self.eat(")") {
                break;
            }
            self.expect(",")?;
        }
        let missing = |what: &str| self.error(format!("missing '{what}'"));
        let n = n.ok_or_else(|| missing("n"))?;
        let a = a.ok_or_else(|| missing("a"))?;
        let b = b.ok_or_else(|| missing("b"))?;
        if n == 0 {
            return Err(self.error("degree must be positive"));
        }
        self.expect("over")?;
        let over = self.profile()?;
        Ok(AlgebraSpec { n, omega, a, b, over })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::CdValue;

    #[test]
    fn expressions_round_trip() {
        for s in ["1 + 2*x", "x^-2 + 3 - y", "(1 + x)*y", "-(a + b)", "x - (y - z)", "2/3", "O(t^5)", "a - -b", "(-x)^2"] {
            let e = parse_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn fields_parse() {
        assert_eq!(parse_field("F5").unwrap(), Field::prime(5).unwrap());
        let f = parse_field("F7[w]/(w^2+w+3)").unwrap();
        assert_eq!(f.size(), Some(49));
        assert_eq!(parse_field(&f.to_string()).unwrap(), f);
        let g = parse_field("Q[z]/(z^2+1)").unwrap();
        assert_eq!(g.to_string(), "Q[z]/(z^2+1)");
        assert!(parse_field("F6").is_err());
        assert!(parse_field("F5[w]/(w^2-1)").is_err());
    }

    #[test]
    fn profiles_parse() {
        let p = parse_profile("decl(cd2=1)((x))((y))").unwrap();
        assert_eq!(p.height(), 2);
        assert_eq!(p.cd_q(2).unwrap(), CdValue::Finite(3));
        let p = parse_profile("F5((t))").unwrap();
        assert_eq!((p.height(), p.residue_characteristic()), (1, 5));
        let p = parse_profile("decl(cd_q=2)((t))").unwrap();
        assert_eq!(p.cd_q(3).unwrap(), CdValue::Finite(3));
        assert_eq!(p.to_string(), "decl(cdq=2)((t))");
        for s in ["Qp(p=7)((t))", "closed(char=0)", "decl(cd2=1, cd3<=2, cdq=inf, char=5)((x))((y))", "decl()"] {
            assert_eq!(parse_profile(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn algebras_parse_and_build() {
        let s = "symbol(n=4, a=x, b=y) over decl(cd2=1)((x))((y))";
        let a = parse_algebra(s).unwrap();
        assert_eq!(a.to_string(), s);
        assert!(a.build(8).is_err());
        let a = parse_algebra("symbol(n=3, omega=2, a=x, b=y) over F7((x))((y))").unwrap();
        let d = a.build(8).unwrap();
        assert_eq!(d.to_string(), "symbol(n=3, omega=2, a=x, b=y) over F7((x))((y))");
        let again = parse_algebra(&d.to_string()).unwrap().build(8).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn positioned_errors() {
        match parse_profile("F5((t)") {
            Err(Error::Parse { line: 1, column: 6, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_algebra("symbol(n=2,\n  a=1, c=2) over F5") {
            Err(Error::Parse { line: 2, column: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_profile("G5"), Err(Error::Parse { .. })));
    }

    #[test]
    fn elements_evaluate() {
        let f = parse_field("F7[w]/(w^2+w+3)").unwrap();
        let k = Tower::new(&f, &["t"], 8).unwrap();
        let x = parse_element("w*t^-1 + 1 + O(t^3)", &k).unwrap();
        assert_eq!(parse_element(&x.to_string(), &k).unwrap(), x);
        assert!(parse_element("u", &k).is_err());
        assert!(parse_element("1/(t - t)", &k).is_err());
    }
}
