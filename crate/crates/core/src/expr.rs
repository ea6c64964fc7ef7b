//! Text syntax for functions, forms and Weyl elements.
//!
//! Grammar (lowest precedence first):
//! `sum := term (('+' | '-') term)*`,
//! `term := unary (('*' | '/' | 'wedge' | '∧' | juxtaposition) unary)*`,
//! `unary := ('-' | '+') unary | power`,
//! `power := atom ('^' integer)?`,
//! `atom := integer | name | 'd' name | 'd(' sum ')' | '(' sum ')'`.
//!
//! Names are resolved against the ring; `h` is the deformation parameter and
//! `xi1'` is accepted for `ξ1'`. The printers in the rest of the crate emit
//! text in this syntax.

use crate::error::{Error, Result};
use crate::formscalc::{DiffForm, RingRef, TruncPoly};
use crate::scalars::Prime;
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '∧' => Tok::Wedge,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<i64>().map_err(|_| Error::Parse { pos: start, msg: format!("number {s} too large") })?;
                out.push((start, Tok::Num(v)));
                continue;
            }
            c if is_name_char(c) => {
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                while i < chars.len() && chars[i] == '\'' {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, if s == "wedge" { Tok::Wedge } else { Tok::Name(s) }));
                continue;
            }
            other => return Err(Error::Parse { pos: start, msg: format!("unexpected character '{other}'") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(i64),
    Name(usize, String),
    Diff(usize, String),
    D(usize, Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(usize, Box<Ast>, Box<Ast>),
    Pow(usize, Box<Ast>, i64),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.here();
            match self.peek() {
                Some(Tok::Star) | Some(Tok::Wedge) => {
                    self.pos += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Ast::Div(at, Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::LParen) => {
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.here();
        self.pos += 1;
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        match self.peek() {
            Some(Tok::Num(e)) => {
                let e = *e;
                self.pos += 1;
                Ok(Ast::Pow(at, Box::new(base), if neg { -e } else { e }))
            }
            _ => self.err("exponent must be an integer"),
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Ast::Num(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                if s == "d" && self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let e = self.sum()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Ast::D(at, Box::new(e)));
                }
                Ok(Ast::Name(at, s))
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(src: &str) -> Result<Ast> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() };
    let ast = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

fn normalize_name(s: &str) -> String {
    match s.strip_prefix("xi") {
        Some(rest) if rest.starts_with(|c: char| c.is_ascii_digit()) => format!("ξ{rest}"),
        _ => s.to_string(),
    }
}

/// Resolves names in `ring`: a ring variable wins over a differential.
fn resolve(ring: &RingRef, pos: usize, s: &str) -> Result<Ast> {
    let n = normalize_name(s);
    if n == "h" || ring.var_index(&n).is_some() {
        return Ok(Ast::Name(pos, n));
    }
    if let Some(rest) = n.strip_prefix('d') {
        let r = normalize_name(rest);
        if ring.var_index(&r).is_some() {
            return Ok(Ast::Diff(pos, r));
        }
    }
    Err(Error::Parse { pos, msg: format!("unknown name '{s}'") })
}

fn eval_form(ast: &Ast, ring: &RingRef) -> Result<DiffForm> {
    Ok(match ast {
        Ast::Num(v) => DiffForm::function(&TruncPoly::from_i64(ring, *v)),
        Ast::Name(pos, s) | Ast::Diff(pos, s) => match resolve(ring, *pos, s)? {
            Ast::Name(_, n) if n == "h" => DiffForm::function(&TruncPoly::h(ring)),
            Ast::Name(_, n) => DiffForm::function(&TruncPoly::var(ring, ring.var_index(&n).unwrap())),
            Ast::Diff(_, n) => DiffForm::dx(ring, ring.var_index(&n).unwrap()),
            _ => unreachable!(),
        },
        Ast::D(_, e) => eval_form(e, ring)?.d(),
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let x = eval_form(a, ring)?;
            let y = eval_form(b, ring)?;
            let (x, y) = unify_degree(x, y)?;
            if matches!(ast, Ast::Add(..)) {
                x.add(&y)
            } else {
                x.sub(&y)
            }
        }
        Ast::Neg(a) => eval_form(a, ring)?.neg(),
        Ast::Mul(a, b) => eval_form(a, ring)?.wedge(&eval_form(b, ring)?),
        Ast::Div(pos, a, b) => {
            let den = eval_form(b, ring)?;
            if den.degree() != 0 {
                return Err(Error::Parse { pos: *pos, msg: "can only divide by a function".into() });
            }
            let inv = den.as_function().inverse().map_err(|_| Error::Parse { pos: *pos, msg: format!("{den} is not invertible") })?;
            eval_form(a, ring)?.mul_fn(&inv)
        }
        Ast::Pow(pos, a, e) => {
            let base = eval_form(a, ring)?;
            if base.degree() != 0 {
                return Err(Error::Parse { pos: *pos, msg: "only functions have powers".into() });
            }
            let f = base.as_function();
            let f = if *e < 0 { f.inverse().map_err(|_| Error::Parse { pos: *pos, msg: format!("{f} is not invertible") })? } else { f };
            DiffForm::function(&f.pow(e.unsigned_abs()))
        }
    })
}

/// Zero forms carry degree 0 until combined; a bare `0` adapts.
fn unify_degree(x: DiffForm, y: DiffForm) -> Result<(DiffForm, DiffForm)> {
    if x.degree() == y.degree() {
        return Ok((x, y));
    }
    if x.is_zero() {
        return Ok((DiffForm::zero(y.ring(), y.degree()), y));
    }
    if y.is_zero() {
        let d = x.degree();
        return Ok((x, DiffForm::zero(y.ring(), d)));
    }
    Err(Error::Parse { pos: 0, msg: format!("cannot add forms of degrees {} and {}", x.degree(), y.degree()) })
}

/// A differential form over `ring`; functions are forms of degree 0.
pub fn parse_form(src: &str, ring: &RingRef) -> Result<DiffForm> {
    eval_form(&parse_ast(src)?, ring)
}

/// Like [`parse_form`] but requires a given degree (a literal `0` is
/// accepted in any degree).
pub fn parse_form_of_degree(src: &str, ring: &RingRef, degree: usize) -> Result<DiffForm> {
    let f = parse_form(src, ring)?;
    if f.degree() == degree {
        Ok(f)
    } else if f.is_zero() {
        Ok(DiffForm::zero(ring, degree))
    } else {
        Err(Error::DegreeOutOfRange(format!("expected a {degree}-form, got {f}")))
    }
}

pub fn parse_poly(src: &str, ring: &RingRef) -> Result<TruncPoly> {
    Ok(parse_form_of_degree(src, ring, 0)?.as_function())
}

fn eval_weyl(ast: &Ast, p: Prime, n: usize, order: usize) -> Result<WeylElement> {
    let name = |pos: usize, s: &str| -> Result<WeylElement> {
        if s == "h" {
            return Ok(WeylElement::h(p, n, order));
        }
        let (kind, idx) = s.split_at(1);
        match (kind, idx.parse::<usize>()) {
            ("x", Ok(i)) if (1..=n).contains(&i) => Ok(WeylElement::x(p, n, order, i - 1)),
            ("y", Ok(i)) if (1..=n).contains(&i) => Ok(WeylElement::y(p, n, order, i - 1)),
            _ => Err(Error::Parse { pos, msg: format!("unknown generator '{s}'") }),
        }
    };
    Ok(match ast {
        Ast::Num(v) => WeylElement::constant(p, n, order, p.elem(*v)),
        Ast::Name(pos, s) => name(*pos, s)?,
        Ast::Diff(pos, _) | Ast::D(pos, _) => return Err(Error::Parse { pos: *pos, msg: "forms are not Weyl elements".into() }),
        Ast::Add(a, b) => eval_weyl(a, p, n, order)?.add(&eval_weyl(b, p, n, order)?),
        Ast::Sub(a, b) => eval_weyl(a, p, n, order)?.sub(&eval_weyl(b, p, n, order)?),
        Ast::Neg(a) => eval_weyl(a, p, n, order)?.neg(),
        Ast::Mul(a, b) => eval_weyl(a, p, n, order)?.mul(&eval_weyl(b, p, n, order)?),
        Ast::Div(pos, a, b) => {
            let den = eval_weyl(b, p, n, order)?;
            let c = den.scalar_part();
            let is_scalar = den.sub(&WeylElement::constant(p, n, order, c)).is_zero();
            let inv = c.inv().filter(|_| is_scalar).ok_or_else(|| Error::Parse { pos: *pos, msg: "can only divide by a nonzero scalar".into() })?;
            eval_weyl(a, p, n, order)?.scale(inv)
        }
        Ast::Pow(pos, a, e) => {
            if *e < 0 {
                return Err(Error::Parse { pos: *pos, msg: "negative powers are not defined here".into() });
            }
            eval_weyl(a, p, n, order)?.pow(*e as u64)
        }
    })
}

/// An element of the Weyl algebra in `n` pairs modulo `h^order`. Products
/// are the noncommutative ones, so `y1*x1` and `x1*y1 + h` agree.
pub fn parse_weyl(src: &str, p: Prime, n: usize, order: usize) -> Result<WeylElement> {
    eval_weyl(&parse_ast(src)?, p, n, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formscalc::{PolyRing, Variable};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn forms_round_trip() {
        let r = PolyRing::polynomial(p(3), "x", 2, 6, 4).unwrap();
        for s in ["x2*dx1 + x1*dx2", "-dx1*dx2", "h^3*x1^9*x2^6 - h^3*x1^3", "0", "-h*dx1 + x1^2*x2^2*dx2", "h + 1"] {
            assert_eq!(parse_form(s, &r).unwrap().to_string(), s);
        }
        assert_eq!(parse_form("d(x1 x2)", &r).unwrap().to_string(), "x2*dx1 + x1*dx2");
        assert_eq!(parse_form("dx1 wedge dx2 + dx2 ∧ dx1", &r).unwrap().to_string(), "0");
        assert_eq!(parse_form("2x1 − x1", &r).unwrap().to_string(), "x1");
    }

    #[test]
    fn primed_and_laurent_names() {
        let pr = p(3);
        let r = PolyRing::new(pr, vec![Variable::laurent("x1", 2, 4)], 1).unwrap();
        assert_eq!(parse_form("dx1/x1", &r).unwrap().to_string(), "x1^-1*dx1");
        assert_eq!(parse_form("x1^-2", &r).unwrap().to_string(), "x1^-2");
        let t = r.twisted();
        assert_eq!(parse_form("(x1')^3*dx1'", &t).unwrap().to_string(), "(x1')^3*dx1'");
        let s = PolyRing::new(pr, vec![Variable::polynomial("x1'", 3), Variable::polynomial("ξ1'", 3)], 4).unwrap();
        assert_eq!(parse_poly("xi1' - h^3*x1'", &s).unwrap().to_string(), "-h^3*x1' + ξ1'");
    }

    #[test]
    fn weyl_round_trip() {
        let a = parse_weyl("y1*x1", p(3), 1, 3).unwrap();
        assert_eq!(a.to_string(), "x1*y1 + h");
        assert_eq!(parse_weyl(&a.to_string(), p(3), 1, 3).unwrap(), a);
        assert_eq!(parse_weyl("x1/2", p(3), 1, 3).unwrap().to_string(), "-x1");
    }

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::polynomial(p(3), "x", 1, 4, 1).unwrap();
        match parse_form("x1 + z", &r).unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 5),
            e => panic!("{e:?}"),
        }
        match parse_form("x1 + ", &r).unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 5),
            e => panic!("{e:?}"),
        }
        assert!(parse_form("x1 $", &r).is_err());
        assert!(parse_form("(x1", &r).is_err());
        assert!(parse_form("x1 + dx1", &r).is_err());
        assert!(parse_form("1/x1", &r).is_err());
    }
}
