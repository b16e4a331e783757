//! Text syntax: integers, identifiers, `+ - * / ^`, parentheses.
//! Division is only allowed by nonzero constants, so printed rational
//! coefficients like `3/2*x` read back unchanged.

use super::poly::{Ctx, Polynomial, Vars, Q};
use crate::error::{EngineError, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> EngineError {
    EngineError::Parse { line, col, msg: msg.into() }
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let (mut line, mut col) = (1usize, 1usize);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                i += 1;
                continue;
            }
            let (l0, c0) = (line, col);
            if c.is_ascii_digit() {
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[st..i].iter().collect();
                col += i - st;
                toks.push((Tok::Int(s.parse().unwrap()), l0, c0));
            } else if c.is_ascii_alphabetic() {
                let st = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[st..i].iter().collect();
                col += i - st;
                toks.push((Tok::Ident(s), l0, c0));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), l0, c0));
                i += 1;
                col += 1;
            } else {
                return Err(perr(l0, c0, format!("unexpected character `{c}`")));
            }
        }
        toks.push((Tok::End, line, col));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    ctx: &'a Ctx,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }
    fn err(&self, msg: impl Into<String>) -> EngineError {
        let (l, c) = self.here();
        perr(l, c, msg)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.pos += 1;
                    let here = self.here();
                    let d = self.unary()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Q::from_integer(1.into()) / c)),
                        Some(_) => return Err(perr(here.0, here.1, "division by zero")),
                        None => return Err(perr(here.0, here.1, "division by a non-constant")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Tok::Op('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.pos += 1;
            match self.peek().clone() {
                Tok::Int(n) => {
                    let e = n.to_u32().ok_or_else(|| self.err("exponent too large"))?;
                    self.pos += 1;
                    return base.try_pow(e);
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ctx, Q::from_integer(n)))
            }
            Tok::Ident(name) => match self.ctx.index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ctx, i))
                }
                None => Err(self.err(format!("unknown variable `{name}`"))),
            },
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Tok::Op(')') => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Tok::End => Err(self.err("unexpected end of input")),
            Tok::Op(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}

/// Parse in a fixed variable context.
pub fn parse_poly(src: &str, ctx: &Ctx) -> Result<Polynomial> {
    let lx = Lexer::new(src)?;
    let mut p = Parser { toks: lx.toks, pos: 0, ctx };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.err("unexpected trailing input")),
    }
}

/// Parse with the context formed by the identifiers that occur, sorted.
pub fn parse_poly_infer(src: &str) -> Result<Polynomial> {
    let lx = Lexer::new(src)?;
    let mut names: Vec<String> = lx
        .toks
        .iter()
        .filter_map(|(t, _, _)| match t {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    names.sort();
    names.dedup();
    parse_poly(src, &Vars::new(&names))
}

/// Convenience for tests and fixtures; panics on malformed input.
pub fn poly(src: &str, ctx: &Ctx) -> Polynomial {
    parse_poly(src, ctx).unwrap_or_else(|e| panic!("bad polynomial `{src}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_examples() {
        let c = Vars::new(&["a", "b", "x", "y"]);
        for s in [
            "-a + x + b*x*y + 2*b*x^2",
            "-b + y + a*x^2 + a*x*y + b*y^2",
            "3/2*x^2 - 7/3",
            "0",
            "-1",
        ] {
            let p = parse_poly(s, &c).unwrap();
            let back = parse_poly(&p.to_string(), &c).unwrap();
            assert_eq!(p, back, "{s}");
        }
    }

    #[test]
    fn precedence() {
        let c = Vars::new(&["x", "y"]);
        assert_eq!(parse_poly("-x^2", &c).unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly("2*(x+y)^2", &c).unwrap(), parse_poly("2*x^2+4*x*y+2*y^2", &c).unwrap());
        assert_eq!(parse_poly("x/2 - y/3", &c).unwrap().to_string(), "1/2*x - 1/3*y");
    }

    #[test]
    fn errors_carry_position() {
        let c = Vars::new(&["x"]);
        match parse_poly("x**2", &c) {
            Err(EngineError::Parse { line, col, .. }) => assert_eq!((line, col), (1, 3)),
            other => panic!("{other:?}"),
        }
        match parse_poly("x +\n  z", &c) {
            Err(EngineError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("x/(x+1)", &c).is_err());
        assert!(parse_poly("(x", &c).is_err());
    }

    #[test]
    fn infer_sorts_names() {
        let p = parse_poly_infer("y*b + x").unwrap();
        assert_eq!(p.ctx().names(), &["b", "x", "y"]);
    }
}
