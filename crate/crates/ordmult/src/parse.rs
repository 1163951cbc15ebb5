//! Polynomial grammar.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | primary ['^' integer]
//! primary := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//! Over Q(i) the identifier `i` is the imaginary unit. Juxtaposition is rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{Coeff, Field};
use crate::poly::SparsePoly;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push((Tok::Num(t.parse().unwrap()), st));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(cs[st..i].iter().collect()), st));
        } else if "+-*^/()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Input(format!("syntax error at position {i}: unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Input(format!("syntax error at position {}: {msg}", self.at())))
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.n(), self.field);
        let mut sign = '+';
        if let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            sign = *c;
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if sign == '+' { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(Tok::Op(c @ ('+' | '-'))) => {
                    sign = *c;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    return self.err("implicit multiplication is not allowed");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<SparsePoly> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-&self.factor()?);
        }
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| Error::Input("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<SparsePoly> {
        match self.peek().cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(a);
                if let Some(Tok::Op('/')) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(b)) => {
                            self.pos += 1;
                            if b.is_zero() {
                                return self.err("zero denominator");
                            }
                            q = q / BigRational::from_integer(b);
                        }
                        _ => return self.err("expected an integer denominator"),
                    }
                }
                Ok(SparsePoly::constant(self.n(), Coeff::from_rational(self.field, &q)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" && self.field == Field::Qi {
                    return Ok(SparsePoly::constant(self.n(), Coeff::imag_unit(Field::Qi)?));
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(k) => Ok(SparsePoly::var(self.n(), k, self.field)),
                    None => Err(Error::Input(format!("unknown variable '{name}' at position {}", self.toks[self.pos - 1].1))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op('/')) => self.err("'/' is only allowed inside a rational literal"),
            _ => self.err("unexpected token"),
        }
    }
}

/// Parses `text` as a polynomial in `vars` over `field`.
pub fn parse_poly(text: &str, vars: &[String], field: Field) -> Result<SparsePoly> {
    if field == Field::Qi && vars.iter().any(|v| v == "i") {
        return Err(Error::Input("'i' is reserved for the imaginary unit over Qi".into()));
    }
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Input("syntax error at position 0: empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), vars, field };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vec<String> {
        s.split(',').map(String::from).collect()
    }

    #[test]
    fn basic_terms() {
        let f = parse_poly("x^3 - y*z", &v("x,y,z"), Field::Q).unwrap();
        assert_eq!(f.coeff(&[3, 0, 0]), Coeff::from_int(Field::Q, 1));
        assert_eq!(f.coeff(&[0, 1, 1]), Coeff::from_int(Field::Q, -1));
        assert_eq!(f.len(), 2);
        assert!(parse_poly("0", &v("x"), Field::Q).unwrap().is_zero());
    }

    #[test]
    fn precedence() {
        let f = parse_poly("-x^2 + 2*x*3", &v("x"), Field::Q).unwrap();
        assert_eq!(f.coeff(&[2]), Coeff::from_int(Field::Q, -1));
        assert_eq!(f.coeff(&[1]), Coeff::from_int(Field::Q, 6));
    }

    #[test]
    fn errors() {
        assert!(parse_poly("2x", &v("x"), Field::Q).is_err());
        assert!(parse_poly("x + w", &v("x"), Field::Q).is_err());
        assert!(parse_poly("i*x", &v("x"), Field::Q).is_err());
        assert!(parse_poly("x/2", &v("x"), Field::Q).is_err());
        assert!(parse_poly("(x", &v("x"), Field::Q).is_err());
        let e = parse_poly("x + * y", &v("x,y"), Field::Q).unwrap_err().to_string();
        assert!(e.contains("position 4"), "{e}");
    }

    #[test]
    fn gaussian_literals() {
        let f = parse_poly("(1/2)*x + i*y", &v("x,y"), Field::Qi).unwrap();
        assert_eq!(f.len(), 2);
        let g = parse_poly("(2*i)^2", &v("x"), Field::Qi).unwrap();
        assert_eq!(g.constant_term(), Coeff::from_int(Field::Qi, -4));
    }

    #[test]
    fn prime_field() {
        let f = parse_poly("1/2*x + 3", &v("x"), Field::Fp(5)).unwrap();
        assert_eq!(f.coeff(&[1]), Coeff::Fp(3, 5));
        assert!(parse_poly("1/5*x", &v("x"), Field::Fp(5)).is_err());
    }
}
