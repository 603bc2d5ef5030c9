//! Input formats: the layered-tower JSON document and a small
//! recursive-descent parser for polynomial expressions with rational
//! coefficients and earlier generator names.

use crate::numfield::extend::build_tower;
use crate::numfield::{FieldElement, Layer, NumFieldError, NumberFieldTower};
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerSpec {
    pub var: String,
    pub minpoly: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerSpec {
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(Integer),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>, NumFieldError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Token::Int(lit.parse::<Integer>().map_err(|_| {
                    NumFieldError::Internal(format!("bad integer literal `{lit}`"))
                })?));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ => {
                return Err(NumFieldError::Internal(format!(
                    "unexpected character `{c}` in expression"
                )))
            }
        }
    }
    Ok(out)
}

/// Polynomial in the layer variable with coefficients in the prefix
/// tower (ascending).
type ElemPoly = Vec<FieldElement>;

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    prefix: &'a NumberFieldTower,
    gen_names: &'a [String],
    var: Option<&'a str>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn norm(&self, mut p: ElemPoly) -> ElemPoly {
        while p.last().map_or(false, FieldElement::is_zero) {
            p.pop();
        }
        p
    }

    fn p_add(&self, a: &ElemPoly, b: &ElemPoly) -> ElemPoly {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| self.prefix.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| self.prefix.zero());
            out.push(self.prefix.add(&x, &y));
        }
        self.norm(out)
    }

    fn p_neg(&self, a: &ElemPoly) -> ElemPoly {
        a.iter().map(|x| self.prefix.neg(x)).collect()
    }

    fn p_mul(&self, a: &ElemPoly, b: &ElemPoly) -> ElemPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.prefix.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let p = self.prefix.mul(x, y);
                out[i + j] = self.prefix.add(&out[i + j], &p);
            }
        }
        self.norm(out)
    }

    fn expr(&mut self) -> Result<ElemPoly, NumFieldError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = self.p_add(&acc, &t);
                }
                Some(Token::Minus) => {
                    self.next();
                    let t = self.term()?;
                    let nt = self.p_neg(&t);
                    acc = self.p_add(&acc, &nt);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ElemPoly, NumFieldError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = self.p_mul(&acc, &f);
                }
                Some(Token::Slash) => {
                    self.next();
                    let f = self.factor()?;
                    if f.len() > 1 {
                        return Err(NumFieldError::Internal(
                            "division by a polynomial in the layer variable".into(),
                        ));
                    }
                    let d = f.first().cloned().unwrap_or_else(|| self.prefix.zero());
                    let inv = self
                        .prefix
                        .inv(&d)
                        .ok_or_else(|| NumFieldError::Internal("division by zero".into()))?;
                    acc = self.p_mul(&acc, &vec![inv]);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ElemPoly, NumFieldError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                let f = self.factor()?;
                Ok(self.p_neg(&f))
            }
            Some(Token::Plus) => {
                self.next();
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(Token::Caret) = self.peek() {
                    self.next();
                    match self.next() {
                        Some(Token::Int(e)) => {
                            let e: u32 = e.to_u32().ok_or_else(|| {
                                NumFieldError::Internal("exponent too large".into())
                            })?;
                            let mut acc = vec![self.prefix.one()];
                            for _ in 0..e {
                                acc = self.p_mul(&acc, &base);
                            }
                            Ok(acc)
                        }
                        _ => Err(NumFieldError::Internal(
                            "expected integer exponent after `^`".into(),
                        )),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<ElemPoly, NumFieldError> {
        match self.next() {
            Some(Token::Int(n)) => Ok(vec![self.prefix.from_rational(Rational::from(n))]),
            Some(Token::Ident(name)) => {
                if Some(name.as_str()) == self.var {
                    Ok(vec![self.prefix.zero(), self.prefix.one()])
                } else if let Some(i) = self.gen_names.iter().position(|g| *g == name) {
                    Ok(vec![self.prefix.gen(i)])
                } else {
                    Err(NumFieldError::Internal(format!(
                        "unknown identifier `{name}`"
                    )))
                }
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(NumFieldError::Internal("missing `)`".into())),
                }
            }
            other => Err(NumFieldError::Internal(format!(
                "unexpected token {other:?}"
            ))),
        }
    }
}

/// Parses a polynomial-in-`var` expression over the prefix tower.
pub fn parse_layer_poly(
    prefix: &NumberFieldTower,
    gen_names: &[String],
    var: &str,
    src: &str,
) -> Result<Vec<FieldElement>, NumFieldError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefix,
        gen_names,
        var: Some(var),
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(NumFieldError::Internal("trailing tokens".into()));
    }
    Ok(poly)
}

/// Parses an element (no free variable) of the given tower.
pub fn parse_element(
    tower: &NumberFieldTower,
    src: &str,
) -> Result<FieldElement, NumFieldError> {
    let gen_names: Vec<String> = tower.layers().iter().map(|l| l.var.clone()).collect();
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefix: tower,
        gen_names: &gen_names,
        var: None,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(NumFieldError::Internal("trailing tokens".into()));
    }
    match poly.len() {
        0 => Ok(tower.zero()),
        1 => Ok(poly.into_iter().next().unwrap()),
        _ => Err(NumFieldError::Internal(
            "expression is not a constant element".into(),
        )),
    }
}

/// Builds a tower from the JSON layer description.
pub fn tower_from_spec(spec: &TowerSpec) -> Result<NumberFieldTower, NumFieldError> {
    let mut layers: Vec<Layer> = Vec::new();
    let mut prefix = NumberFieldTower::rationals();
    let mut gen_names: Vec<String> = Vec::new();
    for ls in &spec.layers {
        if ls.var == "x" || gen_names.contains(&ls.var) {
            return Err(NumFieldError::Internal(format!(
                "invalid or duplicate generator name `{}`",
                ls.var
            )));
        }
        let poly = parse_layer_poly(&prefix, &gen_names, "x", &ls.minpoly)?;
        if poly.len() < 2 {
            return Err(NumFieldError::Internal(format!(
                "layer `{}` must have degree >= 1",
                ls.var
            )));
        }
        layers.push(Layer {
            var: ls.var.clone(),
            minpoly: poly,
        });
        prefix = build_tower(layers.clone(), crate::mp::DEFAULT_BITS)?;
        gen_names.push(ls.var.clone());
    }
    Ok(prefix)
}

pub fn tower_from_json(json: &str) -> Result<NumberFieldTower, NumFieldError> {
    let spec: TowerSpec = serde_json::from_str(json)
        .map_err(|e| NumFieldError::Internal(format!("bad tower JSON: {e}")))?;
    tower_from_spec(&spec)
}
