//! Element expressions: `g1..gr`, `^` exponents (`g1^-1`, `g1^{-1}`),
//! juxtaposition or `*` for products, `[a,b]` commutators (`[a,b,c]` is
//! left-normed), parentheses, and `e` or `1` for the identity. Whitespace is
//! ignored.

use std::fmt;
use std::sync::Arc;

use super::{GroupElement, Presentation};
use crate::error::{Error, Result};
use crate::scalar::Exponent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Identity,
    /// 0-based generator index.
    Gen(usize),
    Pow(Box<Expr>, i64),
    Product(Vec<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
}

/// A word in the free generators: `(generator, exponent)` syllables with
/// nonzero exponents and no two adjacent syllables on the same generator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Expr::parse(s)?.to_word())
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn push(&mut self, generator: usize, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == generator {
                last.1 += exponent;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((generator, exponent));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &(g, e) in &other.0 {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (k, (g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", g + 1)?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Normal form of a word in the free generators.
pub fn collect<Z: Exponent>(pres: &Arc<Presentation<Z>>, word: &Word) -> Result<GroupElement<Z>> {
    if let Some(g) = word.max_generator() {
        if g >= pres.rank() {
            return Err(Error::InvalidArgument(format!(
                "word uses g{} but the rank is {}",
                g + 1,
                pres.rank()
            )));
        }
    }
    let mut exps = vec![Z::zero(); pres.len()];
    for &(g, e) in word.syllables() {
        pres.mul_syllable(&mut exps, g, Z::from_i64_exact(e));
    }
    GroupElement::from_exponents(pres, exps)
}

impl Expr {
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Evaluates with the group operations (multiply, power, commutator).
    pub fn eval<Z: Exponent>(&self, pres: &Arc<Presentation<Z>>) -> Result<GroupElement<Z>> {
        Ok(match self {
            Expr::Identity => GroupElement::identity(pres),
            Expr::Gen(i) => GroupElement::generator(pres, *i)?,
            Expr::Pow(base, n) => base.eval(pres)?.powi(*n),
            Expr::Product(items) => {
                let mut acc = GroupElement::identity(pres);
                for item in items {
                    acc = acc.multiply(&item.eval(pres)?)?;
                }
                acc
            }
            Expr::Commutator(a, b) => a.eval(pres)?.commutator(&b.eval(pres)?)?,
        })
    }

    /// Expands into a word in the free generators (commutators written out).
    pub fn to_word(&self) -> Word {
        match self {
            Expr::Identity => Word::new(),
            Expr::Gen(i) => {
                let mut w = Word::new();
                w.push(*i, 1);
                w
            }
            Expr::Pow(base, n) => {
                let w = base.to_word();
                if let [(g, e)] = w.syllables() {
                    let mut out = Word::new();
                    out.push(*g, e * n);
                    return out;
                }
                let unit = if *n < 0 { w.inverse() } else { w };
                (0..n.unsigned_abs()).fold(Word::new(), |acc, _| acc.concat(&unit))
            }
            Expr::Product(items) => items
                .iter()
                .fold(Word::new(), |acc, e| acc.concat(&e.to_word())),
            Expr::Commutator(a, b) => {
                let (a, b) = (a.to_word(), b.to_word());
                a.inverse().concat(&b.inverse()).concat(&a).concat(&b)
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "number out of range".into(),
            })
    }

    fn signed(&mut self) -> Result<i64> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self.number()?;
        Ok(if negative { -n } else { n })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => break,
                Some(b'*') if !items.is_empty() => {
                    self.pos += 1;
                    items.push(self.factor()?);
                }
                _ => items.push(self.factor()?),
            }
        }
        match items.len() {
            0 => Err(self.error("expected an expression")),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Expr::Product(items)),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let n = if self.eat(b'{') {
                let n = self.signed()?;
                self.expect(b'}')?;
                n
            } else if self.eat(b'(') {
                let n = self.signed()?;
                self.expect(b')')?;
                n
            } else {
                self.signed()?
            };
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'g') => {
                self.pos += 1;
                let n = self.number()?;
                if n < 1 {
                    return Err(self.error("generators are numbered from g1"));
                }
                Ok(Expr::Gen(n as usize - 1))
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(Expr::Identity)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::Identity)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.product()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut acc = self.product()?;
                self.expect(b',')?;
                loop {
                    let next = self.product()?;
                    acc = Expr::Commutator(Box::new(acc), Box::new(next));
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b']')?;
                Ok(acc)
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
