//! Recursive-descent parser for polynomial expressions such as
//! `(1 - x1)*(x2 + y1 - x2*y1)^2 - 3*Y1_2`.

use num_bigint::BigInt;

use super::{Alphabet, Polynomial, PolyError, Var};

pub(super) fn parse(input: &str) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, what: &str) -> PolyError {
        PolyError::Parse(format!("{what} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.digits()?;
            let e: u32 = e.parse().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Polynomial::term(n, super::Monomial::one()))
            }
            Some(c @ ('x' | 'y' | 'z')) => {
                self.pos += 1;
                let alphabet = Alphabet::parse(&c.to_string())?;
                let idx = self.index()?;
                Ok(Polynomial::var(Var::new(alphabet, idx)))
            }
            Some('Y') => {
                self.pos += 1;
                let a: u16 = self
                    .digits()?
                    .parse()
                    .map_err(|_| self.error("bad alphabet number"))?;
                if a == 0 || !self.eat('_') {
                    return Err(self.error("expected Y<k>_<index>"));
                }
                let idx = self.index()?;
                Ok(Polynomial::var(Var::new(Alphabet::Aux(a), idx)))
            }
            _ => Err(self.error("unexpected character")),
        }
    }

    fn index(&mut self) -> Result<u32, PolyError> {
        let i: u32 = self
            .digits()?
            .parse()
            .map_err(|_| self.error("bad index"))?;
        if i == 0 || i >= (1 << 24) {
            return Err(self.error("variable index out of range"));
        }
        Ok(i)
    }
}
