//! Knot expressions such as `T(2,5) # -T(3,4)`.
//!
//! ```text
//! expr := term ('#' term)*
//! term := ['-'] 'T' '(' int ',' int ')' | ['-'] '(' expr ')'
//! ```

use std::fmt;

use super::{dual, staircase_complex, tensor, BifilteredComplex};
use crate::error::{Error, Result};
use crate::semigroup::torus_steps;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExpr {
    Torus { p: u64, q: u64 },
    Mirror(Box<KnotExpr>),
    Sum(Vec<KnotExpr>),
}

/// A torus knot factor `±T(p, q)` with `2 <= p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedTorus {
    pub p: u64,
    pub q: u64,
    pub mirrored: bool,
}

impl fmt::Display for SignedTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            f.write_str("-")?;
        }
        write!(f, "T({},{})", self.p, self.q)
    }
}

impl KnotExpr {
    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.bytes.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// Flattens into torus factors with mirrors pushed to the leaves and
    /// unknots dropped, sorted. Validates every `(p, q)`.
    pub fn factors(&self) -> Result<Vec<SignedTorus>> {
        let mut out = Vec::new();
        self.collect(false, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn collect(&self, mirrored: bool, out: &mut Vec<SignedTorus>) -> Result<()> {
        match self {
            KnotExpr::Torus { p, q } => {
                let steps = torus_steps(*p, *q)?;
                if !steps.is_empty() {
                    out.push(SignedTorus {
                        p: (*p).min(*q),
                        q: (*p).max(*q),
                        mirrored,
                    });
                }
            }
            KnotExpr::Mirror(inner) => inner.collect(!mirrored, out)?,
            KnotExpr::Sum(terms) => {
                for t in terms {
                    t.collect(mirrored, out)?;
                }
            }
        }
        Ok(())
    }

    /// Canonical text form: sorted factors joined by `" # "`, or `T(1,1)`
    /// for the unknot.
    pub fn canonical(&self) -> Result<String> {
        let factors = self.factors()?;
        if factors.is_empty() {
            return Ok("T(1,1)".into());
        }
        Ok(factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" # "))
    }

    /// Builds the complex by following the expression tree literally.
    pub fn to_complex(&self) -> Result<BifilteredComplex> {
        match self {
            KnotExpr::Torus { p, q } => Ok(staircase_complex(&torus_steps(*p, *q)?)),
            KnotExpr::Mirror(inner) => dual(&inner.to_complex()?),
            KnotExpr::Sum(terms) => {
                let mut acc = BifilteredComplex::trivial();
                for t in terms {
                    acc = tensor(&acc, &t.to_complex()?);
                }
                Ok(acc)
            }
        }
    }

    /// Builds the complex of the canonical factor list.
    pub fn to_canonical_complex(&self) -> Result<BifilteredComplex> {
        let mut acc = BifilteredComplex::trivial();
        for f in self.factors()? {
            let c = staircase_complex(&torus_steps(f.p, f.q)?);
            let c = if f.mirrored { dual(&c)? } else { c };
            acc = tensor(&acc, &c);
        }
        Ok(acc)
    }
}

pub fn parse_knot_expression(text: &str) -> Result<BifilteredComplex> {
    KnotExpr::parse(text)?.to_complex()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<KnotExpr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(b'#') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            KnotExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<KnotExpr> {
        let mirrored = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let inner = match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                self.expect(b'(')?;
                let p = self.int()?;
                self.expect(b',')?;
                let q = self.int()?;
                self.expect(b')')?;
                KnotExpr::Torus { p, q }
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                e
            }
            _ => return Err(self.error("expected 'T(' or '('")),
        };
        Ok(if mirrored {
            KnotExpr::Mirror(Box::new(inner))
        } else {
            inner
        })
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a positive integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(0) | Err(_) => Err(Error::Syntax {
                position: start,
                message: format!("invalid torus parameter {text}"),
            }),
            Ok(n) => Ok(n),
        }
    }
}
