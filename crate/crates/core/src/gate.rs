//! Textual gate expressions.
//!
//! ```text
//! expr    := ["phase" "(" angle ")" "*"] factor ("*" factor)*
//! factor  := "I" | "X" | "Y" | "Z" | "H"
//!          | ("Rx" | "Ry" | "Rz") "(" angle ")"
//!          | "Rn" "(" angle ";" angle "," angle "," angle ")"
//!          | "V1" "(" angle "," angle ")" | "V2" "(" angle "," angle ")"
//!          | "W2" "(" angle "," angle "," angle ")"
//! angle   := sum of products of numbers, "pi", parentheses and unary minus
//! ```
//!
//! `A*B` is the matrix product, so `B` acts first. Angles are folded to
//! numbers while parsing and printed back in shortest round-trip form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pennyflip::{v1, v2, w2, ParamV1, ParamV2, ParamW2};
use crate::qlinalg::{named_gate, rotation, rx, ry, rz, NamedGate, Unitary2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Named(NamedGate),
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Rn { theta: f64, axis: [f64; 3] },
    V1 { a: f64, gamma: f64 },
    V2 { alpha: f64, gamma: f64 },
    W2 { alpha: f64, beta: f64, delta: f64 },
}

impl Factor {
    pub fn unitary(&self) -> Result<Unitary2> {
        Ok(match *self {
            Self::Named(g) => named_gate(g),
            Self::Rx(t) => rx(t),
            Self::Ry(t) => ry(t),
            Self::Rz(t) => rz(t),
            Self::Rn { theta, axis } => rotation(axis, theta)?,
            Self::V1 { a, gamma } => v1(&ParamV1::new(a, gamma)?),
            Self::V2 { alpha, gamma } => v2(&ParamV2 { alpha, gamma }),
            Self::W2 { alpha, beta, delta } => w2(&ParamW2 { alpha, beta, delta }),
        })
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Named(g) => write!(f, "{}", g.name()),
            Self::Rx(t) => write!(f, "Rx({t})"),
            Self::Ry(t) => write!(f, "Ry({t})"),
            Self::Rz(t) => write!(f, "Rz({t})"),
            Self::Rn {
                theta,
                axis: [x, y, z],
            } => write!(f, "Rn({theta}; {x}, {y}, {z})"),
            Self::V1 { a, gamma } => write!(f, "V1({a}, {gamma})"),
            Self::V2 { alpha, gamma } => write!(f, "V2({alpha}, {gamma})"),
            Self::W2 { alpha, beta, delta } => write!(f, "W2({alpha}, {beta}, {delta})"),
        }
    }
}

/// A parsed gate expression: an optional global phase and a product of
/// factors, leftmost applied last.
#[derive(Debug, Clone, PartialEq)]
pub struct GateExpr {
    pub phase: Option<f64>,
    pub factors: Vec<Factor>,
}

impl GateExpr {
    pub fn unitary(&self) -> Result<Unitary2> {
        let mut u = Unitary2::identity();
        for factor in &self.factors {
            u = u * factor.unitary()?;
        }
        Ok(match self.phase {
            Some(phi) => u.with_phase(phi),
            None => u,
        })
    }
}

impl fmt::Display for GateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(phi) = self.phase {
            write!(f, "phase({phi})*")?;
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for GateExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(expr)
    }
}

/// Parses and evaluates a gate expression.
pub fn parse_gate(s: &str) -> Result<Unitary2> {
    s.parse::<GateExpr>()?.unitary()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::GateSyntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let start = self.pos;
        self.pos += len;
        Some(self.src[start..start + len].to_string())
    }

    fn expr(&mut self) -> Result<GateExpr> {
        let mut phase = None;
        let mut factors = Vec::new();
        loop {
            let start = self.pos;
            let Some(name) = self.ident() else {
                return Err(self.error("expected a gate"));
            };
            if name == "phase" {
                if phase.is_some() || !factors.is_empty() {
                    self.pos = start;
                    self.skip_ws();
                    return Err(self.error("phase is only allowed as the first factor"));
                }
                let [phi] = self.args::<1>()?;
                phase = Some(phi);
                self.skip_ws();
                if !self.eat('*') {
                    return Err(self.error("expected '*' after phase"));
                }
                continue;
            }
            factors.push(self.factor(&name, start)?);
            if !self.eat('*') {
                return Ok(GateExpr { phase, factors });
            }
        }
    }

    fn factor(&mut self, name: &str, start: usize) -> Result<Factor> {
        let named = |g| Ok(Factor::Named(g));
        match name {
            "I" => named(NamedGate::I),
            "X" => named(NamedGate::X),
            "Y" => named(NamedGate::Y),
            "Z" => named(NamedGate::Z),
            "H" => named(NamedGate::H),
            "Rx" => Ok(Factor::Rx(self.args::<1>()?[0])),
            "Ry" => Ok(Factor::Ry(self.args::<1>()?[0])),
            "Rz" => Ok(Factor::Rz(self.args::<1>()?[0])),
            "Rn" => {
                self.expect('(')?;
                let theta = self.angle()?;
                self.expect(';')?;
                let x = self.angle()?;
                self.expect(',')?;
                let y = self.angle()?;
                self.expect(',')?;
                let z = self.angle()?;
                self.expect(')')?;
                Ok(Factor::Rn {
                    theta,
                    axis: [x, y, z],
                })
            }
            "V1" => {
                let [a, gamma] = self.args::<2>()?;
                Ok(Factor::V1 { a, gamma })
            }
            "V2" => {
                let [alpha, gamma] = self.args::<2>()?;
                Ok(Factor::V2 { alpha, gamma })
            }
            "W2" => {
                let [alpha, beta, delta] = self.args::<3>()?;
                Ok(Factor::W2 { alpha, beta, delta })
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                Err(self.error(format!("unknown gate {name:?}")))
            }
        }
    }

    fn args<const N: usize>(&mut self) -> Result<[f64; N]> {
        self.expect('(')?;
        let mut out = [0.0; N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *slot = self.angle()?;
        }
        self.expect(')')?;
        Ok(out)
    }

    fn angle(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let value = self.sum()?;
        if !value.is_finite() {
            self.pos = start;
            return Err(self.error("angle is not finite"));
        }
        Ok(value)
    }

    fn sum(&mut self) -> Result<f64> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc += self.product()?;
            } else if self.eat('-') {
                acc -= self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<f64> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc *= self.unary()?;
            } else if self.eat('/') {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<f64> {
        if self.eat('(') {
            let v = self.sum()?;
            self.expect(')')?;
            return Ok(v);
        }
        if self.eat('π') {
            return Ok(std::f64::consts::PI);
        }
        let start = self.pos;
        if let Some(name) = self.ident() {
            if name == "pi" {
                return Ok(std::f64::consts::PI);
            }
            self.pos = start;
            return Err(self.error(format!("unknown constant {name:?}")));
        }
        self.number()
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut len = 0;
        let digits = |b: &[u8], mut i: usize| {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        len = digits(bytes, len);
        if len < bytes.len() && bytes[len] == b'.' {
            len = digits(bytes, len + 1);
        }
        if len == 0 || bytes[..len] == *b"." {
            return Err(self.error("expected a number"));
        }
        if len < bytes.len() && (bytes[len] == b'e' || bytes[len] == b'E') {
            let mut k = len + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let end = digits(bytes, k);
            if end > k {
                len = end;
            }
        }
        let text = &self.rest()[..len];
        let value = text.parse::<f64>().map_err(|e| self.error(e.to_string()))?;
        self.pos += len;
        Ok(value)
    }
}
