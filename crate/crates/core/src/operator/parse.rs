// Recursive-descent reader for operator text in `z` and `Θ`.
//
// Values are polynomials in z with coefficients in ℚ[Θ], multiplied
// commutatively. That is exact for text that writes every z to the left of
// Θ, which is how printed operators are laid out.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{rat_int, Poly, Rat};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Z,
    Theta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Num(s.parse().unwrap()));
            }
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
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            'z' => {
                out.push(Token::Z);
                i += 1;
            }
            'T' | 'Θ' => {
                out.push(Token::Theta);
                i += 1;
            }
            't' if chars[i..].iter().take(5).collect::<String>() == "theta" => {
                out.push(Token::Theta);
                i += 5;
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` in operator text"
                )))
            }
        }
    }
    Ok(out)
}

/// Polynomial in z over ℚ[Θ]: index = power of z.
type Value = Vec<Poly>;

fn trim(mut v: Value) -> Value {
    while v.len() > 1 && v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

fn add(a: &Value, b: &Value, sign: bool) -> Value {
    let n = a.len().max(b.len());
    let zero = Poly::zero();
    trim(
        (0..n)
            .map(|k| {
                let x = a.get(k).unwrap_or(&zero);
                let y = b.get(k).unwrap_or(&zero);
                if sign {
                    x + y
                } else {
                    x - y
                }
            })
            .collect(),
    )
}

fn mul(a: &Value, b: &Value) -> Value {
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn constant_of(v: &Value) -> Option<Rat> {
    if v.len() == 1 && v[0].degree().unwrap_or(0) == 0 {
        Some(v[0].coeff(0))
    } else {
        None
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = vec![Poly::zero()];
        let mut sign = true;
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            sign = false;
        } else if let Some(Token::Plus) = self.peek() {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = add(&acc, &t, sign);
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    sign = true;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    sign = false;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    let c = constant_of(&rhs)
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| Error::Parse("can only divide by a nonzero constant".into()))?;
                    acc = mul(&acc, &vec![Poly::constant(c.recip())]);
                }
                Some(Token::Num(_)) | Some(Token::Z) | Some(Token::Theta) | Some(Token::Open) => {
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let exp = match self.next() {
                Some(Token::Num(n)) => u32::try_from(n)
                    .map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected an integer exponent after `^`".into())),
            };
            let mut acc = vec![Poly::one()];
            for _ in 0..exp {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        match self.next() {
            Some(Token::Num(n)) => Ok(vec![Poly::constant(rat_int(n))]),
            Some(Token::Z) => Ok(vec![Poly::zero(), Poly::one()]),
            Some(Token::Theta) => Ok(vec![Poly::var()]),
            Some(Token::Open) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(v),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(Token::Minus) => {
                let v = self.power()?;
                Ok(mul(&vec![Poly::constant(-Rat::one())], &v))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Coefficients of `z^0, z^1, ...` as polynomials in `Θ`.
pub(super) fn parse_operator(text: &str) -> Result<Vec<Poly>> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty operator text".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {} in `{text}`",
            p.pos
        )));
    }
    Ok(v)
}
