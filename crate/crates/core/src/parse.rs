//! Text grammar for polynomials: `+ - * ^`, parentheses, integer literals,
//! variables of the ring and identifiers bound to field elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```

use std::collections::HashMap;

use thiserror::Error;

use crate::gf::FieldElement;
use crate::poly::{MultiPoly, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    SyntaxError { pos: usize, message: String },
    #[error("unbound identifier {0:?}")]
    UnboundIdentifier(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, pos));
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Int(chars[start..i].iter().map(|x| x.1).collect()), pos));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().map(|x| x.1).collect()), pos));
            } else {
                return Err(ParseError::SyntaxError {
                    pos,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    ring: &'a Ring,
    bindings: &'a HashMap<String, FieldElement>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError {
            pos: self.pos(),
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                -self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(digits) => match digits.parse::<u64>() {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => {
                    self.at -= 1;
                    self.error("exponent too large")
                }
            },
            Tok::End => self.error("expected an exponent"),
            _ => {
                self.at -= 1;
                self.error("expected a nonnegative integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let field = self.ring.field();
        match self.peek().clone() {
            Tok::Int(digits) => {
                self.bump();
                let p = field.characteristic() as u64;
                let value = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(MultiPoly::constant(self.ring, field.from_int(value as i64)))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(v) = self.bindings.get(&name) {
                    return Ok(MultiPoly::constant(self.ring, v.clone()));
                }
                match self.ring.var_index(&name) {
                    Some(i) => Ok(MultiPoly::var(self.ring, i)),
                    None => Err(ParseError::UnboundIdentifier(name)),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a number, identifier or '('"),
        }
    }
}

/// Parses `text` in `ring`, resolving identifiers first against `bindings`
/// and then against the ring's variables.
pub fn parse_poly(
    text: &str,
    ring: &Ring,
    bindings: &HashMap<String, FieldElement>,
) -> Result<MultiPoly, ParseError> {
    let lexer = Lexer::new(text)?;
    let mut parser = Parser {
        toks: lexer.toks,
        at: 0,
        ring,
        bindings,
    };
    let out = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.error("unexpected trailing input");
    }
    Ok(out)
}

/// As [`parse_poly`], rejecting inhomogeneous results.
pub fn parse_homogeneous(
    text: &str,
    ring: &Ring,
    bindings: &HashMap<String, FieldElement>,
) -> Result<MultiPoly, ParseError> {
    let f = parse_poly(text, ring, bindings)?;
    if !f.is_homogeneous() {
        return Err(ParseError::NotHomogeneous);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::poly::PolyRing;

    #[test]
    fn sextic_and_quintic() {
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        let r = PolyRing::plane(&f4);
        let b = HashMap::from([("lambda".to_string(), f4.generator())]);
        let f = parse_homogeneous("x^3*y^3 + x^3*z^3 + y^3*z^3 + lambda*z^6", &r, &b).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.homogeneous_degree(), Some(6));
        assert_eq!(f.to_string(), "x^3*y^3 + x^3*z^3 + y^3*z^3 + (t)*z^6");

        let f7 = FieldSpec::prime(7).unwrap();
        let r = PolyRing::plane(&f7);
        let b = HashMap::from([("A".to_string(), f7.from_int(2)), ("B".to_string(), f7.from_int(3))]);
        let f = parse_homogeneous("x^5 + y^3*z^2 + A*x*y*z^3 + B*x*z^4", &r, &b).unwrap();
        assert_eq!(f.to_string(), "x^5 + 2*x*y*z^3 + 3*x*z^4 + y^3*z^2");
    }

    #[test]
    fn errors() {
        let f2 = FieldSpec::prime(2).unwrap();
        let r = PolyRing::plane(&f2);
        let none = HashMap::new();
        assert!(matches!(parse_poly("x + ", &r, &none), Err(ParseError::SyntaxError { pos: 4, .. })));
        assert_eq!(
            parse_poly("x + mu", &r, &none).unwrap_err(),
            ParseError::UnboundIdentifier("mu".into())
        );
        assert_eq!(parse_homogeneous("x^2 + y^3", &r, &none).unwrap_err(), ParseError::NotHomogeneous);
        assert!(matches!(parse_poly("(x + y", &r, &none), Err(ParseError::SyntaxError { pos: 6, .. })));
        assert!(matches!(parse_poly("x $ y", &r, &none), Err(ParseError::SyntaxError { pos: 2, .. })));
    }

    #[test]
    fn indexed_names_and_nesting() {
        let f3 = FieldSpec::prime(3).unwrap();
        let r = PolyRing::indexed(&f3, 4);
        let none = HashMap::new();
        let a = parse_poly("((x0 + x3)^3)", &r, &none).unwrap();
        let b = parse_poly("x0^3 + x3^3", &r, &none).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("-x1 - -x1", &r, &none).unwrap(), MultiPoly::zero(&r));
        assert_eq!(parse_poly("10*x2", &r, &none).unwrap(), parse_poly("x2", &r, &none).unwrap());
        // aliases only exist in three variables
        assert!(parse_poly("y", &r, &none).is_err());
    }
}
