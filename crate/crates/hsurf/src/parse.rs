//! Text form of holomorphic expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | postfix
//! postfix := primary ('^' real)*            real exponent, may be negative
//! primary := '(' expr ')' | number | 'z' | 'i'
//!          | 'e' '^' unary                  exponential sugar
//!          | func '(' expr ')'              func in {exp, log, sin, cos, sinh, cosh, sqrt}
//!          | func unary                     parenthesis-free sugar
//! ```
//!
//! A parenthesized application is atomic, so `sin(z)^2` is `(sin(z))^2`;
//! without parentheses the argument absorbs the exponent: `sin z^2` is
//! `sin(z^2)`.
//!
//! Constant arithmetic folds at parse time through the smart constructors,
//! so `(1+i)*z` parses as `Mul(Const(1+i), Var)`.

use crate::expr::HoloExpr;
use crate::Complex;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEnd,
    UnexpectedChar(char),
    TrailingInput(char),
    ExpectedClosingParen,
    ExpectedExponent,
    ExpectedCaretAfterE,
    UnknownIdentifier(String),
    NumberOverflow,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            UnexpectedEnd => write!(f, "unexpected end of input"),
            UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            TrailingInput(c) => write!(f, "trailing input starting at {c:?}"),
            ExpectedClosingParen => write!(f, "expected ')'"),
            ExpectedExponent => write!(f, "expected a real exponent after '^'"),
            ExpectedCaretAfterE => write!(f, "'e' must be followed by '^' (exponential)"),
            UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}"),
            NumberOverflow => write!(f, "number does not fit in a double"),
        }
    }
}

/// Parse expression text into a canonical tree.
pub fn parse_expr(src: &str) -> Result<HoloExpr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err_here(ParseErrorKind::TrailingInput(p.peek_char())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        // expressions are ASCII in practice, but offsets are byte-based so
        // recover the full char for the message
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<HoloExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = HoloExpr::add(lhs, rhs);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = HoloExpr::sub(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<HoloExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = HoloExpr::mul(lhs, rhs);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                lhs = HoloExpr::div(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<HoloExpr, ParseError> {
        self.skip_ws();
        if self.eat(b'-') {
            return Ok(HoloExpr::neg(self.unary()?));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<HoloExpr, ParseError> {
        let mut e = self.primary()?;
        loop {
            self.skip_ws();
            if self.eat(b'^') {
                let p = self.exponent()?;
                e = HoloExpr::pow(e, p);
            } else {
                return Ok(e);
            }
        }
    }

    fn exponent(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        match self.peek() {
            Some(b'0'..=b'9') => {
                let x = self.number()?;
                Ok(if neg { -x } else { x })
            }
            _ => Err(self.err_here(ParseErrorKind::ExpectedExponent)),
        }
    }

    fn primary(&mut self) -> Result<HoloExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err_here(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err_here(ParseErrorKind::ExpectedClosingParen));
                }
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let x = self.number()?;
                Ok(HoloExpr::Const(Complex::new(x, 0.0)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.err_here(ParseErrorKind::UnexpectedChar(self.peek_char()))),
        }
    }

    fn identifier(&mut self) -> Result<HoloExpr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match name {
            "z" => Ok(HoloExpr::Var),
            "i" => Ok(HoloExpr::Const(Complex::new(0.0, 1.0))),
            "e" => {
                self.skip_ws();
                if !self.eat(b'^') {
                    return Err(self.err_here(ParseErrorKind::ExpectedCaretAfterE));
                }
                Ok(HoloExpr::exp(self.unary()?))
            }
            "exp" => Ok(HoloExpr::exp(self.func_arg()?)),
            "log" => Ok(HoloExpr::log(self.func_arg()?)),
            "sin" => Ok(HoloExpr::sin(self.func_arg()?)),
            "cos" => Ok(HoloExpr::cos(self.func_arg()?)),
            "sinh" => Ok(HoloExpr::sinh(self.func_arg()?)),
            "cosh" => Ok(HoloExpr::cosh(self.func_arg()?)),
            "sqrt" => Ok(HoloExpr::sqrt(self.func_arg()?)),
            _ => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
            }),
        }
    }

    /// Function argument: a parenthesized expression is consumed whole, so a
    /// trailing exponent stays outside the call. Otherwise fall back to a
    /// unary operand (`sin z`, `sin -z`).
    fn func_arg(&mut self) -> Result<HoloExpr, ParseError> {
        self.skip_ws();
        if self.eat(b'(') {
            let e = self.expr()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(self.err_here(ParseErrorKind::ExpectedClosingParen));
            }
            Ok(e)
        } else {
            self.unary()
        }
    }

    /// Unsigned decimal literal with optional fraction and scientific part.
    /// `2e3` is scientific notation; in `2e^` the `e` is not followed by
    /// digits, so the scan backtracks and the literal is plain `2`.
    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let x: f64 = text
            .parse()
            .map_err(|_| ParseError { offset: start, kind: ParseErrorKind::NumberOverflow })?;
        if !x.is_finite() {
            return Err(ParseError { offset: start, kind: ParseErrorKind::NumberOverflow });
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_is_free() {
        assert_eq!(parse_expr(" ( 1 + i ) * z ").unwrap(), parse_expr("(1+i)*z").unwrap());
    }

    #[test]
    fn left_associativity() {
        // a-b-c = (a-b)-c: evaluate at fixed z to distinguish
        let e = parse_expr("z-1-2").unwrap();
        let v = crate::expr::eval_jet(&e, Complex::new(10.0, 0.0)).unwrap().f;
        assert_eq!(v.re, 7.0);
    }

    #[test]
    fn nested_functions() {
        let e = parse_expr("sin(cos z)").unwrap();
        assert_eq!(
            e,
            HoloExpr::sin(HoloExpr::cos(HoloExpr::Var))
        );
    }

    #[test]
    fn exponent_outside_parenthesized_call() {
        let e = parse_expr("log(z)^2").unwrap();
        assert_eq!(e, HoloExpr::pow(HoloExpr::log(HoloExpr::Var), 2.0));
    }

    #[test]
    fn exponent_inside_bare_argument() {
        let e = parse_expr("sin z^2").unwrap();
        assert_eq!(e, HoloExpr::sin(HoloExpr::pow(HoloExpr::Var, 2.0)));
    }

    #[test]
    fn exponent_must_be_numeric() {
        let err = parse_expr("z^z").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ExpectedExponent);
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn bare_e_is_rejected() {
        let err = parse_expr("e+1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ExpectedCaretAfterE);
    }

    #[test]
    fn huge_literal_rejected() {
        let err = parse_expr("1e999").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NumberOverflow);
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn unknown_identifier_offset_points_at_start() {
        let err = parse_expr("1+zeta").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("zeta".into()));
        assert_eq!(err.offset, 2);
    }
}
