//! Holomorphic expression trees in one variable `z`.
//!
//! Trees are built by the constructors on [`HoloExpr`] (which fold constant
//! arithmetic), parsed from text by [`parse_expr`], printed by
//! [`format_expr`], and evaluated to derivative jets by [`eval_jet`].
//! `format_expr` followed by `parse_expr` is the identity on canonical
//! trees, i.e. trees produced by the constructors here or by the parser.

use crate::jet::Jet3;
use crate::quad::{self, QuadError, QuadOptions};
use crate::Complex;
use std::fmt;

pub use crate::jet::Jet2;
pub use crate::parse::{parse_expr, ParseError, ParseErrorKind};

/// Expression tree for a holomorphic function of `z`.
///
/// `Pow` carries a real exponent and uses the principal branch, as does
/// `Sqrt` and `Log`.
#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Const(Complex),
    Var,
    Add(Box<HoloExpr>, Box<HoloExpr>),
    Sub(Box<HoloExpr>, Box<HoloExpr>),
    Mul(Box<HoloExpr>, Box<HoloExpr>),
    Div(Box<HoloExpr>, Box<HoloExpr>),
    Neg(Box<HoloExpr>),
    Pow(Box<HoloExpr>, f64),
    Exp(Box<HoloExpr>),
    Log(Box<HoloExpr>),
    Sin(Box<HoloExpr>),
    Cos(Box<HoloExpr>),
    Sinh(Box<HoloExpr>),
    Cosh(Box<HoloExpr>),
    Sqrt(Box<HoloExpr>),
}

use HoloExpr::*;

impl HoloExpr {
    pub fn constant(re: f64, im: f64) -> HoloExpr {
        Const(Complex::new(re, im))
    }

    pub fn var() -> HoloExpr {
        Var
    }

    /// Sum; folds `Const + Const` when the result is finite.
    pub fn add(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (Const(x), Const(y)) if finite(x + y) => Const(x + y),
            (a, b) => Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (Const(x), Const(y)) if finite(x - y) => Const(x - y),
            (a, b) => Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (Const(x), Const(y)) if finite(x * y) => Const(x * y),
            (a, b) => Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: HoloExpr, b: HoloExpr) -> HoloExpr {
        match (a, b) {
            (Const(x), Const(y)) if y != Complex::new(0.0, 0.0) && finite(x / y) => Const(x / y),
            (a, b) => Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: HoloExpr) -> HoloExpr {
        match a {
            Const(x) => Const(-x),
            a => Neg(Box::new(a)),
        }
    }

    pub fn pow(a: HoloExpr, p: f64) -> HoloExpr {
        Pow(Box::new(a), p)
    }

    pub fn exp(a: HoloExpr) -> HoloExpr {
        Exp(Box::new(a))
    }

    pub fn log(a: HoloExpr) -> HoloExpr {
        Log(Box::new(a))
    }

    pub fn sin(a: HoloExpr) -> HoloExpr {
        Sin(Box::new(a))
    }

    pub fn cos(a: HoloExpr) -> HoloExpr {
        Cos(Box::new(a))
    }

    pub fn sinh(a: HoloExpr) -> HoloExpr {
        Sinh(Box::new(a))
    }

    pub fn cosh(a: HoloExpr) -> HoloExpr {
        Cosh(Box::new(a))
    }

    pub fn sqrt(a: HoloExpr) -> HoloExpr {
        Sqrt(Box::new(a))
    }
}

fn finite(c: Complex) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Evaluation failure, tagged with the point where it happened.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind} at z = {at}")]
pub struct EvalError {
    pub at: Complex,
    pub kind: EvalErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogOfZero,
    NonFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalErrorKind::DivisionByZero => write!(f, "division by zero"),
            EvalErrorKind::LogOfZero => write!(f, "log of zero"),
            EvalErrorKind::NonFinite => write!(f, "non-finite value"),
        }
    }
}

/// Value and first two derivatives of the expression at `z`.
pub fn eval_jet(e: &HoloExpr, z: Complex) -> Result<Jet2, EvalError> {
    eval3(e, z).map(Jet3::truncate)
}

pub(crate) fn eval3(e: &HoloExpr, z: Complex) -> Result<Jet3, EvalError> {
    let fail = |kind| EvalError { at: z, kind };
    let j = match e {
        Const(c) => Jet3::constant(*c),
        Var => Jet3::var(z),
        Add(a, b) => eval3(a, z)?.add(eval3(b, z)?),
        Sub(a, b) => eval3(a, z)?.sub(eval3(b, z)?),
        Mul(a, b) => eval3(a, z)?.mul(eval3(b, z)?),
        Div(a, b) => {
            let den = eval3(b, z)?;
            if den.f == Complex::new(0.0, 0.0) {
                return Err(fail(EvalErrorKind::DivisionByZero));
            }
            eval3(a, z)?.div(den)
        }
        Neg(a) => eval3(a, z)?.neg(),
        Pow(a, p) => eval3(a, z)?.powf(*p),
        Exp(a) => eval3(a, z)?.exp(),
        Log(a) => {
            let arg = eval3(a, z)?;
            if arg.f == Complex::new(0.0, 0.0) {
                return Err(fail(EvalErrorKind::LogOfZero));
            }
            arg.log()
        }
        Sin(a) => eval3(a, z)?.sin(),
        Cos(a) => eval3(a, z)?.cos(),
        Sinh(a) => eval3(a, z)?.sinh(),
        Cosh(a) => eval3(a, z)?.cosh(),
        Sqrt(a) => eval3(a, z)?.sqrt(),
    };
    if j.is_finite() {
        Ok(j)
    } else {
        Err(fail(EvalErrorKind::NonFinite))
    }
}

/// Contour integral of the expression along the straight segment
/// `from -> to`, adaptive Gauss-Kronrod, default tolerance.
pub fn antiderivative(e: &HoloExpr, from: Complex, to: Complex) -> Result<Complex, QuadError> {
    antiderivative_path(e, &[from, to])
}

/// Contour integral along a polyline. At least two points are required.
pub fn antiderivative_path(e: &HoloExpr, path: &[Complex]) -> Result<Complex, QuadError> {
    quad::integrate_polyline(&mut |z| eval3(e, z).map(|j| j.f), path, &QuadOptions::default())
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Precedence levels used when printing: addition 1, multiplication 2,
/// unary minus 3, powers and `e^` 4, atoms 5. Constants report the level
/// of the syntax they print as.
fn prec(e: &HoloExpr) -> u8 {
    match e {
        Const(c) => const_prec(*c),
        Var | Log(_) | Sin(_) | Cos(_) | Sinh(_) | Cosh(_) | Sqrt(_) => 5,
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(_) => 3,
        Pow(..) | Exp(_) => 4,
    }
}

fn const_prec(c: Complex) -> u8 {
    if c.im == 0.0 {
        if c.re < 0.0 {
            3 // prints as a negated literal
        } else {
            5
        }
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            5 // "i"
        } else if c.im == -1.0 {
            3 // "-i"
        } else {
            2 // "2.5*i"
        }
    } else {
        5 // "(1+2*i)" carries its own parentheses
    }
}

fn fmt_const(c: Complex, out: &mut String) {
    use std::fmt::Write;
    if c.im == 0.0 {
        write!(out, "{}", c.re).unwrap();
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            out.push('i');
        } else if c.im == -1.0 {
            out.push_str("-i");
        } else {
            write!(out, "{}*i", c.im).unwrap();
        }
    } else {
        out.push('(');
        write!(out, "{}", c.re).unwrap();
        if c.im == 1.0 {
            out.push_str("+i");
        } else if c.im == -1.0 {
            out.push_str("-i");
        } else if c.im < 0.0 {
            write!(out, "-{}*i", -c.im).unwrap();
        } else {
            write!(out, "+{}*i", c.im).unwrap();
        }
        out.push(')');
    }
}

fn fmt_node(e: &HoloExpr, out: &mut String, min_prec: u8) {
    use std::fmt::Write;
    let wrap = prec(e) < min_prec;
    if wrap {
        out.push('(');
    }
    match e {
        Const(c) => fmt_const(*c, out),
        Var => out.push('z'),
        Add(a, b) => {
            fmt_node(a, out, 1);
            out.push('+');
            fmt_node(b, out, 2);
        }
        Sub(a, b) => {
            fmt_node(a, out, 1);
            out.push('-');
            fmt_node(b, out, 2);
        }
        Mul(a, b) => {
            fmt_node(a, out, 2);
            out.push('*');
            fmt_node(b, out, 3);
        }
        Div(a, b) => {
            fmt_node(a, out, 2);
            out.push('/');
            fmt_node(b, out, 3);
        }
        Neg(a) => {
            out.push('-');
            fmt_node(a, out, 3);
        }
        Pow(a, p) => {
            fmt_node(a, out, 5);
            write!(out, "^{}", p).unwrap();
        }
        Exp(a) => {
            out.push_str("e^");
            fmt_node(a, out, 3);
        }
        Log(a) => fmt_call("log", a, out),
        Sin(a) => fmt_call("sin", a, out),
        Cos(a) => fmt_call("cos", a, out),
        Sinh(a) => fmt_call("sinh", a, out),
        Cosh(a) => fmt_call("cosh", a, out),
        Sqrt(a) => fmt_call("sqrt", a, out),
    }
    if wrap {
        out.push(')');
    }
}

fn fmt_call(name: &str, arg: &HoloExpr, out: &mut String) {
    out.push_str(name);
    out.push('(');
    fmt_node(arg, out, 0);
    out.push(')');
}

/// Render the tree as parseable text; see the module docs for the
/// round-trip guarantee.
pub fn format_expr(e: &HoloExpr) -> String {
    let mut s = String::new();
    fmt_node(e, &mut s, 0);
    s
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn parse_folds_constant_products() {
        let e = parse_expr("(1+i)*z").unwrap();
        assert_eq!(e, Mul(Box::new(Const(c(1.0, 1.0))), Box::new(Var)));
    }

    #[test]
    fn parse_power_and_sugar() {
        assert_eq!(parse_expr("z^2").unwrap(), Pow(Box::new(Var), 2.0));
        assert_eq!(parse_expr("e^z").unwrap(), Exp(Box::new(Var)));
        assert_eq!(
            parse_expr("e^-z").unwrap(),
            Exp(Box::new(Neg(Box::new(Var))))
        );
        assert_eq!(parse_expr("z^-1.5").unwrap(), Pow(Box::new(Var), -1.5));
    }

    #[test]
    fn parse_function_with_and_without_parens() {
        let with = parse_expr("sin(z)").unwrap();
        let without = parse_expr("sin z").unwrap();
        assert_eq!(with, without);
        assert_eq!(with, Sin(Box::new(Var)));
    }

    #[test]
    fn scientific_notation_does_not_eat_the_exp_sugar() {
        assert_eq!(parse_expr("2e3").unwrap(), Const(c(2000.0, 0.0)));
        let e = parse_expr("2*e^z").unwrap();
        assert_eq!(e, Mul(Box::new(Const(c(2.0, 0.0))), Box::new(Exp(Box::new(Var)))));
    }

    #[test]
    fn parse_error_carries_byte_offset() {
        let err = parse_expr("z + ").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse_expr("z @ 2").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_expr("(z").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_expr("w").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.to_string().contains("at byte 0"));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_expr(&parse_expr("(1+i)*z").unwrap()), "(1+i)*z");
        assert_eq!(format_expr(&parse_expr("e^z").unwrap()), "e^z");
        assert_eq!(format_expr(&parse_expr("z^2-1/z").unwrap()), "z^2-1/z");
        assert_eq!(format_expr(&parse_expr("sin z*cosh(z)").unwrap()), "sin(z)*cosh(z)");
    }

    #[test]
    fn roundtrip_preserves_awkward_constants() {
        for text in [
            "-3*z",
            "z*(-2*i)",
            "(0.5-1.25*i)/z",
            "e^(2*i)",
            "(-2)^3.5",
            "z--3",
            "0.1*i*z",
        ] {
            let tree = parse_expr(text).unwrap();
            let printed = format_expr(&tree);
            let reparsed = parse_expr(&printed)
                .unwrap_or_else(|e| panic!("reparse of {printed:?}: {e}"));
            assert_eq!(reparsed, tree, "through {printed:?}");
        }
    }

    #[test]
    fn eval_square_jet() {
        let e = parse_expr("z^2").unwrap();
        let j = eval_jet(&e, c(1.0, 1.0)).unwrap();
        assert!((j.f - c(0.0, 2.0)).norm() < 1e-15);
        assert!((j.df - c(2.0, 2.0)).norm() < 1e-15);
        assert!((j.d2f - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_reciprocal_jet() {
        let e = parse_expr("1/z").unwrap();
        let j = eval_jet(&e, c(2.0, 0.0)).unwrap();
        assert!((j.f - c(0.5, 0.0)).norm() < 1e-15);
        assert!((j.df - c(-0.25, 0.0)).norm() < 1e-15);
        assert!((j.d2f - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_errors() {
        let e = parse_expr("1/z").unwrap();
        let err = eval_jet(&e, c(0.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);

        let e = parse_expr("log(z)").unwrap();
        assert_eq!(
            eval_jet(&e, c(0.0, 0.0)).unwrap_err().kind,
            EvalErrorKind::LogOfZero
        );

        // z^0.5 has a finite value at 0 but unbounded derivatives
        let e = parse_expr("z^0.5").unwrap();
        assert_eq!(
            eval_jet(&e, c(0.0, 0.0)).unwrap_err().kind,
            EvalErrorKind::NonFinite
        );
    }

    #[test]
    fn eval_sqrt_away_from_branch() {
        let j = eval_jet(&parse_expr("sqrt(z)").unwrap(), c(4.0, 0.0)).unwrap();
        assert!((j.f - c(2.0, 0.0)).norm() < 1e-15);
        assert!((j.df - c(0.25, 0.0)).norm() < 1e-15);
        assert!((j.d2f - c(-1.0 / 32.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn antiderivative_of_linear() {
        // int_0^{1+i} 2z dz = (1+i)^2 = 2i
        let e = parse_expr("2*z").unwrap();
        let v = antiderivative(&e, c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn antiderivative_of_exp() {
        let e = parse_expr("e^z").unwrap();
        let v = antiderivative(&e, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((v - c(1f64.exp() - 1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn path_independence_for_entire_integrand() {
        let e = parse_expr("e^z*sin(z)").unwrap();
        let a = c(0.0, 0.0);
        let b = c(1.0, 1.0);
        let direct = antiderivative(&e, a, b).unwrap();
        let dogleg = antiderivative_path(&e, &[a, c(1.0, -0.5), c(-0.3, 0.8), b]).unwrap();
        assert!((direct - dogleg).norm() < 1e-12);
    }

    #[test]
    fn constructors_fold_only_finite_results() {
        let big = HoloExpr::constant(1e308, 0.0);
        let folded = HoloExpr::mul(big.clone(), HoloExpr::constant(10.0, 0.0));
        assert!(matches!(folded, Mul(..)), "overflow must not fold");
        let ok = HoloExpr::mul(HoloExpr::constant(2.0, 0.0), HoloExpr::constant(3.0, 0.0));
        assert_eq!(ok, Const(c(6.0, 0.0)));
        assert_eq!(
            HoloExpr::div(HoloExpr::constant(1.0, 0.0), HoloExpr::constant(0.0, 0.0)),
            Div(Box::new(Const(c(1.0, 0.0))), Box::new(Const(c(0.0, 0.0))))
        );
    }
}
