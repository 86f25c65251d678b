//! Scalar support fields assembled from holomorphic data.
//!
//! Every surface in this crate is driven by a real field
//!
//! ```text
//! h = (<1, A> + <g, B>) / T,      T = 1 + |g|^2,
//! ```
//!
//! where `<a, b> = Re(a)Re(b) + Im(a)Im(b)` and `g, A, B` are holomorphic.
//! The constructors differ in where `B` comes from:
//!
//! * [`Field::h2`] takes `B` directly (the H2 family),
//! * [`Field::h1`] integrates `B = int A'g - Ag' + i c1 g' dz` so that `h`
//!   satisfies the Helmholtz equation (the H1 family),
//! * [`Field::prop_f`] uses `h = <1, f'(g)> - 2 <g, f(g)>/T`, an H1 member
//!   generated by a single function `f`,
//! * [`Field::radial_h1`] / [`Field::radial_h2`] are the rotationally
//!   symmetric families over `g = e^z`, with `h` a function of `u = Re z`.
//!
//! Evaluation returns jets: `h` with exact gradient and Hessian, and the
//! first two derivatives of `g`.

use crate::expr::{eval3, EvalError, HoloExpr, Jet2};
use crate::jet::Jet3;
use crate::quad::{integrate_polyline, QuadError, QuadOptions};
use crate::Complex;

pub use crate::realjet::RealJet2;

/// Which family the field belongs to; decides which verification suite
/// applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceClass {
    /// `eta` is minimal; `h` satisfies the Helmholtz equation.
    H1,
    /// `eta` is Laguerre-minimal; `h` satisfies the generalized Helmholtz
    /// equation.
    H2,
}

impl std::fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceClass::H1 => write!(f, "h1"),
            SurfaceClass::H2 => write!(f, "h2"),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    H2 {
        g: HoloExpr,
        a: HoloExpr,
        b: HoloExpr,
    },
    H1 {
        g: HoloExpr,
        a: HoloExpr,
        c1: f64,
        base: Complex,
        quad: QuadOptions,
    },
    PropF {
        f: HoloExpr,
        g: HoloExpr,
    },
    RadialH1 {
        a1: f64,
        a2: f64,
    },
    RadialH2 {
        a2: f64,
        a3: f64,
        c1: f64,
        c2: f64,
    },
}

/// A support field ready for evaluation.
#[derive(Debug, Clone)]
pub struct Field {
    kind: Kind,
}

/// Jets of the field and of `g` at one point.
#[derive(Debug, Clone, Copy)]
pub struct FieldEval {
    pub h: RealJet2,
    pub g: Jet2,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("quadrature for B failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("field value is not finite at z = {at}")]
    NonFinite { at: Complex },
}

impl Field {
    /// H2 field from explicit holomorphic `(g, A, B)`.
    pub fn h2(g: HoloExpr, a: HoloExpr, b: HoloExpr) -> Field {
        Field { kind: Kind::H2 { g, a, b } }
    }

    /// H1 field from `(g, A)`; `B` is integrated from the base point 0
    /// with `B(0) = 0`.
    pub fn h1(g: HoloExpr, a: HoloExpr, c1: f64) -> Field {
        Field::h1_based(g, a, c1, Complex::new(0.0, 0.0))
    }

    /// H1 field integrating from a caller-chosen base point; use this when
    /// the straight segment from 0 would cross a pole of the data (e.g.
    /// `g = 1/z`). Adding a constant to `B` does not leave the H1 family,
    /// so the normalization `B(base) = 0` is free.
    pub fn h1_based(g: HoloExpr, a: HoloExpr, c1: f64, base: Complex) -> Field {
        Field {
            kind: Kind::H1 { g, a, c1, base, quad: QuadOptions::default() },
        }
    }

    /// H1 field generated by a single holomorphic `f` through
    /// `h = <1, f'(g)> - 2 <g, f(g)>/T`.
    pub fn prop_f(f: HoloExpr, g: HoloExpr) -> Field {
        Field { kind: Kind::PropF { f, g } }
    }

    /// Rotational H1 field over `g = e^z`:
    /// `h(u) = a1 - (a2 + a1(u-1)) tanh u`.
    pub fn radial_h1(a1: f64, a2: f64) -> Field {
        Field { kind: Kind::RadialH1 { a1, a2 } }
    }

    /// Rotational H2 field over `g = e^z`:
    /// `h(u) = (a2 + c1 u + e^{2u}(a3 + c2 u)) / (1 + e^{2u})`.
    pub fn radial_h2(a2: f64, a3: f64, c1: f64, c2: f64) -> Field {
        Field { kind: Kind::RadialH2 { a2, a3, c1, c2 } }
    }

    pub fn class(&self) -> SurfaceClass {
        match self.kind {
            Kind::H2 { .. } | Kind::RadialH2 { .. } => SurfaceClass::H2,
            Kind::H1 { .. } | Kind::PropF { .. } | Kind::RadialH1 { .. } => SurfaceClass::H1,
        }
    }

    pub fn eval(&self, z: Complex) -> Result<FieldEval, FieldError> {
        let out = match &self.kind {
            Kind::H2 { g, a, b } => {
                let gj = eval3(g, z)?;
                let aj = eval3(a, z)?;
                let bj = eval3(b, z)?;
                FieldEval { h: assemble_h(gj, aj, bj), g: gj.truncate() }
            }
            Kind::H1 { g, a, c1, base, quad } => {
                let gj = eval3(g, z)?;
                let aj = eval3(a, z)?;
                let ic1 = Complex::new(0.0, *c1);
                let bval = integrate_polyline(
                    &mut |w| {
                        let gw = eval3(g, w)?;
                        let aw = eval3(a, w)?;
                        Ok(aw.d1 * gw.f - aw.f * gw.d1 + ic1 * gw.d1)
                    },
                    &[*base, z],
                    quad,
                )?;
                let bj = Jet3 {
                    f: bval,
                    d1: aj.d1 * gj.f - aj.f * gj.d1 + ic1 * gj.d1,
                    d2: aj.d2 * gj.f - aj.f * gj.d2 + ic1 * gj.d2,
                    d3: aj.d3 * gj.f + aj.d2 * gj.d1 - aj.d1 * gj.d2 - aj.f * gj.d3 + ic1 * gj.d3,
                };
                FieldEval { h: assemble_h(gj, aj, bj), g: gj.truncate() }
            }
            Kind::PropF { f, g } => {
                let gj = eval3(g, z)?;
                let fw = eval3(f, gj.f).map_err(|e| EvalError { at: z, kind: e.kind })?;
                let fog = compose2([fw.f, fw.d1, fw.d2], gj);
                let fpog = compose2([fw.d1, fw.d2, fw.d3], gj);
                let rg = RealJet2::from_re(gj);
                let ig = RealJet2::from_im(gj);
                let t = RealJet2::constant(1.0) + rg * rg + ig * ig;
                let pair = rg * RealJet2::from_re(fog) + ig * RealJet2::from_im(fog);
                let h = RealJet2::from_re(fpog) - pair.scale(2.0) / t;
                FieldEval { h, g: gj.truncate() }
            }
            Kind::RadialH1 { a1, a2 } => {
                let u = z.re;
                let t0 = u.tanh();
                let t1 = 1.0 - t0 * t0;
                let t2 = -2.0 * t0 * t1;
                let q0 = a2 + a1 * (u - 1.0);
                let h = radial_jet(
                    a1 - q0 * t0,
                    -(a1 * t0 + q0 * t1),
                    -(2.0 * a1 * t1 + q0 * t2),
                );
                FieldEval { h, g: exp_jet2(z) }
            }
            Kind::RadialH2 { a2, a3, c1, c2 } => {
                let u = z.re;
                let e = (2.0 * u).exp();
                // triples (f, f', f'') in u
                let num = (
                    a2 + c1 * u + e * (a3 + c2 * u),
                    c1 + 2.0 * e * (a3 + c2 * u) + e * c2,
                    4.0 * e * (a3 + c2 * u) + 4.0 * e * c2,
                );
                let den = (1.0 + e, 2.0 * e, 4.0 * e);
                let q0 = num.0 / den.0;
                let q1 = (num.1 - q0 * den.1) / den.0;
                let q2 = (num.2 - 2.0 * q1 * den.1 - q0 * den.2) / den.0;
                FieldEval { h: radial_jet(q0, q1, q2), g: exp_jet2(z) }
            }
        };
        if out.h.is_finite() && out.g.is_finite() {
            Ok(out)
        } else {
            Err(FieldError::NonFinite { at: z })
        }
    }
}

/// h = (Re A + <g, B>)/T with exact jets.
fn assemble_h(gj: Jet3, aj: Jet3, bj: Jet3) -> RealJet2 {
    let rg = RealJet2::from_re(gj);
    let ig = RealJet2::from_im(gj);
    let t = RealJet2::constant(1.0) + rg * rg + ig * ig;
    let num = RealJet2::from_re(aj) + rg * RealJet2::from_re(bj) + ig * RealJet2::from_im(bj);
    num / t
}

/// (outer value, outer', outer'') at `inner.f`, chained through `inner`.
/// The third order of the result is not defined and set to zero; real-part
/// extraction only reads orders 0..2.
fn compose2(outer: [Complex; 3], inner: Jet3) -> Jet3 {
    Jet3 {
        f: outer[0],
        d1: outer[1] * inner.d1,
        d2: outer[2] * inner.d1 * inner.d1 + outer[1] * inner.d2,
        d3: Complex::new(0.0, 0.0),
    }
}

fn radial_jet(h: f64, hu: f64, huu: f64) -> RealJet2 {
    RealJet2 { val: h, du: hu, dv: 0.0, duu: huu, duv: 0.0, dvv: 0.0 }
}

fn exp_jet2(z: Complex) -> Jet2 {
    let e = z.exp();
    Jet2 { f: e, df: e, d2f: e }
}

/// Named bundle of holomorphic data as it arrives from a config or the
/// command line; [`HoloData::build`] validates the combination and
/// produces the [`Field`].
#[derive(Debug, Clone)]
pub struct HoloData {
    pub class: SurfaceClass,
    pub g: Option<HoloExpr>,
    pub a: Option<HoloExpr>,
    pub b: Option<HoloExpr>,
    pub f: Option<HoloExpr>,
    /// Envelope offset constant; must be nonzero.
    pub c: f64,
    /// Imaginary integration constant of the H1 construction.
    pub c1: f64,
    /// Base point for the H1 quadrature.
    pub base_point: Complex,
}

impl HoloData {
    pub fn new(class: SurfaceClass) -> HoloData {
        HoloData {
            class,
            g: None,
            a: None,
            b: None,
            f: None,
            c: 1.0,
            c1: 0.0,
            base_point: Complex::new(0.0, 0.0),
        }
    }

    pub fn build(&self) -> Result<Field, BuildError> {
        let missing = |what| BuildError::Missing { class: self.class, what };
        let conflicting = |what| BuildError::Conflicting { class: self.class, what };
        if self.c == 0.0 || !self.c.is_finite() {
            return Err(BuildError::BadConstant);
        }
        match self.class {
            SurfaceClass::H2 => {
                if self.f.is_some() {
                    return Err(conflicting("f"));
                }
                let g = self.g.clone().ok_or_else(|| missing("g"))?;
                let a = self.a.clone().ok_or_else(|| missing("A"))?;
                let b = self.b.clone().ok_or_else(|| missing("B"))?;
                Ok(Field::h2(g, a, b))
            }
            SurfaceClass::H1 => {
                if self.b.is_some() {
                    return Err(conflicting("B"));
                }
                let g = self.g.clone().ok_or_else(|| missing("g"))?;
                if let Some(f) = self.f.clone() {
                    if self.a.is_some() {
                        return Err(conflicting("A together with f"));
                    }
                    Ok(Field::prop_f(f, g))
                } else {
                    let a = self.a.clone().ok_or_else(|| missing("A"))?;
                    Ok(Field::h1_based(g, a, self.c1, self.base_point))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("class {class} requires {what}")]
    Missing { class: SurfaceClass, what: &'static str },
    #[error("{what} does not apply to class {class}")]
    Conflicting { class: SurfaceClass, what: &'static str },
    #[error("the offset constant c must be finite and nonzero")]
    BadConstant,
}
