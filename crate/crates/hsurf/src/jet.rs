//! Complex derivative jets.
//!
//! The public surface of the crate exposes jets to second order ([`Jet2`]),
//! which is what the geometry needs. Internally one more order is carried:
//! a field of the form `<1, f'(g)> - 2<g, f(g)>/T` needs the second
//! derivative of `f'(g)`, hence the third derivative of `f`.

use crate::Complex;

/// Value and first two complex derivatives of a holomorphic function at a
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub f: Complex,
    pub df: Complex,
    pub d2f: Complex,
}

impl Jet2 {
    pub fn is_finite(&self) -> bool {
        finite(self.f) && finite(self.df) && finite(self.d2f)
    }
}

fn finite(c: Complex) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Order-3 jet, crate internal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet3 {
    pub f: Complex,
    pub d1: Complex,
    pub d2: Complex,
    pub d3: Complex,
}

const ZERO: Complex = Complex::new(0.0, 0.0);

impl Jet3 {
    pub fn constant(c: Complex) -> Jet3 {
        Jet3 { f: c, d1: ZERO, d2: ZERO, d3: ZERO }
    }

    pub fn var(z: Complex) -> Jet3 {
        Jet3 { f: z, d1: Complex::new(1.0, 0.0), d2: ZERO, d3: ZERO }
    }

    pub fn truncate(self) -> Jet2 {
        Jet2 { f: self.f, df: self.d1, d2f: self.d2 }
    }

    pub fn is_finite(&self) -> bool {
        finite(self.f) && finite(self.d1) && finite(self.d2) && finite(self.d3)
    }

    pub fn add(self, o: Jet3) -> Jet3 {
        Jet3 { f: self.f + o.f, d1: self.d1 + o.d1, d2: self.d2 + o.d2, d3: self.d3 + o.d3 }
    }

    pub fn sub(self, o: Jet3) -> Jet3 {
        Jet3 { f: self.f - o.f, d1: self.d1 - o.d1, d2: self.d2 - o.d2, d3: self.d3 - o.d3 }
    }

    pub fn neg(self) -> Jet3 {
        Jet3 { f: -self.f, d1: -self.d1, d2: -self.d2, d3: -self.d3 }
    }

    pub fn mul(self, o: Jet3) -> Jet3 {
        Jet3 {
            f: self.f * o.f,
            d1: self.d1 * o.f + self.f * o.d1,
            d2: self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
            d3: self.d3 * o.f + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.f * o.d3,
        }
    }

    /// Reciprocal jet from q*g = 1 differentiated repeatedly. Division by
    /// an exact zero yields non-finite components the evaluator rejects.
    pub fn recip(self) -> Jet3 {
        let q0 = Complex::new(1.0, 0.0) / self.f;
        let q1 = -q0 * self.d1 / self.f;
        let q2 = -(2.0 * q1 * self.d1 + q0 * self.d2) / self.f;
        let q3 = -(3.0 * q2 * self.d1 + 3.0 * q1 * self.d2 + q0 * self.d3) / self.f;
        Jet3 { f: q0, d1: q1, d2: q2, d3: q3 }
    }

    pub fn div(self, o: Jet3) -> Jet3 {
        self.mul(o.recip())
    }

    /// Chain rule for an outer scalar function given as its own derivative
    /// table `phi = [w, w', w'', w''']` evaluated at `self.f`.
    pub fn compose(self, phi: [Complex; 4]) -> Jet3 {
        let [p0, p1, p2, p3] = phi;
        let (f1, f2, f3) = (self.d1, self.d2, self.d3);
        Jet3 {
            f: p0,
            d1: p1 * f1,
            d2: p2 * f1 * f1 + p1 * f2,
            d3: p3 * f1 * f1 * f1 + 3.0 * p2 * f1 * f2 + p1 * f3,
        }
    }

    pub fn exp(self) -> Jet3 {
        let e = self.f.exp();
        self.compose([e, e, e, e])
    }

    pub fn log(self) -> Jet3 {
        let w = self.f;
        let w1 = w.inv();
        self.compose([w.ln(), w1, -w1 * w1, 2.0 * w1 * w1 * w1])
    }

    pub fn sin(self) -> Jet3 {
        let (s, c) = (self.f.sin(), self.f.cos());
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Jet3 {
        let (s, c) = (self.f.sin(), self.f.cos());
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(self) -> Jet3 {
        let (s, c) = (self.f.sinh(), self.f.cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(self) -> Jet3 {
        let (s, c) = (self.f.sinh(), self.f.cosh());
        self.compose([c, s, c, s])
    }

    pub fn sqrt(self) -> Jet3 {
        self.powf(0.5)
    }

    /// Principal-branch real power. Falling-factorial coefficients that
    /// vanish exactly (integer exponents) short-circuit so that e.g.
    /// d^3/dz^3 z^2 stays 0 even at z = 0.
    pub fn powf(self, p: f64) -> Jet3 {
        let w = self.f;
        let term = |k: u32| -> Complex {
            let mut coef = 1.0;
            for j in 0..k {
                coef *= p - j as f64;
            }
            if coef == 0.0 {
                ZERO
            } else {
                coef * w.powf(p - k as f64)
            }
        };
        self.compose([term(0), term(1), term(2), term(3)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn square_at_one_plus_i() {
        let z = Jet3::var(c(1.0, 1.0));
        let j = z.mul(z);
        assert_eq!(j.f, c(0.0, 2.0));
        assert_eq!(j.d1, c(2.0, 2.0));
        assert_eq!(j.d2, c(2.0, 0.0));
        assert_eq!(j.d3, ZERO);
    }

    #[test]
    fn reciprocal_derivatives() {
        // 1/z at z=2: (0.5, -0.25, 0.25, -0.375)
        let j = Jet3::var(c(2.0, 0.0)).recip();
        assert!((j.f - c(0.5, 0.0)).norm() < 1e-15);
        assert!((j.d1 - c(-0.25, 0.0)).norm() < 1e-15);
        assert!((j.d2 - c(0.25, 0.0)).norm() < 1e-15);
        assert!((j.d3 - c(-0.375, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integer_power_at_origin_has_no_spurious_nan() {
        let j = Jet3::var(ZERO).powf(2.0);
        assert_eq!(j.f, ZERO);
        assert_eq!(j.d1, ZERO);
        assert_eq!(j.d2, c(2.0, 0.0));
        assert_eq!(j.d3, ZERO);
        assert!(j.is_finite());
    }

    #[test]
    fn exp_jet_all_equal_at_zero() {
        let j = Jet3::var(ZERO).exp();
        for v in [j.f, j.d1, j.d2, j.d3] {
            assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn sin_jet_at_i() {
        let j = Jet3::var(c(0.0, 1.0)).sin();
        let sh = 1f64.sinh();
        let ch = 1f64.cosh();
        assert!((j.f - c(0.0, sh)).norm() < 1e-15);
        assert!((j.d1 - c(ch, 0.0)).norm() < 1e-15);
        assert!((j.d2 - c(0.0, -sh)).norm() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_not_finite() {
        let j = Jet3::constant(c(1.0, 0.0)).div(Jet3::constant(ZERO));
        assert!(!j.is_finite());
    }

    #[test]
    fn composition_third_order_against_closed_form() {
        // exp(z^2) at z = 0.7: f''' = (12z + 8z^3) e^{z^2}
        let z0 = 0.7;
        let j = Jet3::var(c(z0, 0.0)).mul(Jet3::var(c(z0, 0.0))).exp();
        let e = (z0 * z0).exp();
        let expect = (12.0 * z0 + 8.0 * z0 * z0 * z0) * e;
        assert!((j.d3 - c(expect, 0.0)).norm() < 1e-12);
    }
}
