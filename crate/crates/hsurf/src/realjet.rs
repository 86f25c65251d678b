//! Real-valued 2-jets over the (u, v) plane.
//!
//! The scalar fields the geometry consumes are real functions of z = u + iv
//! assembled from real and imaginary parts of holomorphic jets. Arithmetic
//! here propagates gradient and Hessian exactly, so Laplacians of composed
//! fields carry no finite-difference error.

use crate::jet::Jet3;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a real function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RealJet2 {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl RealJet2 {
    pub fn constant(val: f64) -> RealJet2 {
        RealJet2 { val, ..Default::default() }
    }

    /// Jet of the coordinate function u at a point with given value.
    pub fn coord_u(u: f64) -> RealJet2 {
        RealJet2 { val: u, du: 1.0, ..Default::default() }
    }

    pub fn laplacian(&self) -> f64 {
        self.duu + self.dvv
    }

    pub fn gradient(&self) -> (f64, f64) {
        (self.du, self.dv)
    }

    pub fn scale(self, s: f64) -> RealJet2 {
        RealJet2 {
            val: s * self.val,
            du: s * self.du,
            dv: s * self.dv,
            duu: s * self.duu,
            duv: s * self.duv,
            dvv: s * self.dvv,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.du.is_finite()
            && self.dv.is_finite()
            && self.duu.is_finite()
            && self.duv.is_finite()
            && self.dvv.is_finite()
    }

    /// Real part of a holomorphic jet as a function of (u, v), using the
    /// Cauchy-Riemann relations: for w = f(z), Re(w) has gradient
    /// (Re f', -Im f') and Hessian rows from f''.
    pub(crate) fn from_re(j: Jet3) -> RealJet2 {
        RealJet2 {
            val: j.f.re,
            du: j.d1.re,
            dv: -j.d1.im,
            duu: j.d2.re,
            duv: -j.d2.im,
            dvv: -j.d2.re,
        }
    }

    pub(crate) fn from_im(j: Jet3) -> RealJet2 {
        RealJet2 {
            val: j.f.im,
            du: j.d1.im,
            dv: j.d1.re,
            duu: j.d2.im,
            duv: j.d2.re,
            dvv: -j.d2.im,
        }
    }

    fn recip(self) -> RealJet2 {
        let i0 = 1.0 / self.val;
        let i0sq = i0 * i0;
        let i0cu = i0sq * i0;
        RealJet2 {
            val: i0,
            du: -self.du * i0sq,
            dv: -self.dv * i0sq,
            duu: (2.0 * self.du * self.du - self.val * self.duu) * i0cu,
            duv: (2.0 * self.du * self.dv - self.val * self.duv) * i0cu,
            dvv: (2.0 * self.dv * self.dv - self.val * self.dvv) * i0cu,
        }
    }
}

impl Add for RealJet2 {
    type Output = RealJet2;
    fn add(self, o: RealJet2) -> RealJet2 {
        RealJet2 {
            val: self.val + o.val,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }
}

impl Sub for RealJet2 {
    type Output = RealJet2;
    fn sub(self, o: RealJet2) -> RealJet2 {
        self + (-o)
    }
}

impl Neg for RealJet2 {
    type Output = RealJet2;
    fn neg(self) -> RealJet2 {
        self.scale(-1.0)
    }
}

impl Mul for RealJet2 {
    type Output = RealJet2;
    fn mul(self, o: RealJet2) -> RealJet2 {
        RealJet2 {
            val: self.val * o.val,
            du: self.du * o.val + self.val * o.du,
            dv: self.dv * o.val + self.val * o.dv,
            duu: self.duu * o.val + 2.0 * self.du * o.du + self.val * o.duu,
            duv: self.duv * o.val + self.du * o.dv + self.dv * o.du + self.val * o.duv,
            dvv: self.dvv * o.val + 2.0 * self.dv * o.dv + self.val * o.dvv,
        }
    }
}

impl Div for RealJet2 {
    type Output = RealJet2;
    fn div(self, o: RealJet2) -> RealJet2 {
        self * o.recip()
    }
}
