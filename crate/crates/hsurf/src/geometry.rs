//! Per-point surface geometry: the frame `(Y, eta, N, X)` and the
//! curvature data derived from it.
//!
//! Given the field `h` and the jets of `g` at `z = u + iv`:
//!
//! ```text
//! T = 1 + |g|^2                 Y = (2 Re g, 2 Im g, 1 - |g|^2) / T
//! L = 4|g'|^2 / T^2             eta = (h_u Y_u + h_v Y_v)/L + h Y
//! S = (h_u^2 + h_v^2)/L + h^2   N = Y - (2h/S) eta
//!                               X = Y - (2(h+c)/S) eta
//! ```
//!
//! `Y` is the unit sphere, `eta` the middle envelope, `N` the Gauss map of
//! the surface `X`. The shape data sits in the symmetric matrix `V`
//! (built from the Hessian of `h` and `w = g''/g' - (2/T) g' conj(g)`),
//! the regularity polynomial `P = det(S I - 2(h+c)V)`, and the Weingarten
//! matrix `W = (S I - 2hV)(S I - 2(h+c)V)^{-1}`.

use crate::field::{Field, FieldError};
use crate::linalg::{Mat2, Vec3};
use crate::realjet::RealJet2;
use crate::Complex;

/// Numerical guards for frame and curvature assembly. All thresholds are
/// adjustable; the defaults match the tolerances used by the verification
/// suite.
#[derive(Debug, Clone, Copy)]
pub struct GeomOptions {
    /// Below this, `S` counts as degenerate (`eta` has no usable normal
    /// direction and `N`, `X` are undefined).
    pub eps_support: f64,
    /// A point is singular when `|P| < singular_rel * S^2`.
    pub singular_rel: f64,
    /// Largest tolerated `|W12 - W21|` relative to `max(1, |W|)` before
    /// symmetrizing the Weingarten matrix is refused.
    pub asym_tol: f64,
    /// Guard for the poles `Psi = 1` and `1 - k_i R = 0`.
    pub pole_tol: f64,
}

impl Default for GeomOptions {
    fn default() -> GeomOptions {
        GeomOptions {
            eps_support: 1e-14,
            singular_rel: 1e-10,
            asym_tol: 1e-9,
            pole_tol: 1e-8,
        }
    }
}

/// Everything the representation produces at a single point.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceFrame {
    pub z: Complex,
    /// Envelope offset constant the frame was built with.
    pub c: f64,
    pub t: f64,
    pub l: f64,
    pub h: RealJet2,
    pub y: Vec3,
    pub y_u: Vec3,
    pub y_v: Vec3,
    pub eta: Vec3,
    pub s: f64,
    pub n: Vec3,
    pub x: Vec3,
    pub v: Mat2,
    pub p: f64,
}

impl SurfaceFrame {
    pub fn tr_v(&self) -> f64 {
        self.v.trace()
    }

    pub fn det_v(&self) -> f64 {
        self.v.det()
    }

    /// Singularity test for the surface `X` relative to the frame scale.
    pub fn is_singular(&self, rel: f64) -> bool {
        self.p.abs() < rel * self.s * self.s
    }
}

/// Curvature invariants at a regular point.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureReport {
    /// Symmetrized Weingarten matrix.
    pub w: Mat2,
    /// Principal curvatures, ascending; they are the negated eigenvalues
    /// of `W`.
    pub k1: f64,
    pub k2: f64,
    pub mean: f64,
    pub gauss: f64,
    /// `<X, N>`.
    pub psi: f64,
    /// `|X|^2`.
    pub lambda: f64,
    /// Radius function `R = (1 - Lambda) / (2 (Psi - 1))`.
    pub r: f64,
    /// Spherical radial curvatures `s_i = (1 + k_i) / (1 - k_i R)`.
    pub s1: f64,
    pub s2: f64,
    /// Spherical mean curvature `(s1 + s2)/2`.
    pub h_s: f64,
    pub tr_v: f64,
    pub det_v: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("g'(z) vanishes at z = {at}")]
    VanishingGPrime { at: Complex },
    #[error("degenerate point at z = {at}: S = {s:e}")]
    DegenerateSupport { at: Complex, s: f64 },
    #[error("singular point at z = {at}: P = {p:e}")]
    SingularPoint { at: Complex, p: f64 },
    #[error("Weingarten matrix is not symmetric at z = {at}: |W12 - W21| = {asym:e}")]
    AsymmetricWeingarten { at: Complex, asym: f64 },
    #[error("radius function undefined at z = {at}: Psi too close to 1")]
    MidSphereUndefined { at: Complex },
    #[error("spherical curvature pole at z = {at}: 1 - k R too close to 0")]
    CurvaturePole { at: Complex },
}

/// Assemble the frame at `z` with default guards.
pub fn frame_at(field: &Field, z: Complex, c: f64) -> Result<SurfaceFrame, GeomError> {
    frame_at_with(field, z, c, &GeomOptions::default())
}

pub fn frame_at_with(
    field: &Field,
    z: Complex,
    c: f64,
    opts: &GeomOptions,
) -> Result<SurfaceFrame, GeomError> {
    let ev = field.eval(z)?;
    let g0 = ev.g.f;
    let g1 = ev.g.df;
    let g2 = ev.g.d2f;

    let gp2 = g1.norm_sqr();
    if gp2 <= 1e-280 {
        return Err(GeomError::VanishingGPrime { at: z });
    }
    let gn = g0.norm_sqr();
    let t = 1.0 + gn;
    let l = 4.0 * gp2 / (t * t);

    // Cauchy-Riemann: derivatives of Re g and Im g in (u, v).
    let (p, q) = (g0.re, g0.im);
    let (pu, pv) = (g1.re, -g1.im);
    let (qu, qv) = (g1.im, g1.re);
    let tu = 2.0 * (p * pu + q * qu);
    let tv = 2.0 * (p * pv + q * qv);

    let y = Vec3::new(2.0 * p, 2.0 * q, 1.0 - gn) * (1.0 / t);
    let y_u = (Vec3::new(2.0 * pu, 2.0 * qu, -tu) - y * tu) * (1.0 / t);
    let y_v = (Vec3::new(2.0 * pv, 2.0 * qv, -tv) - y * tv) * (1.0 / t);

    let h = ev.h;
    let eta = (y_u * h.du + y_v * h.dv) * (1.0 / l) + y * h.val;
    let s = (h.du * h.du + h.dv * h.dv) / l + h.val * h.val;
    if s <= opts.eps_support {
        return Err(GeomError::DegenerateSupport { at: z, s });
    }
    let n = y - eta * (2.0 * h.val / s);
    let x = y - eta * (2.0 * (h.val + c) / s);

    let w = g2 / g1 - g1 * g0.conj() * (2.0 / t);
    let wh = w.re * h.du + w.im * h.dv;
    let iwh = -w.im * h.du + w.re * h.dv;
    let v = Mat2::new(
        (h.duu - wh + h.val * l) / l,
        (h.duv - iwh) / l,
        (h.duv - iwh) / l,
        (h.dvv + wh + h.val * l) / l,
    );
    let hc = h.val + c;
    let p_reg = s * s - 2.0 * hc * s * v.trace() + 4.0 * hc * hc * v.det();

    Ok(SurfaceFrame { z, c, t, l, h, y, y_u, y_v, eta, s, n, x, v, p: p_reg })
}

/// Curvature invariants from a frame, with default guards.
pub fn curvature_report(frame: &SurfaceFrame) -> Result<CurvatureReport, GeomError> {
    curvature_report_with(frame, &GeomOptions::default())
}

pub fn curvature_report_with(
    frame: &SurfaceFrame,
    opts: &GeomOptions,
) -> Result<CurvatureReport, GeomError> {
    let at = frame.z;
    let s = frame.s;
    let h = frame.h.val;
    if frame.p.abs() < opts.singular_rel * s * s {
        return Err(GeomError::SingularPoint { at, p: frame.p });
    }
    let a = Mat2::IDENTITY.scale(s) - frame.v.scale(2.0 * h);
    let b = Mat2::IDENTITY.scale(s) - frame.v.scale(2.0 * (h + frame.c));
    let b_inv = b
        .inverse()
        .ok_or(GeomError::SingularPoint { at, p: frame.p })?;
    let w = a * b_inv;
    let asym = w.asymmetry();
    if asym > opts.asym_tol * w.max_abs().max(1.0) {
        return Err(GeomError::AsymmetricWeingarten { at, asym });
    }
    let w = w.symmetric_part();
    let (e1, e2) = w.sym_eigenvalues();
    let (k1, k2) = (-e2, -e1);

    let psi = frame.x.dot(frame.n);
    let lambda = frame.x.norm_sq();
    if (psi - 1.0).abs() <= opts.pole_tol {
        return Err(GeomError::MidSphereUndefined { at });
    }
    let r = (1.0 - lambda) / (2.0 * (psi - 1.0));
    let (d1, d2) = (1.0 - k1 * r, 1.0 - k2 * r);
    if d1.abs() <= opts.pole_tol || d2.abs() <= opts.pole_tol {
        return Err(GeomError::CurvaturePole { at });
    }
    let s1 = (1.0 + k1) / d1;
    let s2 = (1.0 + k2) / d2;

    Ok(CurvatureReport {
        w,
        k1,
        k2,
        mean: 0.5 * (k1 + k2),
        gauss: k1 * k2,
        psi,
        lambda,
        r,
        s1,
        s2,
        h_s: 0.5 * (s1 + s2),
        tr_v: frame.tr_v(),
        det_v: frame.det_v(),
    })
}

/// The envelope in one closed expression, used as a cross-check of the
/// assembled `eta`. With `grad = h_u + i h_v` and `<a, b>` the real inner
/// product of complex numbers:
///
/// ```text
/// eta_12 = (T/2) grad g' / |g'|^2 - g <grad, g/g'> + (2h/T) g
/// eta_3  = ((2 - T)/T) h - <grad, g/g'>
/// ```
pub fn eta_closed_form(field: &Field, z: Complex) -> Result<Vec3, GeomError> {
    let ev = field.eval(z)?;
    let g0 = ev.g.f;
    let g1 = ev.g.df;
    let gp2 = g1.norm_sqr();
    if gp2 <= 1e-280 {
        return Err(GeomError::VanishingGPrime { at: z });
    }
    let t = 1.0 + g0.norm_sqr();
    let grad = Complex::new(ev.h.du, ev.h.dv);
    let ratio = g0 / g1;
    let a = grad.re * ratio.re + grad.im * ratio.im;
    let planar = grad * g1 * (t / (2.0 * gp2)) - g0 * a + g0 * (2.0 * ev.h.val / t);
    let height = (2.0 - t) / t * ev.h.val - a;
    Ok(Vec3::new(planar.re, planar.im, height))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sphere_field() -> Field {
        Field::h2(
            parse_expr("z").unwrap(),
            parse_expr("1").unwrap(),
            parse_expr("z").unwrap(),
        )
    }

    fn h2_example() -> Field {
        Field::h2(
            parse_expr("z").unwrap(),
            parse_expr("e^z").unwrap(),
            parse_expr("cos(z)").unwrap(),
        )
    }

    #[test]
    fn sphere_frame_is_exact() {
        let f = sphere_field();
        for z in [c(0.3, -0.4), c(-1.1, 0.2), c(0.0, 0.9)] {
            let fr = frame_at(&f, z, 1.0).unwrap();
            assert!((fr.h.val - 1.0).abs() < 1e-14);
            assert!((fr.s - 1.0).abs() < 1e-13);
            assert!((fr.v - Mat2::IDENTITY).max_abs() < 1e-12);
            assert!((fr.eta - fr.y).norm() < 1e-13);
            assert!((fr.n + fr.y).norm() < 1e-12);
            assert!((fr.x + fr.y * 3.0).norm() < 1e-12, "X = -(1+2c) Y");
            assert!((fr.p - 9.0).abs() < 1e-11, "P = (1+2c)^2");
            assert!((fr.tr_v() - 2.0).abs() < 1e-12);
            assert!((fr.det_v() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_curvature_is_exact() {
        let f = sphere_field();
        let fr = frame_at(&f, c(0.3, -0.4), 1.0).unwrap();
        let cv = curvature_report(&fr).unwrap();
        assert!((cv.k1 + 1.0 / 3.0).abs() < 1e-12);
        assert!((cv.k2 + 1.0 / 3.0).abs() < 1e-12);
        assert!((cv.psi - 3.0).abs() < 1e-12);
        assert!((cv.lambda - 9.0).abs() < 1e-11);
        assert!((cv.r + 2.0).abs() < 1e-11);
        assert!((fr.h.val + 1.0 / (cv.r + 1.0)).abs() < 1e-11, "h = -c/(R+1)");
        assert!((cv.s1 - 2.0).abs() < 1e-11);
        assert!((cv.h_s - 2.0).abs() < 1e-11);
    }

    #[test]
    fn h2_example_frozen_frame() {
        let fr = frame_at(&h2_example(), c(0.5, -0.3), 1.0).unwrap();
        assert!((fr.h.val - 1.485052667330423).abs() < 1e-14);
        assert!((fr.s - 2.913503031800347).abs() < 1e-13);
        assert!((fr.tr_v() - 0.4325489501820121).abs() < 1e-13);
        assert!((fr.det_v() + 0.18261489777358603).abs() < 1e-13);
        assert!((fr.p + 2.2859327714101907).abs() < 1e-12);
        let x = Vec3::new(-1.8003303585637034, -0.5804596939362696, -0.9130443786315208);
        let n = Vec3::new(-0.7755637414377112, -0.5270610269176865, -0.3474299308804765);
        assert!((fr.x - x).norm() < 1e-12);
        assert!((fr.n - n).norm() < 1e-12);
        assert!((fr.n.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn h2_example_frozen_curvature() {
        let fr = frame_at(&h2_example(), c(0.5, -0.3), 1.0).unwrap();
        let cv = curvature_report(&fr).unwrap();
        assert!((cv.k1 + 0.8754817661735685).abs() < 1e-12);
        assert!((cv.k2 - 1.5662548907796687).abs() < 1e-12);
        assert!((cv.r + 1.6733767912740973).abs() < 1e-12);
        assert!((cv.h_s - 0.2204761639880079).abs() < 1e-12);
    }

    #[test]
    fn closed_form_eta_matches_assembled_eta() {
        let f = h2_example();
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let z = c(
                -1.2 + 2.4 * (i as f64 * 0.636) % 2.4,
                -1.2 + (i as f64 * 0.417) % 2.4,
            );
            let fr = match frame_at(&f, z, 1.0) {
                Ok(fr) => fr,
                Err(_) => continue,
            };
            let ec = eta_closed_form(&f, z).unwrap();
            worst = worst.max((ec - fr.eta).norm());
        }
        assert!(worst < 1e-9, "closed form eta deviates by {worst:e}");
    }

    #[test]
    fn catenoid_envelope_at_origin() {
        let f = Field::radial_h1(1.0, 1.0);
        let fr = frame_at(&f, c(0.0, 0.0), 1.0).unwrap();
        assert!((fr.eta - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_support_is_reported() {
        // h = Re(z^2)/T vanishes to second order at the origin, so S = 0.
        let f = Field::h2(
            parse_expr("z").unwrap(),
            parse_expr("z^2").unwrap(),
            parse_expr("0").unwrap(),
        );
        let err = frame_at(&f, c(0.0, 0.0), 1.0).unwrap_err();
        assert!(matches!(err, GeomError::DegenerateSupport { .. }));
    }

    #[test]
    fn vanishing_g_prime_is_reported() {
        let f = Field::h2(
            parse_expr("z^2").unwrap(),
            parse_expr("1").unwrap(),
            parse_expr("z").unwrap(),
        );
        let err = frame_at(&f, c(0.0, 0.0), 1.0).unwrap_err();
        assert!(matches!(err, GeomError::VanishingGPrime { .. }));
    }

    #[test]
    fn p_zero_point_refuses_curvature() {
        // Sphere data with c = -1/2 makes P = (1+2c)^2 = 0 identically.
        let fr = frame_at(&sphere_field(), c(0.2, 0.1), -0.5).unwrap();
        assert!(fr.p.abs() < 1e-12);
        assert!(fr.is_singular(1e-10));
        let err = curvature_report(&fr).unwrap_err();
        assert!(matches!(err, GeomError::SingularPoint { .. }));
    }
}
