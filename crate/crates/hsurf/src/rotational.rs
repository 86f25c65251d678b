//! Rotational families over `g = e^z`.
//!
//! With `g = e^z` and `h` a function of `u = Re z` alone, the surface `X`
//! and the envelope `eta` are surfaces of revolution about the third axis.
//! Both families admit closed-form profile curves:
//!
//! * H1: `h(u) = a1 - (a2 + a1(u-1)) tanh u`, profile `(M, N)` for `X`
//!   and `(M1, N1)` for `eta`;
//! * H2: `h(u) = (a2 + c1 u + e^{2u}(a3 + c2 u)) / (1 + e^{2u})`, profile
//!   `(M~, N~)` and `(M~1, N~1)` built from the coefficient blocks
//!   `q1..q8`, `r1..r5`.
//!
//! The generic point pipeline (`frame_at` with the radial field) is the
//! source of truth; the closed forms are evaluated verbatim and
//! regression-tested against it. One grouping ambiguity in the H2 `N~`
//! coefficient block is resolved by [`rot_h2_n_regrouped`], which is the
//! reading that matches the pipeline.
//!
//! Singularities of `X` are zeros of `P`, singularities of `eta` are
//! zeros of `det V`; both trace circles of revolution unless they sit on
//! the rotation axis, where they degenerate to isolated points.

use crate::field::{Field, SurfaceClass};
use crate::geometry::{frame_at_with, GeomOptions, SurfaceFrame};
use crate::realjet::RealJet2;
use crate::Complex;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotH1Params {
    pub a1: f64,
    pub a2: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotH2Params {
    pub a2: f64,
    pub a3: f64,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotParams {
    H1(RotH1Params),
    H2(RotH2Params),
}

impl RotParams {
    pub fn field(&self) -> Field {
        match self {
            RotParams::H1(p) => Field::radial_h1(p.a1, p.a2),
            RotParams::H2(p) => Field::radial_h2(p.a2, p.a3, p.c1, p.c2),
        }
    }

    pub fn c(&self) -> f64 {
        match self {
            RotParams::H1(p) => p.c,
            RotParams::H2(p) => p.c,
        }
    }

    pub fn class(&self) -> SurfaceClass {
        match self {
            RotParams::H1(_) => SurfaceClass::H1,
            RotParams::H2(_) => SurfaceClass::H2,
        }
    }
}

/// One point of the profile curves. `(m, n)` is the signed profile of
/// `X` and `(m1, n1)` the profile of `eta`, all from the closed forms;
/// `p` and `det_v` come from the generic pipeline at `(u, 0)` and drive
/// the singularity flags. Pipeline values are NaN where the frame itself
/// is degenerate (the flags are then set).
#[derive(Debug, Clone, Copy)]
pub struct ProfileSample {
    pub u: f64,
    pub m: f64,
    pub n: f64,
    pub m1: f64,
    pub n1: f64,
    pub p: f64,
    pub det_v: f64,
    pub singular_x: bool,
    pub singular_eta: bool,
}

/// Relative `P` threshold and absolute `det V` threshold for the profile
/// singularity flags.
pub const SINGULAR_P_REL: f64 = 1e-8;
pub const SINGULAR_DETV_ABS: f64 = 1e-8;

/// Radial `h` as a jet (the `v` derivatives vanish identically); feeds
/// the generic pipeline with `g = e^z`.
pub fn rot_h_value(params: &RotParams, u: f64) -> RealJet2 {
    params
        .field()
        .eval(Complex::new(u, 0.0))
        .expect("radial h is finite for finite u")
        .h
}

fn pipeline_frame(params: &RotParams, u: f64) -> Option<SurfaceFrame> {
    let field = params.field();
    frame_at_with(&field, Complex::new(u, 0.0), params.c(), &GeomOptions::default()).ok()
}

fn sample_from(u: f64, closed: (f64, f64, f64, f64), frame: Option<SurfaceFrame>) -> ProfileSample {
    let (m, n, m1, n1) = closed;
    match frame {
        Some(fr) => ProfileSample {
            u,
            m,
            n,
            m1,
            n1,
            p: fr.p,
            det_v: fr.det_v(),
            singular_x: fr.is_singular(SINGULAR_P_REL),
            singular_eta: fr.det_v().abs() < SINGULAR_DETV_ABS,
        },
        None => ProfileSample {
            u,
            m,
            n,
            m1,
            n1,
            p: f64::NAN,
            det_v: f64::NAN,
            singular_x: true,
            singular_eta: true,
        },
    }
}

fn closed_h1(p: &RotH1Params, u: f64) -> (f64, f64, f64, f64) {
    let (a1, a2, c) = (p.a1, p.a2, p.c);
    let (e2, e4, e6) = ((2.0 * u).exp(), (4.0 * u).exp(), (6.0 * u).exp());
    let eu = u.exp();
    let l1 = e4 + 4.0 * e2 * (u - 1.0) - 1.0;
    let l2 = 1.0 - 2.0 * u + e4 * (2.0 * u - 3.0) + e2 * (2.0 - 8.0 * u + 4.0 * u * u);
    let p1 = a2 * (e2 - 1.0) - 2.0 * c * (1.0 + e2);
    let p2 = c * (1.0 + e2) * (u - 1.0) + a2 * (u - e2 * (u - 2.0));
    let p3 = 1.0 - e6 + e2 * (5.0 - 4.0 * u * u) + e4 * (11.0 - 16.0 * u + 4.0 * u * u);
    let den = (1.0 + e2)
        * (4.0 * a2 * a2 * e2
            + 8.0 * a1 * a2 * e2 * (u - 1.0)
            + a1 * a1 * (1.0 + e4 + e2 * (6.0 - 8.0 * u + 4.0 * u * u)));
    let m = 2.0
        * eu
        * (4.0 * a2 * a2 * e2
            + 2.0 * a2 * a1 * l1
            + a1 * (-2.0 * c * (1.0 + e2) * (1.0 + e2) + a1 * l2))
        / den;
    let n = (4.0 * a2 * e2 * p1 - 8.0 * a1 * e2 * p2 + a1 * a1 * p3) / den;
    let m1 = a1 * (1.0 + e2) / (2.0 * eu);
    let n1 = a2 + a1 * (u - 1.0);
    (m, n, m1, n1)
}

struct H2Blocks {
    e2: f64,
    e4: f64,
    eu: f64,
    q1: f64,
    q2: f64,
    q3: f64,
    q4: f64,
    q5: f64,
    q6: f64,
    q7: f64,
    q8: f64,
    r1: f64,
    r3: f64,
    r4: f64,
    r5: f64,
}

fn h2_blocks(p: &RotH2Params, u: f64) -> H2Blocks {
    let (a2, a3, c1, c2, c) = (p.a2, p.a3, p.c1, p.c2, p.c);
    let e2 = (2.0 * u).exp();
    let e4 = (4.0 * u).exp();
    H2Blocks {
        e2,
        e4,
        eu: u.exp(),
        q1: c1 * (1.0 - 2.0 * u) + c2 * e2,
        q2: c1 + e2 * (2.0 * a3 + c2 + 2.0 * c2 * u),
        q3: c1 + e2 * (2.0 * a3 + 2.0 * c + c2 + 2.0 * c2 * u),
        q4: e2 * (2.0 * a3 + c2 - c2 * e2 + 2.0 * c2 * u),
        q5: c1 * (1.0 + e2 * (2.0 * u - 1.0)),
        q6: 4.0 * a2 * a2 * e2 - 4.0 * a2 * c2 * e4
            + c1 * c1 * (1.0 + e2 * (1.0 - 2.0 * u) * (1.0 - 2.0 * u)),
        q7: -2.0 * a3 + a2 * (2.0 - 4.0 * u) + c2 * (-1.0 - 2.0 * u + e2 * (2.0 * u - 1.0)),
        q8: 4.0 * a3 * a3
            + 4.0 * a3 * (c2 + 2.0 * c2 * u)
            + c2 * c2 * (e2 + (1.0 + 2.0 * u) * (1.0 + 2.0 * u)),
        r1: 2.0 * a3 + 4.0 * c + c2 - c2 * e2 + a2 * (2.0 - 4.0 * u) - 4.0 * c * u
            + 2.0 * c2 * u
            + 2.0 * c2 * e2 * u,
        r3: 4.0 * a2 * a2 * e2 - 4.0 * a2 * c2 * e4
            + c1 * c1 * (1.0 + e2 * (1.0 - 2.0 * u) * (1.0 - 2.0 * u)),
        r4: -2.0 * a3 + a2 * (2.0 - 4.0 * u) + c2 * (e2 * (2.0 * u - 1.0) - 1.0 - 2.0 * u),
        r5: 4.0 * a3 * a3
            + 4.0 * a3 * (c2 + 2.0 * c2 * u)
            + c2 * c2 * (e2 + (1.0 + 2.0 * u) * (1.0 + 2.0 * u)),
    }
}

/// The `r2` coefficient block; `tail_factor` multiplies its trailing
/// `c2(...)` group. The plain reading has the group outside the `e^{2u}`
/// bracket (`tail_factor = 1`); grouping it under the bracket
/// (`tail_factor = e^{2u}`) is what the generic pipeline reproduces.
fn h2_r2(p: &RotH2Params, u: f64, e2: f64, tail_factor: f64) -> f64 {
    let (a2, a3, c2, c) = (p.a2, p.a3, p.c2, p.c);
    -4.0 * a2 * a2
        + a2 * (4.0 * c2 * e2 - 8.0 * c)
        + e2 * (4.0 * a3 * a3 + 4.0 * a3 * (2.0 * c + c2 + 2.0 * c2 * u))
        + c2 * (8.0 * c * (u + 1.0) + c2 * ((1.0 + 2.0 * u) * (1.0 + 2.0 * u) - e2)) * tail_factor
}

fn closed_h2_with(p: &RotH2Params, u: f64, tail_factor: impl Fn(f64) -> f64) -> (f64, f64, f64, f64) {
    let (a2, a3, c1, c2) = (p.a2, p.a3, p.c1, p.c2);
    let b = h2_blocks(p, u);
    let r2 = h2_r2(p, u, b.e2, tail_factor(b.e2));
    let w = 1.0 - 2.0 * u;
    let m = 2.0 * b.eu * (b.q1 * b.q2 - 2.0 * a2 * b.q3 - 2.0 * p.c * (b.q4 + b.q5))
        / (b.q6 - 2.0 * c1 * b.e2 * b.q7 + b.e4 * b.q8);
    let n = (c1 * c1 * (1.0 - b.e2 * w * w) + 2.0 * c1 * b.e2 * b.r1 + b.e2 * r2)
        / (b.r3 - 2.0 * c1 * b.e2 * b.r4 + b.e4 * b.r5);
    let m1 = ((-u).exp()
        * (b.e2 * (2.0 * a2 + 2.0 * a3 + c2 - c2 * b.e2 + 2.0 * c2 * u)
            + c1 * (1.0 + b.e2 * (2.0 * u - 1.0))))
        / (2.0 * (1.0 + b.e2));
    let n1 = (a2 + c1 * (u - 1.0) - b.e2 * (a3 + c2 + c2 * u)) / (1.0 + b.e2);
    (m, n, m1, n1)
}

/// Closed-form H1 profile at `u`, with pipeline `P`/`det V` alongside.
pub fn rot_h1_profile(params: &RotH1Params, u: f64) -> ProfileSample {
    let rp = RotParams::H1(*params);
    sample_from(u, closed_h1(params, u), pipeline_frame(&rp, u))
}

/// Closed-form H2 profile at `u` (plain reading of the coefficient
/// blocks), with pipeline `P`/`det V` alongside.
pub fn rot_h2_profile(params: &RotH2Params, u: f64) -> ProfileSample {
    let rp = RotParams::H2(*params);
    sample_from(u, closed_h2_with(params, u, |_| 1.0), pipeline_frame(&rp, u))
}

/// The `N~` profile with the trailing `c2(...)` group of `r2` under the
/// `e^{2u}` bracket. This reading agrees with the generic pipeline to
/// machine precision; the plain reading in [`rot_h2_profile`] does not
/// whenever `c2 != 0`.
pub fn rot_h2_n_regrouped(params: &RotH2Params, u: f64) -> f64 {
    closed_h2_with(params, u, |e2| e2).1
}

/// Evenly spaced profile samples on `[u_min, u_max]` (inclusive ends).
pub fn profile_range(params: &RotParams, u_min: f64, u_max: f64, n: usize) -> Vec<ProfileSample> {
    let n = n.max(2);
    let step = (u_max - u_min) / (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let u = u_min + step * i as f64;
            match params {
                RotParams::H1(p) => rot_h1_profile(p, u),
                RotParams::H2(p) => rot_h2_profile(p, u),
            }
        })
        .collect()
}

/// Which quantity a singularity scan follows to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanTarget {
    /// Zeros of `P`: singular points of the surface `X`.
    Surface,
    /// Zeros of `det V`: singular points of the envelope `eta`.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    /// The profile point sits on the rotation axis.
    Isolated,
    /// The profile point is off-axis and sweeps a circle.
    Circle,
}

impl std::fmt::Display for SingularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularKind::Isolated => write!(f, "isolated"),
            SingularKind::Circle => write!(f, "circle"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Singularity {
    pub u: f64,
    pub kind: SingularKind,
    /// Distance of the profile point from the rotation axis.
    pub axis_distance: f64,
}

/// Axis-proximity threshold separating isolated singularities from
/// circles.
pub const AXIS_TOL: f64 = 1e-8;

/// Locate zeros of `P` (target `Surface`) or `det V` (target `Envelope`)
/// on `[u_min, u_max]` by sign change plus bisection, and classify each
/// by the axis distance of the profile point there. Tangential zeros
/// without a sign change are not detected.
pub fn singularity_scan(
    params: &RotParams,
    target: ScanTarget,
    u_min: f64,
    u_max: f64,
    resolution: usize,
) -> Vec<Singularity> {
    let resolution = resolution.max(2);
    let value = |u: f64| -> f64 {
        match pipeline_frame(params, u) {
            Some(fr) => match target {
                ScanTarget::Surface => fr.p,
                ScanTarget::Envelope => fr.det_v(),
            },
            None => f64::NAN,
        }
    };
    let step = (u_max - u_min) / (resolution - 1) as f64;
    let values: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|i| value(u_min + step * i as f64))
        .collect();

    let mut found = Vec::new();
    for i in 0..resolution - 1 {
        let (va, vb) = (values[i], values[i + 1]);
        if !va.is_finite() || !vb.is_finite() {
            continue;
        }
        if va == 0.0 {
            found.push(u_min + step * i as f64);
            continue;
        }
        if va.signum() == vb.signum() {
            continue;
        }
        let mut lo = u_min + step * i as f64;
        let mut hi = lo + step;
        let mut flo = va;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let fm = value(mid);
            if !fm.is_finite() {
                break;
            }
            if fm == 0.0 || fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        found.push(0.5 * (lo + hi));
    }

    found
        .into_iter()
        .map(|u| {
            let axis_distance = match pipeline_frame(params, u) {
                Some(fr) => match target {
                    ScanTarget::Surface => fr.x.axis_distance(),
                    ScanTarget::Envelope => fr.eta.axis_distance(),
                },
                None => f64::NAN,
            };
            let kind = if axis_distance <= AXIS_TOL {
                SingularKind::Isolated
            } else {
                SingularKind::Circle
            };
            Singularity { u, kind, axis_distance }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catenoid_profile_is_cosh() {
        let p = RotH1Params { a1: 1.0, a2: 1.0, c: 1.0 };
        for u in [-2.0_f64, -0.7, 0.0, 0.4, 1.9] {
            let s = rot_h1_profile(&p, u);
            assert!((s.m1 - u.cosh()).abs() < 1e-12, "M1({u})");
            assert!((s.n1 - u).abs() < 1e-12, "N1({u})");
        }
        assert!((rot_h_value(&RotParams::H1(p), 0.0).val - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h2_radial_value_at_zero() {
        let p = RotH2Params { a2: 1.0, a3: 1.0, c1: 1.0, c2: 1.0, c: 1.0 };
        let h = rot_h_value(&RotParams::H2(p), 0.0);
        assert!((h.val - 1.0).abs() < 1e-15);
        assert_eq!(h.dv, 0.0);
        assert_eq!(h.dvv, 0.0);
    }

    #[test]
    fn h1_closed_profile_matches_pipeline() {
        let sets = [
            RotH1Params { a1: 1.0, a2: 1.0, c: 1.0 },
            RotH1Params { a1: 0.7, a2: -1.3, c: 0.4 },
            RotH1Params { a1: -2.1, a2: 0.9, c: 1.7 },
        ];
        for p in &sets {
            for u in [-1.5_f64, -0.4, 0.3, 1.1] {
                let s = rot_h1_profile(p, u);
                let fr = pipeline_frame(&RotParams::H1(*p), u).unwrap();
                assert!((s.m - fr.x.x).abs() < 1e-8, "M vs X1 at u={u}");
                assert!((s.n - fr.x.z).abs() < 1e-8, "N vs X3 at u={u}");
                assert!((s.m1 - fr.eta.x).abs() < 1e-8, "M1 vs eta1 at u={u}");
                assert!((s.n1 - fr.eta.z).abs() < 1e-8, "N1 vs eta3 at u={u}");
            }
        }
    }

    #[test]
    fn h1_profile_rotates_onto_the_surface() {
        let p = RotH1Params { a1: 0.8, a2: 1.4, c: 0.9 };
        let field = Field::radial_h1(p.a1, p.a2);
        for (u, v) in [(0.3, 1.2), (-0.8, 2.5), (1.4, -0.9)] {
            let s = rot_h1_profile(&p, u);
            let fr =
                frame_at_with(&field, Complex::new(u, v), p.c, &GeomOptions::default()).unwrap();
            assert!((s.m * v.cos() - fr.x.x).abs() < 1e-8);
            assert!((s.m * v.sin() - fr.x.y).abs() < 1e-8);
            assert!((s.n - fr.x.z).abs() < 1e-8);
        }
    }

    #[test]
    fn h2_closed_profile_matches_pipeline_except_plain_n() {
        let sets = [
            RotH2Params { a2: 1.0, a3: 1.0, c1: 1.0, c2: 1.0, c: 1.0 },
            RotH2Params { a2: -0.6, a3: 1.8, c1: 0.3, c2: -1.1, c: 0.7 },
            RotH2Params { a2: 2.2, a3: -0.4, c1: -1.5, c2: 0.8, c: 1.3 },
        ];
        for p in &sets {
            for u in [-1.2_f64, -0.3, 0.5, 1.4] {
                let s = rot_h2_profile(p, u);
                let fr = pipeline_frame(&RotParams::H2(*p), u).unwrap();
                assert!((s.m - fr.x.x).abs() < 1e-8, "M~ at u={u}");
                assert!((s.m1 - fr.eta.x).abs() < 1e-8, "M~1 at u={u}");
                assert!((s.n1 - fr.eta.z).abs() < 1e-8, "N~1 at u={u}");
                let regrouped = rot_h2_n_regrouped(p, u);
                let scale = 1.0_f64.max(fr.x.z.abs());
                assert!(
                    (regrouped - fr.x.z).abs() / scale < 1e-10,
                    "regrouped N~ at u={u}: {} vs {}",
                    regrouped,
                    fr.x.z
                );
                // the plain grouping genuinely disagrees when c2 != 0
                assert!(
                    (s.n - fr.x.z).abs() > 1e-4,
                    "plain N~ unexpectedly matches at u={u}"
                );
            }
        }
    }

    #[test]
    fn h2_sphere_envelope_profile() {
        // (a2, a3, c1, c2) = (-1, 2, 0, 0): eta is the sphere of radius
        // 1/2 centered at (0, 0, -3/2).
        let p = RotH2Params { a2: -1.0, a3: 2.0, c1: 0.0, c2: 0.0, c: 1.0 };
        for u in [-2.0_f64, -0.5, 0.0, 0.8, 2.3] {
            let s = rot_h2_profile(&p, u);
            let r2 = s.m1 * s.m1 + (s.n1 + 1.5) * (s.n1 + 1.5);
            assert!((r2 - 0.25).abs() < 1e-12, "sphere radius at u={u}: {r2}");
        }
    }

    #[test]
    fn h2_sphere_surface_is_a_sphere() {
        let p = RotH2Params { a2: -1.0, a3: 2.0, c1: 0.0, c2: 0.0, c: 1.0 };
        let s1 = rot_h2_profile(&p, -0.7);
        let s2 = rot_h2_profile(&p, 0.9);
        // the center (0, 0, z0) follows from any two profile points
        let z0 = (s1.m * s1.m + s1.n * s1.n - s2.m * s2.m - s2.n * s2.n)
            / (2.0 * (s1.n - s2.n));
        let radius = (s1.m * s1.m + (s1.n - z0) * (s1.n - z0)).sqrt();
        for u in [-1.8_f64, -0.2, 0.4, 1.5] {
            let s = rot_h2_profile(&p, u);
            let d = (s.m * s.m + (s.n - z0) * (s.n - z0)).sqrt();
            assert!((d - radius).abs() < 1e-9, "at u={u}: {d} vs {radius}");
        }
    }

    #[test]
    fn envelope_is_rotational() {
        let field = Field::radial_h2(0.4, -1.1, 0.8, 0.5);
        for u in [-0.9_f64, 0.2, 1.3] {
            let a = frame_at_with(&field, Complex::new(u, 0.0), 1.0, &GeomOptions::default())
                .unwrap();
            let b = frame_at_with(&field, Complex::new(u, 1.7), 1.0, &GeomOptions::default())
                .unwrap();
            assert!((a.eta.norm() - b.eta.norm()).abs() < 1e-10);
            assert!((a.eta.z - b.eta.z).abs() < 1e-10);
        }
    }

    #[test]
    fn h1_catenoid_singularities_two_isolated_two_circles() {
        let p = RotParams::H1(RotH1Params { a1: 1.0, a2: 1.0, c: 1.0 });
        let found = singularity_scan(&p, ScanTarget::Surface, -4.0, 4.0, 4001);
        assert_eq!(found.len(), 4, "{found:?}");
        let expect = [
            (-2.602024, SingularKind::Circle),
            (-1.443967, SingularKind::Isolated),
            (1.443967, SingularKind::Isolated),
            (2.602024, SingularKind::Circle),
        ];
        for (s, (u, kind)) in found.iter().zip(expect) {
            assert!((s.u - u).abs() < 1e-5, "root at {} vs {}", s.u, u);
            assert_eq!(s.kind, kind, "kind at u={}", s.u);
        }
    }

    #[test]
    fn h1_a2_three_one_isolated_one_circle() {
        let p = RotParams::H1(RotH1Params { a1: 1.0, a2: 3.0, c: 1.0 });
        let found = singularity_scan(&p, ScanTarget::Surface, -3.0, 3.0, 4001);
        assert_eq!(found.len(), 2, "{found:?}");
        assert!((found[0].u + 0.124367).abs() < 1e-5);
        assert_eq!(found[0].kind, SingularKind::Isolated);
        assert!((found[1].u - 1.659070).abs() < 1e-5);
        assert_eq!(found[1].kind, SingularKind::Circle);
    }

    #[test]
    fn h2_unit_params_singularities() {
        let p = RotParams::H2(RotH2Params { a2: 1.0, a3: 1.0, c1: 1.0, c2: 1.0, c: 1.0 });
        let x = singularity_scan(&p, ScanTarget::Surface, -6.0, 6.0, 8001);
        let kinds: Vec<SingularKind> = x.iter().map(|s| s.kind).collect();
        assert_eq!(x.len(), 4, "{x:?}");
        assert_eq!(
            kinds,
            [
                SingularKind::Circle,
                SingularKind::Isolated,
                SingularKind::Circle,
                SingularKind::Isolated
            ]
        );
        for (s, u) in x.iter().zip([-2.516139, -1.349974, -0.261657, 0.654224]) {
            assert!((s.u - u).abs() < 1e-5, "{} vs {}", s.u, u);
        }
        let eta = singularity_scan(&p, ScanTarget::Envelope, -6.0, 6.0, 8001);
        assert_eq!(eta.len(), 2, "{eta:?}");
        assert_eq!(eta[0].kind, SingularKind::Circle);
        assert!((eta[0].u + 0.465005).abs() < 1e-5);
        assert_eq!(eta[1].kind, SingularKind::Isolated);
        assert!((eta[1].u - 1.062233).abs() < 1e-5);
    }

    #[test]
    fn h2_sphere_envelope_has_no_singularities() {
        let p = RotParams::H2(RotH2Params { a2: -1.0, a3: 2.0, c1: 0.0, c2: 0.0, c: 1.0 });
        let found = singularity_scan(&p, ScanTarget::Envelope, -6.0, 6.0, 4001);
        assert!(found.is_empty(), "{found:?}");
    }

    #[test]
    fn complete_envelope_case_has_no_det_v_zeros() {
        let p = RotParams::H2(RotH2Params { a2: -1.0, a3: 2.0, c1: 2.0, c2: -1.0, c: 1.0 });
        let found = singularity_scan(&p, ScanTarget::Envelope, -6.0, 6.0, 4001);
        assert!(found.is_empty(), "{found:?}");
    }

    #[test]
    fn zero_coupling_sweep_always_sphere() {
        // c1 = c2 = 0 collapses h to a constant blend whose envelope is a
        // sphere for every (a2, a3): no det V zeros anywhere.
        let mut lcg = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (lcg >> 33) as f64 / (1u64 << 31) as f64 * 4.0 - 2.0
        };
        for _ in 0..25 {
            let (a2, a3) = (next(), next());
            if (a2 - a3).abs() < 0.1 {
                continue;
            }
            let p = RotParams::H2(RotH2Params { a2, a3, c1: 0.0, c2: 0.0, c: 1.0 });
            let found = singularity_scan(&p, ScanTarget::Envelope, -4.0, 4.0, 801);
            assert!(found.is_empty(), "a2={a2} a3={a3}: {found:?}");
        }
    }

    #[test]
    fn profile_range_is_inclusive_and_ordered() {
        let p = RotParams::H1(RotH1Params { a1: 1.0, a2: 1.0, c: 1.0 });
        let samples = profile_range(&p, -2.0, 2.0, 9);
        assert_eq!(samples.len(), 9);
        assert!((samples[0].u + 2.0).abs() < 1e-15);
        assert!((samples[8].u - 2.0).abs() < 1e-15);
        assert!(samples.windows(2).all(|w| w[0].u < w[1].u));
    }
}
