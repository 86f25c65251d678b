//! Numeric verification: every structural identity of the representation
//! is evaluated as a residual over sampled points and folded into a
//! pass/fail report.
//!
//! Reports are deterministic: sampling is seeded, parallel evaluation
//! preserves point order, and the reduction to max/mean is sequential.
//! Tolerances are fixed constants here, not inputs, so a passing suite
//! means the same thing everywhere.

use crate::field::{Field, SurfaceClass};
use crate::geometry::{curvature_report_with, frame_at_with, GeomOptions, SurfaceFrame};
use crate::linalg::Vec3;
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Sampling window in the `(u, v)` parameter plane.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Rect {
        Rect { u_min, u_max, v_min, v_max }
    }

    /// Window used by the example-driven suites.
    pub fn standard() -> Rect {
        Rect::new(-1.2, 1.2, -1.2, 1.2)
    }
}

// Identity tolerances. Exact-algebra identities get roundoff-level
// bounds; finite-difference checks get bounds matching their truncation
// error at the pinned step.
pub const TOL_RADIUS: f64 = 1e-9;
pub const TOL_GAP: f64 = 1e-9;
pub const TOL_CONGRUENCE: f64 = 1e-9;
pub const TOL_SUPPORT: f64 = 1e-10;
pub const TOL_SUPPORT_TANGENCY: f64 = 1e-6;
pub const TOL_UNIT_NORMAL: f64 = 1e-10;
pub const TOL_ETA_NORM: f64 = 1e-11;
pub const TOL_TRV_JET: f64 = 1e-10;
pub const TOL_TRV_SPHERICAL: f64 = 1e-8;
pub const TOL_HELMHOLTZ: f64 = 1e-8;
pub const TOL_MINIMALITY: f64 = 1e-8;
pub const TOL_WEINGARTEN_FD: f64 = 1e-5;
pub const TOL_ETA_DERIVATIVE_FD: f64 = 1e-6;
pub const TOL_CONFORMAL: f64 = 1e-5;
pub const TOL_ETA_MEAN_CURVATURE: f64 = 1e-5;

/// Central-difference step for the first-order consistency checks.
pub const FD_STEP: f64 = 1e-4;
/// Step for the Richardson (grid-refinement) Laplacian checks.
pub const RICHARDSON_STEP: f64 = 1e-2;
/// Residuals below this floor pass a Richardson check outright; the
/// convergence ratio of pure roundoff carries no information.
pub const RICHARDSON_FLOOR: f64 = 1e-8;
/// Acceptance window for the step/half-step residual ratio of a
/// second-order method (the ideal value is 4).
pub const RICHARDSON_WINDOW: (f64, f64) = (3.5, 4.5);

/// Outcome of one residual check over a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub checked: usize,
    pub skipped: usize,
    pub tol: f64,
    pub passed: bool,
    pub seed: Option<u64>,
    pub notes: Vec<(String, String)>,
}

impl ResidualReport {
    fn from_residuals(name: &str, tol: f64, residuals: &[f64], skipped: usize) -> ResidualReport {
        assert!(!residuals.is_empty(), "report {name} has no checked points");
        let max_abs = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let mean_abs = residuals.iter().map(|r| r.abs()).sum::<f64>() / residuals.len() as f64;
        let mut report = ResidualReport {
            name: name.to_string(),
            max_abs,
            mean_abs,
            checked: residuals.len(),
            skipped,
            tol,
            passed: max_abs <= tol,
            seed: None,
            notes: Vec::new(),
        };
        let total = residuals.len() + skipped;
        if skipped * 20 > total {
            report.note(
                "warning",
                format!("skipped {skipped}/{total} samples; domain may be misconfigured"),
            );
        }
        report
    }

    fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }
}

/// A titled batch of reports plus the configuration echo that produced
/// them.
#[derive(Debug, Clone, Default)]
pub struct ReportSet {
    pub title: String,
    pub header: Vec<(String, String)>,
    pub reports: Vec<ResidualReport>,
}

impl ReportSet {
    pub fn new(title: impl Into<String>) -> ReportSet {
        ReportSet { title: title.into(), header: Vec::new(), reports: Vec::new() }
    }

    pub fn header(&mut self, key: &str, value: impl Into<String>) {
        self.header.push((key.to_string(), value.into()));
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    /// Human-readable fixed-width table.
    pub fn to_table(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for (k, v) in &self.header {
            out.push_str(&format!("{k} = {v}\n"));
        }
        let name_w = self
            .reports
            .iter()
            .map(|r| r.name.len())
            .chain(std::iter::once("identity".len()))
            .max()
            .unwrap_or(8);
        out.push('\n');
        out.push_str(&format!(
            "{:name_w$}  {:>12}  {:>12}  {:>8}  {:>8}  {:>10}  result\n",
            "identity", "max_abs", "mean_abs", "checked", "skipped", "tolerance"
        ));
        for r in &self.reports {
            out.push_str(&format!(
                "{:name_w$}  {:>12.4e}  {:>12.4e}  {:>8}  {:>8}  {:>10.1e}  {}\n",
                r.name,
                r.max_abs,
                r.mean_abs,
                r.checked,
                r.skipped,
                r.tol,
                if r.passed { "pass" } else { "FAIL" }
            ));
            for (k, v) in &r.notes {
                out.push_str(&format!("{:name_w$}    note {k}: {v}\n", ""));
            }
        }
        out.push_str(&format!(
            "\noverall: {}\n",
            if self.passed() { "pass" } else { "FAIL" }
        ));
        out
    }

    /// Machine-readable `key=value` block, one line per metric.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite.title={}\n", self.title));
        for (k, v) in &self.header {
            out.push_str(&format!("config.{k}={v}\n"));
        }
        for r in &self.reports {
            let n = &r.name;
            out.push_str(&format!("{n}.max_abs={:e}\n", r.max_abs));
            out.push_str(&format!("{n}.mean_abs={:e}\n", r.mean_abs));
            out.push_str(&format!("{n}.checked={}\n", r.checked));
            out.push_str(&format!("{n}.skipped={}\n", r.skipped));
            out.push_str(&format!("{n}.tol={:e}\n", r.tol));
            out.push_str(&format!("{n}.pass={}\n", r.passed));
            if let Some(seed) = r.seed {
                out.push_str(&format!("{n}.seed={seed}\n"));
            }
            for (k, v) in &r.notes {
                out.push_str(&format!("{n}.note.{k}={v}\n"));
            }
        }
        out.push_str(&format!("suite.pass={}\n", self.passed()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("no regular sample points found in the window")]
    NoRegularPoints,
}

fn strict_opts() -> GeomOptions {
    GeomOptions { singular_rel: 1e-6, pole_tol: 1e-6, ..GeomOptions::default() }
}

/// Draw up to `n` points from `rect` at which the frame and the full
/// curvature report exist with comfortable margins (P, Psi-1 and the s_i
/// denominators all bounded away from zero). Returns the accepted points
/// and the number rejected; gives up after `50 n` attempts.
pub fn sample_regular_points(
    field: &Field,
    c: f64,
    rect: &Rect,
    n: usize,
    seed: u64,
) -> (Vec<Complex>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = strict_opts();
    let mut points = Vec::with_capacity(n);
    let mut rejected = 0usize;
    for _ in 0..n.saturating_mul(50) {
        if points.len() == n {
            break;
        }
        let z = Complex::new(
            rng.gen_range(rect.u_min..=rect.u_max),
            rng.gen_range(rect.v_min..=rect.v_max),
        );
        let ok = frame_at_with(field, z, c, &opts)
            .and_then(|fr| curvature_report_with(&fr, &opts))
            .is_ok();
        if ok {
            points.push(z);
        } else {
            rejected += 1;
        }
    }
    (points, rejected)
}

fn l_of(g: crate::expr::Jet2) -> Option<f64> {
    let t = 1.0 + g.f.norm_sqr();
    let l = 4.0 * g.df.norm_sqr() / (t * t);
    (l > 1e-280).then_some(l)
}

/// Map points to residuals in parallel, preserving order; `None` counts
/// as a skipped point.
fn residuals_over<F>(points: &[Complex], f: F) -> (Vec<f64>, usize)
where
    F: Fn(Complex) -> Option<f64> + Sync,
{
    let raw: Vec<Option<f64>> = points.par_iter().map(|&z| f(z)).collect();
    let mut residuals = Vec::with_capacity(raw.len());
    let mut skipped = 0;
    for r in raw {
        match r {
            Some(v) => residuals.push(v),
            None => skipped += 1,
        }
    }
    (residuals, skipped)
}

fn finish(
    name: &str,
    tol: f64,
    residuals: Vec<f64>,
    skipped: usize,
) -> Result<ResidualReport, VerifyError> {
    if residuals.is_empty() {
        return Err(VerifyError::NoRegularPoints);
    }
    Ok(ResidualReport::from_residuals(name, tol, &residuals, skipped))
}

/// `Delta h + 2 L h` at each point; zero exactly when `h` satisfies the
/// Helmholtz equation (the H1 membership test).
pub fn helmholtz_residual(field: &Field, points: &[Complex]) -> Result<ResidualReport, VerifyError> {
    let (residuals, skipped) = residuals_over(points, |z| {
        let ev = field.eval(z).ok()?;
        let l = l_of(ev.g)?;
        Some(ev.h.laplacian() + 2.0 * l * ev.h.val)
    });
    finish("helmholtz", TOL_HELMHOLTZ, residuals, skipped)
}

fn q_of(field: &Field, z: Complex) -> Option<f64> {
    let ev = field.eval(z).ok()?;
    let l = l_of(ev.g)?;
    Some((ev.h.laplacian() + 2.0 * l * ev.h.val) / l)
}

fn flat_laplacian_fd<F>(f: &F, z: Complex, d: f64) -> Option<f64>
where
    F: Fn(Complex) -> Option<f64>,
{
    let du = Complex::new(d, 0.0);
    let dv = Complex::new(0.0, d);
    Some((f(z + du)? + f(z - du)? + f(z + dv)? + f(z - dv)? - 4.0 * f(z)?) / (d * d))
}

fn richardson_report(
    name: &str,
    residual_step: f64,
    residual_half: f64,
    checked: usize,
    skipped: usize,
) -> ResidualReport {
    let (lo, hi) = RICHARDSON_WINDOW;
    let at_floor = residual_step <= RICHARDSON_FLOOR && residual_half <= RICHARDSON_FLOOR;
    let ratio = residual_step / residual_half;
    let distance = if at_floor {
        0.0
    } else if ratio >= lo && ratio <= hi {
        0.0
    } else if ratio < lo {
        lo - ratio
    } else {
        ratio - hi
    };
    let mut report = ResidualReport {
        name: name.to_string(),
        max_abs: distance,
        mean_abs: distance,
        checked,
        skipped,
        tol: 0.0,
        passed: distance <= 0.0,
        seed: None,
        notes: Vec::new(),
    };
    report.note("residual_step", format!("{residual_step:e}"));
    report.note("residual_half", format!("{residual_half:e}"));
    if at_floor {
        report.note("ratio", format!("below floor {RICHARDSON_FLOOR:e} at both steps"));
    } else {
        report.note("ratio", format!("{ratio:.3} (window {lo}..{hi})"));
    }
    report
}

/// Richardson check that `q = (Delta h + 2 L h)/L` is flat-harmonic (the
/// H2 membership test). The report encodes the distance of the measured
/// convergence ratio from the second-order window; both residuals and the
/// ratio are recorded as notes.
pub fn generalized_helmholtz_residual(
    field: &Field,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let q = |z| q_of(field, z);
    let lap = |z: Complex, d: f64| flat_laplacian_fd(&q, z, d);
    let raw: Vec<Option<(f64, f64)>> = points
        .par_iter()
        .map(|&z| Some((lap(z, RICHARDSON_STEP)?, lap(z, RICHARDSON_STEP / 2.0)?)))
        .collect();
    fold_richardson("generalized_helmholtz", raw)
}

fn fold_richardson(
    name: &str,
    raw: Vec<Option<(f64, f64)>>,
) -> Result<ResidualReport, VerifyError> {
    let mut step_max = 0.0_f64;
    let mut half_max = 0.0_f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for pair in raw {
        match pair {
            Some((a, b)) => {
                step_max = step_max.max(a.abs());
                half_max = half_max.max(b.abs());
                checked += 1;
            }
            None => skipped += 1,
        }
    }
    if checked == 0 {
        return Err(VerifyError::NoRegularPoints);
    }
    Ok(richardson_report(name, step_max, half_max, checked, skipped))
}

/// Max `|tr V|` over the points; zero exactly when `eta` is minimal
/// (H1 membership through the envelope).
pub fn minimality_residual(
    field: &Field,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    // V does not depend on c, so any offset works for the frame.
    let (residuals, skipped) = residuals_over(points, |z| {
        let fr = frame_at_with(field, z, 1.0, &GeomOptions::default()).ok()?;
        Some(fr.tr_v())
    });
    finish("minimality", TOL_MINIMALITY, residuals, skipped)
}

/// Richardson check of `Delta_flat(tr V)` with `tr V` assembled through
/// the V matrix (independently of the jet shortcut used by
/// [`generalized_helmholtz_residual`]).
pub fn laguerre_residual(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let trv = |z: Complex| {
        frame_at_with(field, z, c, &GeomOptions::default())
            .ok()
            .map(|fr| fr.tr_v())
    };
    let lap = |z: Complex, d: f64| flat_laplacian_fd(&trv, z, d);
    let raw: Vec<Option<(f64, f64)>> = points
        .par_iter()
        .map(|&z| Some((lap(z, RICHARDSON_STEP)?, lap(z, RICHARDSON_STEP / 2.0)?)))
        .collect();
    fold_richardson("laguerre", raw)
}

fn eta_at(field: &Field, z: Complex, c: f64) -> Option<Vec3> {
    frame_at_with(field, z, c, &GeomOptions::default())
        .ok()
        .map(|fr| fr.eta)
}

/// Mean curvature of the `eta` immersion by finite differences of its
/// fundamental forms (normal `Y`), compared against the closed form
/// `-tr V / (2 det V)`; the residual is relative to `max(1, |H|)`. On H1
/// fields the note also records the raw maximum of `|H_eta|`, which must
/// vanish there.
pub fn eta_mean_curvature_residual(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let d = FD_STEP;
    let du = Complex::new(d, 0.0);
    let dv = Complex::new(0.0, d);
    let raw: Vec<Option<(f64, f64)>> = points
        .par_iter()
        .map(|&z| {
            let fr = frame_at_with(field, z, c, &GeomOptions::default()).ok()?;
            if fr.det_v().abs() < 1e-8 {
                return None;
            }
            let su = frame_stencil(field, c, z, DIR_U, d)?;
            let sv = frame_stencil(field, c, z, DIR_V, d)?;
            let e = |w| eta_at(field, w, c);
            let (pp, pm) = (e(z + du + dv)?, e(z + du - dv)?);
            let (mp, mm) = (e(z - du + dv)?, e(z - du - dv)?);
            let eta0 = fr.eta;
            let eu = diff4(&su, d, |f| f.eta);
            let ev = diff4(&sv, d, |f| f.eta);
            let second = |s: &[SurfaceFrame; 4]| {
                (eta0 * -30.0 + (s[1].eta + s[2].eta) * 16.0 - s[0].eta - s[3].eta)
                    * (1.0 / (12.0 * d * d))
            };
            let euu = second(&su);
            let evv = second(&sv);
            let euv = (pp - pm - mp + mm) * (0.25 / (d * d));
            let (ff_e, ff_f, ff_g) = (eu.dot(eu), eu.dot(ev), ev.dot(ev));
            let (sf_e, sf_f, sf_g) = (euu.dot(fr.y), euv.dot(fr.y), evv.dot(fr.y));
            let det = ff_e * ff_g - ff_f * ff_f;
            if det.abs() < 1e-12 {
                return None;
            }
            let h_fd = (sf_e * ff_g - 2.0 * sf_f * ff_f + sf_g * ff_e) / (2.0 * det);
            let h_closed = -fr.tr_v() / (2.0 * fr.det_v());
            Some(((h_fd - h_closed) / h_closed.abs().max(1.0), h_fd))
        })
        .collect();
    let mut residuals = Vec::new();
    let mut skipped = 0usize;
    let mut max_h = 0.0_f64;
    for r in raw {
        match r {
            Some((diff, h_fd)) => {
                residuals.push(diff);
                max_h = max_h.max(h_fd.abs());
            }
            None => skipped += 1,
        }
    }
    let mut report = finish("eta_mean_curvature", TOL_ETA_MEAN_CURVATURE, residuals, skipped)?;
    report.note("max_abs_h_eta_fd", format!("{max_h:e}"));
    Ok(report)
}

struct PointIdentities {
    radius: Option<f64>,
    gap: f64,
    congruence: f64,
    support: f64,
    tangency: Option<f64>,
    unit_normal: f64,
    eta_norm: f64,
    trv_jet: f64,
    trv_spherical: f64,
    psi_hit: f64,
    psi_gap: f64,
}

fn max_component(v: Vec3) -> f64 {
    v.to_array().iter().fold(0.0_f64, |m, a| m.max(a.abs()))
}

fn identities_at(field: &Field, c: f64, z: Complex) -> Option<PointIdentities> {
    let opts = GeomOptions::default();
    let fr = frame_at_with(field, z, c, &opts).ok()?;
    let cv = curvature_report_with(&fr, &opts).ok()?;
    let radius = ((cv.r + 1.0).abs() > 1e-8).then(|| fr.h.val + c / (cv.r + 1.0));
    let gap = (fr.x - fr.n).norm_sq() - 4.0 * c * c / fr.s;
    let congruence = max_component(fr.x + fr.n * cv.r - fr.y * (1.0 + cv.r));
    let support = fr.eta.dot(fr.y) - fr.h.val;
    let d = FD_STEP;
    let tangency = (|| {
        let su = frame_stencil(field, c, z, DIR_U, d)?;
        let sv = frame_stencil(field, c, z, DIR_V, d)?;
        let eu = diff4(&su, d, |f| f.eta);
        let ev = diff4(&sv, d, |f| f.eta);
        Some(eu.dot(fr.y).abs().max(ev.dot(fr.y).abs()))
    })();
    let psi_gap = (cv.psi - 1.0).abs();
    Some(PointIdentities {
        radius,
        gap,
        congruence,
        support,
        tangency,
        unit_normal: fr.n.norm() - 1.0,
        eta_norm: fr.s - fr.eta.dot(fr.eta),
        trv_jet: fr.tr_v() - (fr.h.laplacian() / fr.l + 2.0 * fr.h.val),
        trv_spherical: fr.tr_v() - 2.0 * c / (cv.psi - 1.0) * cv.h_s,
        psi_hit: if psi_gap <= 1e-6 { 1.0 } else { 0.0 },
        psi_gap,
    })
}

/// One report per structural identity of the frame: radius, gap,
/// congruence, support (value and tangency), unit normal, `S = <eta,eta>`,
/// both `tr V` bridges, and the `Psi != 1` regularity condition.
pub fn identity_suite(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<Vec<ResidualReport>, VerifyError> {
    let raw: Vec<Option<PointIdentities>> =
        points.par_iter().map(|&z| identities_at(field, c, z)).collect();
    let frame_skipped = raw.iter().filter(|r| r.is_none()).count();
    let ids: Vec<&PointIdentities> = raw.iter().flatten().collect();
    if ids.is_empty() {
        return Err(VerifyError::NoRegularPoints);
    }

    let collect = |f: &dyn Fn(&PointIdentities) -> f64| -> Vec<f64> {
        ids.iter().map(|p| f(p)).collect()
    };
    let mut reports = Vec::new();
    let radius: Vec<f64> = ids.iter().filter_map(|p| p.radius).collect();
    let radius_skipped = frame_skipped + (ids.len() - radius.len());
    reports.push(ResidualReport::from_residuals("radius", TOL_RADIUS, &radius, radius_skipped));
    reports.push(ResidualReport::from_residuals(
        "gap",
        TOL_GAP,
        &collect(&|p| p.gap),
        frame_skipped,
    ));
    reports.push(ResidualReport::from_residuals(
        "congruence",
        TOL_CONGRUENCE,
        &collect(&|p| p.congruence),
        frame_skipped,
    ));
    reports.push(ResidualReport::from_residuals(
        "support",
        TOL_SUPPORT,
        &collect(&|p| p.support),
        frame_skipped,
    ));
    let tangency: Vec<f64> = ids.iter().filter_map(|p| p.tangency).collect();
    if !tangency.is_empty() {
        reports.push(ResidualReport::from_residuals(
            "support_tangency",
            TOL_SUPPORT_TANGENCY,
            &tangency,
            frame_skipped + (ids.len() - tangency.len()),
        ));
    }
    reports.push(ResidualReport::from_residuals(
        "unit_normal",
        TOL_UNIT_NORMAL,
        &collect(&|p| p.unit_normal),
        frame_skipped,
    ));
    reports.push(ResidualReport::from_residuals(
        "eta_norm",
        TOL_ETA_NORM,
        &collect(&|p| p.eta_norm),
        frame_skipped,
    ));
    reports.push(ResidualReport::from_residuals(
        "trv_jet",
        TOL_TRV_JET,
        &collect(&|p| p.trv_jet),
        frame_skipped,
    ));
    reports.push(ResidualReport::from_residuals(
        "trv_spherical",
        TOL_TRV_SPHERICAL,
        &collect(&|p| p.trv_spherical),
        frame_skipped,
    ));
    let mut psi = ResidualReport::from_residuals(
        "psi_away_from_one",
        0.0,
        &collect(&|p| p.psi_hit),
        frame_skipped,
    );
    let min_gap = ids.iter().map(|p| p.psi_gap).fold(f64::INFINITY, f64::min);
    psi.note("min_abs_psi_minus_one", format!("{min_gap:e}"));
    reports.push(psi);
    Ok(reports)
}

/// Frames at `z + t*dir` for `t = +2d, +d, -d, -2d`, the stencil of a
/// fourth-order central difference.
fn frame_stencil(field: &Field, c: f64, z: Complex, dir: Complex, d: f64) -> Option<[SurfaceFrame; 4]> {
    let opts = GeomOptions::default();
    let f = |t: f64| frame_at_with(field, z + dir * t, c, &opts).ok();
    Some([f(2.0 * d)?, f(d)?, f(-d)?, f(-2.0 * d)?])
}

/// Fourth-order first derivative from a [`frame_stencil`] array.
fn diff4(s: &[SurfaceFrame; 4], d: f64, pick: impl Fn(&SurfaceFrame) -> Vec3) -> Vec3 {
    (pick(&s[3]) - pick(&s[0]) + (pick(&s[1]) - pick(&s[2])) * 8.0) * (1.0 / (12.0 * d))
}

const DIR_U: Complex = Complex::new(1.0, 0.0);
const DIR_V: Complex = Complex::new(0.0, 1.0);

/// Finite-difference check of the Weingarten relation
/// `dN/du_i = sum_j W_ij dX/du_j` (relative error).
pub fn weingarten_fd_check(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let d = FD_STEP;
    let (residuals, skipped) = residuals_over(points, |z| {
        let fr = frame_at_with(field, z, c, &GeomOptions::default()).ok()?;
        let cv = curvature_report_with(&fr, &GeomOptions::default()).ok()?;
        let su = frame_stencil(field, c, z, DIR_U, d)?;
        let sv = frame_stencil(field, c, z, DIR_V, d)?;
        let x_u = diff4(&su, d, |f| f.x);
        let x_v = diff4(&sv, d, |f| f.x);
        let n_u = diff4(&su, d, |f| f.n);
        let n_v = diff4(&sv, d, |f| f.n);
        let w = cv.w;
        let ru = n_u - (x_u * w.a + x_v * w.b);
        let rv = n_v - (x_u * w.c + x_v * w.d);
        let scale = n_u.norm().max(n_v.norm()).max(x_u.norm()).max(x_v.norm()).max(1e-10);
        Some(ru.norm().max(rv.norm()) / scale)
    });
    finish("weingarten_fd", TOL_WEINGARTEN_FD, residuals, skipped)
}

/// Finite-difference check of `d eta/du_j = sum_k V_jk dY/du_k`.
pub fn eta_derivative_check(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let d = FD_STEP;
    let (residuals, skipped) = residuals_over(points, |z| {
        let fr = frame_at_with(field, z, c, &GeomOptions::default()).ok()?;
        let su = frame_stencil(field, c, z, DIR_U, d)?;
        let sv = frame_stencil(field, c, z, DIR_V, d)?;
        let eta_u = diff4(&su, d, |f| f.eta);
        let eta_v = diff4(&sv, d, |f| f.eta);
        let v = fr.v;
        let ru = eta_u - (fr.y_u * v.a + fr.y_v * v.b);
        let rv = eta_v - (fr.y_u * v.c + fr.y_v * v.d);
        Some(max_component(ru).max(max_component(rv)))
    });
    finish("eta_derivative_fd", TOL_ETA_DERIVATIVE_FD, residuals, skipped)
}

/// Check that `sigma_ij = <X_i + R N_i, X_j + R N_j>` is proportional to
/// `L delta_ij`; the measured factor is logged against both `(1+R)^2` and
/// `1+R^2`, and only the proportionality itself is asserted.
pub fn conformal_factor_check(
    field: &Field,
    c: f64,
    points: &[Complex],
) -> Result<ResidualReport, VerifyError> {
    let d = FD_STEP;
    let raw: Vec<Option<(f64, f64, f64)>> = points
        .par_iter()
        .map(|&z| {
            let fr = frame_at_with(field, z, c, &GeomOptions::default()).ok()?;
            let cv = curvature_report_with(&fr, &GeomOptions::default()).ok()?;
            let su = frame_stencil(field, c, z, DIR_U, d)?;
            let sv = frame_stencil(field, c, z, DIR_V, d)?;
            let a_u = diff4(&su, d, |f| f.x + f.n * cv.r);
            let a_v = diff4(&sv, d, |f| f.x + f.n * cv.r);
            let s11 = a_u.dot(a_u);
            let s12 = a_u.dot(a_v);
            let s22 = a_v.dot(a_v);
            let scale = 0.5 * (s11 + s22);
            if scale < 1e-12 {
                return None;
            }
            let proportional = s12.abs().max((s11 - s22).abs()) / scale;
            let lambda = scale / fr.l;
            let sq = (1.0 + cv.r) * (1.0 + cv.r);
            let alt = 1.0 + cv.r * cv.r;
            let dev_sq = (lambda / sq - 1.0).abs();
            let dev_alt = (lambda / alt - 1.0).abs();
            Some((proportional, dev_sq, dev_alt))
        })
        .collect();
    let mut residuals = Vec::new();
    let mut skipped = 0usize;
    let mut worst_sq = 0.0_f64;
    let mut worst_alt = 0.0_f64;
    for r in raw {
        match r {
            Some((p, dsq, dalt)) => {
                residuals.push(p);
                worst_sq = worst_sq.max(dsq);
                worst_alt = worst_alt.max(dalt);
            }
            None => skipped += 1,
        }
    }
    let mut report = finish("conformal_form", TOL_CONFORMAL, residuals, skipped)?;
    report.note("max_rel_dev_from_(1+R)^2", format!("{worst_sq:e}"));
    report.note("max_rel_dev_from_1+R^2", format!("{worst_alt:e}"));
    Ok(report)
}

/// The complete suite for a field: the frame identities, the
/// finite-difference consistency checks, and the class-specific membership
/// tests (Helmholtz/minimality for H1, generalized Helmholtz/Laguerre for
/// H2).
pub fn full_suite(
    field: &Field,
    c: f64,
    rect: &Rect,
    n: usize,
    seed: u64,
) -> Result<ReportSet, VerifyError> {
    let class = field.class();
    let (points, rejected) = sample_regular_points(field, c, rect, n, seed);
    if points.is_empty() {
        return Err(VerifyError::NoRegularPoints);
    }
    let mut set = ReportSet::new(format!("verification suite ({class})"));
    set.header("class", class.to_string());
    set.header("c", format!("{c}"));
    set.header("seed", format!("{seed}"));
    set.header(
        "window",
        format!(
            "[{}, {}] x [{}, {}]",
            rect.u_min, rect.u_max, rect.v_min, rect.v_max
        ),
    );
    set.header("points_requested", format!("{n}"));
    set.header("points_accepted", format!("{}", points.len()));
    set.header("points_rejected", format!("{rejected}"));

    let mut reports = identity_suite(field, c, &points)?;
    reports.push(weingarten_fd_check(field, c, &points)?);
    reports.push(eta_derivative_check(field, c, &points)?);
    reports.push(conformal_factor_check(field, c, &points)?);
    match class {
        SurfaceClass::H1 => {
            reports.push(helmholtz_residual(field, &points)?);
            reports.push(minimality_residual(field, &points)?);
            reports.push(eta_mean_curvature_residual(field, c, &points)?);
        }
        SurfaceClass::H2 => {
            reports.push(generalized_helmholtz_residual(field, &points)?);
            reports.push(laguerre_residual(field, c, &points)?);
            reports.push(eta_mean_curvature_residual(field, c, &points)?);
        }
    }
    for mut r in reports {
        r.seed = Some(seed);
        set.reports.push(r);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sphere() -> Field {
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
    fn sphere_identities_are_machine_exact() {
        let points = [c(0.3, -0.4), c(-1.1, 0.2), c(0.0, 0.9), c(0.5, 0.5)];
        let reports = identity_suite(&sphere(), 1.0, &points).unwrap();
        for r in &reports {
            assert!(r.passed, "{} failed: {:e}", r.name, r.max_abs);
            if r.name != "support_tangency" && r.name != "psi_away_from_one" {
                assert!(r.max_abs < 1e-12, "{}: {:e}", r.name, r.max_abs);
            }
        }
    }

    #[test]
    fn h1_example_identities_hold() {
        let field = Field::h1(parse_expr("z^2").unwrap(), parse_expr("z").unwrap(), 0.0);
        let (points, _) = sample_regular_points(&field, 1.0, &Rect::standard(), 100, 7);
        assert!(points.len() >= 50, "found only {} regular points", points.len());
        let reports = identity_suite(&field, 1.0, &points).unwrap();
        for r in &reports {
            assert!(r.passed, "{} failed: {:e}", r.name, r.max_abs);
        }
        let hh = helmholtz_residual(&field, &points).unwrap();
        assert!(hh.passed, "helmholtz residual {:e}", hh.max_abs);
        let min = minimality_residual(&field, &points).unwrap();
        assert!(min.passed, "minimality residual {:e}", min.max_abs);
    }

    #[test]
    fn constant_field_fails_helmholtz() {
        // h == 1 gives Delta h + 2Lh = 2L > 0: not an H1 field.
        let points = [c(0.2, 0.1), c(-0.4, 0.6)];
        let r = helmholtz_residual(&sphere(), &points).unwrap();
        assert!(!r.passed);
        assert!(r.max_abs > 0.1);
    }

    #[test]
    fn constant_field_passes_generalized_helmholtz_at_floor() {
        // h == 1, g = z gives q = 2 exactly; its flat Laplacian is zero to
        // roundoff at both steps.
        let points = [c(0.2, 0.1), c(-0.4, 0.6), c(0.7, -0.3)];
        let r = generalized_helmholtz_residual(&sphere(), &points).unwrap();
        assert!(r.passed, "distance outside window: {:e}", r.max_abs);
        let note = r.notes.iter().find(|(k, _)| k == "ratio").unwrap();
        assert!(note.1.contains("floor"), "expected floor note, got {}", note.1);
    }

    #[test]
    fn h2_example_full_suite_passes() {
        let set = full_suite(&h2_example(), 1.0, &Rect::standard(), 60, 42).unwrap();
        assert!(set.passed(), "failing reports:\n{}", set.to_table());
        let names: Vec<&str> = set.reports.iter().map(|r| r.name.as_str()).collect();
        assert!(names.contains(&"generalized_helmholtz"));
        assert!(names.contains(&"laguerre"));
        assert!(names.contains(&"conformal_form"));
        for r in &set.reports {
            assert_eq!(r.seed, Some(42));
            assert!(r.max_abs >= r.mean_abs);
        }
    }

    #[test]
    fn h1_full_suite_passes_and_is_deterministic() {
        let field = Field::h1(parse_expr("z").unwrap(), parse_expr("e^z").unwrap(), 0.0);
        let a = full_suite(&field, 1.0, &Rect::standard(), 40, 11).unwrap();
        let b = full_suite(&field, 1.0, &Rect::standard(), 40, 11).unwrap();
        assert!(a.passed(), "failing reports:\n{}", a.to_table());
        assert_eq!(a.to_kv(), b.to_kv());
    }

    #[test]
    fn conformal_factor_matches_one_plus_r_squared_form() {
        let set = full_suite(&h2_example(), 1.0, &Rect::standard(), 40, 3).unwrap();
        let conf = set.reports.iter().find(|r| r.name == "conformal_form").unwrap();
        let dev_sq: f64 = conf
            .notes
            .iter()
            .find(|(k, _)| k == "max_rel_dev_from_(1+R)^2")
            .map(|(_, v)| v.parse().unwrap())
            .unwrap();
        let dev_alt: f64 = conf
            .notes
            .iter()
            .find(|(k, _)| k == "max_rel_dev_from_1+R^2")
            .map(|(_, v)| v.parse().unwrap())
            .unwrap();
        assert!(dev_sq < 1e-5, "(1+R)^2 candidate deviates by {dev_sq:e}");
        assert!(dev_alt > 1e-2, "1+R^2 candidate unexpectedly fits: {dev_alt:e}");
    }

    #[test]
    fn degenerate_window_reports_no_regular_points() {
        // c = -1/2 makes P vanish identically on the sphere data.
        let err = full_suite(&sphere(), -0.5, &Rect::standard(), 20, 1).unwrap_err();
        assert_eq!(err, VerifyError::NoRegularPoints);
    }

    #[test]
    fn serializations_carry_every_metric() {
        let set = full_suite(&h2_example(), 1.0, &Rect::standard(), 20, 5).unwrap();
        let table = set.to_table();
        assert!(table.contains("identity"));
        assert!(table.contains("radius"));
        assert!(table.contains("overall: pass"));
        let kv = set.to_kv();
        assert!(kv.contains("config.seed=5"));
        assert!(kv.contains("radius.max_abs="));
        assert!(kv.contains("radius.pass=true"));
        assert!(kv.contains("suite.pass=true"));
        assert!(kv.contains("generalized_helmholtz.note.ratio="));
    }
}
