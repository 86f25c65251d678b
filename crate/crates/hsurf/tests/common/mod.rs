//! Shared fixtures: the example datasets every suite exercises, seeded
//! random expression trees, and the three expression-layer property
//! checks themselves (run from both the property suite and the
//! acceptance gate).
#![allow(dead_code)]

use hsurf::verify::Rect;
use hsurf::{antiderivative_path, eval_jet, format_expr, parse_expr, Complex, Field, HoloExpr};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

/// Relative tolerance for jet derivatives against finite differences.
pub const JET_FD_TOL: f64 = 1e-6;
/// Relative tolerance for contour-integral path independence.
pub const CONTOUR_TOL: f64 = 1e-10;

pub fn expr(src: &str) -> HoloExpr {
    parse_expr(src).unwrap_or_else(|e| panic!("fixture expression {src:?}: {e}"))
}

/// The H1 datasets: `(label, field, sampling window)`. The `1/z` pair is
/// based at `z = 1` and sampled on a window clear of the pole.
pub fn example_h1() -> Vec<(&'static str, Field, Rect)> {
    vec![
        (
            "h1 g=z A=e^z",
            Field::h1(expr("z"), expr("e^z"), 0.0),
            Rect::standard(),
        ),
        (
            "h1 g=z^2 A=z",
            Field::h1(expr("z^2"), expr("z"), 0.0),
            Rect::standard(),
        ),
        (
            "h1 g=1/z A=z^2",
            Field::h1_based(expr("1/z"), expr("z^2"), 0.0, Complex::new(1.0, 0.0)),
            Rect::new(0.4, 2.4, -1.2, 1.2),
        ),
        (
            "h1 g=z A=sin z",
            Field::h1(expr("z"), expr("sin z"), 0.0),
            Rect::standard(),
        ),
    ]
}

/// The H2 datasets: `(label, field, sampling window)`.
pub fn example_h2() -> Vec<(&'static str, Field, Rect)> {
    vec![
        (
            "h2 g=sin z A=z B=z",
            Field::h2(expr("sin z"), expr("z"), expr("z")),
            Rect::standard(),
        ),
        (
            "h2 g=sinh z A=cosh z B=z^2",
            Field::h2(expr("sinh z"), expr("cosh z"), expr("z^2")),
            Rect::standard(),
        ),
        (
            "h2 g=z A=e^z B=cos z",
            Field::h2(expr("z"), expr("e^z"), expr("cos z")),
            Rect::standard(),
        ),
    ]
}

/// Every example dataset, H1 first.
pub fn all_examples() -> Vec<(&'static str, Field, Rect)> {
    let mut v = example_h1();
    v.extend(example_h2());
    v
}

/// Random expression over the full grammar, built through the smart
/// constructors so constant folding matches what the parser produces.
pub fn arb_expr() -> impl Strategy<Value = HoloExpr> {
    let leaf = prop_oneof![
        3 => Just(HoloExpr::var()),
        2 => (-4i32..=4).prop_map(|k| HoloExpr::constant(k as f64, 0.0)),
        1 => (-8i32..=8, -8i32..=8)
            .prop_map(|(a, b)| HoloExpr::constant(0.5 * a as f64, 0.25 * b as f64)),
    ];
    leaf.prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::div(a, b)),
            inner.clone().prop_map(HoloExpr::neg),
            inner.clone().prop_map(HoloExpr::exp),
            inner.clone().prop_map(HoloExpr::log),
            inner.clone().prop_map(HoloExpr::sin),
            inner.clone().prop_map(HoloExpr::cos),
            inner.clone().prop_map(HoloExpr::sinh),
            inner.clone().prop_map(HoloExpr::cosh),
            inner.clone().prop_map(HoloExpr::sqrt),
            (inner.clone(), prop_oneof![
                (-3i32..=3).prop_map(|k| k as f64),
                Just(0.5), Just(-1.5), Just(2.5),
            ])
                .prop_map(|(a, p)| HoloExpr::pow(a, p)),
        ]
    })
}

/// Random expression from the entire subset of the grammar: no division,
/// no logs, roots, or fractional powers, so every value is analytic on
/// the whole plane and contour integrals are path independent.
pub fn arb_entire_expr() -> impl Strategy<Value = HoloExpr> {
    let leaf = prop_oneof![
        3 => Just(HoloExpr::var()),
        2 => (-4i32..=4).prop_map(|k| HoloExpr::constant(k as f64, 0.0)),
        1 => (-8i32..=8, -8i32..=8)
            .prop_map(|(a, b)| HoloExpr::constant(0.5 * a as f64, 0.25 * b as f64)),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::mul(a, b)),
            inner.clone().prop_map(HoloExpr::neg),
            inner.clone().prop_map(HoloExpr::exp),
            inner.clone().prop_map(HoloExpr::sin),
            inner.clone().prop_map(HoloExpr::cos),
            inner.clone().prop_map(HoloExpr::sinh),
            inner.clone().prop_map(HoloExpr::cosh),
            (inner.clone(), 0i32..=3).prop_map(|(a, k)| HoloExpr::pow(a, k as f64)),
        ]
    })
}

/// Run `body` over `cases` seeded samples of `strategy`; panics with the
/// shrunken counterexample on failure. The fixed seed keeps every run of
/// the suite on the same inputs.
pub fn run_seeded<S: Strategy>(
    seed: u8,
    cases: u32,
    strategy: S,
    body: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        max_global_rejects: 8 * cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]));
    match runner.run(&strategy, body) {
        Ok(()) => {}
        Err(TestError::Fail(reason, value)) => {
            panic!("property failed: {reason}\ncounterexample: {value:?}")
        }
        Err(TestError::Abort(reason)) => panic!("property aborted: {reason}"),
    }
}

/// Print/parse round trip over `cases` random trees; panics on the first
/// tree that does not survive.
pub fn check_format_parse_round_trip(cases: u32) {
    run_seeded(11, cases, arb_expr(), |tree| {
        let printed = format_expr(&tree);
        let reparsed = parse_expr(&printed);
        prop_assert!(reparsed.is_ok(), "reparse of {printed:?}: {reparsed:?}");
        prop_assert_eq!(reparsed.unwrap(), tree, "through {}", printed);
        Ok(())
    });
}

/// Fourth-order central difference of `f` along `dir`.
fn fd4(
    f: impl Fn(Complex) -> Option<Complex>,
    z: Complex,
    dir: Complex,
    d: f64,
) -> Option<Complex> {
    let p2 = f(z + dir * (2.0 * d))?;
    let p1 = f(z + dir * d)?;
    let m1 = f(z - dir * d)?;
    let m2 = f(z - dir * (2.0 * d))?;
    Some((m2 - p2 + (p1 - m1) * 8.0) / (12.0 * d))
}

/// First derivative estimate that validates its own truncation error by
/// step halving; `None` when the stencil fails or disagrees.
fn checked_fd(f: &impl Fn(Complex) -> Option<Complex>, z: Complex) -> Option<Complex> {
    let dir = Complex::new(1.0, 0.0);
    let coarse = fd4(f, z, dir, 1e-3)?;
    let fine = fd4(f, z, dir, 5e-4)?;
    let scale = fine.norm().max(1.0);
    ((coarse - fine).norm() <= 2e-8 * scale).then_some(fine)
}

/// Jet first and second derivatives against self-validating finite
/// differences at fixed probe points, over `cases` random trees.
pub fn check_jet_against_finite_differences(cases: u32) {
    let points = [
        Complex::new(0.3, 0.2),
        Complex::new(-0.4, 0.7),
        Complex::new(0.8, -0.5),
    ];
    run_seeded(23, cases, arb_expr(), |tree| {
        let mut tested = false;
        for &z in &points {
            let Ok(jet) = eval_jet(&tree, z) else { continue };
            let tame = |w: Complex| w.norm() <= 1e3;
            if !(tame(jet.f) && tame(jet.df) && tame(jet.d2f)) {
                continue;
            }
            let value = |w: Complex| eval_jet(&tree, w).ok().filter(|j| tame(j.f)).map(|j| j.f);
            let deriv = |w: Complex| eval_jet(&tree, w).ok().filter(|j| tame(j.df)).map(|j| j.df);
            let (Some(fd_df), Some(fd_d2f)) = (checked_fd(&value, z), checked_fd(&deriv, z))
            else {
                continue;
            };
            prop_assert!(
                (jet.df - fd_df).norm() <= JET_FD_TOL * jet.df.norm().max(1.0),
                "df {} vs fd {} at {} for {}",
                jet.df,
                fd_df,
                z,
                format_expr(&tree)
            );
            prop_assert!(
                (jet.d2f - fd_d2f).norm() <= JET_FD_TOL * jet.d2f.norm().max(1.0),
                "d2f {} vs fd {} at {} for {}",
                jet.d2f,
                fd_d2f,
                z,
                format_expr(&tree)
            );
            tested = true;
        }
        if !tested {
            return Err(TestCaseError::reject("no tame evaluation point"));
        }
        Ok(())
    });
}

/// Contour integrals of entire expressions along a straight segment and a
/// rectangular detour agree, over `cases` random trees.
pub fn check_contour_path_independence(cases: u32) {
    let from = Complex::new(-0.8, -0.3);
    let to = Complex::new(0.9, 0.6);
    run_seeded(37, cases, arb_entire_expr(), |tree: HoloExpr| {
        let direct = antiderivative_path(&tree, &[from, to]);
        let detour = antiderivative_path(
            &tree,
            &[
                from,
                Complex::new(from.re, 1.4),
                Complex::new(to.re, 1.4),
                to,
            ],
        );
        let (Ok(a), Ok(b)) = (direct, detour) else {
            return Err(TestCaseError::reject("quadrature did not converge"));
        };
        if a.norm() > 1e6 {
            return Err(TestCaseError::reject("integral too large to compare"));
        }
        prop_assert!(
            (a - b).norm() <= CONTOUR_TOL * a.norm().max(1.0),
            "direct {} vs detour {} for {}",
            a,
            b,
            format_expr(&tree)
        );
        Ok(())
    });
}
