//! Adaptive Gauss-Kronrod contour integration along polylines.
//!
//! A 7-point Gauss rule embedded in a 15-point Kronrod rule gives a value
//! and an error estimate per segment; segments whose estimate exceeds the
//! budget are bisected. Node order is fixed, so results are bit-stable
//! across runs.

use crate::expr::EvalError;
use crate::Complex;

/// G7 abscissae are the odd-indexed K15 abscissae; node 7 is the center.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute tolerance for the whole path.
    pub abs_tol: f64,
    /// Maximum bisection depth per segment before giving up.
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, max_depth: 40 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("quadrature tolerance {requested:.3e} not reached (error estimate {achieved:.3e})")]
    Tolerance { requested: f64, achieved: f64 },
    #[error("integration path needs at least two points")]
    EmptyPath,
}

/// Integrate `f` along the polyline through `path`.
pub(crate) fn integrate_polyline<F>(
    f: &mut F,
    path: &[Complex],
    opt: &QuadOptions,
) -> Result<Complex, QuadError>
where
    F: FnMut(Complex) -> Result<Complex, EvalError>,
{
    if path.len() < 2 {
        return Err(QuadError::EmptyPath);
    }
    let segments = path.windows(2).filter(|w| w[0] != w[1]).count();
    if segments == 0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let seg_tol = opt.abs_tol / segments as f64;
    let mut total = Complex::new(0.0, 0.0);
    for w in path.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        total += segment(f, w[0], w[1], seg_tol, opt.max_depth)?;
    }
    Ok(total)
}

fn segment<F>(f: &mut F, a: Complex, b: Complex, tol: f64, depth: u32) -> Result<Complex, QuadError>
where
    F: FnMut(Complex) -> Result<Complex, EvalError>,
{
    let (value, err) = gk15(f, a, b)?;
    // Near roundoff the estimate stops shrinking; accept once it is at the
    // noise floor of the value itself.
    let floor = 1e-15 * (1.0 + value.norm());
    if err <= tol.max(floor) {
        return Ok(value);
    }
    if depth == 0 {
        return Err(QuadError::Tolerance { requested: tol, achieved: err });
    }
    let mid = 0.5 * (a + b);
    let left = segment(f, a, mid, 0.5 * tol, depth - 1)?;
    let right = segment(f, mid, b, 0.5 * tol, depth - 1)?;
    Ok(left + right)
}

/// One Gauss-Kronrod 7/15 evaluation over the segment `a -> b`.
fn gk15<F>(f: &mut F, a: Complex, b: Complex) -> Result<(Complex, f64), QuadError>
where
    F: FnMut(Complex) -> Result<Complex, EvalError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for j in 0..7 {
        let x = XGK[j] * half;
        let fplus = f(center + x)?;
        let fminus = f(center - x)?;
        let pair = fplus + fminus;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    let value = half * kronrod;
    let err = (half * (kronrod - gauss)).norm();
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn integrate(text: &str, path: &[Complex], opt: &QuadOptions) -> Result<Complex, QuadError> {
        let e = parse_expr(text).unwrap();
        integrate_polyline(&mut |z| crate::expr::eval_jet(&e, z).map(|j| j.f), path, opt)
    }

    #[test]
    fn cubic_antiderivative() {
        // int z^2 from 0 to 1+i is (1+i)^3/3
        let v = integrate("z^2", &[c(0.0, 0.0), c(1.0, 1.0)], &QuadOptions::default()).unwrap();
        let expect = c(1.0, 1.0).powu(3) / 3.0;
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn polyline_equals_segment_for_entire_function() {
        let direct = integrate("e^z", &[c(0.0, 0.0), c(1.0, 1.0)], &QuadOptions::default()).unwrap();
        let bent = integrate(
            "e^z",
            &[c(0.0, 0.0), c(2.0, -1.0), c(1.0, 1.0)],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((direct - bent).norm() < 1e-12);
    }

    #[test]
    fn zero_length_segments_are_skipped() {
        let v = integrate(
            "z",
            &[c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_error_propagates() {
        let err = integrate("1/z", &[c(-1.0, 0.0), c(1.0, 0.0)], &QuadOptions::default());
        assert!(matches!(err, Err(QuadError::Eval(_))), "pole sits on a node");
    }

    #[test]
    fn depth_exhaustion_reports_tolerance() {
        let opt = QuadOptions { abs_tol: 1e-14, max_depth: 1 };
        let err = integrate("e^z", &[c(0.0, 0.0), c(40.0, 0.0)], &opt);
        assert!(matches!(err, Err(QuadError::Tolerance { .. })));
    }

    #[test]
    fn short_path_rejected() {
        assert!(matches!(
            integrate("z", &[c(0.0, 0.0)], &QuadOptions::default()),
            Err(QuadError::EmptyPath)
        ));
    }

    #[test]
    fn deterministic_bits() {
        let a = integrate("sin(z)*e^z", &[c(0.0, 0.0), c(1.5, 2.0)], &QuadOptions::default()).unwrap();
        let b = integrate("sin(z)*e^z", &[c(0.0, 0.0), c(1.5, 2.0)], &QuadOptions::default()).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
