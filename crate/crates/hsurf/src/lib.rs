//! Synthesis and verification of surfaces built from three holomorphic
//! functions.
//!
//! A scalar field `h` on a planar domain, assembled from holomorphic data
//! `(g, A, B)`, determines a two-parameter family of spheres. The envelope
//! machinery in [`geometry`] produces, per point:
//!
//! * `Y`  — the unit-sphere congruence direction (inverse stereographic
//!   image of `g`),
//! * `eta` — a surface with unit normal `Y` (minimal when `h` comes from
//!   H1 data, Laguerre-minimal for H2 data),
//! * `N`  — a unit-vector congruence, and
//! * `X`  — the enveloped surface at offset constant `c`.
//!
//! [`field`] builds `h` from expression trees ([`expr`]), [`verify`] turns
//! every identity the construction promises into a numeric report,
//! [`rotational`] has closed-form profiles and a singularity scanner for
//! the rotationally symmetric cases, and [`mesh`] exports sampled grids.

pub mod expr;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod rotational;
pub mod verify;

mod jet;
mod parse;
mod quad;
mod realjet;

/// Complex scalar used throughout: `f64` real and imaginary parts.
pub type Complex = num_complex::Complex64;

pub use expr::{antiderivative, antiderivative_path, eval_jet, format_expr, parse_expr};
pub use expr::{EvalError, HoloExpr, Jet2, ParseError};
pub use field::{Field, FieldEval, HoloData, RealJet2, SurfaceClass};
pub use geometry::{curvature_report, frame_at, CurvatureReport, GeomError, SurfaceFrame};
pub use quad::{QuadError, QuadOptions};
