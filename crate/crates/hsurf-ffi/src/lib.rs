//! C ABI over the surface-synthesis library: opaque field handles, frame
//! and curvature evaluation, grid sampling with raw buffer access, and the
//! rotational closed-form profiles. The committed header lives in
//! `include/hsurf.h` and is regenerated on every build.
//!
//! Conventions, followed by every entry point:
//!
//! * Fallible functions return [`HsStatus`] and write their result through
//!   the trailing `out` pointer only on `HS_STATUS_OK`.
//! * On any other status a message describing the failure is stored per
//!   thread; read it with [`hs_last_error_message`].
//! * Handles received through `out` are owned by the caller and released
//!   exactly once with the matching `hs_*_free` function, which ignores
//!   NULL.
//! * Buffer pointers returned by the `hs_mesh_*` accessors borrow from the
//!   mesh handle and die with it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufWriter, Write};

use hsurf::geometry::GeomError;
use hsurf::linalg::Vec3;
use hsurf::mesh::{export_obj, sample_surface, GridSpec, MeshTarget, SurfaceMesh};
use hsurf::rotational::{rot_h1_profile, rot_h2_profile, ProfileSample, RotH1Params, RotH2Params};
use hsurf::{curvature_report, frame_at, parse_expr};
use hsurf::{Complex, CurvatureReport, Field, HoloExpr, RealJet2, SurfaceClass, SurfaceFrame};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    /// The call succeeded and any `out` parameter is filled in.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument,
    /// A string argument was not valid UTF-8.
    InvalidUtf8,
    /// An expression string failed to parse; the message carries the byte
    /// offset of the problem.
    ParseError,
    /// The field data could not be evaluated at the requested point.
    EvalError,
    /// Frame or curvature assembly hit a degenerate or singular point.
    GeometryError,
    /// Grid sampling or export failed.
    MeshError,
    /// A file could not be created or written.
    IoError,
}

/// Which family a field belongs to.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsClass {
    /// The associated surface eta is minimal.
    H1,
    /// The associated surface eta is Laguerre-minimal.
    H2,
}

/// Which map a sampled grid evaluates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsTarget {
    /// The enveloped surface X; normals from the Gauss map N.
    X,
    /// The surface eta; normals from its Gauss map Y.
    Eta,
    /// The Gauss map image N on the unit sphere.
    N,
    /// The base sphere parameterization Y.
    Sphere,
}

/// Complex number as a real pair.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsComplex {
    pub re: f64,
    pub im: f64,
}

/// Vector in R^3.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Value and derivatives of a real function of (u, v) up to second order.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsJet {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

/// Jets of the support field h and of the holomorphic g at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsFieldJet {
    /// h with derivatives in the surface parameters.
    pub h: HsJet,
    /// g at u + iv.
    pub g: HsComplex,
    /// First derivative of g.
    pub g_d: HsComplex,
    /// Second derivative of g.
    pub g_d2: HsComplex,
}

/// Everything the representation produces at a single parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsFrame {
    /// The parameter point u + iv.
    pub z: HsComplex,
    /// Envelope offset constant the frame was built with.
    pub c: f64,
    /// T = 1 + |g|^2.
    pub t: f64,
    /// Conformal factor L = 4 |g'|^2 / T^2 of the sphere parameterization.
    pub l: f64,
    /// Jet of the support field at the point.
    pub h: HsJet,
    /// Unit sphere congruence direction.
    pub y: HsVec3,
    /// Parameter derivatives of y.
    pub y_u: HsVec3,
    pub y_v: HsVec3,
    /// Surface with unit normal y.
    pub eta: HsVec3,
    /// S = <eta, eta>.
    pub s: f64,
    /// Unit normal congruence.
    pub n: HsVec3,
    /// Enveloped surface at offset c.
    pub x: HsVec3,
    /// Shape coefficient matrix, row-major 2x2.
    pub v: [f64; 4],
    /// P = det(S I - 2 (h + c) V); X is singular where |p| falls below
    /// a small multiple of s^2.
    pub p: f64,
}

/// Curvature invariants at a regular point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsCurvature {
    /// Symmetrized Weingarten matrix, row-major 2x2.
    pub w: [f64; 4],
    /// Principal curvatures, ascending.
    pub k1: f64,
    pub k2: f64,
    pub mean: f64,
    pub gauss: f64,
    /// <X, N>.
    pub psi: f64,
    /// |X|^2.
    pub lambda: f64,
    /// Radius function R = (1 - lambda) / (2 (psi - 1)).
    pub r: f64,
    /// Spherical radial curvatures s_i = (1 + k_i) / (1 - k_i R).
    pub s1: f64,
    pub s2: f64,
    /// Spherical mean curvature (s1 + s2) / 2.
    pub h_s: f64,
    pub tr_v: f64,
    pub det_v: f64,
}

/// One sample of the rotational closed-form profiles: (m, n) traces the
/// surface X in the half-plane, (m1, n1) the surface eta.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsProfileSample {
    pub u: f64,
    pub m: f64,
    pub n: f64,
    pub m1: f64,
    pub n1: f64,
    /// P from the generic pipeline at (u, 0); NaN where the frame itself
    /// degenerates.
    pub p: f64,
    pub det_v: f64,
    pub singular_x: bool,
    pub singular_eta: bool,
}

/// Opaque support-field handle; see the `hs_field_*` constructors.
pub struct HsField(Field);

/// Opaque sampled-grid handle produced by [`hs_mesh_sample`].
pub struct HsMesh {
    inner: SurfaceMesh,
    positions: Vec<HsVec3>,
    normals: Vec<HsVec3>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: HsStatus, message: impl std::fmt::Display) -> HsStatus {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("NUL bytes replaced above");
    });
    status
}

/// Message for the most recent failure on the calling thread; the empty
/// string if nothing failed yet. The pointer stays valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// # Safety
/// `ptr` must be NULL or point to a NUL-terminated string.
unsafe fn arg_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, HsStatus> {
    if ptr.is_null() {
        return Err(fail(HsStatus::NullArgument, format!("{what} is NULL")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(HsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn arg_expr(src: &str, what: &str) -> Result<HoloExpr, HsStatus> {
    parse_expr(src).map_err(|e| fail(HsStatus::ParseError, format!("{what}: {e}")))
}

/// # Safety
/// `out` must be NULL or valid for one write of `T`.
unsafe fn finish<T>(result: Result<T, HsStatus>, out: *mut T, what: &str) -> HsStatus {
    if out.is_null() {
        return fail(HsStatus::NullArgument, format!("{what} is NULL"));
    }
    match result {
        Ok(value) => {
            unsafe { out.write(value) };
            HsStatus::Ok
        }
        Err(status) => status,
    }
}

fn boxed(field: Field) -> *mut HsField {
    Box::into_raw(Box::new(HsField(field)))
}

fn vec3(v: Vec3) -> HsVec3 {
    HsVec3 { x: v.x, y: v.y, z: v.z }
}

fn complex(c: Complex) -> HsComplex {
    HsComplex { re: c.re, im: c.im }
}

fn jet(j: RealJet2) -> HsJet {
    HsJet { val: j.val, du: j.du, dv: j.dv, duu: j.duu, duv: j.duv, dvv: j.dvv }
}

fn frame_out(f: &SurfaceFrame) -> HsFrame {
    HsFrame {
        z: complex(f.z),
        c: f.c,
        t: f.t,
        l: f.l,
        h: jet(f.h),
        y: vec3(f.y),
        y_u: vec3(f.y_u),
        y_v: vec3(f.y_v),
        eta: vec3(f.eta),
        s: f.s,
        n: vec3(f.n),
        x: vec3(f.x),
        v: [f.v.a, f.v.b, f.v.c, f.v.d],
        p: f.p,
    }
}

fn curvature_out(r: &CurvatureReport) -> HsCurvature {
    HsCurvature {
        w: [r.w.a, r.w.b, r.w.c, r.w.d],
        k1: r.k1,
        k2: r.k2,
        mean: r.mean,
        gauss: r.gauss,
        psi: r.psi,
        lambda: r.lambda,
        r: r.r,
        s1: r.s1,
        s2: r.s2,
        h_s: r.h_s,
        tr_v: r.tr_v,
        det_v: r.det_v,
    }
}

fn profile_out(s: ProfileSample) -> HsProfileSample {
    HsProfileSample {
        u: s.u,
        m: s.m,
        n: s.n,
        m1: s.m1,
        n1: s.n1,
        p: s.p,
        det_v: s.det_v,
        singular_x: s.singular_x,
        singular_eta: s.singular_eta,
    }
}

fn geom_status(e: &GeomError) -> HsStatus {
    match e {
        GeomError::Field(_) => HsStatus::EvalError,
        _ => HsStatus::GeometryError,
    }
}

/// Field from explicit holomorphic `(g, A, B)` expression strings; the
/// result is in the H2 family.
///
/// # Safety
/// `g`, `a`, `b` are NUL-terminated strings; `out` receives the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_field_h2(
    g: *const c_char,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut HsField,
) -> HsStatus {
    let build = || {
        let g = arg_expr(unsafe { arg_str(g, "g") }?, "g")?;
        let a = arg_expr(unsafe { arg_str(a, "A") }?, "A")?;
        let b = arg_expr(unsafe { arg_str(b, "B") }?, "B")?;
        Ok(boxed(Field::h2(g, a, b)))
    };
    unsafe { finish(build(), out, "out") }
}

/// Field from `(g, A)` expression strings and a constant `c1`; the result
/// is in the H1 family. The missing `B` is integrated along straight
/// segments from the base point with `B(base) = 0`; pass base (0, 0)
/// unless that segment would cross a pole of the data.
///
/// # Safety
/// `g` and `a` are NUL-terminated strings; `out` receives the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_field_h1(
    g: *const c_char,
    a: *const c_char,
    c1: f64,
    base_re: f64,
    base_im: f64,
    out: *mut *mut HsField,
) -> HsStatus {
    let build = || {
        let g = arg_expr(unsafe { arg_str(g, "g") }?, "g")?;
        let a = arg_expr(unsafe { arg_str(a, "A") }?, "A")?;
        Ok(boxed(Field::h1_based(g, a, c1, Complex::new(base_re, base_im))))
    };
    unsafe { finish(build(), out, "out") }
}

/// H1 field generated by a single holomorphic `f` over `g`.
///
/// # Safety
/// `f` and `g` are NUL-terminated strings; `out` receives the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_field_from_f(
    f: *const c_char,
    g: *const c_char,
    out: *mut *mut HsField,
) -> HsStatus {
    let build = || {
        let f = arg_expr(unsafe { arg_str(f, "f") }?, "f")?;
        let g = arg_expr(unsafe { arg_str(g, "g") }?, "g")?;
        Ok(boxed(Field::prop_f(f, g)))
    };
    unsafe { finish(build(), out, "out") }
}

/// Rotational H1 field over `g = e^z`.
///
/// # Safety
/// `out` receives the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_field_radial_h1(
    a1: f64,
    a2: f64,
    out: *mut *mut HsField,
) -> HsStatus {
    unsafe { finish(Ok(boxed(Field::radial_h1(a1, a2))), out, "out") }
}

/// Rotational H2 field over `g = e^z`.
///
/// # Safety
/// `out` receives the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_field_radial_h2(
    a2: f64,
    a3: f64,
    c1: f64,
    c2: f64,
    out: *mut *mut HsField,
) -> HsStatus {
    unsafe { finish(Ok(boxed(Field::radial_h2(a2, a3, c1, c2))), out, "out") }
}

/// Family of the field behind the handle.
///
/// # Safety
/// `field` is NULL or a live handle; `out` receives the class.
#[no_mangle]
pub unsafe extern "C" fn hs_field_class(field: *const HsField, out: *mut HsClass) -> HsStatus {
    let run = || {
        if field.is_null() {
            return Err(fail(HsStatus::NullArgument, "field is NULL"));
        }
        Ok(match unsafe { &*field }.0.class() {
            SurfaceClass::H1 => HsClass::H1,
            SurfaceClass::H2 => HsClass::H2,
        })
    };
    unsafe { finish(run(), out, "out") }
}

/// Releases a field handle; NULL is ignored.
///
/// # Safety
/// `field` is NULL or a handle from an `hs_field_*` constructor that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hs_field_free(field: *mut HsField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Jets of the support field and of g at the parameter point (u, v).
///
/// # Safety
/// `field` is a live handle; `out` receives the jets.
#[no_mangle]
pub unsafe extern "C" fn hs_field_eval(
    field: *const HsField,
    u: f64,
    v: f64,
    out: *mut HsFieldJet,
) -> HsStatus {
    let run = || {
        if field.is_null() {
            return Err(fail(HsStatus::NullArgument, "field is NULL"));
        }
        let eval = unsafe { &*field }
            .0
            .eval(Complex::new(u, v))
            .map_err(|e| fail(HsStatus::EvalError, e))?;
        Ok(HsFieldJet {
            h: jet(eval.h),
            g: complex(eval.g.f),
            g_d: complex(eval.g.df),
            g_d2: complex(eval.g.d2f),
        })
    };
    unsafe { finish(run(), out, "out") }
}

/// The full frame at the parameter point (u, v) with envelope offset `c`.
///
/// # Safety
/// `field` is a live handle; `out` receives the frame.
#[no_mangle]
pub unsafe extern "C" fn hs_frame(
    field: *const HsField,
    u: f64,
    v: f64,
    c: f64,
    out: *mut HsFrame,
) -> HsStatus {
    let run = || {
        if field.is_null() {
            return Err(fail(HsStatus::NullArgument, "field is NULL"));
        }
        let frame = frame_at(&unsafe { &*field }.0, Complex::new(u, v), c)
            .map_err(|e| fail(geom_status(&e), e))?;
        Ok(frame_out(&frame))
    };
    unsafe { finish(run(), out, "out") }
}

/// Curvature invariants of X at the parameter point (u, v) with envelope
/// offset `c`. Fails on singular points, where the Weingarten matrix is
/// undefined.
///
/// # Safety
/// `field` is a live handle; `out` receives the invariants.
#[no_mangle]
pub unsafe extern "C" fn hs_curvature(
    field: *const HsField,
    u: f64,
    v: f64,
    c: f64,
    out: *mut HsCurvature,
) -> HsStatus {
    let run = || {
        if field.is_null() {
            return Err(fail(HsStatus::NullArgument, "field is NULL"));
        }
        let frame = frame_at(&unsafe { &*field }.0, Complex::new(u, v), c)
            .map_err(|e| fail(geom_status(&e), e))?;
        let report = curvature_report(&frame).map_err(|e| fail(geom_status(&e), e))?;
        Ok(curvature_out(&report))
    };
    unsafe { finish(run(), out, "out") }
}

/// Samples the chosen target over a regular (nu x nv) grid. Vertices where
/// the target is singular are masked rather than failing the whole grid;
/// see [`hs_mesh_singular`].
///
/// # Safety
/// `field` is a live handle; `out` receives the mesh handle.
#[allow(clippy::too_many_arguments)]
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_sample(
    field: *const HsField,
    c: f64,
    u_min: f64,
    u_max: f64,
    v_min: f64,
    v_max: f64,
    nu: usize,
    nv: usize,
    target: HsTarget,
    out: *mut *mut HsMesh,
) -> HsStatus {
    let run = || {
        if field.is_null() {
            return Err(fail(HsStatus::NullArgument, "field is NULL"));
        }
        let spec = GridSpec {
            u_min,
            u_max,
            v_min,
            v_max,
            nu,
            nv,
            target: match target {
                HsTarget::X => MeshTarget::X,
                HsTarget::Eta => MeshTarget::Eta,
                HsTarget::N => MeshTarget::N,
                HsTarget::Sphere => MeshTarget::Sphere,
            },
        };
        let inner = sample_surface(&unsafe { &*field }.0, c, &spec)
            .map_err(|e| fail(HsStatus::MeshError, e))?;
        let positions = inner.positions.iter().copied().map(vec3).collect();
        let normals = inner.normals.iter().copied().map(vec3).collect();
        Ok(Box::into_raw(Box::new(HsMesh { inner, positions, normals })))
    };
    unsafe { finish(run(), out, "out") }
}

/// Number of grid vertices (nu * nv); 0 for NULL.
///
/// # Safety
/// `mesh` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_vertex_count(mesh: *const HsMesh) -> usize {
    if mesh.is_null() {
        0
    } else {
        unsafe { &*mesh }.positions.len()
    }
}

/// Number of quads over unmasked cells; 0 for NULL.
///
/// # Safety
/// `mesh` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_quad_count(mesh: *const HsMesh) -> usize {
    if mesh.is_null() {
        0
    } else {
        unsafe { &*mesh }.inner.quads.len()
    }
}

/// Grid extents; either out pointer may be NULL.
///
/// # Safety
/// `mesh` is NULL or a live handle; the out pointers are NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_grid(mesh: *const HsMesh, nu: *mut usize, nv: *mut usize) {
    let (gu, gv) = if mesh.is_null() {
        (0, 0)
    } else {
        let m = unsafe { &*mesh };
        (m.inner.nu, m.inner.nv)
    };
    if !nu.is_null() {
        unsafe { nu.write(gu) };
    }
    if !nv.is_null() {
        unsafe { nv.write(gv) };
    }
}

/// Vertex positions, row-major with u varying fastest; NULL for NULL.
/// Masked vertices hold NaN coordinates.
///
/// # Safety
/// `mesh` is NULL or a live handle; the buffer dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_positions(mesh: *const HsMesh) -> *const HsVec3 {
    if mesh.is_null() {
        std::ptr::null()
    } else {
        unsafe { &*mesh }.positions.as_ptr()
    }
}

/// Unit normals, one per vertex; NULL for NULL.
///
/// # Safety
/// `mesh` is NULL or a live handle; the buffer dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_normals(mesh: *const HsMesh) -> *const HsVec3 {
    if mesh.is_null() {
        std::ptr::null()
    } else {
        unsafe { &*mesh }.normals.as_ptr()
    }
}

/// Quad corner indices, 4 per quad, counterclockwise, indexing the vertex
/// buffers; NULL for NULL.
///
/// # Safety
/// `mesh` is NULL or a live handle; the buffer dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_quads(mesh: *const HsMesh) -> *const u32 {
    if mesh.is_null() {
        std::ptr::null()
    } else {
        unsafe { &*mesh }.inner.quads.as_ptr().cast()
    }
}

/// Per-vertex singularity mask; NULL for NULL. Quads never touch a masked
/// vertex.
///
/// # Safety
/// `mesh` is NULL or a live handle; the buffer dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_singular(mesh: *const HsMesh) -> *const bool {
    if mesh.is_null() {
        std::ptr::null()
    } else {
        unsafe { &*mesh }.inner.singular.as_ptr()
    }
}

/// Writes the mesh as Wavefront OBJ (positions, normals, quad faces).
///
/// # Safety
/// `mesh` is a live handle; `path` is a NUL-terminated file path.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_write_obj(mesh: *const HsMesh, path: *const c_char) -> HsStatus {
    if mesh.is_null() {
        return fail(HsStatus::NullArgument, "mesh is NULL");
    }
    let path = match unsafe { arg_str(path, "path") } {
        Ok(p) => p,
        Err(status) => return status,
    };
    let file = match File::create(path) {
        Ok(f) => f,
        Err(e) => return fail(HsStatus::IoError, format!("{path}: {e}")),
    };
    let mut sink = BufWriter::new(file);
    if let Err(e) = export_obj(&unsafe { &*mesh }.inner, &mut sink) {
        return fail(HsStatus::MeshError, e);
    }
    match sink.flush() {
        Ok(()) => HsStatus::Ok,
        Err(e) => fail(HsStatus::IoError, format!("{path}: {e}")),
    }
}

/// Releases a mesh handle; NULL is ignored.
///
/// # Safety
/// `mesh` is NULL or a handle from [`hs_mesh_sample`] that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn hs_mesh_free(mesh: *mut HsMesh) {
    if !mesh.is_null() {
        drop(unsafe { Box::from_raw(mesh) });
    }
}

/// Closed-form profile of the rotational H1 family at one parameter value.
///
/// # Safety
/// `out` receives the sample.
#[no_mangle]
pub unsafe extern "C" fn hs_rot_h1_profile(
    a1: f64,
    a2: f64,
    c: f64,
    u: f64,
    out: *mut HsProfileSample,
) -> HsStatus {
    let sample = profile_out(rot_h1_profile(&RotH1Params { a1, a2, c }, u));
    unsafe { finish(Ok(sample), out, "out") }
}

/// Closed-form profile of the rotational H2 family at one parameter value.
///
/// # Safety
/// `out` receives the sample.
#[no_mangle]
pub unsafe extern "C" fn hs_rot_h2_profile(
    a2: f64,
    a3: f64,
    c1: f64,
    c2: f64,
    c: f64,
    u: f64,
    out: *mut HsProfileSample,
) -> HsStatus {
    let sample = profile_out(rot_h2_profile(&RotH2Params { a2, a3, c1, c2, c }, u));
    unsafe { finish(Ok(sample), out, "out") }
}
