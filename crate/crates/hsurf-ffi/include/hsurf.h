/* C interface for the hsurf surface-synthesis library. */

#ifndef HSURF_H
#define HSURF_H

/* Generated from src/lib.rs by the crate build script; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HsStatus {
  /**
   * The call succeeded and any `out` parameter is filled in.
   */
  HS_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  HS_STATUS_NULL_ARGUMENT,
  /**
   * A string argument was not valid UTF-8.
   */
  HS_STATUS_INVALID_UTF8,
  /**
   * An expression string failed to parse; the message carries the byte
   * offset of the problem.
   */
  HS_STATUS_PARSE_ERROR,
  /**
   * The field data could not be evaluated at the requested point.
   */
  HS_STATUS_EVAL_ERROR,
  /**
   * Frame or curvature assembly hit a degenerate or singular point.
   */
  HS_STATUS_GEOMETRY_ERROR,
  /**
   * Grid sampling or export failed.
   */
  HS_STATUS_MESH_ERROR,
  /**
   * A file could not be created or written.
   */
  HS_STATUS_IO_ERROR,
} HsStatus;

/**
 * Which family a field belongs to.
 */
typedef enum HsClass {
  /**
   * The associated surface eta is minimal.
   */
  HS_CLASS_H1,
  /**
   * The associated surface eta is Laguerre-minimal.
   */
  HS_CLASS_H2,
} HsClass;

/**
 * Which map a sampled grid evaluates.
 */
typedef enum HsTarget {
  /**
   * The enveloped surface X; normals from the Gauss map N.
   */
  HS_TARGET_X,
  /**
   * The surface eta; normals from its Gauss map Y.
   */
  HS_TARGET_ETA,
  /**
   * The Gauss map image N on the unit sphere.
   */
  HS_TARGET_N,
  /**
   * The base sphere parameterization Y.
   */
  HS_TARGET_SPHERE,
} HsTarget;

/**
 * Opaque support-field handle; see the `hs_field_*` constructors.
 */
typedef struct HsField HsField;

/**
 * Opaque sampled-grid handle produced by [`hs_mesh_sample`].
 */
typedef struct HsMesh HsMesh;

/**
 * Value and derivatives of a real function of (u, v) up to second order.
 */
typedef struct HsJet {
  double val;
  double du;
  double dv;
  double duu;
  double duv;
  double dvv;
} HsJet;

/**
 * Complex number as a real pair.
 */
typedef struct HsComplex {
  double re;
  double im;
} HsComplex;

/**
 * Jets of the support field h and of the holomorphic g at one point.
 */
typedef struct HsFieldJet {
  /**
   * h with derivatives in the surface parameters.
   */
  struct HsJet h;
  /**
   * g at u + iv.
   */
  struct HsComplex g;
  /**
   * First derivative of g.
   */
  struct HsComplex g_d;
  /**
   * Second derivative of g.
   */
  struct HsComplex g_d2;
} HsFieldJet;

/**
 * Vector in R^3.
 */
typedef struct HsVec3 {
  double x;
  double y;
  double z;
} HsVec3;

/**
 * Everything the representation produces at a single parameter point.
 */
typedef struct HsFrame {
  /**
   * The parameter point u + iv.
   */
  struct HsComplex z;
  /**
   * Envelope offset constant the frame was built with.
   */
  double c;
  /**
   * T = 1 + |g|^2.
   */
  double t;
  /**
   * Conformal factor L = 4 |g'|^2 / T^2 of the sphere parameterization.
   */
  double l;
  /**
   * Jet of the support field at the point.
   */
  struct HsJet h;
  /**
   * Unit sphere congruence direction.
   */
  struct HsVec3 y;
  /**
   * Parameter derivatives of y.
   */
  struct HsVec3 y_u;
  struct HsVec3 y_v;
  /**
   * Surface with unit normal y.
   */
  struct HsVec3 eta;
  /**
   * S = <eta, eta>.
   */
  double s;
  /**
   * Unit normal congruence.
   */
  struct HsVec3 n;
  /**
   * Enveloped surface at offset c.
   */
  struct HsVec3 x;
  /**
   * Shape coefficient matrix, row-major 2x2.
   */
  double v[4];
  /**
   * P = det(S I - 2 (h + c) V); X is singular where |p| falls below
   * a small multiple of s^2.
   */
  double p;
} HsFrame;

/**
 * Curvature invariants at a regular point.
 */
typedef struct HsCurvature {
  /**
   * Symmetrized Weingarten matrix, row-major 2x2.
   */
  double w[4];
  /**
   * Principal curvatures, ascending.
   */
  double k1;
  double k2;
  double mean;
  double gauss;
  /**
   * <X, N>.
   */
  double psi;
  /**
   * |X|^2.
   */
  double lambda;
  /**
   * Radius function R = (1 - lambda) / (2 (psi - 1)).
   */
  double r;
  /**
   * Spherical radial curvatures s_i = (1 + k_i) / (1 - k_i R).
   */
  double s1;
  double s2;
  /**
   * Spherical mean curvature (s1 + s2) / 2.
   */
  double h_s;
  double tr_v;
  double det_v;
} HsCurvature;

/**
 * One sample of the rotational closed-form profiles: (m, n) traces the
 * surface X in the half-plane, (m1, n1) the surface eta.
 */
typedef struct HsProfileSample {
  double u;
  double m;
  double n;
  double m1;
  double n1;
  /**
   * P from the generic pipeline at (u, 0); NaN where the frame itself
   * degenerates.
   */
  double p;
  double det_v;
  bool singular_x;
  bool singular_eta;
} HsProfileSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on the calling thread; the empty
 * string if nothing failed yet. The pointer stays valid until the next
 * failing call on the same thread.
 */
const char *hs_last_error_message(void);

/**
 * Field from explicit holomorphic `(g, A, B)` expression strings; the
 * result is in the H2 family.
 *
 * # Safety
 * `g`, `a`, `b` are NUL-terminated strings; `out` receives the handle.
 */
enum HsStatus hs_field_h2(const char *g, const char *a, const char *b, struct HsField **out);

/**
 * Field from `(g, A)` expression strings and a constant `c1`; the result
 * is in the H1 family. The missing `B` is integrated along straight
 * segments from the base point with `B(base) = 0`; pass base (0, 0)
 * unless that segment would cross a pole of the data.
 *
 * # Safety
 * `g` and `a` are NUL-terminated strings; `out` receives the handle.
 */
enum HsStatus hs_field_h1(const char *g,
                          const char *a,
                          double c1,
                          double base_re,
                          double base_im,
                          struct HsField **out);

/**
 * H1 field generated by a single holomorphic `f` over `g`.
 *
 * # Safety
 * `f` and `g` are NUL-terminated strings; `out` receives the handle.
 */
enum HsStatus hs_field_from_f(const char *f, const char *g, struct HsField **out);

/**
 * Rotational H1 field over `g = e^z`.
 *
 * # Safety
 * `out` receives the handle.
 */
enum HsStatus hs_field_radial_h1(double a1, double a2, struct HsField **out);

/**
 * Rotational H2 field over `g = e^z`.
 *
 * # Safety
 * `out` receives the handle.
 */
enum HsStatus hs_field_radial_h2(double a2, double a3, double c1, double c2, struct HsField **out);

/**
 * Family of the field behind the handle.
 *
 * # Safety
 * `field` is NULL or a live handle; `out` receives the class.
 */
enum HsStatus hs_field_class(const struct HsField *field, enum HsClass *out);

/**
 * Releases a field handle; NULL is ignored.
 *
 * # Safety
 * `field` is NULL or a handle from an `hs_field_*` constructor that has
 * not been freed yet.
 */
void hs_field_free(struct HsField *field);

/**
 * Jets of the support field and of g at the parameter point (u, v).
 *
 * # Safety
 * `field` is a live handle; `out` receives the jets.
 */
enum HsStatus hs_field_eval(const struct HsField *field,
                            double u,
                            double v,
                            struct HsFieldJet *out);

/**
 * The full frame at the parameter point (u, v) with envelope offset `c`.
 *
 * # Safety
 * `field` is a live handle; `out` receives the frame.
 */
enum HsStatus hs_frame(const struct HsField *field,
                       double u,
                       double v,
                       double c,
                       struct HsFrame *out);

/**
 * Curvature invariants of X at the parameter point (u, v) with envelope
 * offset `c`. Fails on singular points, where the Weingarten matrix is
 * undefined.
 *
 * # Safety
 * `field` is a live handle; `out` receives the invariants.
 */
enum HsStatus hs_curvature(const struct HsField *field,
                           double u,
                           double v,
                           double c,
                           struct HsCurvature *out);

/**
 * Samples the chosen target over a regular (nu x nv) grid. Vertices where
 * the target is singular are masked rather than failing the whole grid;
 * see [`hs_mesh_singular`].
 *
 * # Safety
 * `field` is a live handle; `out` receives the mesh handle.
 */
enum HsStatus hs_mesh_sample(const struct HsField *field,
                             double c,
                             double u_min,
                             double u_max,
                             double v_min,
                             double v_max,
                             uintptr_t nu,
                             uintptr_t nv,
                             enum HsTarget target,
                             struct HsMesh **out);

/**
 * Number of grid vertices (nu * nv); 0 for NULL.
 *
 * # Safety
 * `mesh` is NULL or a live handle.
 */
uintptr_t hs_mesh_vertex_count(const struct HsMesh *mesh);

/**
 * Number of quads over unmasked cells; 0 for NULL.
 *
 * # Safety
 * `mesh` is NULL or a live handle.
 */
uintptr_t hs_mesh_quad_count(const struct HsMesh *mesh);

/**
 * Grid extents; either out pointer may be NULL.
 *
 * # Safety
 * `mesh` is NULL or a live handle; the out pointers are NULL or writable.
 */
void hs_mesh_grid(const struct HsMesh *mesh, uintptr_t *nu, uintptr_t *nv);

/**
 * Vertex positions, row-major with u varying fastest; NULL for NULL.
 * Masked vertices hold NaN coordinates.
 *
 * # Safety
 * `mesh` is NULL or a live handle; the buffer dies with the handle.
 */
const struct HsVec3 *hs_mesh_positions(const struct HsMesh *mesh);

/**
 * Unit normals, one per vertex; NULL for NULL.
 *
 * # Safety
 * `mesh` is NULL or a live handle; the buffer dies with the handle.
 */
const struct HsVec3 *hs_mesh_normals(const struct HsMesh *mesh);

/**
 * Quad corner indices, 4 per quad, counterclockwise, indexing the vertex
 * buffers; NULL for NULL.
 *
 * # Safety
 * `mesh` is NULL or a live handle; the buffer dies with the handle.
 */
const uint32_t *hs_mesh_quads(const struct HsMesh *mesh);

/**
 * Per-vertex singularity mask; NULL for NULL. Quads never touch a masked
 * vertex.
 *
 * # Safety
 * `mesh` is NULL or a live handle; the buffer dies with the handle.
 */
const bool *hs_mesh_singular(const struct HsMesh *mesh);

/**
 * Writes the mesh as Wavefront OBJ (positions, normals, quad faces).
 *
 * # Safety
 * `mesh` is a live handle; `path` is a NUL-terminated file path.
 */
enum HsStatus hs_mesh_write_obj(const struct HsMesh *mesh, const char *path);

/**
 * Releases a mesh handle; NULL is ignored.
 *
 * # Safety
 * `mesh` is NULL or a handle from [`hs_mesh_sample`] that has not been
 * freed yet.
 */
void hs_mesh_free(struct HsMesh *mesh);

/**
 * Closed-form profile of the rotational H1 family at one parameter value.
 *
 * # Safety
 * `out` receives the sample.
 */
enum HsStatus hs_rot_h1_profile(double a1,
                                double a2,
                                double c,
                                double u,
                                struct HsProfileSample *out);

/**
 * Closed-form profile of the rotational H2 family at one parameter value.
 *
 * # Safety
 * `out` receives the sample.
 */
enum HsStatus hs_rot_h2_profile(double a2,
                                double a3,
                                double c1,
                                double c2,
                                double c,
                                double u,
                                struct HsProfileSample *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSURF_H */
