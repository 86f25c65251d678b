/* Build from the workspace root after `cargo build --release`:
 *
 *   cc crates/hsurf-ffi/examples/demo.c -Icrates/hsurf-ffi/include \
 *      -Ltarget/release -lhsurf_ffi -lm -o demo
 *   LD_LIBRARY_PATH=target/release ./demo
 *
 * Builds the sphere-enveloping field, prints the frame at one point,
 * and writes a catenoid mesh next to the executable.
 */
#include <stdio.h>
#include <stdlib.h>

#include "hsurf.h"

static void check(HsStatus status, const char *what) {
    if (status != HS_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status, hs_last_error_message());
        exit(1);
    }
}

int main(void) {
    HsField *sphere = NULL;
    check(hs_field_h2("z", "1", "z", &sphere), "hs_field_h2");

    HsFrame frame;
    check(hs_frame(sphere, 0.3, -0.2, 1.0, &frame), "hs_frame");
    printf("X = (%.6f, %.6f, %.6f), |X| should be 3\n", frame.x.x, frame.x.y, frame.x.z);

    HsCurvature curv;
    check(hs_curvature(sphere, 0.3, -0.2, 1.0, &curv), "hs_curvature");
    printf("psi = %.6f, radius function R = %.6f\n", curv.psi, curv.r);
    hs_field_free(sphere);

    HsField *catenoid = NULL;
    check(hs_field_radial_h1(1.0, 1.0, &catenoid), "hs_field_radial_h1");
    HsMesh *mesh = NULL;
    check(hs_mesh_sample(catenoid, 1.0, -2.0, 2.0, -3.141592653589793, 3.141592653589793,
                         65, 65, HS_TARGET_ETA, &mesh),
          "hs_mesh_sample");
    check(hs_mesh_write_obj(mesh, "catenoid.obj"), "hs_mesh_write_obj");
    printf("catenoid.obj: %zu vertices, %zu quads\n",
           (size_t)hs_mesh_vertex_count(mesh), (size_t)hs_mesh_quad_count(mesh));
    hs_mesh_free(mesh);
    hs_field_free(catenoid);
    return 0;
}
