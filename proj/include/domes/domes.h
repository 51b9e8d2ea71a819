#ifndef DOMES_H
#define DOMES_H

/* C interface to the domes library. Every function returns a domes_status;
   on failure domes_last_error() describes the problem for the calling thread.
   Handles are owned by the caller and released with the matching *_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(DOMES_BUILDING_LIBRARY)
#define DOMES_API __attribute__((visibility("default")))
#else
#define DOMES_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum domes_status {
  DOMES_OK = 0,
  DOMES_E_NULL = 1,          /* required pointer argument was NULL */
  DOMES_E_USAGE = 2,         /* bad argument value */
  DOMES_E_VALIDATION = 3,    /* input or result fails a geometric check */
  DOMES_E_NUMERIC = 4,       /* stall, closure or accuracy failure */
  DOMES_E_IO = 5,            /* file system or parse failure */
  DOMES_E_BUFFER = 6,        /* caller buffer too small */
  DOMES_E_INTERNAL = 7
} domes_status;

typedef struct domes_curve domes_curve;
typedef struct domes_surface domes_surface;
typedef struct domes_periodic domes_periodic;

DOMES_API const char* domes_version(void);
DOMES_API const char* domes_last_error(void);

/* Curves. `lengths` may be NULL, in which case lengths are measured and rounded. */
DOMES_API domes_status domes_curve_create(const double* xyz, const int* lengths, size_t n, domes_curve** out);
DOMES_API domes_status domes_curve_load(const char* path, domes_curve** out);
DOMES_API domes_status domes_curve_size(const domes_curve* c, size_t* n);
DOMES_API domes_status domes_curve_vertex(const domes_curve* c, size_t i, double xyz[3]);
DOMES_API void domes_curve_free(domes_curve* c);

/* Surfaces. Buffers hold 3 entries per vertex or face. */
DOMES_API domes_status domes_surface_counts(const domes_surface* s, size_t* vertices, size_t* faces);
DOMES_API domes_status domes_surface_vertices(const domes_surface* s, double* xyz, size_t capacity);
DOMES_API domes_status domes_surface_faces(const domes_surface* s, int* idx, size_t capacity);
DOMES_API domes_status domes_surface_load(const char* path, domes_surface** out);
/* `format` is "obj", "off" or NULL (from the extension). */
DOMES_API domes_status domes_surface_export(const domes_surface* s, const char* path, const char* format);
DOMES_API void domes_surface_free(domes_surface* s);

/* Constructions. */
DOMES_API domes_status domes_fan_dome(double a, int m, domes_surface** out);
DOMES_API domes_status domes_classical_dome(int n, domes_surface** out);
DOMES_API domes_status domes_ngon_dome(int n, int r, double theta0, domes_surface** out, double* closure_residual);
DOMES_API domes_status domes_dome_curve(const domes_curve* c, double eps, uint64_t seed, domes_surface** dome,
                                        domes_curve** curve_out, double* frechet);
DOMES_API domes_status domes_regular_polygon(int n, int r, domes_curve** out);

/* Checks. max_deviation may be NULL. */
DOMES_API domes_status domes_verify_dome(const domes_surface* s, const domes_curve* c, double tol, int* pass,
                                         double* max_deviation);

/* Doubly periodic surfaces and flexes. gram receives g11, g12, g22.
   confirmed may be NULL; when non-NULL, finite flexes are confirmed by path-following. */
DOMES_API domes_status domes_periodic_from_dome(const domes_surface* dome, domes_periodic** out);
DOMES_API domes_status domes_accordion(double t_first, double t_second, double t_connector, domes_periodic** out);
DOMES_API domes_status domes_periodic_gram(const domes_periodic* p, double gram[3]);
DOMES_API domes_status domes_periodic_patch(const domes_periodic* p, int k, domes_surface** out);
DOMES_API domes_status domes_periodic_flex_dimension(const domes_periodic* p, int* dim, int* confirmed);
DOMES_API domes_status domes_flex_dimension(const domes_surface* s, int* dim, int* confirmed);
DOMES_API void domes_periodic_free(domes_periodic* p);

/* Command-line entry point; returns the process exit code. */
DOMES_API int domes_cli_main(int argc, const char* const* argv);

#ifdef __cplusplus
}
#endif

#endif
