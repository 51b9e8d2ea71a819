#include "domes/domes.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "domes/cli.hpp"
#include "domes/dense_approx.hpp"
#include "domes/io.hpp"

struct domes_curve {
  domes::IntegralCurve curve;
};
struct domes_surface {
  domes::TriSurface surface;
};
struct domes_periodic {
  domes::PeriodicSurface surface;
};

namespace {

thread_local std::string g_last_error;

domes_status set_error(domes_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
domes_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const domes::Error& e) {
    return set_error(static_cast<domes_status>(domes::exit_code_for(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DOMES_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DOMES_E_INTERNAL, e.what());
  }
}

#define DOMES_REQUIRE(p) \
  if (!(p)) return set_error(DOMES_E_NULL, #p " is NULL")

template <class F>
domes_status flex(F&& analyse, int* dim, int* confirmed) {
  DOMES_REQUIRE(dim);
  return guarded([&] {
    domes::FlexOptions opt;
    opt.path_following = confirmed != nullptr;
    const domes::FlexReport rep = analyse(opt);
    *dim = rep.infinitesimal_dim;
    if (confirmed) *confirmed = rep.finite_flex_confirmed.value_or(0);
    return DOMES_OK;
  });
}

}  // namespace

extern "C" {

const char* domes_version(void) { return "1.0.0"; }

const char* domes_last_error(void) { return g_last_error.c_str(); }

domes_status domes_curve_create(const double* xyz, const int* lengths, size_t n, domes_curve** out) {
  DOMES_REQUIRE(xyz);
  DOMES_REQUIRE(out);
  return guarded([&] {
    if (n < 3) return set_error(DOMES_E_USAGE, "a closed curve needs at least 3 vertices");
    std::vector<domes::Point3> pts;
    for (size_t i = 0; i < n; ++i) pts.emplace_back(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    domes::IntegralCurve c;
    if (lengths) {
      c.vertices = std::move(pts);
      c.lengths.assign(lengths, lengths + n);
    } else {
      c = domes::IntegralCurve::rounded(std::move(pts));
    }
    const auto rep = domes::validate_curve(c);
    if (!rep.pass) return set_error(DOMES_E_VALIDATION, "edge " + std::to_string(rep.first_failing_edge) + " has the wrong length");
    *out = new domes_curve{std::move(c)};
    return DOMES_OK;
  });
}

domes_status domes_curve_load(const char* path, domes_curve** out) {
  DOMES_REQUIRE(path);
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_curve{domes::parse_curve(path)};
    return DOMES_OK;
  });
}

domes_status domes_curve_size(const domes_curve* c, size_t* n) {
  DOMES_REQUIRE(c);
  DOMES_REQUIRE(n);
  *n = c->curve.size();
  return DOMES_OK;
}

domes_status domes_curve_vertex(const domes_curve* c, size_t i, double xyz[3]) {
  DOMES_REQUIRE(c);
  DOMES_REQUIRE(xyz);
  if (i >= c->curve.size()) return set_error(DOMES_E_USAGE, "vertex index out of range");
  for (int k = 0; k < 3; ++k) xyz[k] = c->curve.vertices[i][k];
  return DOMES_OK;
}

void domes_curve_free(domes_curve* c) { delete c; }

domes_status domes_surface_counts(const domes_surface* s, size_t* vertices, size_t* faces) {
  DOMES_REQUIRE(s);
  if (vertices) *vertices = s->surface.vertices.size();
  if (faces) *faces = s->surface.faces.size();
  return DOMES_OK;
}

domes_status domes_surface_vertices(const domes_surface* s, double* xyz, size_t capacity) {
  DOMES_REQUIRE(s);
  DOMES_REQUIRE(xyz);
  const auto& v = s->surface.vertices;
  if (capacity < 3 * v.size()) return set_error(DOMES_E_BUFFER, "vertex buffer too small");
  for (size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 3; ++k) xyz[3 * i + k] = v[i][k];
  return DOMES_OK;
}

domes_status domes_surface_faces(const domes_surface* s, int* idx, size_t capacity) {
  DOMES_REQUIRE(s);
  DOMES_REQUIRE(idx);
  const auto& f = s->surface.faces;
  if (capacity < 3 * f.size()) return set_error(DOMES_E_BUFFER, "face buffer too small");
  for (size_t i = 0; i < f.size(); ++i)
    for (int k = 0; k < 3; ++k) idx[3 * i + k] = f[i][k];
  return DOMES_OK;
}

domes_status domes_surface_load(const char* path, domes_surface** out) {
  DOMES_REQUIRE(path);
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_surface{domes::import_mesh(path)};
    return DOMES_OK;
  });
}

domes_status domes_surface_export(const domes_surface* s, const char* path, const char* format) {
  DOMES_REQUIRE(s);
  DOMES_REQUIRE(path);
  return guarded([&] {
    if (format)
      domes::export_mesh(s->surface, path, domes::parse_mesh_format(format));
    else
      domes::export_mesh(s->surface, path);
    return DOMES_OK;
  });
}

void domes_surface_free(domes_surface* s) { delete s; }

domes_status domes_fan_dome(double a, int m, domes_surface** out) {
  DOMES_REQUIRE(out);
  return guarded([&] {
    if (!(a > 0 && a < 2)) return set_error(DOMES_E_USAGE, "axis diagonal must lie in (0, 2)");
    const domes::Point3 v(-a / 2, 0, 0), w(a / 2, 0, 0), start(0, -std::sqrt(1 - a * a / 4), 0);
    *out = new domes_surface{domes::fan_dome(v, w, start, m)};
    return DOMES_OK;
  });
}

domes_status domes_classical_dome(int n, domes_surface** out) {
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_surface{domes::classical_dome(n)};
    return DOMES_OK;
  });
}

domes_status domes_ngon_dome(int n, int r, double theta0, domes_surface** out, double* closure_residual) {
  DOMES_REQUIRE(out);
  return guarded([&] {
    domes::NgonOptions opt;
    opt.theta0 = theta0;
    auto res = domes::ngon_dome(n, r, {}, opt);
    if (closure_residual) *closure_residual = res.plan.closure_residual;
    *out = new domes_surface{std::move(res.surface)};
    return DOMES_OK;
  });
}

domes_status domes_dome_curve(const domes_curve* c, double eps, uint64_t seed, domes_surface** dome,
                              domes_curve** curve_out, double* frechet) {
  DOMES_REQUIRE(c);
  DOMES_REQUIRE(dome);
  return guarded([&] {
    domes::ApproxOptions opt;
    opt.seed = seed;
    auto res = domes::dome_curve(c->curve, eps, opt);
    if (frechet) *frechet = res.frechet;
    if (curve_out) *curve_out = new domes_curve{std::move(res.curve_out)};
    *dome = new domes_surface{std::move(res.dome)};
    return DOMES_OK;
  });
}

domes_status domes_regular_polygon(int n, int r, domes_curve** out) {
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_curve{domes::regular_polygon(n, r)};
    return DOMES_OK;
  });
}

domes_status domes_verify_dome(const domes_surface* s, const domes_curve* c, double tol, int* pass,
                               double* max_deviation) {
  DOMES_REQUIRE(s);
  DOMES_REQUIRE(c);
  DOMES_REQUIRE(pass);
  return guarded([&] {
    domes::Tolerance t;
    if (tol > 0) t.geom_tol = tol;
    const auto v = domes::verify_dome(s->surface, c->curve, t);
    *pass = v.pass ? 1 : 0;
    if (max_deviation) *max_deviation = std::max(v.max_edge_deviation, v.boundary_deviation);
    return DOMES_OK;
  });
}

domes_status domes_periodic_from_dome(const domes_surface* dome, domes_periodic** out) {
  DOMES_REQUIRE(dome);
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_periodic{domes::periodic_from_dome(dome->surface)};
    return DOMES_OK;
  });
}

domes_status domes_accordion(double t_first, double t_second, double t_connector, domes_periodic** out) {
  DOMES_REQUIRE(out);
  return guarded([&] {
    domes::AccordionConfig cfg;
    cfg.t_first = t_first;
    cfg.t_second = t_second;
    cfg.t_connector = t_connector;
    *out = new domes_periodic{domes::build_accordion(cfg).surface};
    return DOMES_OK;
  });
}

domes_status domes_periodic_gram(const domes_periodic* p, double gram[3]) {
  DOMES_REQUIRE(p);
  DOMES_REQUIRE(gram);
  const auto g = domes::gram_of(p->surface);
  gram[0] = g.g11;
  gram[1] = g.g12;
  gram[2] = g.g22;
  return DOMES_OK;
}

domes_status domes_periodic_patch(const domes_periodic* p, int k, domes_surface** out) {
  DOMES_REQUIRE(p);
  DOMES_REQUIRE(out);
  return guarded([&] {
    *out = new domes_surface{domes::materialize_patch(p->surface, k)};
    return DOMES_OK;
  });
}

domes_status domes_periodic_flex_dimension(const domes_periodic* p, int* dim, int* confirmed) {
  DOMES_REQUIRE(p);
  return flex([&](const domes::FlexOptions& o) { return domes::periodic_flex_dimension(p->surface, {}, o); }, dim,
              confirmed);
}

domes_status domes_flex_dimension(const domes_surface* s, int* dim, int* confirmed) {
  DOMES_REQUIRE(s);
  return flex([&](const domes::FlexOptions& o) { return domes::flex_dimension(s->surface, {}, o); }, dim, confirmed);
}

void domes_periodic_free(domes_periodic* p) { delete p; }

int domes_cli_main(int argc, const char* const* argv) {
  try {
    return domes::run_cli(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return domes::kExitNumeric;
  }
}

}  // extern "C"
