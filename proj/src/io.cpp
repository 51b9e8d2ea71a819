#include "domes/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace domes {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void malformed(const std::string& field, const std::string& what) {
  fail(ErrorKind::Malformed, "field '" + field + "': " + what);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(key, "missing");
  return j.at(key);
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) malformed(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) malformed(field, "expected an integer");
  return j.get<int>();
}

// Line of a byte offset, 1-based.
std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Malformed, path + ": line " + std::to_string(line_of(text, e.byte)) + ": invalid JSON");
  }
}

}  // namespace

MeshFormat parse_mesh_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "obj") return MeshFormat::Obj;
  if (n == "off") return MeshFormat::Off;
  fail(ErrorKind::Usage, "unsupported mesh format '" + std::string(name) + "' (use obj or off)");
}

MeshFormat mesh_format_of(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  if (!ext.empty()) ext.erase(0, 1);
  return parse_mesh_format(ext);
}

Json to_json(const Point3& p) { return Json::array({p.x(), p.y(), p.z()}); }

Point3 point_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) malformed(field, "expected [x, y, z]");
  return {number(j[0], field), number(j[1], field), number(j[2], field)};
}

Json curve_to_json(const IntegralCurve& c) {
  Json v = Json::array();
  for (const Point3& p : c.vertices) v.push_back(to_json(p));
  return Json{{"vertices", v}, {"lengths", c.lengths}};
}

IntegralCurve curve_from_json(const Json& j) {
  const Json& v = member(j, "vertices");
  if (!v.is_array()) malformed("vertices", "expected an array");
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(point_from_json(v[i], "vertices[" + std::to_string(i) + "]"));
  if (pts.size() < 3) malformed("vertices", "a closed curve needs at least 3 vertices");
  if (!j.contains("lengths")) return IntegralCurve::rounded(std::move(pts));
  const Json& l = j.at("lengths");
  if (!l.is_array() || l.size() != pts.size()) malformed("lengths", "expected one length per vertex");
  IntegralCurve c;
  c.vertices = std::move(pts);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const int len = integer(l[i], "lengths[" + std::to_string(i) + "]");
    if (len < 1) malformed("lengths[" + std::to_string(i) + "]", "lengths are positive integers");
    c.lengths.push_back(len);
  }
  return c;
}

IntegralCurve parse_curve(const std::string& path, const Tolerance& tol) {
  const std::string text = read_text(path);
  IntegralCurve c;
  try {
    c = curve_from_json(parse_json(text, path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
  const CurveReport rep = validate_curve(c, tol);
  if (!rep.pass) {
    const int e = rep.first_failing_edge;
    fail(ErrorKind::Malformed, path + ": edge " + std::to_string(e) + " has length off by " +
                                   num17(rep.deviations[static_cast<std::size_t>(e)]));
  }
  return c;
}

void write_curve(const IntegralCurve& c, const std::string& path) {
  write_text(path, curve_to_json(c).dump(2) + "\n");
}

std::string mesh_to_string(const TriSurface& s, MeshFormat format) {
  std::ostringstream out;
  if (format == MeshFormat::Obj) {
    out << "# unit_flag " << (s.unit_flag ? 1 : 0) << "\n";
    for (const Point3& p : s.vertices) out << "v " << num17(p.x()) << ' ' << num17(p.y()) << ' ' << num17(p.z()) << '\n';
    for (const Face& f : s.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  } else {
    out << "OFF\n" << s.vertices.size() << ' ' << s.faces.size() << " 0\n";
    for (const Point3& p : s.vertices) out << num17(p.x()) << ' ' << num17(p.y()) << ' ' << num17(p.z()) << '\n';
    for (const Face& f : s.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  }
  return out.str();
}

TriSurface mesh_from_string(const std::string& text, MeshFormat format) {
  TriSurface s;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::Malformed, "line " + std::to_string(lineno) + ": " + what);
  };
  auto check_face = [&](const Face& f) {
    for (int i : f)
      if (i < 0 || i >= static_cast<int>(s.vertices.size())) bad("face index out of range");
  };
  if (format == MeshFormat::Obj) {
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string tag;
      if (!(ls >> tag)) continue;
      if (tag == "#") {
        std::string key;
        int flag = 1;
        if (ls >> key >> flag && key == "unit_flag") s.unit_flag = flag != 0;
      } else if (tag == "v") {
        double x, y, z;
        if (!(ls >> x >> y >> z)) bad("expected three coordinates");
        s.vertices.emplace_back(x, y, z);
      } else if (tag == "f") {
        std::vector<int> idx;
        std::string tok;
        while (ls >> tok) {
          try {
            idx.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
          } catch (const std::exception&) {
            bad("bad face index '" + tok + "'");
          }
        }
        if (idx.size() != 3) bad("only triangular faces are supported");
        const Face f{idx[0], idx[1], idx[2]};
        check_face(f);
        s.faces.push_back(f);
      }
    }
    return s;
  }
  auto next = [&](std::istringstream& ls) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ls.clear();
      ls.str(line);
      return true;
    }
    return false;
  };
  std::istringstream ls;
  std::string tag;
  if (!next(ls) || !(ls >> tag) || tag != "OFF") bad("missing OFF header");
  std::size_t nv = 0, nf = 0;
  if (!(ls >> nv)) {
    if (!next(ls)) bad("missing counts");
    ls >> nv;
  }
  if (!(ls >> nf)) bad("missing counts");
  for (std::size_t i = 0; i < nv; ++i) {
    double x, y, z;
    if (!next(ls) || !(ls >> x >> y >> z)) bad("expected a vertex");
    s.vertices.emplace_back(x, y, z);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    int k = 0;
    Face f{};
    if (!next(ls) || !(ls >> k)) bad("expected a face");
    if (k != 3) bad("only triangular faces are supported");
    if (!(ls >> f[0] >> f[1] >> f[2])) bad("expected three face indices");
    check_face(f);
    s.faces.push_back(f);
  }
  return s;
}

void export_mesh(const TriSurface& s, const std::string& path, MeshFormat format) {
  write_text(path, mesh_to_string(s, format));
}

void export_mesh(const TriSurface& s, const std::string& path) { export_mesh(s, path, mesh_format_of(path)); }

TriSurface import_mesh(const std::string& path) {
  const MeshFormat format = mesh_format_of(path);
  try {
    return mesh_from_string(read_text(path), format);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

Json to_json(const FlipPlan& plan) {
  Json steps = Json::array();
  for (const FlipStep& s : plan.steps) steps.push_back(Json::array({s.k, s.m}));
  return Json{{"steps", steps}};
}

FlipPlan flip_plan_from_json(const Json& j) {
  const Json& steps = member(j, "steps");
  if (!steps.is_array()) malformed("steps", "expected an array");
  FlipPlan plan;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string field = "steps[" + std::to_string(i) + "]";
    if (!steps[i].is_array() || steps[i].size() != 2) malformed(field, "expected [k, m]");
    plan.steps.push_back({integer(steps[i][0], field), integer(steps[i][1], field)});
  }
  return plan;
}

Json to_json(const NgonPlan& p) {
  return Json{{"n", p.n},           {"r", p.r},         {"theta", p.theta},
              {"theta0", p.theta0}, {"m_vector", p.m_vector}, {"tilts", p.tilts},
              {"gaps", p.gaps},     {"closure_residual", p.closure_residual},
              {"rings", p.rings},   {"replans", p.replans}};
}

Json to_json(const ApproxLog& log) {
  Json caps = Json::array();
  for (const CapLog& c : log.caps)
    caps.push_back(Json{{"curve_size", c.curve_size},
                        {"apex", to_json(c.apex)},
                        {"multipliers", c.multipliers},
                        {"errors", c.errors}});
  return Json{{"route", log.route},
              {"start", log.start},
              {"direction", log.direction},
              {"seed", log.seed},
              {"attempts", log.attempts},
              {"fan_tolerance", log.fan_tolerance},
              {"perturbation", log.perturbation},
              {"pre_plan", to_json(log.pre_plan)},
              {"pullback", to_json(log.pullback)},
              {"caps", caps},
              {"continuation_gap", log.continuation_gap}};
}

Json to_json(const DomeVerdict& v) {
  return Json{{"pass", v.pass},
              {"edges_unit", v.edges_unit},
              {"boundary_match", v.boundary_match},
              {"max_edge_deviation", v.max_edge_deviation},
              {"boundary_deviation", v.boundary_deviation},
              {"reasons", v.reasons}};
}

Json to_json(const FlexReport& r) {
  Json j{{"infinitesimal_dim", r.infinitesimal_dim},
         {"kernel_dim", r.kernel_dim},
         {"removed_modes", r.removed_modes},
         {"gap_ratio", std::isfinite(r.gap_ratio) ? Json(r.gap_ratio) : Json("inf")},
         {"coplanar", r.coplanar},
         {"singular_values", r.singular_values}};
  j["finite_flex_confirmed"] = r.finite_flex_confirmed ? Json(*r.finite_flex_confirmed) : Json(nullptr);
  return j;
}

Json to_json(const GramMatrix& g) { return Json{{"g11", g.g11}, {"g12", g.g12}, {"g22", g.g22}}; }

Json to_json(const PeriodicSurface& p) {
  Json verts = Json::array(), faces = Json::array();
  for (const Point3& v : p.orbit_vertices) verts.push_back(to_json(v));
  for (const PeriodicFace& f : p.faces) {
    Json face = Json::array();
    for (const LatticeRef& r : f) face.push_back(Json::array({r.vertex, r.p, r.q}));
    faces.push_back(face);
  }
  return Json{{"orbit_vertices", verts},
              {"faces", faces},
              {"alpha", to_json(p.alpha)},
              {"beta", to_json(p.beta)},
              {"unit_flag", p.unit_flag}};
}

PeriodicSurface periodic_from_json(const Json& j) {
  PeriodicSurface p;
  const Json& verts = member(j, "orbit_vertices");
  const Json& faces = member(j, "faces");
  if (!verts.is_array()) malformed("orbit_vertices", "expected an array");
  if (!faces.is_array()) malformed("faces", "expected an array");
  for (std::size_t i = 0; i < verts.size(); ++i)
    p.orbit_vertices.push_back(point_from_json(verts[i], "orbit_vertices[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string field = "faces[" + std::to_string(i) + "]";
    if (!faces[i].is_array() || faces[i].size() != 3) malformed(field, "expected three corners");
    PeriodicFace f{};
    for (std::size_t k = 0; k < 3; ++k) {
      const Json& c = faces[i][k];
      if (!c.is_array() || c.size() != 3) malformed(field, "corner is [vertex, p, q]");
      f[k] = {integer(c[0], field), integer(c[1], field), integer(c[2], field)};
    }
    p.faces.push_back(f);
  }
  p.alpha = point_from_json(member(j, "alpha"), "alpha");
  p.beta = point_from_json(member(j, "beta"), "beta");
  if (j.contains("unit_flag")) p.unit_flag = j.at("unit_flag").get<bool>();
  p.validate();
  return p;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "error reading '" + path + "'");
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorKind::Io, "error writing '" + path + "'");
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace domes
