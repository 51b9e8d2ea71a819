#include "domes/cli.hpp"

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "domes/flatten_pack.hpp"
#include "domes/io.hpp"

namespace domes {

namespace {

namespace fs = std::filesystem;

Json config_json(const RunConfig& c) {
  return Json{{"subcommand", c.subcommand}, {"inputs", c.inputs},   {"output", c.output},
              {"format", c.format},         {"plan", c.plan},       {"eps", c.eps},
              {"tol", c.tol},               {"seed", c.seed},       {"max_multiplier", c.max_multiplier},
              {"n", c.n},                   {"r", c.r},             {"theta0", c.theta0},
              {"bound", c.bound},           {"target", c.target},   {"perturb", c.perturb},
              {"patch", c.patch},           {"a", c.a},             {"m", c.m},
              {"accordion", c.accordion},   {"path_following", c.path_following},
              {"align", c.align}};
}

struct Session {
  const RunConfig& cfg;
  std::ostream& err;
  Tolerance tol;
  Json results = Json::object();
  Json outputs = Json::array();

  void log(const std::string& msg) const {
    if (cfg.verbosity > 0) err << "[" << cfg.subcommand << "] " << msg << "\n";
  }

  const std::string& input(std::size_t i, const char* what) const {
    if (cfg.inputs.size() <= i) fail(ErrorKind::Usage, std::string("missing input: ") + what);
    return cfg.inputs[i];
  }

  void record_output(const std::string& path) {
    outputs.push_back(Json{{"path", path}, {"fnv1a", hex64(fnv1a(read_text(path)))}});
  }

  // Writes a mesh and reloads it; unit meshes must stay unit after the round trip.
  void write_mesh(const TriSurface& s) {
    if (cfg.output.empty()) return;
    const MeshFormat format = cfg.format.empty() ? mesh_format_of(cfg.output) : parse_mesh_format(cfg.format);
    export_mesh(s, cfg.output, format);
    const TriSurface back = mesh_from_string(read_text(cfg.output), format);
    if (back.faces != s.faces || back.vertices.size() != s.vertices.size())
      fail(ErrorKind::Io, "re-import of '" + cfg.output + "' does not reproduce the mesh");
    if (s.unit_flag && max_unit_edge_deviation(back) > tol.geom_tol)
      fail(ErrorKind::Refine, "re-imported mesh has non-unit edges");
    record_output(cfg.output);
    log("wrote " + cfg.output);
  }

  void write_json(const Json& j) {
    if (cfg.output.empty()) return;
    write_text(cfg.output, j.dump(2) + "\n");
    record_output(cfg.output);
  }

  IntegralCurve curve(std::size_t i) const { return parse_curve(input(i, "curve JSON"), tol); }

  IntegralCurve generic_curve(std::size_t i) const {
    IntegralCurve c = curve(i);
    if (cfg.perturb > 0) c = perturb_generic(c, cfg.perturb, cfg.seed);
    return c;
  }

  void surface_summary(const TriSurface& s) {
    results["vertices"] = s.vertices.size();
    results["faces"] = s.faces.size();
  }
};

void verdict_or_fail(Session& ss, const DomeVerdict& v) {
  ss.results["verdict"] = to_json(v);
  if (!v.pass) {
    std::string why;
    for (const auto& r : v.reasons) why += (why.empty() ? "" : "; ") + r;
    fail(ErrorKind::Approximation, "constructed surface fails verification: " + why);
  }
}

void cmd_approx(Session& ss) {
  const IntegralCurve c = ss.curve(0);
  ApproxOptions opt;
  opt.seed = ss.cfg.seed;
  opt.max_multiplier = ss.cfg.max_multiplier;
  const ApproxResult res = dome_curve(c, ss.cfg.eps, opt);
  ss.surface_summary(res.dome);
  ss.results["frechet"] = res.frechet;
  ss.results["curve_out"] = curve_to_json(res.curve_out);
  ss.results["plan_log"] = to_json(res.log);
  verdict_or_fail(ss, verify_dome(res.dome, res.curve_out, ss.tol));
  if (!(res.frechet < ss.cfg.eps)) fail(ErrorKind::Approximation, "output curve is farther than eps");
  ss.write_mesh(res.dome);
}

void cmd_ngon(Session& ss) {
  NgonOptions opt;
  opt.theta0 = ss.cfg.theta0;
  opt.max_multiplier = ss.cfg.max_multiplier;
  const NgonResult res = ngon_dome(ss.cfg.n, ss.cfg.r, ss.tol, opt);
  ss.surface_summary(res.surface);
  ss.results["plan"] = to_json(res.plan);
  verdict_or_fail(ss, verify_dome(res.surface, regular_polygon(ss.cfg.n, ss.cfg.r), ss.tol));
  ss.write_mesh(res.surface);
}

void cmd_classical(Session& ss) {
  const TriSurface s = classical_dome(ss.cfg.n);
  ss.surface_summary(s);
  verdict_or_fail(ss, verify_dome(s, regular_polygon(ss.cfg.n), ss.tol));
  ss.write_mesh(s);
}

void cmd_rhombus(Session& ss) {
  const double a = ss.cfg.a;
  const Point3 v(-a / 2, 0, 0), w(a / 2, 0, 0), start(0, -std::sqrt(std::max(0.0, 1 - a * a / 4)), 0);
  const TriSurface s = fan_dome(v, w, start, ss.cfg.m, 1, ss.tol);
  const Point3 end = s.vertices.back();
  ss.surface_summary(s);
  ss.results["fan_angle"] = fan_angle(a);
  ss.results["chord"] = chord_length(a, std::abs(ss.cfg.m));
  ss.results["measured_chord"] = (end - start).norm();
  ss.results["boundary"] = curve_to_json(IntegralCurve::unit({v, start, w, end}));
  verdict_or_fail(ss, verify_dome(s, IntegralCurve::unit({v, start, w, end}), ss.tol));
  ss.write_mesh(s);
}

void cmd_flip(Session& ss) {
  if (ss.cfg.plan.empty()) fail(ErrorKind::Usage, "flip needs --plan");
  const IntegralCurve c = ss.curve(0);
  const FlipPlan plan = flip_plan_from_json(Json::parse(read_text(ss.cfg.plan)));
  const PlanResult res = apply_plan(c, plan, ss.tol);
  ss.surface_summary(res.surface);
  ss.results["steps"] = plan.steps.size();
  ss.results["curve"] = curve_to_json(res.curve);
  ss.results["frechet"] = frechet_distance(c, res.curve);
  ss.write_mesh(res.surface);
}

void cmd_planarize(Session& ss) {
  const IntegralCurve c = ss.generic_curve(0);
  const LinearFunctional f = LinearFunctional::random(ss.cfg.seed);
  PlanarizeOptions opt;
  opt.spread_target = ss.cfg.target;
  opt.max_multiplier = ss.cfg.max_multiplier;
  const PlanarizeResult res = planarize(c, f, opt, ss.tol);
  ss.results["functional"] = Json{{"coefficients", to_json(f.coefficients)}, {"offset", f.offset}};
  ss.results["spread"] = res.spread;
  ss.results["plan"] = to_json(res.plan);
  ss.results["curve"] = curve_to_json(res.curve);
  if (!ss.cfg.output.empty()) ss.write_mesh(apply_plan(c, res.plan, ss.tol).surface);
}

void cmd_pack(Session& ss) {
  const IntegralCurve c = ss.generic_curve(0);
  PackingConfig pc;
  pc.bound = ss.cfg.bound;
  PackOptions opt;
  opt.max_multiplier = ss.cfg.max_multiplier;
  const PackResult res = pack_curve(c, LinearFunctional::random(ss.cfg.seed), pc, opt, ss.tol);
  ss.results["max_radius"] = res.max_radius;
  ss.results["order"] = res.order;
  ss.results["planarize_steps"] = res.planarize_steps;
  ss.results["plan"] = to_json(res.plan);
  ss.results["curve"] = curve_to_json(res.curve);
  if (!ss.cfg.output.empty()) ss.write_mesh(apply_plan(c, res.plan, ss.tol).surface);
}

AccordionConfig accordion_config(std::uint64_t seed) {
  AccordionConfig ac;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(1.55, 2.04);
    ac.t_first = t(rng);
    ac.t_second = t(rng);
    ac.t_connector = t(rng);
  }
  return ac;
}

PeriodicSurface periodic_input(Session& ss) {
  if (ss.cfg.accordion) {
    const AccordionResult acc = build_accordion(accordion_config(ss.cfg.seed));
    ss.results["axis_rate"] = acc.axis_rate;
    ss.results["sigma"] = acc.sigma;
    return acc.surface;
  }
  const std::string& path = ss.input(0, "dome mesh or periodic JSON");
  if (fs::path(path).extension() == ".json") return periodic_from_json(Json::parse(read_text(path)));
  return periodic_from_dome(import_mesh(path), ss.tol);
}

void periodic_summary(Session& ss, const PeriodicSurface& p) {
  ss.results["gram"] = to_json(gram_of(p));
  ss.results["orbit_vertices"] = p.orbit_vertices.size();
  ss.results["face_orbits"] = p.faces.size();
}

void cmd_periodic(Session& ss) {
  const PeriodicSurface p = periodic_input(ss);
  periodic_summary(ss, p);
  ss.write_json(to_json(p));
}

void cmd_flex(Session& ss) {
  FlexOptions opt;
  opt.path_following = ss.cfg.path_following;
  Tolerance tol = ss.tol;
  const bool plain_mesh = !ss.cfg.accordion && !ss.cfg.inputs.empty() &&
                          fs::path(ss.cfg.inputs[0]).extension() != ".json" &&
                          boundary_loops(import_mesh(ss.cfg.inputs[0])).empty();
  FlexReport rep;
  if (plain_mesh) {
    const TriSurface s = import_mesh(ss.cfg.inputs[0]);
    ss.surface_summary(s);
    rep = flex_dimension(s, tol, opt);
  } else {
    const PeriodicSurface p = periodic_input(ss);
    periodic_summary(ss, p);
    rep = periodic_flex_dimension(p, tol, opt);
    if (ss.cfg.patch > 0) {
      if (ss.cfg.output.empty()) fail(ErrorKind::Usage, "--patch needs --out");
      ss.write_mesh(materialize_patch(p, ss.cfg.patch));
    }
  }
  ss.results["flex"] = to_json(rep);
}

void cmd_verify(Session& ss) {
  const TriSurface s = import_mesh(ss.input(0, "mesh"));
  const IntegralCurve c = ss.curve(1);
  const DomeVerdict v = verify_dome(s, c, ss.tol, ss.cfg.align);
  ss.surface_summary(s);
  ss.results["verdict"] = to_json(v);
  if (!v.pass) fail(ErrorKind::Precondition, "mesh is not a dome over the curve");
}

void validate_paths(const RunConfig& cfg) {
  for (const auto& in : cfg.inputs)
    if (!fs::is_regular_file(in)) fail(ErrorKind::Io, "input '" + in + "' does not exist");
  if (!cfg.plan.empty() && !fs::is_regular_file(cfg.plan)) fail(ErrorKind::Io, "plan '" + cfg.plan + "' does not exist");
  for (const std::string* out : {&cfg.output, &cfg.report}) {
    if (out->empty()) continue;
    const fs::path dir = fs::path(*out).parent_path();
    if (!dir.empty() && !fs::is_directory(dir)) fail(ErrorKind::Io, "directory of '" + *out + "' does not exist");
  }
  if (!cfg.format.empty()) parse_mesh_format(cfg.format);
  if (!(cfg.tol > 0)) fail(ErrorKind::Usage, "--tol must be positive");
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return kExitUsage;
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::Stall:
    case ErrorKind::Closure:
    case ErrorKind::Ring:
    case ErrorKind::Approximation:
    case ErrorKind::Perturbation:
    case ErrorKind::Packing:
      return kExitNumeric;
    default:
      return kExitValidation;
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Session ss{cfg, err, {cfg.tol, Tolerance{}.rank_tol}};
  Json report{{"schema_version", kSchemaVersion}, {"subcommand", cfg.subcommand}, {"seed", cfg.seed}};
  int code = kExitOk;
  try {
    validate_paths(cfg);
    std::uint64_t h = fnv1a(config_json(cfg).dump());
    for (const auto& in : cfg.inputs) h = fnv1a(read_text(in), h);
    if (!cfg.plan.empty()) h = fnv1a(read_text(cfg.plan), h);
    report["inputs_hash"] = hex64(h);

    static const std::map<std::string, void (*)(Session&)> commands{
        {"approx", cmd_approx},       {"ngon", cmd_ngon}, {"classical", cmd_classical},
        {"rhombus", cmd_rhombus},     {"flip", cmd_flip}, {"planarize", cmd_planarize},
        {"pack", cmd_pack},           {"periodic", cmd_periodic}, {"flex", cmd_flex},
        {"verify", cmd_verify}};
    const auto it = commands.find(cfg.subcommand);
    if (it == commands.end()) fail(ErrorKind::Usage, "unknown subcommand '" + cfg.subcommand + "'");
    it->second(ss);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    report["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
  } catch (const Json::exception& e) {
    code = kExitValidation;
    report["error"] = Json{{"kind", "malformed"}, {"message", e.what()}};
    err << "error (malformed): " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = kExitNumeric;
    report["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
  }
  report["exit_code"] = code;
  report["results"] = ss.results;
  report["outputs"] = ss.outputs;
  const std::string text = report.dump(2) + "\n";
  if (cfg.report.empty()) {
    out << text;
  } else {
    try {
      write_text(cfg.report, text);
    } catch (const Error& e) {
      err << "error (io): " << e.what() << "\n";
      return code == kExitOk ? kExitIo : code;
    }
  }
  return code;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Unit-triangle domes over space curves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "geometric tolerance");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.output, "output artifact path");
  app.add_option("--report", cfg.report, "run report path (stdout when omitted)");
  app.add_option("--format", cfg.format, "mesh format: obj or off");
  app.add_flag("-v,--verbose", cfg.verbosity, "log progress to stderr");

  auto inputs = [&](CLI::App* sub, const char* what) {
    sub->add_option("inputs", cfg.inputs, what);
  };
  CLI::App* approx = app.add_subcommand("approx", "dome a nearby curve");
  inputs(approx, "curve JSON");
  approx->add_option("--eps", cfg.eps, "Frechet accuracy")->check(CLI::PositiveNumber);
  approx->add_option("--max-multiplier", cfg.max_multiplier)->check(CLI::PositiveNumber);

  CLI::App* ngon = app.add_subcommand("ngon", "dome over a regular polygon");
  ngon->add_option("--n", cfg.n, "number of sides")->required()->check(CLI::Range(7, 1000000));
  ngon->add_option("--r", cfg.r, "side length")->check(CLI::PositiveNumber);
  ngon->add_option("--theta0", cfg.theta0, "starting tilt");
  ngon->add_option("--max-multiplier", cfg.max_multiplier)->check(CLI::PositiveNumber);

  CLI::App* classical = app.add_subcommand("classical", "explicit dome for small n");
  classical->add_option("--n", cfg.n)->required()->check(CLI::IsMember({3, 4, 5, 6, 8, 10, 12}));

  CLI::App* rhombus = app.add_subcommand("rhombus", "fan dome over a unit rhombus");
  rhombus->add_option("--a", cfg.a, "axis diagonal")->check(CLI::Range(0.0, 2.0));
  rhombus->add_option("--m", cfg.m, "signed multiplier");

  CLI::App* flip = app.add_subcommand("flip", "apply a flip plan");
  inputs(flip, "curve JSON");
  flip->add_option("--plan", cfg.plan, "flip plan JSON")->required();

  CLI::App* planar = app.add_subcommand("planarize", "flip towards a plane");
  inputs(planar, "curve JSON");
  planar->add_option("--target", cfg.target, "spread target")->check(CLI::PositiveNumber);
  planar->add_option("--perturb", cfg.perturb, "generic perturbation size");
  planar->add_option("--max-multiplier", cfg.max_multiplier)->check(CLI::PositiveNumber);

  CLI::App* pack = app.add_subcommand("pack", "flip to a packing curve");
  inputs(pack, "curve JSON");
  pack->add_option("--bound", cfg.bound, "packing radius")->check(CLI::PositiveNumber);
  pack->add_option("--perturb", cfg.perturb, "generic perturbation size");
  pack->add_option("--max-multiplier", cfg.max_multiplier)->check(CLI::PositiveNumber);

  CLI::App* periodic = app.add_subcommand("periodic", "doubly periodic surface from a rhombus dome");
  inputs(periodic, "dome mesh");
  periodic->add_flag("--accordion", cfg.accordion, "build the three-parameter accordion instead");

  CLI::App* flex = app.add_subcommand("flex", "count infinitesimal flexes");
  inputs(flex, "closed mesh, dome mesh or periodic JSON");
  flex->add_flag("--accordion", cfg.accordion, "analyse the accordion");
  flex->add_flag("--path-following", cfg.path_following, "confirm finite flexes");
  flex->add_option("--patch", cfg.patch, "export a k x k patch to --out")->check(CLI::NonNegativeNumber);

  CLI::App* verify = app.add_subcommand("verify", "check a mesh against a curve");
  inputs(verify, "mesh and curve JSON");
  verify->add_flag("--align", cfg.align, "compare after rigid alignment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace domes
