// Command-line front end.
//
//   spaceform_float floatbody  SPEC --delta 1e-3 [--out f.json] [--csv]
//   spaceform_float floatarea  SPEC
//   spaceform_float converge   SPEC [--delta-grid 1e-5:1e-2:8]
//   spaceform_float sandwich   [SPEC] [--delta 1e-3]
//   spaceform_float valuation  [SPEC] [--cut-a 0.3 --cut-b -0.3]
//   spaceform_float invariance [--lambda L]
//   spaceform_float isoperimetric [SPEC] [--alpha A] [--r-max R]
//   spaceform_float semicontinuity
//   spaceform_float validate
//
// Exit codes: 0 ok, 1 a check failed, 2 empty floating body or inadmissible
// delta, 3 numeric failure, 64 usage or parse error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spaceform_float/spaceform_float.hpp"

namespace {

using namespace spaceform;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kEmpty = 2;
constexpr int kNumeric = 3;
constexpr int kUsage = 64;

struct Options {
  std::string spec_path;
  std::optional<double> lambda;
  std::optional<double> delta;
  std::string delta_grid;
  std::optional<int> directions;
  std::optional<int> resolution;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool csv = false;
  unsigned threads = 0;
  double cut_a = 0.3;
  double cut_b = -0.3;
  std::optional<double> alpha;
  double r_max = 3.0;
};

struct Output {
  json doc;
  std::string csv;
  int code = kOk;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw SpecError("cannot write '" + path + "'");
  f << text;
}

// JSON goes to --out (or stdout). With --csv the table goes to <out>.csv, or
// replaces the JSON on stdout when no --out is given.
void emit(const Options& o, const Output& r) {
  const std::string text = r.doc.dump(2) + "\n";
  if (!o.out.empty()) {
    write_file(o.out, text);
    if (o.csv) write_file(o.out + ".csv", r.csv);
  } else if (o.csv) {
    std::cout << r.csv;
  } else {
    std::cout << text;
  }
}

std::optional<BodySpec> maybe_spec(const Options& o) {
  if (o.spec_path.empty()) return std::nullopt;
  return load_spec(o.spec_path, o.lambda);
}

BodySpec require_spec(const Options& o) {
  if (o.spec_path.empty()) throw SpecError("this subcommand needs a SPEC file");
  return load_spec(o.spec_path, o.lambda);
}

// Flags override the spec, which overrides the defaults.
ExperimentConfig make_config(const Options& o, const BodySpec* s) {
  ExperimentConfig cfg;
  if (s) {
    cfg.lambda = s->lambda;
    if (s->directions) cfg.directions = *s->directions;
    if (s->resolution) cfg.resolution = *s->resolution;
    if (s->tol) cfg.tol = *s->tol;
    if (s->seed) cfg.seed = *s->seed;
    if (!s->delta_grid.empty()) cfg.delta_grid = s->delta_grid;
  }
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.directions) cfg.directions = *o.directions;
  if (o.resolution) cfg.resolution = *o.resolution;
  if (o.tol) cfg.tol = *o.tol;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.delta_grid.empty()) cfg.delta_grid = parse_delta_grid(o.delta_grid);
  if (cfg.directions < 8) throw SpecError("--directions must be at least 8");
  if (cfg.resolution < 8) throw SpecError("--resolution must be at least 8");
  if (!(cfg.tol > 0.0)) throw SpecError("--tol must be positive");
  return cfg;
}

double delta_of(const Options& o, const BodySpec* s, std::optional<double> fallback = std::nullopt) {
  if (o.delta) return *o.delta;
  if (s && s->delta) return *s->delta;
  if (fallback) return *fallback;
  throw SpecError("--delta is required (or a 'delta' field in the spec)");
}

std::string checks_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(17) << "experiment,check,passed,skipped,measured,reference,tolerance\n";
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      os << r.experiment << ',' << c.name << ',' << c.passed << ',' << c.skipped << ',' << c.measured << ','
         << c.reference << ',' << c.tolerance << '\n';
    }
  }
  return os.str();
}

Output report_output(const std::vector<ExperimentReport>& reports, double lambda, int n, const ExperimentConfig& cfg) {
  Output r;
  bool ok = true;
  json arr = json::array();
  for (const auto& rep : reports) {
    arr.push_back(to_json(rep));
    ok = ok && rep.passed();
  }
  r.doc = stamp({{"reports", arr}, {"passed", ok}}, lambda, n, cfg);
  r.csv = checks_csv(reports);
  r.code = ok ? kOk : kCheckFailed;
  return r;
}

template <int Dim>
json vec_json(const Vec<Dim>& v) {
  json a = json::array();
  for (int i = 0; i < Dim; ++i) a.push_back(v[i]);
  return a;
}

template <int Dim>
Output floatbody(const ConvexBody<Dim>& k, double delta, const ExperimentConfig& cfg) {
  const DirectionGrid<Dim> grid = detail::grid_with<Dim>(cfg.directions);
  const auto fb = floating_body<Dim>(k, delta, cfg.lambda, grid, cfg.cap);
  if (fb.empty) throw EmptyWulff("floating body is empty for delta = " + std::to_string(delta));
  Output r;
  json profile = json::array();
  std::ostringstream os;
  os << std::setprecision(17) << (Dim == 2 ? "vx,vy" : "vx,vy,vz") << ",support,depth,residual\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    profile.push_back({{"direction", vec_json<Dim>(grid.dirs[i])},
                       {"depth", fb.profile.depths[i]},
                       {"residual", fb.profile.residuals[i]}});
    for (int d = 0; d < Dim; ++d) os << grid.dirs[i][d] << ',';
    os << fb.profile.support[i] << ',' << fb.profile.depths[i] << ',' << fb.profile.residuals[i] << '\n';
  }
  json verts = json::array();
  for (const auto& v : fb.polytope().vertices()) verts.push_back(vec_json<Dim>(v));
  r.doc = stamp({{"delta", delta},
                 {"mu", fb.mu},
                 {"body", body_type<Dim>(k)},
                 {"profile", profile},
                 {"support", fb.profile.support},
                 {"hausdorff_gap_estimate", fb.gap_estimate},
                 {"floating_body_vertices", verts}},
                cfg.lambda, Dim, cfg);
  r.csv = os.str();
  return r;
}

template <int Dim>
Output floatarea(const ConvexBody<Dim>& k, const ExperimentConfig& cfg, std::optional<int> resolution) {
  const int res = resolution ? *resolution : default_boundary_resolution<Dim>();
  const FloatingAreaResult a = floating_area<Dim>(k, cfg.lambda, res);
  Output r;
  r.doc = stamp({{"body", body_type<Dim>(k)},
                 {"value", a.value},
                 {"quadrature_error", a.quadrature_error},
                 {"resolution", a.resolution},
                 {"lambda_volume", lambda_volume<Dim>(k, cfg.lambda, cfg.cap)}},
                cfg.lambda, Dim, cfg);
  std::ostringstream os;
  os << std::setprecision(17) << "value,quadrature_error,resolution\n"
     << a.value << ',' << a.quadrature_error << ',' << a.resolution << '\n';
  r.csv = os.str();
  return r;
}

template <int Dim>
Output converge(const ConvexBody<Dim>& k, const ExperimentConfig& cfg) {
  const ConvergenceReport rep = run_theorem1<Dim>(k, cfg);
  Output r;
  json body = to_json(rep);
  body["body"] = body_type<Dim>(k);
  r.doc = stamp(body, cfg.lambda, Dim, cfg);
  r.csv = quotients_csv(rep);
  return r;
}

// Calls f(std::integral_constant<int, n>, body) for the spec's dimension.
template <class F>
Output dispatch(const BodySpec& s, F&& f) {
  if (s.n == 2) return f(std::integral_constant<int, 2>{}, *s.body2);
  return f(std::integral_constant<int, 3>{}, *s.body3);
}

Output run(const std::string& cmd, const Options& o) {
  if (cmd == "floatbody") {
    const BodySpec s = require_spec(o);
    const ExperimentConfig cfg = make_config(o, &s);
    const double delta = delta_of(o, &s);
    return dispatch(s, [&](auto dim, const auto& k) { return floatbody<dim()>(k, delta, cfg); });
  }
  if (cmd == "floatarea") {
    const BodySpec s = require_spec(o);
    const ExperimentConfig cfg = make_config(o, &s);
    const std::optional<int> res = o.resolution ? o.resolution : s.resolution;
    return dispatch(s, [&](auto dim, const auto& k) { return floatarea<dim()>(k, cfg, res); });
  }
  if (cmd == "converge") {
    const BodySpec s = require_spec(o);
    const ExperimentConfig cfg = make_config(o, &s);
    return dispatch(s, [&](auto dim, const auto& k) { return converge<dim()>(k, cfg); });
  }
  if (cmd == "sandwich") {
    const auto s = maybe_spec(o);
    const ExperimentConfig cfg = make_config(o, s ? &*s : nullptr);
    const double delta = delta_of(o, s ? &*s : nullptr, 1e-3);
    if (!s) {
      std::vector<double> lambdas;
      if (o.lambda) lambdas = {*o.lambda};
      return report_output(run_sandwich_suite(cfg, lambdas, delta), cfg.lambda, 2, cfg);
    }
    return dispatch(*s, [&](auto dim, const auto& k) {
      return report_output({run_sandwich<dim()>(k, delta, cfg)}, cfg.lambda, dim(), cfg);
    });
  }
  if (cmd == "valuation") {
    const auto s = maybe_spec(o);
    const ExperimentConfig cfg = make_config(o, s ? &*s : nullptr);
    if (s) {
      if (s->n != 2) throw SpecError("valuation: only planar bodies are supported");
      const SmoothBase base = detail::smooth_base_from(s->source.at("body"), cfg.lambda);
      return report_output({run_valuation(base, o.cut_a, o.cut_b, cfg)}, cfg.lambda, 2, cfg);
    }
    return report_output({run_valuation(default_valuation_base(cfg.lambda), o.cut_a, o.cut_b, cfg)}, cfg.lambda, 2,
                         cfg);
  }
  if (cmd == "invariance") {
    const ExperimentConfig cfg = make_config(o, nullptr);
    return report_output({run_invariance(cfg)}, cfg.lambda, 2, cfg);
  }
  if (cmd == "isoperimetric") {
    const auto s = maybe_spec(o);
    const ExperimentConfig cfg = make_config(o, s ? &*s : nullptr);
    double alpha;
    if (o.alpha) {
      alpha = *o.alpha;
    } else if (s) {
      if (s->n != 2) throw SpecError("isoperimetric: only planar bodies are supported");
      alpha = lambda_volume<2>(*s->body2, cfg.lambda, cfg.cap);
    } else {
      // Area of the geodesic disk of radius 1 (π at λ = 0).
      alpha = lambda_volume<2>(ConvexBody<2>(Ellipsoid<2>::ball(cfg.lambda == 0.0 ? 1.0 : tan_lambda(1.0, cfg.lambda))),
                               cfg.lambda, cfg.cap);
    }
    const IsoperimetricProbeResult p = run_isoperimetric_probe(alpha, o.r_max, cfg);
    Output r;
    r.doc = stamp(to_json(p), cfg.lambda, 2, cfg);
    r.csv = family_csv(p);
    return r;
  }
  if (cmd == "semicontinuity") {
    ExperimentConfig cfg = make_config(o, nullptr);
    return report_output({run_semicontinuity_probe(cfg)}, cfg.lambda, 2, cfg);
  }
  if (cmd == "validate") {
    const ExperimentConfig cfg = make_config(o, nullptr);
    return report_output(run_validation_suite(cfg), cfg.lambda, 2, cfg);
  }
  throw SpecError("unknown subcommand '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floating bodies and floating areas in real space forms"};
  app.require_subcommand(1, 1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"floatbody", "Cap-depth profile and floating body of a spec body"},
      {"floatarea", "Floating area of a spec body"},
      {"converge", "Volume-difference quotients and their extrapolated limit"},
      {"sandwich", "Direction-wise comparison with Euclidean floating bodies"},
      {"valuation", "Valuation identity on a clipped smooth body"},
      {"invariance", "Isometry (and, at lambda = 0, affine) invariance"},
      {"isoperimetric", "Floating area over ellipses of fixed area"},
      {"semicontinuity", "Inscribed polygons converging to the unit disk"},
      {"validate", "Full property suite"}};

  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", o.spec_path, "JSON body specification")->check(CLI::ExistingFile);
    sub->add_option("--lambda", o.lambda, "Curvature (replaces the spec value)");
    sub->add_option("--delta", o.delta, "Floating-body parameter");
    sub->add_option("--delta-grid", o.delta_grid, "Geometric grid min:max:count");
    sub->add_option("--directions", o.directions, "Direction grid size");
    sub->add_option("--resolution", o.resolution, "Boundary quadrature resolution");
    sub->add_option("--tol", o.tol, "Relative tolerance for convergence checks");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--out", o.out, "Output JSON path (CSV goes to <out>.csv)");
    sub->add_flag("--csv", o.csv, "Also write the tabular part as CSV");
    sub->add_option("--threads", o.threads, "Worker thread cap (default: SPACEFORM_FLOAT_THREADS or all cores)");
    if (name == "valuation") {
      sub->add_option("--cut-a", o.cut_a, "K = B cut by x1 <= a");
      sub->add_option("--cut-b", o.cut_b, "L = B cut by x1 >= b");
    }
    if (name == "isoperimetric") {
      sub->add_option("--alpha", o.alpha, "Fixed lambda-area (default: the spec body's area)");
      sub->add_option("--r-max", o.r_max, "Largest aspect ratio");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (o.threads > 0) set_thread_count(o.threads);
  try {
    const Output r = run(cmd, o);
    emit(o, r);
    return r.code;
  } catch (const EmptyWulff& e) {
    std::cerr << "EmptyWulff: " << e.what() << '\n';
    return kEmpty;
  } catch (const OutOfRange& e) {
    std::cerr << "EmptyWulff: delta is not admissible: " << e.what() << '\n';
    return kEmpty;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}
