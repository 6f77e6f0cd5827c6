#include "rigidlab/cli.hpp"

#include "rigidlab/algebra_suite.hpp"
#include "rigidlab/experiments.hpp"
#include "rigidlab/functionals.hpp"
#include "rigidlab/piola_check.hpp"
#include "rigidlab/report_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace rigidlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Raised for configuration problems detected after parsing.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Vec vec_from(const json& j, int dim, const std::string& what) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != dim) throw ConfigError(what + ": expected " + std::to_string(dim) + " entries");
  return Eigen::Map<const Vec>(v.data(), dim);
}

Exec exec_from(const json& cfg) {
  const std::string e = get_or<std::string>(cfg, "exec", "parallel");
  if (e == "parallel") return Exec::parallel;
  if (e == "serial") return Exec::serial;
  throw ConfigError("exec must be 'serial' or 'parallel'");
}

QuadratureRule rule_from(const json& j) {
  QuadratureRule r;
  if (j.is_null()) return r;
  require_keys(j, {"order", "subdivisions"}, "quadrature");
  r.order = get_or(j, "order", r.order);
  r.subdivisions = get_or(j, "subdivisions", r.subdivisions);
  if (r.order != 1 && r.order != 2) throw ConfigError("quadrature.order must be 1 or 2");
  if (r.subdivisions < 1) throw ConfigError("quadrature.subdivisions must be >= 1");
  return r;
}

EvalOptions eval_from(const json& cfg) {
  EvalOptions e;
  e.rule = rule_from(cfg.value("quadrature", json()));
  e.policy = parse_chart_policy(get_or<std::string>(cfg, "policy", "strict"));
  e.exec = exec_from(cfg);
  return e;
}

OptimizerConfig optimizer_from(const json& j, const EvalOptions& eval, std::uint64_t seed) {
  OptimizerConfig o;
  o.eval = eval;
  o.seed = seed;
  if (!j.is_null()) {
    require_keys(j, {"method", "memory", "max_iters", "grad_tol", "energy_tol", "armijo_c", "shrink", "max_trials"},
                 "optimizer");
    if (j.contains("method")) o.method = parse_opt_method(j.at("method").get<std::string>());
    o.memory = get_or(j, "memory", o.memory);
    o.max_iters = get_or(j, "max_iters", o.max_iters);
    o.grad_tol = get_or(j, "grad_tol", o.grad_tol);
    o.energy_tol = get_or(j, "energy_tol", o.energy_tol);
    o.armijo_c = get_or(j, "armijo_c", o.armijo_c);
    o.shrink = get_or(j, "shrink", o.shrink);
    o.max_trials = get_or(j, "max_trials", o.max_trials);
  }
  o.validate();
  return o;
}

MetricField metric_from(const json& side, const ChartGrid& fallback_chart) {
  require_keys(side, {"grid", "metric"}, "metric side");
  const ChartGrid chart = grid_from_config(side.value("grid", json::object()), fallback_chart);
  return make_metric(metric_spec_from_config(side.value("metric", json("euclidean"))), chart);
}

// ---- run context -----------------------------------------------------------------

struct Context {
  std::string command;
  std::string label;
  fs::path out;
  std::uint64_t seed = 42;
  int dim = 2;
  int threads = 1;
  bool inject_fault = false;
  json config;  // effective config after overrides
  std::vector<std::string> outputs;
  json resolutions = json::array();

  fs::path path(const std::string& ext) {
    const std::string name = command + "_" + label + "." + ext;
    outputs.push_back(name);
    return out / name;
  }
  void finish() {
    write_json(out / (command + "_" + label + ".manifest.json"),
               make_manifest(command, label, config, resolutions, outputs, seed, threads));
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- commands ----------------------------------------------------------------

int cmd_check_algebra(Context& ctx) {
  const json& c = ctx.config;
  require_keys(c, {"label", "seed", "dim", "cases", "fd_cases"}, "check-algebra");
  AlgebraSuiteConfig cfg;
  cfg.dim = ctx.dim;
  cfg.seed = ctx.seed;
  cfg.cases = get_or<std::size_t>(c, "cases", cfg.cases);
  cfg.fd_cases = get_or<std::size_t>(c, "fd_cases", cfg.fd_cases);
  cfg.inject_cofactor_fault = ctx.inject_fault;
  const AlgebraSuiteReport rep = run_algebra_suite(cfg);
  write_json(ctx.path("json"), to_json(rep));
  ctx.finish();

  std::size_t passed = 0;
  for (const auto& p : rep.properties) passed += p.passed();
  std::cout << "check-algebra d=" << rep.dim << ": " << passed << "/" << rep.properties.size()
            << " properties passed over " << cfg.cases << " cases";
  for (const auto& p : rep.properties) {
    if (!p.passed()) std::cout << "; FAILED " << p.name << " (" << p.failures << " cases)";
  }
  std::cout << "\n";
  return rep.all_passed() ? kExitOk : kExitPropertyFailed;
}

int cmd_energy(Context& ctx) {
  const json& c = ctx.config;
  require_keys(c, {"label", "seed", "dim", "source", "target", "map", "p", "functional", "quadrature", "policy", "exec"},
               "energy");
  const int d = ctx.dim;
  const MetricField g = metric_from(c.value("source", json::object()), ChartGrid::unit(d, 17));
  const MetricField h = metric_from(c.value("target", json::object()),
                                    ChartGrid::box(Vec::Constant(d, -2.0), Vec::Constant(d, 3.0), 9));
  const DiscreteMap f = DiscreteMap::sample(g.chart, analytic_map(c.value("map", json("identity")), d));
  const double p = get_or(c, "p", 2.0);
  const std::string functional = get_or<std::string>(c, "functional", "elastic");
  const EvalOptions eval = eval_from(c);
  ctx.resolutions = g.chart.node_counts();

  EnergyReport rep;
  if (functional == "elastic") {
    rep = elastic_energy(f, g, h, p, eval);
    if (p > 1.0) rep.grad_norm = gradient_max_norm(f, energy_gradient(f, g, h, p, eval).gradient);
  } else if (functional == "metric_defect") {
    rep = metric_defect_energy(f, g, h, p, eval);
  } else if (functional == "jacobian") {
    rep.functional = "jacobian";
    rep.p = p;
    rep.energy = jacobian_functional(f, g, h, eval);
  } else {
    throw ConfigError("functional must be elastic, metric_defect or jacobian");
  }
  write_json(ctx.path("json"), to_json(rep));
  if (!rep.per_cell.empty()) {
    per_cell_csv(g.chart, rep.per_cell).write(ctx.path("csv"));
    if (d == 2) write_text(ctx.path("svg"), svg_heatmap(g.chart, rep.per_cell, rep.functional + " density"));
  }
  ctx.finish();
  std::cout << "energy " << rep.functional << " p=" << num(p) << ": " << num(rep.energy) << "\n";
  return kExitOk;
}

int cmd_minimize(Context& ctx) {
  const json& c = ctx.config;
  const std::string experiment = get_or<std::string>(c, "experiment", "flat");
  const EvalOptions eval = eval_from(c);
  const OptimizerConfig opt = optimizer_from(c.value("optimizer", json()), eval, ctx.seed);

  if (experiment == "flat") {
    require_keys(c, {"label", "seed", "dim", "experiment", "cells", "amplitude", "boundary", "angle", "p",
                     "optimizer", "quadrature", "policy", "exec"},
                 "minimize");
    FlatRunConfig cfg;
    cfg.dim = ctx.dim;
    cfg.seed = ctx.seed;
    cfg.cells = get_or(c, "cells", cfg.cells);
    cfg.amplitude = get_or(c, "amplitude", cfg.amplitude);
    cfg.boundary = parse_boundary_kind(get_or<std::string>(c, "boundary", "identity"));
    cfg.angle = get_or(c, "angle", cfg.angle);
    cfg.p = get_or(c, "p", cfg.p);
    cfg.optimizer = opt;
    ctx.resolutions = json::array({cfg.cells});
    const FlatRunReport rep = rigidity_flat_run(cfg);
    write_json(ctx.path("json"), to_json(rep));
    trace_csv(rep.trace).write(ctx.path("csv"));
    if (cfg.dim == 2) {
      const ChartGrid& grid = rep.final_map.source();
      const MetricField g = euclidean_metric(grid);
      const MetricField h = euclidean_metric(ChartGrid::box(Vec::Constant(2, -2.0), Vec::Constant(2, 3.0), 2));
      const EnergyReport e = elastic_energy(rep.final_map, g, h, cfg.p, eval);
      write_text(ctx.path("svg"), svg_heatmap(grid, e.per_cell, "final distortion density"));
    }
    ctx.finish();
    std::cout << "minimize flat " << to_string(cfg.boundary) << ": energy " << num(rep.initial_energy) << " -> "
              << num(rep.final_energy) << " (" << rep.trace.reason << ", " << rep.trace.iterations
              << " iterations), sup to target " << num(rep.sup_to_target) << "\n";
    return kExitOk;
  }
  if (experiment == "sphere") {
    require_keys(c, {"label", "seed", "dim", "experiment", "cap_side", "radius", "resolutions", "p",
                     "target_half_width", "fit_cells", "sweep_sides", "sweep_cells", "optimizer", "quadrature",
                     "policy", "exec"},
                 "minimize");
    SphereRunConfig cfg;
    cfg.cap_side = get_or(c, "cap_side", cfg.cap_side);
    cfg.radius = get_or(c, "radius", cfg.radius);
    cfg.resolutions = get_or(c, "resolutions", cfg.resolutions);
    cfg.p = get_or(c, "p", cfg.p);
    cfg.target_half_width = get_or(c, "target_half_width", cfg.target_half_width);
    cfg.fit_cells = get_or(c, "fit_cells", cfg.fit_cells);
    cfg.sweep_sides = get_or(c, "sweep_sides", cfg.sweep_sides);
    cfg.sweep_cells = get_or(c, "sweep_cells", cfg.sweep_cells);
    cfg.optimizer = opt;
    ctx.resolutions = cfg.resolutions;
    const SphereRunReport rep = rigidity_sphere_run(cfg);
    write_json(ctx.path("json"), to_json(rep));
    CsvTable csv({"cells", "initial_energy", "final_energy", "iterations", "reason"});
    for (const auto& r : rep.rows) {
      csv.add_row({static_cast<long long>(r.cells), r.initial_energy, r.final_energy,
                   static_cast<long long>(r.iterations), r.reason});
    }
    csv.write(ctx.path("csv"));
    ctx.finish();
    std::cout << "minimize sphere: final energy " << num(rep.rows.back().final_energy) << " at "
              << rep.rows.back().cells << " cells, finest/coarsest ratio " << num(rep.ratio) << "\n";
    return kExitOk;
  }
  throw ConfigError("minimize.experiment must be 'flat' or 'sphere'");
}

int cmd_piola(Context& ctx) {
  const json& c = ctx.config;
  require_keys(c, {"label", "seed", "dim", "cases", "coarse_cells", "levels", "exec"}, "piola");
  std::vector<std::string> names =
      get_or(c, "cases", std::vector<std::string>{"flat_affine", "flat_smooth", "sphere_target", "weak_cofactor",
                                                   "weak_isometry"});
  const int coarse = get_or(c, "coarse_cells", 16);
  const int levels = get_or(c, "levels", 3);
  if (coarse < 1 || levels < 1) throw ConfigError("piola: coarse_cells and levels must be positive");
  const Exec exec = exec_from(c);
  for (int l = 0; l < levels; ++l) ctx.resolutions.push_back(coarse << l);

  std::vector<PiolaStudy> studies;
  json doc = json::array();
  std::vector<PlotSeries> series;
  for (const auto& name : names) {
    studies.push_back(run_piola_study(parse_piola_case(name), coarse, levels, ctx.seed, exec));
    doc.push_back(to_json(studies.back()));
    PlotSeries s{name, {}, {}};
    for (const auto& r : studies.back().rows) s.x.push_back(r.h), s.y.push_back(std::abs(r.residual));
    series.push_back(std::move(s));
  }
  write_json(ctx.path("json"), json{{"studies", doc}});
  piola_csv(studies).write(ctx.path("csv"));
  write_text(ctx.path("svg"), svg_loglog(series, "Piola residuals", "h", "|residual|"));
  ctx.finish();
  std::cout << "piola:";
  for (const auto& s : studies) {
    std::cout << " " << to_string(s.which) << " max|r|=" << num(s.max_abs_residual);
    if (levels > 1) std::cout << " order=" << num(s.order);
    std::cout << ";";
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_converge(Context& ctx) {
  const json& c = ctx.config;
  require_keys(c, {"label", "seed", "dim", "family", "n", "epsilon", "sigma", "p", "q", "cells", "exec"}, "converge");
  const std::string family = get_or<std::string>(c, "family", "striped");
  const auto ns = get_or(c, "n", std::vector<int>{5, 10, 20, 40});
  const double p = get_or(c, "p", 2.0), q = get_or(c, "q", 2.0);
  if (ns.empty()) throw ConfigError("converge.n must not be empty");
  ConvergenceSequence seq = [&] {
    if (family == "striped") return striped_sequence(ns, get_or(c, "epsilon", 0.1), get_or(c, "sigma", 0.0));
    if (family == "euclidean") return euclidean_sequence(ns, get_or(c, "cells", 8));
    throw ConfigError("converge.family must be 'striped' or 'euclidean'");
  }();
  for (const auto& m : seq.maps) ctx.resolutions.push_back(m.source().cells(0));
  const ConvergenceReport rep = pq_convergence_report(seq, p, q, exec_from(c));
  write_json(ctx.path("json"), to_json(rep));
  convergence_csv(rep).write(ctx.path("csv"));
  std::vector<PlotSeries> series(4);
  series[0].name = "forward", series[1].name = "inverse", series[2].name = "det", series[3].name = "det inverse";
  for (const auto& r : rep.rows) {
    const double vals[4] = {r.forward, r.inverse, r.det, r.det_inverse};
    for (int k = 0; k < 4; ++k) series[k].x.push_back(r.n), series[k].y.push_back(vals[k]);
  }
  write_text(ctx.path("svg"), svg_loglog(series, family + " p=" + num(p) + " q=" + num(q), "n", "norm"));
  ctx.finish();
  std::cout << "converge " << family << " p=" << num(p) << " q=" << num(q) << ": forward slope "
            << num(rep.slope_forward) << ", inverse slope " << num(rep.slope_inverse) << "\n";
  return kExitOk;
}

int cmd_geodesic(Context& ctx) {
  const json& c = ctx.config;
  require_keys(c, {"label", "seed", "dim", "grid", "metric", "a", "b", "resolutions"}, "geodesic");
  const MetricField field = metric_from(json{{"grid", c.value("grid", json::object())},
                                             {"metric", c.value("metric", json("euclidean"))}},
                                        ChartGrid::unit(2, 17));
  if (field.dim() != 2) throw DomainError("geodesic: 2-d charts only");
  const Vec a = c.contains("a") ? vec_from(c.at("a"), 2, "geodesic.a") : field.chart.lower();
  const Vec b = c.contains("b") ? vec_from(c.at("b"), 2, "geodesic.b") : field.chart.upper();
  const auto res = get_or(c, "resolutions", std::vector<int>{64, 128, 256});
  if (res.empty()) throw ConfigError("geodesic.resolutions must not be empty");
  ctx.resolutions = res;
  CsvTable csv({"resolution", "distance"});
  json rows = json::array();
  double last = 0.0;
  for (int r : res) {
    last = graph_geodesic(field, a, b, r);
    csv.add_row({static_cast<long long>(r), last});
    rows.push_back({{"resolution", r}, {"distance", last}});
  }
  write_json(ctx.path("json"), json{{"a", {a(0), a(1)}}, {"b", {b(0), b(1)}}, {"rows", rows}, {"distance", last}});
  csv.write(ctx.path("csv"));
  ctx.finish();
  std::cout << "geodesic: distance " << num(last) << " at resolution " << res.back() << "\n";
  return kExitOk;
}

}  // namespace

// ---- config helpers ----------------------------------------------------------------

ChartGrid grid_from_config(const json& j, const ChartGrid& fallback) {
  require_keys(j, {"lower", "upper", "nodes"}, "grid");
  const int d = fallback.dim();
  const Vec lo = j.contains("lower") ? vec_from(j.at("lower"), d, "grid.lower") : fallback.lower();
  const Vec hi = j.contains("upper") ? vec_from(j.at("upper"), d, "grid.upper") : fallback.upper();
  std::vector<int> nodes = fallback.node_counts();
  if (j.contains("nodes")) {
    if (j.at("nodes").is_number_integer()) {
      nodes.assign(d, j.at("nodes").get<int>());
    } else {
      nodes = j.at("nodes").get<std::vector<int>>();
      if (static_cast<int>(nodes.size()) != d) throw ConfigError("grid.nodes: wrong number of entries");
    }
  }
  for (int n : nodes) {
    if (n < 2) throw ConfigError("grid.nodes must be >= 2");
  }
  for (int k = 0; k < d; ++k) {
    if (!(hi(k) > lo(k))) throw ConfigError("grid: upper must exceed lower");
  }
  return ChartGrid(lo, hi, nodes);
}

BuiltinMetric metric_spec_from_config(const json& j) {
  BuiltinMetric m;
  if (j.is_string()) {
    m.tag = parse_metric_tag(j.get<std::string>());
    return m;
  }
  require_keys(j, {"tag", "radius", "n", "epsilon", "sigma"}, "metric");
  m.tag = parse_metric_tag(j.at("tag").get<std::string>());
  m.radius = get_or(j, "radius", m.radius);
  m.stripes = get_or(j, "n", m.stripes);
  m.epsilon = get_or(j, "epsilon", m.epsilon);
  if (j.contains("sigma")) m.sigma = j.at("sigma").get<double>();
  if (m.radius <= 0.0) throw ConfigError("metric.radius must be positive");
  if (m.stripes < 1) throw ConfigError("metric.n must be >= 1");
  if (m.epsilon <= 0.0) throw ConfigError("metric.epsilon must be positive");
  return m;
}

ChartPolicy parse_chart_policy(const std::string& name) {
  if (name == "strict") return ChartPolicy::strict;
  if (name == "clamp") return ChartPolicy::clamp;
  throw std::invalid_argument("unknown chart policy '" + name + "'");
}

// ---- entry points --------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"Rigidity numerics: intrinsic algebra checks, distortion energies, Piola residuals, "
               "metric convergence studies"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", label;
  std::uint64_t seed = 42;
  int threads = 0, dim = 2;
  bool inject_fault = false;
  std::optional<double> p, q;
  std::vector<std::string> cases;
  std::optional<int> levels;
  std::string experiment;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads (default: RIGIDLAB_THREADS, then all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dim", dim, "chart dimension")->check(CLI::IsMember({2, 3}));
    sub->add_option("--label", label, "output label (default: config 'label' or 'run')");
  };

  auto* algebra = app.add_subcommand("check-algebra", "randomized identity suites of the intrinsic algebra");
  add_common(algebra);
  algebra->add_flag("--inject-fault", inject_fault, "negate one cofactor entry")->group("");

  auto* energy = app.add_subcommand("energy", "evaluate a functional on a sampled map");
  add_common(energy);
  energy->add_option("--p", p, "exponent");

  auto* minimize_cmd = app.add_subcommand("minimize", "minimize the distortion energy");
  add_common(minimize_cmd);
  minimize_cmd->add_option("--p", p, "exponent");
  minimize_cmd->add_option("--experiment", experiment, "flat | sphere");

  auto* piola = app.add_subcommand("piola", "Piola identity residual studies");
  add_common(piola);
  piola->add_option("--case", cases, "case name (repeatable)");
  piola->add_option("--levels", levels, "refinement levels");

  auto* converge = app.add_subcommand("converge", "p,q-convergence norms of a metric sequence");
  add_common(converge);
  converge->add_option("--p", p, "exponent for the map norms");
  converge->add_option("--q", q, "exponent for the determinant norms");

  auto* geodesic = app.add_subcommand("geodesic", "grid-graph geodesic distance");
  add_common(geodesic);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx;
  ctx.command = sub->get_name();
  ctx.seed = seed;
  ctx.dim = dim;
  ctx.inject_fault = inject_fault;
  try {
    json config = json::object();
    if (!config_path.empty()) config = read_json(config_path);
    if (!config.is_object()) throw ConfigError("config root must be an object");
    if (config.contains("seed") && sub->count("--seed") == 0) ctx.seed = config.at("seed").get<std::uint64_t>();
    if (config.contains("dim") && sub->count("--dim") == 0) ctx.dim = config.at("dim").get<int>();
    if (ctx.dim != 2 && ctx.dim != 3) throw ConfigError("dim must be 2 or 3");
    if (p) config["p"] = *p;
    if (q) config["q"] = *q;
    if (!cases.empty()) config["cases"] = cases;
    if (levels) config["levels"] = *levels;
    if (!experiment.empty()) config["experiment"] = experiment;
    config["seed"] = ctx.seed;
    config["dim"] = ctx.dim;
    ctx.label = !label.empty() ? label : get_or<std::string>(config, "label", "run");
    if (ctx.label.empty() || ctx.label.find_first_of("/\\") != std::string::npos) {
      throw ConfigError("label must be a non-empty file-name fragment");
    }
    config["label"] = ctx.label;
    ctx.config = config;

    if (threads == 0) {
      if (const char* env = std::getenv("RIGIDLAB_THREADS"); env && *env) {
        threads = std::stoi(env);
        if (threads < 1) throw ConfigError("RIGIDLAB_THREADS must be positive");
      }
    }
    if (threads > 0) set_thread_count(threads);
    ctx.threads = thread_count();

    ctx.out = out_dir;
    fs::create_directories(ctx.out);

    if (ctx.command == "check-algebra") return cmd_check_algebra(ctx);
    if (ctx.command == "energy") return cmd_energy(ctx);
    if (ctx.command == "minimize") return cmd_minimize(ctx);
    if (ctx.command == "piola") return cmd_piola(ctx);
    if (ctx.command == "converge") return cmd_converge(ctx);
    return cmd_geodesic(ctx);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ChartError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage{"rigidlab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(storage.size()), argv.data());
}

}  // namespace rigidlab
