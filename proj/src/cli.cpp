#include "nlflux/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "nlflux/error.hpp"
#include "nlflux/flux_law.hpp"
#include "nlflux/harness.hpp"
#include "nlflux/kernels.hpp"
#include "nlflux/self_similar.hpp"
#include "nlflux/spectral_weighted.hpp"
#include "nlflux/trace_volterra.hpp"

namespace nlflux::cli {
namespace {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Param {
  std::string key;
  json fallback;
  std::string help;
};

struct Report {
  json results;
  json tolerances = json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<json>> csv_rows;
  int exit_code = kOk;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<void(const json&)> validate;
  std::function<Report(const json&, std::uint64_t seed, int workers)> execute;
};

void check(bool cond, const std::string& what) {
  if (!cond) throw ConfigError(what);
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

json parse_value(const Param& p, const std::string& text) {
  try {
    std::size_t used = 0;
    if (p.fallback.is_number_integer()) {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } else if (p.fallback.is_number()) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else if (p.fallback.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
    } else {
      return text;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value for " + flag_name(p.key) + ": " + text);
}

json coerce(const Param& p, const json& v) {
  if (p.fallback.is_number_integer()) {
    if (v.is_number_integer()) return v;
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return v.get<long long>();
  } else if (p.fallback.is_number()) {
    if (v.is_number()) return v.get<double>();
  } else if (p.fallback.is_boolean()) {
    if (v.is_boolean()) return v;
  } else if (v.is_string()) {
    return v;
  }
  throw ConfigError("config key '" + p.key + "' has the wrong type");
}

double num(const json& cfg, const char* key) { return cfg.at(key).get<double>(); }
int integer(const json& cfg, const char* key) { return cfg.at(key).get<int>(); }
std::string str(const json& cfg, const char* key) { return cfg.at(key).get<std::string>(); }

json to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

// ---------------------------------------------------------------- profile

Report run_profile(const json& cfg, std::uint64_t, int) {
  ProfileOptions opts;
  opts.eta_inf = num(cfg, "eta_inf");
  opts.step = num(cfg, "step");
  const SelfSimilarProfile prof = profile_constant(num(cfg, "p"), opts);
  Report r;
  r.results["exists"] = prof.exists;
  r.results["reason"] = prof.reason;
  r.results["c"] = prof.c ? json(*prof.c) : json(nullptr);
  r.results["rho"] = prof.rho;
  r.results["omega0"] = prof.omega[0];
  r.results["seed_terms"] = prof.seed_terms;
  const EnvelopeRatios env = envelope_check(prof, num(cfg, "envelope_lo"), num(cfg, "envelope_hi"));
  r.results["envelope"] = {{"ratio_min", env.ratio_min}, {"ratio_max", env.ratio_max}};
  r.results["eta"] = to_json(prof.eta);
  r.results["omega"] = to_json(prof.omega);
  r.results["omega_prime"] = to_json(prof.omega_prime);
  r.tolerances["ode_rtol"] = opts.rtol;
  r.csv_header = {"eta", "omega", "omega_prime"};
  for (Eigen::Index i = 0; i < prof.eta.size(); ++i) r.csv_rows.push_back({prof.eta[i], prof.omega[i], prof.omega_prime[i]});
  return r;
}

// ---------------------------------------------------------------- spectrum

Report run_spectrum(const json& cfg, std::uint64_t seed, int) {
  const WeightedGrid grid(num(cfg, "eta_inf"), integer(cfg, "n"));
  const std::string which = str(cfg, "bc");
  Report r;
  r.csv_header = {"bc", "index", "eigenvalue"};
  for (BoundaryCondition bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}) {
    const bool dir = bc == BoundaryCondition::Dirichlet;
    if (which != "both" && which != (dir ? "dirichlet" : "neumann")) continue;
    const WeightedEigenResult res = eigen_smallest(grid, bc, integer(cfg, "count"), seed);
    r.results[dir ? "dirichlet" : "neumann"] = {{"eigenvalues", to_json(res.eigenvalues)},
                                                {"iterations", res.iterations}};
    for (Eigen::Index k = 0; k < res.eigenvalues.size(); ++k)
      r.csv_rows.push_back({dir ? "dirichlet" : "neumann", k, res.eigenvalues[k]});
  }
  return r;
}

// ---------------------------------------------------------------- solve

MeasureData initial_data(const json& cfg) {
  const double mass = num(cfg, "nu_mass"), c = num(cfg, "nu_center"), w = num(cfg, "nu_width");
  if (mass == 0) return MeasureData::initial();
  const double amp = mass / (w * std::sqrt(M_PI));  // mass on the whole line; c >= 6 w keeps it on x > 0
  return MeasureData::initial(
      {}, PiecewiseLinear::sample([=](double x) { return amp * std::exp(-(x - c) * (x - c) / (w * w)); },
                                  std::max(0.0, c - 8 * w), c + 8 * w, 513));
}

MeasureData boundary_data(const json& cfg, double T, const std::string& prefix) {
  const double atom = num(cfg, (prefix + "_atom").c_str());
  const double amp = num(cfg, (prefix + "_sin2").c_str());
  const double level = num(cfg, (prefix + "_constant").c_str());
  std::vector<Atom> atoms;
  if (atom != 0) atoms.push_back({0.0, atom});
  std::optional<PiecewiseLinear> density;
  if (amp != 0 || level != 0)
    density = PiecewiseLinear::sample(
        [=](double t) { return level + amp * std::pow(std::sin(M_PI * t), 2); }, 0.0, T, 1025);
  return MeasureData::boundary(T, std::move(atoms), std::move(density));
}

GradedTimeGrid time_grid(const json& cfg, const FluxLaw& law, double mass_at_origin) {
  const double T = num(cfg, "T"), gamma = num(cfg, "gamma");
  const int N = integer(cfg, "N");
  double t_min = num(cfg, "t_min");
  if (t_min < 0) t_min = mass_at_origin > 0 ? resolving_t_min(law, mass_at_origin) : 0.0;
  if (t_min == 0) return GradedTimeGrid(T, N, gamma);
  return GradedTimeGrid::with_geometric_head(T, N, gamma, t_min);
}

Report run_solve(const json& cfg, std::uint64_t, int) {
  const FluxLaw law = FluxLaw::power(num(cfg, "p"));
  const double T = num(cfg, "T");
  const MeasureData mu = boundary_data(cfg, T, "mu");
  const GradedTimeGrid grid = time_grid(cfg, law, mu.atom_mass_at_origin());
  const TraceSolution sol = solve_trace(law, initial_data(cfg), mu, grid);
  Report r;
  r.results["steps"] = grid.steps();
  r.results["t"] = to_json(grid.nodes());
  r.results["U"] = to_json(sol.U);
  r.results["gU"] = to_json(sol.gU);
  r.results["U_at_T"] = sol.U[grid.steps()];
  r.csv_header = {"t", "U", "gU"};
  for (int j = 1; j <= grid.steps(); ++j) r.csv_rows.push_back({grid[j], sol.U[j], sol.gU[j]});
  return r;
}

Report run_solve_interval(const json& cfg, std::uint64_t, int) {
  const FluxLaw law = FluxLaw::power(num(cfg, "p"));
  const double T = num(cfg, "T"), a = num(cfg, "a"), b = num(cfg, "b");
  const double level = num(cfg, "nu_constant");
  const MeasureData nu =
      level == 0 ? MeasureData::initial()
                 : MeasureData::initial({}, PiecewiseLinear::sample([=](double) { return level; }, a, b, 2));
  const MeasureData mu_a = boundary_data(cfg, T, "mu_a"), mu_b = boundary_data(cfg, T, "mu_b");
  const GradedTimeGrid grid(T, integer(cfg, "N"), num(cfg, "gamma"));
  const IntervalTraces tr = solve_interval_trace(law, nu, mu_a, mu_b, a, b, grid, integer(cfg, "images"));
  Report r;
  r.results["t"] = to_json(grid.nodes());
  r.results["U_a"] = to_json(tr.at_a.U);
  r.results["U_b"] = to_json(tr.at_b.U);
  r.results["tail_bound"] = tr.tail_bound;
  r.csv_header = {"t", "U_a", "U_b"};
  for (int j = 1; j <= grid.steps(); ++j) r.csv_rows.push_back({grid[j], tr.at_a.U[j], tr.at_b.U[j]});
  return r;
}

// ---------------------------------------------------------------- sweep

Report run_sweep(const json& cfg, std::uint64_t, int workers) {
  const double p = num(cfg, "p");
  std::vector<double> ladder;
  for (int k = 0; k < integer(cfg, "rungs"); ++k) ladder.push_back(num(cfg, "ell0") * std::ldexp(1.0, k));
  const FluxLaw law = FluxLaw::power(p);
  const GradedTimeGrid grid = time_grid(cfg, law, ladder.back());
  const DichotomyReport rep = dichotomy_sweep(p, ladder, grid, workers);
  Report r;
  r.results["classification"] = to_string(rep.classification);
  r.results["monotone"] = rep.monotone;
  r.results["limit"] = rep.limit;
  r.results["last_growth"] = rep.last_growth;
  r.results["ladder"] = rep.ladder;
  r.results["rescaled_trace_t1"] = rep.rescaled_trace;
  r.results["cauchy_ratios"] = rep.cauchy_ratios;
  r.results["steps"] = grid.steps();
  r.tolerances["cauchy_threshold"] = rep.cauchy_threshold;
  r.tolerances["growth_threshold"] = rep.growth_threshold;
  r.csv_header = {"ell", "rescaled_trace_t1", "cauchy_ratio"};
  for (std::size_t i = 0; i < ladder.size(); ++i)
    r.csv_rows.push_back({ladder[i], rep.rescaled_trace[i], rep.cauchy_ratios[i]});
  if (rep.classification == Classification::Unclassifiable) r.exit_code = kSolverFailure;
  return r;
}

// ---------------------------------------------------------------- verify

Report run_verify(const json& cfg, std::uint64_t seed, int) {
  Report r;
  r.results = json::array();
  r.csv_header = {"check", "value", "target", "tolerance", "pass"};
  auto record = [&](const std::string& name, double value, double target, double tol) {
    const bool pass = std::abs(value - target) <= tol;
    r.results.push_back({{"check", name}, {"value", value}, {"target", target}, {"tolerance", tol}, {"pass", pass}});
    r.tolerances[name] = tol;
    r.csv_rows.push_back({name, value, target, tol, pass});
  };

  const WeightedGrid grid(num(cfg, "eta_inf"), integer(cfg, "n"));
  const double targets[2][3] = {{0.5, 1.5, 2.5}, {1.0, 2.0, 3.0}};
  for (BoundaryCondition bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}) {
    const int d = bc == BoundaryCondition::Dirichlet;
    const WeightedEigenResult res = eigen_smallest(grid, bc, 3, seed);
    for (int k = 0; k < 3; ++k)
      record(std::string(d ? "dirichlet_" : "neumann_") + std::to_string(k), res.eigenvalues[k], targets[d][k], 1e-2);
  }

  const double p = num(cfg, "p");
  const SelfSimilarProfile prof = profile_constant(p);
  const Minimizer min = minimize_J(grid, p);
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    if (grid.nodes[i] > prof.eta_inf) break;
    diff = std::max(diff, std::abs(min.phi[i] - prof(grid.nodes[i])));
    scale = std::max(scale, std::abs(prof(grid.nodes[i])));
  }
  record("profile_vs_minimizer", diff / scale, 0.0, 1e-3);

  const GradedTimeGrid tg = GradedTimeGrid::with_geometric_head(1.0, 1024, 2.0, resolving_t_min(FluxLaw::power(p), 1.0));
  record("scaling_identity", scaling_identity_check(p, 1.0, 2.0, tg), 0.0, 1e-2);

  const MarcinkiewiczResult m = marcinkiewicz_check(MeasureData::initial(), MeasureData::dirac_at_origin(1.0, 1.0));
  record("trace_weak2_dirac", m.trace_weak2, 1.0 / std::sqrt(M_PI), 1e-2);
  return r;
}

// ---------------------------------------------------------------- registry

void positive(const json& cfg, const char* key) { check(num(cfg, key) > 0, std::string(key) + " must be positive"); }

void check_exponent(const json& cfg) {
  const double p = num(cfg, "p");
  check(p > 1 && p < 2, "p must lie in (1, 2)");
}

void check_time_grid(const json& cfg) {
  positive(cfg, "T");
  check(integer(cfg, "N") >= 16, "N must be at least 16");
  check(num(cfg, "gamma") >= 1, "gamma must be at least 1");
  const double t_min = num(cfg, "t_min");
  check(t_min < 0 || t_min == 0 || t_min < num(cfg, "T"), "t_min must be -1 (auto), 0 (off) or below T");
}

void check_boundary(const json& cfg, const std::string& prefix) {
  for (const char* s : {"_atom", "_sin2", "_constant"})
    check(std::isfinite(num(cfg, (prefix + s).c_str())), prefix + s + " must be finite");
}

std::vector<Param> grid_params() {
  return {{"T", 1.0, "time horizon"},
          {"N", 1024, "graded time steps"},
          {"gamma", 2.0, "grading exponent"},
          {"t_min", -1.0, "start of a geometric grid head (-1: auto for atoms at 0, 0: none)"}};
}

std::vector<Param> boundary_params(const std::string& prefix) {
  return {{prefix + "_atom", 0.0, "mass of the atom at t = 0"},
          {prefix + "_sin2", 0.0, "amplitude of the sin^2(pi t) density"},
          {prefix + "_constant", 0.0, "constant density"}};
}

std::vector<Command> commands() {
  std::vector<Command> cmds;

  cmds.push_back({"profile",
                  "self-similar profile and its matching constant",
                  {{"p", 1.75, "flux exponent"},
                   {"eta_inf", 14.0, "outer end of the profile grid"},
                   {"step", 0.01, "output grid spacing"},
                   {"envelope_lo", 0.25, "lower end of the envelope window"},
                   {"envelope_hi", 8.0, "upper end of the envelope window"}},
                  [](const json& c) {
                    check(num(c, "p") > 1, "p must exceed 1");
                    check(num(c, "eta_inf") >= 10, "eta_inf must be at least 10");
                    check(num(c, "step") > 0 && num(c, "step") <= 0.1, "step must lie in (0, 0.1]");
                    check(num(c, "envelope_lo") > 0 && num(c, "envelope_lo") < num(c, "envelope_hi") &&
                              num(c, "envelope_hi") <= num(c, "eta_inf") - 2,
                          "envelope window must satisfy 0 < lo < hi <= eta_inf - 2");
                  },
                  run_profile});

  cmds.push_back({"spectrum",
                  "smallest eigenvalues of the weighted operator",
                  {{"eta_inf", 12.0, "outer end of the grid"},
                   {"n", 2048, "grid nodes"},
                   {"count", 3, "eigenpairs per boundary condition"},
                   {"bc", "both", "neumann, dirichlet or both"}},
                  [](const json& c) {
                    positive(c, "eta_inf");
                    check(integer(c, "n") >= 64, "n must be at least 64");
                    check(integer(c, "count") >= 1 && integer(c, "count") <= 8, "count must lie in [1, 8]");
                    const std::string bc = str(c, "bc");
                    check(bc == "both" || bc == "neumann" || bc == "dirichlet", "bc must be neumann, dirichlet or both");
                  },
                  run_spectrum});

  {
    std::vector<Param> ps{{"p", 1.75, "flux exponent"},
                          {"nu_mass", 0.0, "mass of a Gaussian initial bump"},
                          {"nu_center", 2.0, "center of the initial bump"},
                          {"nu_width", 0.25, "width of the initial bump"}};
    for (auto& q : grid_params()) ps.push_back(q);
    for (auto& q : boundary_params("mu")) ps.push_back(q);
    cmds.push_back({"solve", "boundary trace on the half-line", ps,
                    [](const json& c) {
                      check_exponent(c);
                      check_time_grid(c);
                      check_boundary(c, "mu");
                      check(num(c, "nu_mass") >= 0, "nu_mass must be nonnegative");
                      positive(c, "nu_width");
                      check(num(c, "nu_center") >= 0, "nu_center must be nonnegative");
                    },
                    run_solve});
  }

  {
    std::vector<Param> ps{{"p", 1.75, "flux exponent"},
                          {"a", 0.0, "left end"},
                          {"b", 1.0, "right end"},
                          {"T", 1.0, "time horizon"},
                          {"N", 512, "graded time steps"},
                          {"gamma", 2.0, "grading exponent"},
                          {"images", 8, "image pairs of the interval kernel"},
                          {"nu_constant", 0.0, "constant initial density"}};
    for (auto& q : boundary_params("mu_a")) ps.push_back(q);
    for (auto& q : boundary_params("mu_b")) ps.push_back(q);
    cmds.push_back({"solve-interval", "boundary traces on (a, b)", ps,
                    [](const json& c) {
                      check_exponent(c);
                      check(num(c, "a") < num(c, "b"), "a must be below b");
                      positive(c, "T");
                      check(integer(c, "N") >= 16, "N must be at least 16");
                      check(num(c, "gamma") >= 1, "gamma must be at least 1");
                      check(integer(c, "images") >= 3, "images must be at least 3");
                      check_boundary(c, "mu_a");
                      check_boundary(c, "mu_b");
                    },
                    run_solve_interval});
  }

  {
    std::vector<Param> ps{{"p", 1.75, "flux exponent"},
                          {"ell0", 1.0, "first rung"},
                          {"rungs", 9, "number of rungs, each doubling the mass"}};
    for (auto& q : grid_params()) ps.push_back(q);
    cmds.push_back({"sweep", "rescaled traces of u_{ell delta_0} over a doubling ladder", ps,
                    [](const json& c) {
                      check_exponent(c);
                      check_time_grid(c);
                      check(num(c, "T") >= 1, "T must reach t = 1");
                      positive(c, "ell0");
                      check(integer(c, "rungs") >= 8, "rungs must be at least 8");
                    },
                    run_sweep});
  }

  cmds.push_back({"verify",
                  "fast self-checks with their tolerances",
                  {{"p", 1.75, "flux exponent for profile checks"},
                   {"eta_inf", 12.0, "outer end of the spectral grid"},
                   {"n", 2048, "spectral grid nodes"}},
                  [](const json& c) {
                    const double p = num(c, "p");
                    check(p > 1.5 && p < 2, "p must lie in (1.5, 2)");
                    check(num(c, "eta_inf") >= 10, "eta_inf must be at least 10");
                    check(integer(c, "n") >= 256, "n must be at least 256");
                  },
                  run_verify});
  return cmds;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

std::string format_csv(const Report& r, const json& header) {
  std::ostringstream os;
  os << "# " << header.dump() << '\n';
  for (std::size_t i = 0; i < r.csv_header.size(); ++i) os << (i ? "," : "") << r.csv_header[i];
  os << '\n';
  for (const auto& row : r.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
    os << '\n';
  }
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::vector<Command> cmds = commands();
  CLI::App app{"Numerical laboratory for the heat equation with nonlinear boundary flux", "nlflux"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path, out_path, format = "json";
  std::uint64_t seed = 1;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::map<std::string, std::string>> inline_values(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    CLI::App* sub = app.add_subcommand(cmds[c].name, cmds[c].help);
    sub->add_option("--config", config_path, "JSON file with parameters");
    sub->add_option("--out", out_path, "output file (default: standard output)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
    for (const Param& p : cmds[c].params) {
      auto* opt = sub->add_option_function<std::string>(
          flag_name(p.key), [&inline_values, c, key = p.key](const std::string& v) { inline_values[c][key] = v; },
          p.help);
      opt->type_name(p.fallback.is_string() ? "TEXT" : p.fallback.is_number_integer() ? "INT" : "NUM");
      opt->allow_extra_args(false);
    }
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  std::size_t ci = 0;
  while (!subs[ci]->parsed()) ++ci;
  const Command& cmd = cmds[ci];

  json cfg = json::object();
  Report report;
  try {
    for (const Param& p : cmd.params) cfg[p.key] = p.fallback;
    if (!config_path.empty()) {
      const json file = read_config(config_path);
      check(file.is_object(), "config must be a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (key == "command") {
          check(value == cmd.name, "config is for command '" + value.dump() + "', not '" + cmd.name + "'");
          continue;
        }
        auto it = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == key; });
        check(it != cmd.params.end(), "unknown config key '" + key + "' for command " + cmd.name);
        cfg[key] = coerce(*it, value);
      }
    }
    for (const auto& [key, text] : inline_values[ci]) {
      auto it = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == key; });
      cfg[key] = parse_value(*it, text);
    }
    cmd.validate(cfg);
    report = cmd.execute(cfg, seed, workers);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << e.what() << '\n';
    if (e.kind() == ErrorKind::Io) return kIoError;
    return e.is_solver_failure() ? kSolverFailure : kInvalidConfig;
  }

  json doc;
  doc["command"] = cmd.name;
  doc["config"] = cfg;
  doc["seed"] = seed;
  doc["version"] = kVersion;
  std::string body;
  if (format == "csv") {
    body = format_csv(report, doc);
  } else {
    doc["results"] = report.results;
    doc["tolerances"] = report.tolerances;
    body = doc.dump(2) + "\n";
  }
  if (out_path.empty()) {
    out << body;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!(file << body)) {
      err << "I/O error: cannot write " << out_path << '\n';
      return kIoError;
    }
  }
  if (report.exit_code != kOk) err << "sweep could not be classified; raw ladder written\n";
  return report.exit_code;
}

}  // namespace nlflux::cli
