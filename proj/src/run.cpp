#include "levy/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "levy/distlog.hpp"
#include "levy/error.hpp"
#include "levy/rho.hpp"
#include "levy/spec_json.hpp"

namespace levy::cli {

using nlohmann::json;

Task task_from_string(const std::string& s) {
  if (s == "density") return Task::density;
  if (s == "mass") return Task::mass;
  if (s == "atoms") return Task::atoms;
  if (s == "rhohat") return Task::rhohat;
  throw DomainError("unknown task '" + s + "'");
}

std::string to_string(Task t) {
  switch (t) {
    case Task::density: return "density";
    case Task::mass: return "mass";
    case Task::atoms: return "atoms";
    case Task::rhohat: return "rhohat";
  }
  return "?";
}

namespace {

double num(const json& v, const char* what) {
  if (!v.is_number()) throw DomainError(std::string("'") + what + "' must be a number");
  return v.get<double>();
}

std::vector<double> xgrid_from_json(const json& v) {
  std::vector<double> xs;
  if (v.is_array()) {
    for (const json& e : v) xs.push_back(num(e, "xgrid entry"));
  } else if (v.is_object()) {
    const double from = num(v.at("from"), "xgrid.from"), to = num(v.at("to"), "xgrid.to"),
                 step = num(v.at("step"), "xgrid.step");
    if (!(step > 0.0) || !(to >= from)) throw DomainError("xgrid needs step > 0 and to >= from");
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    if (n > 100000) throw DomainError("xgrid has too many points");
    for (long i = 0; i <= n; ++i) xs.push_back(from + static_cast<double>(i) * step);
  } else {
    throw DomainError("xgrid must be an array or {from, to, step}");
  }
  return xs;
}

Interval interval_from_json(const json& v) {
  if (!v.is_array() || v.size() != 2) throw DomainError("interval must be [a, b]");
  Interval B{num(v[0], "interval.a"), num(v[1], "interval.b")};
  validate(B);
  return B;
}

// "none", "fejer", "gaussian", "gaussian(0.3)" or {"kind": ..., "width": ...}
Damping damping_from_json(const json& v, double width) {
  std::string s;
  if (v.is_object()) {
    s = v.value("kind", std::string());
    if (v.contains("width")) width = num(v.at("width"), "damping.width");
  } else if (v.is_string()) {
    s = v.get<std::string>();
  } else {
    throw DomainError("'damping' must be a string or object");
  }
  if (const auto open = s.find('('); open != std::string::npos) {
    if (s.back() != ')') throw DomainError("malformed damping '" + s + "'");
    try {
      width = std::stod(s.substr(open + 1, s.size() - open - 2));
    } catch (const std::exception&) {
      throw DomainError("malformed damping '" + s + "'");
    }
    s = s.substr(0, open);
  }
  if (!(width > 0.0)) throw DomainError("damping width must be positive");
  if (s == "none") return Damping::none();
  if (s == "fejer") return Damping::fejer();
  if (s == "gaussian") return Damping::gaussian(width);
  throw DomainError("unknown damping '" + s + "'");
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  RunConfig c;
  static const std::set<std::string> top{"distribution", "task", "xgrid", "interval", "intervals",
                                         "kmax", "route", "output", "allowSmallX", "numerics"};
  static const std::set<std::string> numerics{"zmax", "zstep", "unwrapStep", "lambdaNodes",
                                              "Zlist", "damping", "dampingWidth", "quadStep",
                                              "fdStep", "tol", "tailCorrection"};
  for (const auto& [k, v] : doc.items())
    if (!top.count(k)) throw DomainError("unknown config field '" + k + "'");
  if (doc.contains("numerics")) {
    if (!doc.at("numerics").is_object()) throw DomainError("'numerics' must be an object");
    for (const auto& [k, v] : doc.at("numerics").items())
      if (!numerics.count(k)) throw DomainError("unknown field 'numerics." + k + "'");
  }
  try {
    if (!doc.contains("distribution")) throw DomainError("config needs 'distribution'");
    c.distribution = doc.at("distribution");
    if (!doc.contains("task")) throw DomainError("config needs 'task'");
    c.task = task_from_string(doc.at("task").get<std::string>());
    if (doc.contains("xgrid")) c.xgrid = xgrid_from_json(doc.at("xgrid"));
    if (doc.contains("interval")) c.intervals.push_back(interval_from_json(doc.at("interval")));
    if (doc.contains("intervals"))
      for (const json& b : doc.at("intervals")) c.intervals.push_back(interval_from_json(b));
    if (doc.contains("kmax")) c.kmax = doc.at("kmax").get<int>();
    if (doc.contains("route")) c.route = doc.at("route").get<std::string>();
    if (doc.contains("output")) c.output = doc.at("output").get<std::string>();
    if (doc.contains("allowSmallX")) c.allow_small_x = doc.at("allowSmallX").get<bool>();
    if (doc.contains("numerics")) {
      const json& n = doc.at("numerics");
      Numerics& out = c.numerics;
      if (n.contains("zmax")) out.zmax = num(n.at("zmax"), "zmax");
      if (n.contains("zstep")) out.zstep = num(n.at("zstep"), "zstep");
      if (n.contains("unwrapStep")) out.unwrap_step = num(n.at("unwrapStep"), "unwrapStep");
      if (n.contains("lambdaNodes")) out.lambda_nodes = n.at("lambdaNodes").get<int>();
      if (n.contains("Zlist")) {
        std::vector<double> zs;
        for (const json& z : n.at("Zlist")) zs.push_back(num(z, "Zlist entry"));
        out.Zlist = zs;
      }
      const double width = n.contains("dampingWidth") ? num(n.at("dampingWidth"), "dampingWidth")
                                                      : 0.5;
      if (n.contains("damping")) out.damping = damping_from_json(n.at("damping"), width);
      if (n.contains("fdStep")) out.fd_step = num(n.at("fdStep"), "fdStep");
      if (n.contains("quadStep")) out.quad_step = num(n.at("quadStep"), "quadStep");
      if (n.contains("tol")) out.tol = num(n.at("tol"), "tol");
      if (n.contains("tailCorrection")) out.tail_correction = n.at("tailCorrection").get<bool>();
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }

  const Numerics& n = c.numerics;
  if (n.zmax && !(*n.zmax > 0.0 && *n.zmax <= 1e4)) throw DomainError("zmax must be in (0, 1e4]");
  if (!(n.zstep >= 1e-5)) throw DomainError("zstep must be at least 1e-5");
  if (!(n.unwrap_step >= 1e-5)) throw DomainError("unwrapStep must be at least 1e-5");
  if (n.lambda_nodes < 16 || n.lambda_nodes > 1024)
    throw DomainError("lambdaNodes must be in [16, 1024]");
  if (n.Zlist)
    for (double z : *n.Zlist)
      if (!(z > 0.0 && z <= 1e4)) throw DomainError("Zlist entries must be in (0, 1e4]");
  if (!(n.quad_step >= 0.0)) throw DomainError("quadStep must be nonnegative");
  if (!(n.fd_step > 0.0)) throw DomainError("fdStep must be positive");
  if (!(n.tol > 0.0)) throw DomainError("tol must be positive");
  if (c.route != "auto") route_from_string(c.route);
  switch (c.task) {
    case Task::density:
      if (c.xgrid.empty()) throw DomainError("density task needs 'xgrid'");
      break;
    case Task::mass:
      if (c.intervals.empty()) throw DomainError("mass task needs 'interval' or 'intervals'");
      break;
    case Task::atoms:
      if (c.kmax < 1) throw DomainError("atoms task needs 'kmax' >= 1");
      break;
    case Task::rhohat:
      if (!n.zmax) throw DomainError("rhohat task needs 'numerics.zmax'");
      break;
  }
  return c;
}

void apply_override(json& doc, const std::string& dotted, const std::string& value) {
  if (dotted.empty()) throw DomainError("empty override key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;
  }
  json* node = &doc;
  std::stringstream ss(dotted);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(ss, key, '.')) keys.push_back(key);
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object()) throw DomainError("override '" + dotted + "' crosses a non-object");
    node = &(*node)[keys[i]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw DomainError("override '" + dotted + "' crosses a non-object");
  (*node)[keys.back()] = parsed;
}

double decay_horizon(const CharFn& phi, double limit) {
  constexpr double probe = 0.05;
  for (double z = probe; z <= limit; z += probe)
    if (std::abs(phi(z)) < 1e-11) return z;
  return limit;
}

namespace {

Route choose_route(const RunConfig& c, const CharFn& phi) {
  if (c.route != "auto") return route_from_string(c.route);
  switch (c.task) {
    case Task::density:
      return (phi.has_psi2() && phi.finite_second_moment) ? Route::eq4 : Route::eq3;
    default:
      return Route::eq1;
  }
}

double round_to(double v, double step) { return std::round(v / step) * step; }

// Zlist from config or defaults, shrunk below the decay horizon when the
// log must be unwrapped out to Z + 1.
std::vector<double> resolve_zlist(const RunConfig& c, const CharFn& phi, bool needs_unwrap) {
  const double h = c.numerics.zstep;
  if (c.numerics.Zlist) return *c.numerics.Zlist;
  std::vector<double> zs{40.0, 60.0, 80.0};
  if (c.task == Task::rhohat) zs = {*c.numerics.zmax};
  if (!needs_unwrap || c.task == Task::rhohat) return zs;
  const double horizon = decay_horizon(phi, zs.back() + 1.5);
  if (zs.back() + 1.1 <= horizon) return zs;
  const double top = horizon - 1.1;
  if (top < 4.0 * h)
    throw UnwrapError("characteristic function vanishes too close to the origin");
  std::vector<double> shrunk;
  for (double f : {0.5, 0.75, 1.0}) {
    const double z = std::max(2.0 * h, round_to(std::floor(f * top / h) * h, h));
    if (shrunk.empty() || z > shrunk.back()) shrunk.push_back(z);
  }
  return shrunk;
}

struct Computation {
  std::string csv;
  std::vector<double> errs;
  bool converged = true;
  std::optional<RhoHatGrid> grid;
  Route route = Route::eq1;
  std::vector<double> zlist;
};

Computation compute(const RunConfig& c, const CharFn& phi) {
  Computation out;
  out.route = choose_route(c, phi);
  const Numerics& n = c.numerics;
  const bool analytic_psi2 =
      (out.route == Route::eq2 || out.route == Route::eq4) && phi.has_psi2();
  const bool needs_unwrap = !analytic_psi2;
  out.zlist = resolve_zlist(c, phi, needs_unwrap);

  const double zmax = std::max(n.zmax.value_or(out.zlist.back()), out.zlist.back());
  const double gz = round_to(zmax, n.zstep) < zmax ? round_to(zmax, n.zstep) + n.zstep
                                                  : round_to(zmax, n.zstep);

  if (c.task == Task::rhohat || out.route == Route::eq1 || out.route == Route::eq3) {
    const UnwrappedLog u = unwrap_log(phi, gz + 1.0 + 2.0 * n.unwrap_step, n.unwrap_step);
    out.grid = rho_hat_grid(u, phi.sigma2, gz, n.zstep, n.lambda_nodes, false);
  } else if (analytic_psi2) {
    out.grid = neg_psi2_grid(phi, phi.sigma2, gz, n.zstep, false);
  } else {
    const UnwrappedLog u = unwrap_log(phi, gz + 2.0 * n.fd_step + 2.0 * n.unwrap_step,
                                      n.unwrap_step);
    out.grid = neg_psi2_grid(u, phi.sigma2, gz, n.zstep, n.fd_step, false);
  }
  const RhoHatGrid& g = *out.grid;

  RegSpec reg = (c.task == Task::density) ? RegSpec::for_densities() : RegSpec::for_masses();
  reg.Zlist = out.zlist;
  if (n.damping) reg.damping = *n.damping;
  reg.tol = n.tol;
  reg.quad_step = n.quad_step;
  reg.tail_correction = n.tail_correction && c.task == Task::density;

  std::ostringstream os;
  switch (c.task) {
    case Task::rhohat: {
      write_csv(os, g);
      for (Eigen::Index i = 0; i < g.err.size(); ++i) {
        out.errs.push_back(g.err[i]);
        out.converged = out.converged && g.err[i] <= n.tol;
      }
      break;
    }
    case Task::density: {
      if (out.route != Route::eq3 && out.route != Route::eq4)
        throw DomainError("density task needs route eq3 or eq4");
      std::vector<double> xs;
      for (double x : c.xgrid) {
        if (x == 0.0) continue;
        if (out.route == Route::eq3 && std::abs(x) < 0.1 && !c.allow_small_x) continue;
        xs.push_back(x);
      }
      if (xs.empty()) throw DomainError("no admissible x values left in xgrid");
      const DensityEstimate d = invert_density(g, xs, out.route, reg);
      write_csv(os, d);
      out.errs.assign(d.err.data(), d.err.data() + d.err.size());
      out.converged = d.converged;
      break;
    }
    case Task::mass: {
      if (out.route != Route::eq1 && out.route != Route::eq2)
        throw DomainError("mass task needs route eq1 or eq2");
      std::vector<MassResult> ms;
      for (const Interval& B : c.intervals)
        ms.push_back(out.route == Route::eq1 ? invert_mass_eq1(g, B, reg)
                                             : invert_mass_eq2(g, B, reg));
      write_csv(os, ms);
      for (const MassResult& m : ms) {
        out.errs.push_back(m.err);
        out.converged = out.converged && m.converged;
      }
      break;
    }
    case Task::atoms: {
      if (out.route != Route::eq1) throw DomainError("atoms task uses route eq1");
      const auto atoms = lattice_atoms(g, c.kmax, reg);
      std::vector<MassResult> rows;
      for (const AtomEstimate& a : atoms) {
        MassResult m;
        m.interval = {a.k - 0.5, a.k + 0.5};
        m.weighted_mass = a.mass;
        m.err = a.err;
        m.route = Route::eq1;
        rows.push_back(m);
        out.errs.push_back(a.err);
        out.converged = out.converged && a.converged;
      }
      write_csv(os, rows);
      break;
    }
  }
  out.csv = os.str();
  return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunReport execute(const RunConfig& config) {
  RunReport r;
  json diag = json::object();
  diag["task"] = to_string(config.task);
  try {
    CharFn phi;
    try {
      phi = charfn_from_json(config.distribution);
    } catch (const DomainError& e) {
      r.exit_code = kConfigError;
      r.message = e.what();
      diag["status"] = "config_error";
      diag["message"] = r.message;
      r.diagnostics = diag;
      return r;
    }
    diag["distribution"] = phi.label;
    Computation comp = compute(config, phi);
    r.csv = comp.csv;
    const RhoHatGrid& g = *comp.grid;
    const Eigen::Index violations = count_pd_violations(g);
    diag["route"] = config.task == Task::rhohat ? "rhohat" : to_string(comp.route);
    diag["rho_hat_zero"] = g.values[g.center()].real();
    diag["pd_violations"] = violations;
    diag["err_estimates"] = comp.errs;
    diag["Zlist"] = comp.zlist;
    diag["grid"] = g.kind == GridKind::rho_hat ? "rho_hat" : "neg_psi2";
    if (violations > 0) {
      r.exit_code = kInvariantError;
      r.message = "grid violates the positive-definiteness bound at " +
                  std::to_string(violations) + " points";
      diag["status"] = "invariant_violation";
    } else {
      try {
        check_grid_invariants(g);
        if (comp.converged) {
          diag["status"] = "ok";
        } else {
          r.exit_code = kToleranceNotMet;
          r.message = "requested tolerance not achieved";
          diag["status"] = "tolerance_not_met";
        }
      } catch (const InvariantError& e) {
        r.exit_code = kInvariantError;
        r.message = e.what();
        diag["status"] = "invariant_violation";
      }
    }
  } catch (const UnwrapError& e) {
    r.exit_code = kUnwrapError;
    r.message = e.what();
    diag["status"] = "unwrap_failure";
  } catch (const InvariantError& e) {
    r.exit_code = kInvariantError;
    r.message = e.what();
    diag["status"] = "invariant_violation";
  } catch (const DomainError& e) {
    r.exit_code = kConfigError;
    r.message = e.what();
    diag["status"] = "config_error";
  } catch (const ConvergenceError& e) {
    r.exit_code = kToleranceNotMet;
    r.message = e.what();
    diag["status"] = "tolerance_not_met";
  } catch (const Error& e) {
    r.exit_code = kFailure;
    r.message = e.what();
    diag["status"] = "failure";
  }
  if (!r.message.empty()) diag["message"] = r.message;
  r.diagnostics = diag;
  return r;
}

int run(const RunConfig& config, std::ostream& log) {
  const RunReport r = execute(config);
  const std::filesystem::path out =
      config.output.empty() ? std::filesystem::path("levy_" + to_string(config.task) + ".csv")
                            : std::filesystem::path(config.output);
  try {
    if (!r.csv.empty()) write_atomically(out, r.csv);
    std::filesystem::path diag = out;
    diag += ".diagnostics.json";
    write_atomically(diag, r.diagnostics.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "levy-invert: " << e.what() << '\n';
    return kFailure;
  }
  if (r.exit_code != kOk) log << "levy-invert: " << r.message << '\n';
  return r.exit_code;
}

}  // namespace levy::cli
