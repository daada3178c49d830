// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "levy/charfn.hpp"
#include "levy/distlog.hpp"
#include "levy/invert.hpp"
#include "levy/oracle.hpp"
#include "levy/rho.hpp"
#include "levy/run.hpp"
#include "levy/spec_json.hpp"

using namespace levy;
using nlohmann::json;

namespace {

struct Row {
  double x, u, err;
};

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<Row> parse_rows(const std::string& csv) {
  std::vector<Row> rows;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string a, b, c;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    std::getline(ls, c, ',');
    rows.push_back({std::stod(a), std::stod(b), std::stod(c)});
  }
  return rows;
}

struct MassRow {
  double a, b, mass, err;
};

std::vector<MassRow> parse_masses(const std::string& csv) {
  std::vector<MassRow> rows;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string f[4];
    for (auto& x : f) std::getline(ls, x, ',');
    rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
  }
  return rows;
}

cli::RunReport run_doc(const json& doc) { return cli::execute(cli::config_from_json(doc)); }

std::vector<Row> density(const json& dist, const std::vector<double>& xs, const std::string& route,
                         int* exit_code = nullptr) {
  json doc = {{"distribution", dist}, {"task", "density"}, {"xgrid", xs}, {"route", route}};
  const cli::RunReport r = run_doc(doc);
  if (exit_code) *exit_code = r.exit_code;
  if (r.exit_code != 0) std::cerr << "  density run: exit " << r.exit_code << " " << r.message << "\n";
  return parse_rows(r.csv);
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int id, const std::string& title, const Check& c, double seconds) {
  std::printf("%s criterion %d: %s (%.2fs)%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), seconds,
              c.detail.str().c_str());
  std::fflush(stdout);
  return c.ok;
}

const json kCauchy = {{"family", "cauchy"}, {"c", 1}};
const json kGamma11 = {{"family", "gamma"}, {"c", 1}, {"alpha", 1}};
const json kGamma215 = {{"family", "gamma"}, {"c", 2}, {"alpha", 1.5}};
const json kHypcosh = {{"family", "hyperbolic_cosine"}};

std::vector<Row> nonneg_pool;

void note_nonneg(const std::vector<Row>& rows) {
  nonneg_pool.insert(nonneg_pool.end(), rows.begin(), rows.end());
}

bool criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const UnwrappedLog uc = unwrap_log(cauchy(1.0, 0.0), 3.5);
  double worst = 0.0;
  for (int i = -20; i <= 20; ++i) {
    const double z = 0.1 * i;
    const double a = std::abs(z);
    const double want = a <= 1.0 ? (a - 1.0) * (a - 1.0) : 0.0;
    worst = std::max(worst, std::abs(rho_hat(uc, 0.0, z) - Complex(want, 0.0)));
  }
  c.expect(worst <= 1e-8, "cauchy max err " + std::to_string(worst));
  const UnwrappedLog un = unwrap_log(normal(0.0, 1.0), 5.0);
  const RhoHatGrid g = rho_hat_grid(un, 1.0, 3.0, 0.01);
  const double nmax = g.values.cwiseAbs().maxCoeff();
  c.expect(nmax <= 1e-9, "normal max |rho_hat| " + std::to_string(nmax));
  const double t = secs_since(t0);
  c.expect(t < 5.0, "runtime");
  std::ostringstream d;
  d << " cauchy_err=" << worst << " normal_max=" << nmax;
  c.detail << d.str();
  return report(1, "rho_hat closed forms", c, t);
}

bool criterion2() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> xc{0.5, 1, 2, 3, 5};
  const auto rc = density(kCauchy, xc, "eq3");
  const double tc = secs_since(t0);
  c.expect(rc.size() == xc.size(), "cauchy rows");
  double worst_c = 0.0;
  for (const Row& r : rc) worst_c = std::max(worst_c, rel(r.u, 1.0 / (kPi * r.x * r.x)));
  c.expect(worst_c <= 1e-3, "cauchy rel " + std::to_string(worst_c));
  c.expect(tc < 30.0, "cauchy runtime");
  note_nonneg(rc);

  t0 = std::chrono::steady_clock::now();
  const std::vector<double> xg{0.5, 1, 2, 3};
  const auto rg = density(kGamma11, xg, "eq3");
  const double tg = secs_since(t0);
  c.expect(rg.size() == xg.size(), "gamma rows");
  double worst_g = 0.0;
  for (const Row& r : rg) worst_g = std::max(worst_g, rel(r.u, std::exp(-r.x) / r.x));
  c.expect(worst_g <= 1e-3, "gamma rel " + std::to_string(worst_g));
  c.expect(tg < 30.0, "gamma runtime");
  note_nonneg(rg);
  c.detail << " cauchy_rel=" << worst_c << " gamma_rel=" << worst_g;
  return report(2, "density route eq3", c, tc + tg);
}

bool criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const std::vector<double> xs{0.5, 1, 2, 3};
  const auto rh = density(kHypcosh, xs, "eq4");
  c.expect(rh.size() == xs.size(), "hypcosh rows");
  double worst_h = 0.0;
  for (const Row& r : rh)
    worst_h = std::max(worst_h, rel(r.u, 1.0 / (r.x * (std::exp(r.x) - std::exp(-r.x)))));
  c.expect(worst_h <= 1e-3, "hypcosh rel " + std::to_string(worst_h));
  note_nonneg(rh);

  const auto rg = density(kGamma215, {0.5, 1, 2, 3, -1}, "eq4");
  c.expect(rg.size() == 5, "gamma rows");
  double worst_g = 0.0, neg = 0.0;
  for (const Row& r : rg) {
    if (r.x > 0)
      worst_g = std::max(worst_g, rel(r.u, 2.0 / r.x * std::exp(-1.5 * r.x)));
    else
      neg = std::abs(r.u);
  }
  c.expect(worst_g <= 1e-3, "gamma rel " + std::to_string(worst_g));
  c.expect(neg < 1e-4, "gamma at -1 " + std::to_string(neg));
  note_nonneg(rg);
  c.detail << " hypcosh_rel=" << worst_h << " gamma_rel=" << worst_g << " gamma(-1)=" << neg;
  return report(3, "density route eq4", c, secs_since(t0));
}

bool criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(0.5 + 0.25 * i);
  for (const json& dist : {kGamma11, kGamma215, kHypcosh}) {
    const auto a = density(dist, xs, "eq3");
    const auto b = density(dist, xs, "eq4");
    c.expect(a.size() == xs.size() && b.size() == xs.size(), "rows");
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      worst = std::max(worst, rel(a[i].u, b[i].u));
    c.expect(worst <= 2e-3, dist.dump() + " rel " + std::to_string(worst));
    c.detail << " " << dist["family"].get<std::string>() << "=" << worst;
    note_nonneg(a);
    note_nonneg(b);
  }
  return report(4, "route agreement eq3 vs eq4", c, secs_since(t0));
}

bool criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  json nb = {{"distribution", {{"family", "negative_binomial"}, {"c", 1}, {"p", 0.5}}},
             {"task", "atoms"},
             {"kmax", 4}};
  const auto r = run_doc(nb);
  const auto rows = parse_masses(r.csv);
  c.expect(rows.size() == 4, "nb rows");
  double worst = 0.0;
  for (std::size_t k = 1; k <= rows.size(); ++k) {
    const double want = std::pow(0.5, static_cast<double>(k)) / static_cast<double>(k);
    worst = std::max(worst, rel(rows[k - 1].mass, want));
    nonneg_pool.push_back({0.0, rows[k - 1].mass, rows[k - 1].err});
  }
  c.expect(worst <= 5e-2, "nb rel " + std::to_string(worst));

  json cp = {{"distribution",
              {{"family", "compound_poisson"}, {"c", 2}, {"jump", {{"type", "point"}, {"x", 1}}}}},
             {"task", "atoms"},
             {"kmax", 1}};
  const auto rc = parse_masses(run_doc(cp).csv);
  c.expect(rc.size() == 1, "compound rows");
  const double cpe = rc.empty() ? 1.0 : rel(rc[0].mass, 2.0);
  c.expect(cpe <= 5e-2, "compound rel " + std::to_string(cpe));
  c.detail << " nb_rel=" << worst << " compound_rel=" << cpe;
  return report(5, "atom recovery eq1", c, secs_since(t0));
}

bool criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  json doc = {{"distribution", kGamma11}, {"task", "mass"}, {"interval", {0.5, 1.5}}, {"route", "eq2"}};
  const auto r = run_doc(doc);
  const auto rows = parse_masses(r.csv);
  const double want = 1.5 * std::exp(-0.5) - 2.5 * std::exp(-1.5);
  const double e = rows.size() == 1 ? rel(rows[0].mass, want) : 1.0;
  c.expect(e <= 1e-3, "rel " + std::to_string(e));
  if (!rows.empty()) nonneg_pool.push_back({0.0, rows[0].mass, rows[0].err});
  c.detail << " rel=" << e;
  return report(6, "mass route eq2", c, secs_since(t0));
}

bool criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  double herm = 0.0, pd = 0.0, trunc = 0.0, trip = 0.0;
  for (const oracle::OracleCase& oc : oracle::oracle_corpus()) {
    const CharFn& phi = oc.charfn;
    const double hz = cli::decay_horizon(phi, 12.0);
    const double zmax = std::min(10.0, std::floor(hz - 1.5));
    const UnwrappedLog u = unwrap_log(phi, zmax + 1.01);
    std::vector<RhoHatGrid> grids{rho_hat_grid(u, phi.sigma2, zmax, 0.01, kDefaultLambdaNodes, false)};
    if (phi.finite_second_moment)
      grids.push_back(neg_psi2_grid(u, phi.sigma2, zmax - 0.01, 0.01, 1e-3, false));
    for (const RhoHatGrid& g : grids) {
      const Eigen::Index n = g.z.size(), m = g.center();
      for (Eigen::Index i = 0; i < n; ++i)
        herm = std::max(herm, std::abs(g.values[i] - std::conj(g.values[n - 1 - i])));
      for (Eigen::Index i = 0; i < n; ++i)
        pd = std::max(pd, std::abs(g.values[i]) - g.values[m].real());
    }
    // round trip on and between unwrap nodes
    for (double z = -zmax; z <= zmax; z += 0.0137) {
      const Complex p = phi(z);
      trip = std::max(trip, std::abs(std::exp(distinguished_log(u, z)) - p));
      trip = std::max(trip, std::abs(std::exp(log_phi_at(u, z)) - p));
    }
  }
  c.expect(herm <= 1e-9, "hermitian " + std::to_string(herm));
  c.expect(pd <= 1e-9, "pd bound " + std::to_string(pd));
  c.expect(trip <= 1e-8, "round trip " + std::to_string(trip));

  // same triplet, two truncation functions: drifts differ, rho_hat must not
  for (const json& m : {json{{"kind", "density"}, {"name", "gamma"}, {"params", {{"c", 1}, {"alpha", 1}}}},
                        json{{"kind", "compound"}, {"c", 1.5},
                             {"jump", {{"type", "uniform"}, {"a", -0.5}, {"b", 2}}}},
                        json{{"kind", "atoms"}, {"atoms", {{-2.0, 0.3}, {0.5, 1.0}}}}}) {
    json a = {{"family", "triplet"}, {"gamma", 0.2}, {"sigma2", 0.3}, {"measure", m}};
    json b = a;
    b["truncation"] = "rational";
    const CharFn pa = charfn_from_json(a), pb = charfn_from_json(b);
    const UnwrappedLog ua = unwrap_log(pa, 4.5), ub = unwrap_log(pb, 4.5);
    for (double z = -3.0; z <= 3.0 + 1e-9; z += 0.25)
      trunc = std::max(trunc, std::abs(rho_hat(ua, pa.sigma2, z) - rho_hat(ub, pb.sigma2, z)));
  }
  c.expect(trunc <= 1e-8, "truncation invariance " + std::to_string(trunc));

  double worst_neg = 0.0;
  for (const Row& r : nonneg_pool)
    if (r.u + r.err < worst_neg) {
      worst_neg = r.u + r.err;
      c.expect(false, "u=" + std::to_string(r.u) + " below -err at x=" + std::to_string(r.x));
    }
  c.expect(!nonneg_pool.empty(), "no outputs collected");
  c.detail << " hermitian=" << herm << " pd_excess=" << pd << " truncation=" << trunc
           << " roundtrip=" << trip << " checked_outputs=" << nonneg_pool.size();
  return report(7, "property suite", c, secs_since(t0));
}

bool criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  double worst = 0.0;
  for (const oracle::OracleCase& oc : {oracle::gamma_case(1.0, 1.0), oracle::compound_uniform_case(1.0, 0.0, 1.0)}) {
    const UnwrappedLog u = unwrap_log(oc.charfn, 4.5);
    for (int i = -30; i <= 30; ++i) {
      const double z = 0.1 * i;
      worst = std::max(worst, std::abs(rho_hat(u, oc.charfn.sigma2, z) - oracle::brute_rho_hat(oc, z)));
    }
  }
  c.expect(worst <= 1e-6, "max diff " + std::to_string(worst));
  c.detail << " max_diff=" << worst;
  return report(8, "oracle independence", c, secs_since(t0));
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

bool criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("levy_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string cfg = (dir / "determinism.json").string();
  {
    std::ofstream f(cfg);
    f << json{{"distribution", kGamma11}, {"xgrid", {{"from", 0.5}, {"to", 3}, {"step", 0.5}}}}.dump();
  }
  std::string outs[2];
  for (int i = 0; i < 2; ++i) {
    const std::string out = (dir / ("run" + std::to_string(i) + ".csv")).string();
    const std::string cmd = std::string(LEVY_INVERT_EXE) + " density --config " + cfg + " --out " + out;
    const int rc = std::system(cmd.c_str());
    c.expect(rc == 0, "run " + std::to_string(i) + " status " + std::to_string(rc));
    outs[i] = slurp(out);
  }
  c.expect(!outs[0].empty() && outs[0] == outs[1], "csv differs");
  std::filesystem::remove_all(dir);
  c.detail << " bytes=" << outs[0].size();
  return report(9, "determinism", c, secs_since(t0));
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3,
                                                   criterion4, criterion5, criterion6,
                                                   criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      if (!criteria[i]()) ++failed;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %zu: exception: %s\n", i + 1, e.what());
      ++failed;
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
