#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "levy/error.hpp"
#include "levy/run.hpp"

using namespace levy;
using namespace levy::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("levy_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int invoke(const std::string& args) {
  const int rc = std::system((std::string(LEVY_INVERT_EXE) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string write_config(const fs::path& dir, const std::string& name, const json& doc) {
  const fs::path p = dir / name;
  std::ofstream(p) << doc.dump();
  return p.string();
}

double csv_cell(const std::string& csv, int row, int col) {
  std::istringstream is(csv);
  std::string line;
  for (int i = 0; i <= row; ++i) std::getline(is, line);
  std::istringstream ls(line);
  std::string cell;
  for (int i = 0; i <= col; ++i) std::getline(ls, cell, ',');
  return std::stod(cell);
}

}  // namespace

TEST_CASE("config parsing") {
  const json doc = json::parse(R"J({
    "distribution": {"family": "gamma", "c": 1, "alpha": 1},
    "task": "density",
    "xgrid": {"from": 0.5, "to": 2, "step": 0.5},
    "numerics": {"Zlist": [20, 30, 40], "damping": "gaussian(0.3)", "zstep": 0.02}
  })J");
  const RunConfig c = config_from_json(doc);
  CHECK(c.task == Task::density);
  CHECK(c.xgrid == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  REQUIRE(c.numerics.Zlist);
  CHECK(c.numerics.Zlist->back() == 40.0);
  REQUIRE(c.numerics.damping);
  CHECK(c.numerics.damping->kind == DampingKind::gaussian);
  CHECK(c.numerics.damping->width == 0.3);
  CHECK(c.numerics.zstep == 0.02);
}

TEST_CASE("config errors") {
  const json base = json::parse(R"({"distribution": {"family": "gamma", "c": 1, "alpha": 1}, "task": "density", "xgrid": [1]})");
  CHECK_NOTHROW(config_from_json(base));
  for (const char* patch : {R"({"task": "spectrum"})", R"({"xgrid": null})", R"({"numerics": {"zmax": 20000}})",
                            R"({"numerics": {"zstep": 1e-6}})", R"({"route": "eq9"})",
                            R"({"numerics": {"damping": "boxcar"}})", R"({"xgrid": "1..2"})",
                            R"({"bogus": 1})", R"({"numerics": {"zMax": 3}})"}) {
    json d = base;
    d.merge_patch(json::parse(patch));
    CAPTURE(patch);
    CHECK_THROWS_AS(config_from_json(d), DomainError);
  }
  json m = base;
  m["task"] = "mass";
  CHECK_THROWS_AS(config_from_json(m), DomainError);
  m["interval"] = {2, 1};
  CHECK_THROWS_AS(config_from_json(m), DomainError);
  json r = base;
  r["task"] = "rhohat";
  CHECK_THROWS_AS(config_from_json(r), DomainError);
}

TEST_CASE("dotted overrides") {
  json d = json::parse(R"({"numerics": {"zmax": 3}})");
  apply_override(d, "numerics.zmax", "30");
  apply_override(d, "numerics.damping", "fejer");
  apply_override(d, "numerics.Zlist", "[1,2]");
  apply_override(d, "route", "eq3");
  CHECK(d["numerics"]["zmax"] == 30);
  CHECK(d["numerics"]["damping"] == "fejer");
  CHECK(d["numerics"]["Zlist"].size() == 2);
  CHECK(d["route"] == "eq3");
  json s = json::parse(R"({"a": 1})");
  CHECK_THROWS_AS(apply_override(s, "a.b", "2"), DomainError);
}

TEST_CASE("auto route") {
  auto route_of = [](const json& dist, const char* task) {
    json d = {{"distribution", dist}, {"task", task}, {"xgrid", {1.0}}, {"interval", {0.5, 1.5}}, {"kmax", 1}};
    return execute(config_from_json(d)).diagnostics.value("route", std::string());
  };
  CHECK(route_of(json::parse(R"({"family":"gamma","c":1,"alpha":1})"), "density") == "eq4");
  CHECK(route_of(json::parse(R"({"family":"cauchy","c":1})"), "density") == "eq3");
  CHECK(route_of(json::parse(R"({"family":"gamma","c":1,"alpha":1})"), "mass") == "eq1");
  CHECK(route_of(json::parse(R"({"family":"negative_binomial","c":1,"p":0.5})"), "atoms") == "eq1");
}

TEST_CASE("execute: exit statuses") {
  SUBCASE("config error") {
    json d = {{"distribution", {{"family", "levy"}}}, {"task", "density"}, {"xgrid", {1.0}}};
    CHECK(execute(config_from_json(d)).exit_code == kConfigError);
  }
  SUBCASE("unwrap failure") {
    json d = {{"distribution", {{"family", "normal"}}}, {"task", "rhohat"}, {"numerics", {{"zmax", 9}}}};
    CHECK(execute(config_from_json(d)).exit_code == kUnwrapError);
  }
  SUBCASE("tolerance not met still writes rows") {
    json d = {{"distribution", {{"family", "gamma"}, {"c", 1}, {"alpha", 1}}},
              {"task", "density"},
              {"route", "eq3"},
              {"xgrid", {1.0}},
              {"numerics", {{"Zlist", {2, 3, 4}}, {"tol", 1e-9}}}};
    const RunReport r = execute(config_from_json(d));
    CHECK(r.exit_code == kToleranceNotMet);
    CHECK(r.csv.rfind("x,u,err,route\n", 0) == 0);
    CHECK(r.csv.size() > 20);
  }
}

TEST_CASE("eq3 drops |x| < 0.1 unless asked") {
  json d = {{"distribution", {{"family", "gamma"}, {"c", 1}, {"alpha", 1}}},
            {"task", "density"},
            {"route", "eq3"},
            {"xgrid", {0.05, 1.0}}};
  const RunReport a = execute(config_from_json(d));
  CHECK(std::count(a.csv.begin(), a.csv.end(), '\n') == 2);
  d["allowSmallX"] = true;
  const RunReport b = execute(config_from_json(d));
  CHECK(std::count(b.csv.begin(), b.csv.end(), '\n') == 3);
}

TEST_CASE("binary: cauchy density, normal rhohat, nb atoms") {
  TempDir tmp;
  const std::string cauchy = write_config(tmp.path, "cauchy.json",
      json::parse(R"({"distribution": {"family": "cauchy", "c": 1}, "xgrid": {"from": 0.5, "to": 5, "step": 0.5}})"));
  const fs::path out = tmp.path / "cauchy.csv";
  REQUIRE(invoke("density --config " + cauchy + " --out " + out.string()) == 0);
  const std::string csv = slurp(out);
  CHECK(csv_cell(csv, 0 + 4, 0) == 2.0);
  CHECK(csv_cell(csv, 4, 1) == doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-3));
  const json diag = json::parse(slurp(out.string() + ".diagnostics.json"));
  for (const char* k : {"rho_hat_zero", "pd_violations", "err_estimates", "route"}) CHECK(diag.contains(k));
  CHECK(diag["route"] == "eq3");
  CHECK(diag["pd_violations"] == 0);

  const std::string normal = write_config(tmp.path, "normal.json", json::parse(R"({"distribution": {"family": "normal"}})"));
  const fs::path nout = tmp.path / "normal.csv";
  REQUIRE(invoke("rhohat --config " + normal + " --numerics.zmax 3 --out " + nout.string()) == 0);
  const std::string ncsv = slurp(nout);
  CHECK(ncsv.rfind("z,re,im,err\n", 0) == 0);
  std::istringstream is(ncsv);
  std::string line;
  std::getline(is, line);
  int rows = 0;
  for (; std::getline(is, line); ++rows) {
    CHECK(std::abs(csv_cell("h\n" + line, 1, 1)) < 1e-9);
    CHECK(std::abs(csv_cell("h\n" + line, 1, 2)) < 1e-9);
  }
  CHECK(rows == 601);

  const std::string nb = write_config(tmp.path, "nb.json",
      json::parse(R"({"distribution": {"family": "negative_binomial", "c": 1, "p": 0.5}, "kmax": 4})"));
  const fs::path aout = tmp.path / "nb.csv";
  REQUIRE(invoke("atoms --config " + nb + " --out=" + aout.string()) == 0);
  const std::string acsv = slurp(aout);
  CHECK(acsv.rfind("a,b,mass,err,route\n", 0) == 0);
  const double want[] = {0.5, 0.125, 0.041667, 0.015625};
  for (int k = 0; k < 4; ++k) CHECK(csv_cell(acsv, k + 1, 2) == doctest::Approx(want[k]).epsilon(5e-2));
}

TEST_CASE("binary: exit codes and determinism") {
  TempDir tmp;
  CHECK(invoke("density --config " + (tmp.path / "missing.json").string()) == kConfigError);
  const std::string bad = write_config(tmp.path, "bad.json", json::parse(R"({"distribution": {"family": "gamma", "c": -1, "alpha": 1}, "xgrid": [1]})"));
  CHECK(invoke("density --config " + bad + " --out " + (tmp.path / "bad.csv").string()) == kConfigError);
  CHECK(invoke("spectrum --config " + bad) == kConfigError);
  const std::string normal = write_config(tmp.path, "n.json", json::parse(R"({"distribution": {"family": "normal"}})"));
  CHECK(invoke("rhohat --config " + normal + " --numerics.zmax 9 --out " + (tmp.path / "n.csv").string()) == kUnwrapError);

  const std::string g = write_config(tmp.path, "g.json",
      json::parse(R"({"distribution": {"family": "gamma", "c": 1, "alpha": 1}, "xgrid": {"from": 0.5, "to": 3, "step": 0.25}, "route": "eq3"})"));
  const fs::path o1 = tmp.path / "g1.csv", o2 = tmp.path / "g2.csv";
  REQUIRE(invoke("density --config " + g + " --out " + o1.string()) == 0);
  REQUIRE(invoke("density --config " + g + " --out " + o2.string()) == 0);
  CHECK(slurp(o1) == slurp(o2));
  CHECK_FALSE(slurp(o1).empty());
  // no temporaries left behind
  for (const auto& e : fs::directory_iterator(tmp.path)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
}
