#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levy/charfn.hpp"
#include "levy/invert.hpp"

namespace levy::cli {

enum class Task { density, mass, atoms, rhohat };

Task task_from_string(const std::string& s);
std::string to_string(Task t);

struct Numerics {
  // Grid half-width; defaults to the largest truncation level.
  std::optional<double> zmax;
  double zstep = 0.01;
  double unwrap_step = 1e-3;
  int lambda_nodes = kDefaultLambdaNodes;
  // Defaults to {40, 60, 80}, shrunk to the decay horizon of phi when the
  // log has to be unwrapped.
  std::optional<std::vector<double>> Zlist;
  // Defaults: gaussian(0.5) for masses and atoms, none for densities.
  std::optional<Damping> damping;
  double fd_step = 1e-3;
  // z-integration step; 0 means the grid step.
  double quad_step = 0.0;
  double tol = 1e-3;
  bool tail_correction = true;
};

struct RunConfig {
  nlohmann::json distribution;
  Task task = Task::density;
  std::vector<double> xgrid;
  std::vector<Interval> intervals;
  int kmax = 0;
  std::string route = "auto";
  Numerics numerics;
  std::string output;
  // Keep |x| < 0.1 in eq3 density grids.
  bool allow_small_x = false;
};

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kUnwrapError = 3,
  kInvariantError = 4,
  kToleranceNotMet = 5,
};

// Parses a run document. `task` may be absent when supplied on the command
// line. Throws DomainError on malformed or out-of-bounds fields.
RunConfig config_from_json(const nlohmann::json& doc);

// Sets the dotted path (e.g. "numerics.zmax") in `doc`; the value is parsed
// as JSON when possible, otherwise kept as a string.
void apply_override(nlohmann::json& doc, const std::string& dotted, const std::string& value);

struct RunReport {
  int exit_code = kOk;
  std::string message;
  std::string csv;
  nlohmann::json diagnostics;
};

// Performs the inversion without touching the filesystem.
RunReport execute(const RunConfig& config);

// execute() and then write the CSV and "<output>.diagnostics.json", each
// through a temporary file and a rename.
int run(const RunConfig& config, std::ostream& log);

// First z (on a 0.05 grid) with |phi(z)| below 1e-11, or `limit`.
double decay_horizon(const CharFn& phi, double limit);

}  // namespace levy::cli
