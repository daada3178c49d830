#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levy/error.hpp"
#include "levy/run.hpp"

namespace {

using nlohmann::json;

// Remaining "--a.b value" / "--a.b=value" pairs become config overrides.
void apply_extras(json& doc, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2)
      throw levy::DomainError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw levy::DomainError("override --" + key + " needs a value");
      value = extras[++i];
    }
    levy::cli::apply_override(doc, key, value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover a Levy measure from a characteristic function"};
  app.allow_extras();
  std::string task, config_path, out;
  bool allow_small_x = false;
  app.add_option("task", task, "density | mass | atoms | rhohat")->required();
  app.add_option("--config", config_path, "JSON run config")->required();
  app.add_option("--out", out, "output CSV path");
  app.add_flag("--allow-small-x", allow_small_x, "keep |x| < 0.1 on route eq3");
  app.footer("Any config field can be overridden with its dotted name, e.g. --numerics.zmax 30");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : levy::cli::kConfigError;
  }

  try {
    std::ifstream f(config_path);
    if (!f) throw levy::DomainError("cannot read config '" + config_path + "'");
    json doc;
    try {
      doc = json::parse(f);
    } catch (const json::exception& e) {
      throw levy::DomainError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw levy::DomainError("config must be a JSON object");
    apply_extras(doc, app.remaining());
    doc["task"] = task;
    if (!out.empty()) doc["output"] = out;
    if (allow_small_x) doc["allowSmallX"] = true;
    const levy::cli::RunConfig cfg = levy::cli::config_from_json(doc);
    return levy::cli::run(cfg, std::cerr);
  } catch (const levy::DomainError& e) {
    std::cerr << "levy-invert: " << e.what() << '\n';
    return levy::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "levy-invert: " << e.what() << '\n';
    return levy::cli::kFailure;
  }
}
