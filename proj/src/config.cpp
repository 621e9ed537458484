#include "lpiv/config.hpp"

#include <cmath>
#include <fstream>

#include "lpiv/error.hpp"

namespace lpiv {

using nlohmann::json;

ExperimentConfig ExperimentConfig::defaults(Mode mode) {
  ExperimentConfig c;
  c.mode = mode;
  c.name = std::string(to_string(mode));
  c.eta = mode == Mode::continuous ? 0.1 : 1.0;
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::config, what); };
  if (name.empty()) fail("name must not be empty");
  if (!(h > 0.0) || !std::isfinite(h)) fail("h must be positive");
  if (N < 2) fail("N must be >= 2");
  if (p < 1 || fallback_p < 1) fail("p and fallback_p must be >= 1");
  if (mode == Mode::continuous && (p < 2 || fallback_p < 2))
    fail("continuous mode differentiates, so p and fallback_p must be >= 2");
  if (n < 2L * N) fail("n must cover at least one regression window of 2N samples");
  if (!(eta >= 0.0) || !std::isfinite(eta)) fail("eta must be nonnegative");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (trials < 1) fail("trials must be >= 1");
  if (stride < 1) fail("stride must be >= 1");
  if (substeps < 1) fail("substeps must be >= 1");
  if (!std::isfinite(forcing_freq)) fail("forcing_freq must be finite");
  for (double v : x0)
    if (!std::isfinite(v)) fail("x0 must be finite");
  if (bootstrap < 100) fail("bootstrap must be >= 100");
  if (kde_grid < 2) fail("kde_grid must be >= 2");
}

json to_json(const ExperimentConfig& c) {
  return json{{"name", c.name},
              {"mode", std::string(to_string(c.mode))},
              {"n", c.n},
              {"h", c.h},
              {"N", c.N},
              {"p", c.p},
              {"fallback_p", c.fallback_p},
              {"eta", c.eta},
              {"lambda", c.lambda},
              {"mu", c.mu},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"stride", c.stride},
              {"substeps", c.substeps},
              {"forcing_freq", c.forcing_freq},
              {"x0", c.x0},
              {"bootstrap", c.bootstrap},
              {"kde_grid", c.kde_grid}};
}

namespace {

void set_field(ExperimentConfig& c, const std::string& key, const json& v) {
  try {
    if (key == "name") c.name = v.get<std::string>();
    else if (key == "mode") c.mode = parse_mode(v.get<std::string>());
    else if (key == "n") c.n = v.get<long>();
    else if (key == "h") c.h = v.get<double>();
    else if (key == "N") c.N = v.get<int>();
    else if (key == "p") c.p = v.get<int>();
    else if (key == "fallback_p") c.fallback_p = v.get<int>();
    else if (key == "eta") c.eta = v.get<double>();
    else if (key == "lambda") c.lambda = v.get<double>();
    else if (key == "mu") c.mu = v.get<double>();
    else if (key == "trials") c.trials = v.get<int>();
    else if (key == "master_seed") c.master_seed = v.get<std::uint64_t>();
    else if (key == "stride") c.stride = v.get<int>();
    else if (key == "substeps") c.substeps = v.get<int>();
    else if (key == "forcing_freq") c.forcing_freq = v.get<double>();
    else if (key == "x0") c.x0 = v.get<std::array<double, 3>>();
    else if (key == "bootstrap") c.bootstrap = v.get<int>();
    else if (key == "kde_grid") c.kde_grid = v.get<int>();
    else throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, "bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j, std::optional<Mode> mode_override) {
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  Mode mode = Mode::continuous;
  if (mode_override) mode = *mode_override;
  else if (j.contains("mode")) mode = parse_mode(j.at("mode").get<std::string>());
  ExperimentConfig c = ExperimentConfig::defaults(mode);
  for (const auto& [key, value] : j.items()) set_field(c, key, value);
  if (mode_override) c.mode = *mode_override;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Mode> mode_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, "cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j, mode_override);
}

void apply_override(ExperimentConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorKind::config, "override must look like key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_field(c, key, value);
}

}  // namespace lpiv
