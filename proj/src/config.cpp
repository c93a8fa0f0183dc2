#include "stepprec/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "stepprec/errors.hpp"

namespace stepprec {

namespace pt = boost::property_tree;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t pos = 0;
    const int v = std::stoi(item.substr(b), &pos);
    if (item.find_first_not_of(" \t", b + pos) != std::string::npos)
      throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string trimmed(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T out{};
  if (!(is >> out) || !(is >> std::ws).eof())
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <typename F>
Setter wrap(F f) {
  return [f](ExperimentConfig& c, const std::string& k, const std::string& v) {
    try {
      f(c, k, v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config key '" + k + "': " + e.what());
    }
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment", wrap([](auto& c, auto&, auto& v) { c.experiment = v; })},
      {"steps", wrap([](auto& c, auto& k, auto& v) { c.steps = parse_number<int>(k, v); })},
      {"alpha_kind", wrap([](auto& c, auto&, auto& v) { c.alpha_kind = parse_alpha_kind(v); })},
      {"alpha_min", wrap([](auto& c, auto& k, auto& v) { c.alpha_min = parse_number<double>(k, v); })},
      {"alpha_max", wrap([](auto& c, auto& k, auto& v) { c.alpha_max = parse_number<double>(k, v); })},
      {"dim", wrap([](auto& c, auto& k, auto& v) { c.model.dim = parse_number<int>(k, v); })},
      {"spectral_radius",
       wrap([](auto& c, auto& k, auto& v) { c.model.spectral_radius = parse_number<double>(k, v); })},
      {"spectral_bound",
       wrap([](auto& c, auto& k, auto& v) { c.model.spectral_bound = parse_number<double>(k, v); })},
      {"per_step_jacobians",
       wrap([](auto& c, auto& k, auto& v) { c.model.per_step_jacobians = parse_bool(k, v); })},
      {"bias_scale",
       wrap([](auto& c, auto& k, auto& v) { c.model.bias_scale = parse_number<double>(k, v); })},
      {"nonlinearity",
       wrap([](auto& c, auto& k, auto& v) { c.model.nonlinearity = parse_number<double>(k, v); })},
      {"error_profile",
       wrap([](auto& c, auto&, auto& v) { c.model.error_profile = parse_error_profile(v); })},
      {"error_structure",
       wrap([](auto& c, auto&, auto& v) { c.model.error_structure = parse_error_structure(v); })},
      {"error_scale",
       wrap([](auto& c, auto& k, auto& v) { c.model.error_scale = parse_number<double>(k, v); })},
      {"error_coherence",
       wrap([](auto& c, auto& k, auto& v) { c.model.error_coherence = parse_number<double>(k, v); })},
      {"seed", wrap([](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); })},
      {"samples", wrap([](auto& c, auto& k, auto& v) { c.samples = parse_number<int>(k, v); })},
      {"budget", wrap([](auto& c, auto& k, auto& v) { c.budget = parse_number<int>(k, v); })},
      {"quant_speedup",
       wrap([](auto& c, auto& k, auto& v) { c.quant_speedup = parse_number<double>(k, v); })},
      {"target_speedup",
       wrap([](auto& c, auto& k, auto& v) { c.target_speedup = parse_number<double>(k, v); })},
      {"full_steps", wrap([](auto& c, auto& k, auto& v) { c.full_steps = parse_number<int>(k, v); })},
      {"enumeration_cap",
       wrap([](auto& c, auto& k, auto& v) { c.enumeration_cap = parse_number<std::uint64_t>(k, v); })},
      {"schedules_per_k",
       wrap([](auto& c, auto& k, auto& v) { c.schedules_per_k = parse_number<int>(k, v); })},
      {"validate_ks", wrap([](auto& c, auto&, auto& v) { c.validate_ks = parse_int_list(v); })},
      {"rank_ks", wrap([](auto& c, auto&, auto& v) { c.rank_ks = parse_int_list(v); })},
      {"pareto_ks", wrap([](auto& c, auto&, auto& v) { c.pareto_ks = parse_int_list(v); })},
      {"small_profile",
       wrap([](auto& c, auto&, auto& v) { c.small_profile = parse_error_profile(v); })},
      {"small_structure",
       wrap([](auto& c, auto&, auto& v) { c.small_structure = parse_error_structure(v); })},
      {"small_scale",
       wrap([](auto& c, auto& k, auto& v) { c.small_scale = parse_number<double>(k, v); })},
      {"small_steps",
       wrap([](auto& c, auto& k, auto& v) { c.small_steps = parse_number<int>(k, v); })},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(steps >= 2, "steps", "T must be at least 2");
  require(alpha_min > 0.0 && alpha_min < alpha_max, "alpha_min", "need 0 < alpha_min < alpha_max");
  require(alpha_max <= 1.0, "alpha_max", "must be <= 1");
  require(model.dim >= 1, "dim", "must be positive");
  require(model.spectral_bound > 0.0, "spectral_bound", "must be positive");
  require(model.spectral_radius >= 0.0 && model.spectral_radius <= model.spectral_bound,
          "spectral_radius", "must lie in [0, spectral_bound]");
  require(model.bias_scale >= 0.0, "bias_scale", "must be >= 0");
  require(model.nonlinearity >= 0.0, "nonlinearity", "must be >= 0");
  require(model.error_scale >= 0.0, "error_scale", "must be >= 0");
  require(model.error_coherence >= 0.0 && model.error_coherence <= 1.0, "error_coherence",
          "must lie in [0, 1]");
  require(model.error_structure != ErrorStructure::orthogonal || model.dim >= steps,
          "error_structure", "orthogonal errors need dim >= steps");
  require(samples >= 1, "samples", "must be at least 1");
  require(budget == 0 || budget >= 3, "budget", "must be 0 (default) or at least 3");
  require(!quant_speedup || *quant_speedup > 1.0, "quant_speedup", "must exceed 1");
  require(!target_speedup || *target_speedup > 1.0, "target_speedup", "must exceed 1");
  require(!full_steps || (*full_steps >= 0 && *full_steps <= steps), "full_steps",
          "must lie in [0, steps]");
  require(enumeration_cap >= 1, "enumeration_cap", "must be positive");
  require(schedules_per_k >= 1, "schedules_per_k", "must be positive");
  for (int k : validate_ks) require(k >= 0 && k <= steps, "validate_ks", "entries must lie in [0, steps]");
  for (int k : rank_ks) require(k >= 0 && k <= steps, "rank_ks", "entries must lie in [0, steps]");
  for (int k : pareto_ks) require(k >= 0 && k <= steps, "pareto_ks", "entries must lie in [0, steps]");
  require(small_scale >= 0.0, "small_scale", "must be >= 0");
  require(small_steps >= 0 && small_steps <= steps, "small_steps", "must lie in [0, steps]");
  require(small_structure != ErrorStructure::orthogonal || model.dim >= steps, "small_structure",
          "orthogonal errors need dim >= steps");
}

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  ExperimentConfig cfg;
  for (const auto& [key, node] : tree) {
    if (!node.empty())
      throw ConfigError("config sections are not supported ('[" + key + "]'); use flat keys");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, trimmed(node.data()));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  const auto old = os.precision(17);
  os << "# resolved configuration (all defaults expanded)\n";
  os << "experiment = " << c.experiment << '\n';
  os << "steps = " << c.steps << '\n';
  os << "alpha_kind = " << to_string(c.alpha_kind) << '\n';
  os << "alpha_min = " << c.alpha_min << '\n';
  os << "alpha_max = " << c.alpha_max << '\n';
  os << "dim = " << c.model.dim << '\n';
  os << "spectral_radius = " << c.model.spectral_radius << '\n';
  os << "spectral_bound = " << c.model.spectral_bound << '\n';
  os << "per_step_jacobians = " << (c.model.per_step_jacobians ? "true" : "false") << '\n';
  os << "bias_scale = " << c.model.bias_scale << '\n';
  os << "nonlinearity = " << c.model.nonlinearity << '\n';
  os << "error_profile = " << to_string(c.model.error_profile) << '\n';
  os << "error_structure = " << to_string(c.model.error_structure) << '\n';
  os << "error_scale = " << c.model.error_scale << '\n';
  os << "error_coherence = " << c.model.error_coherence << '\n';
  os << "seed = " << c.seed << '\n';
  os << "samples = " << c.samples << '\n';
  os << "budget = " << c.resolved_budget() << '\n';
  if (c.quant_speedup) os << "quant_speedup = " << *c.quant_speedup << '\n';
  if (c.target_speedup) os << "target_speedup = " << *c.target_speedup << '\n';
  if (c.full_steps) os << "full_steps = " << *c.full_steps << '\n';
  os << "enumeration_cap = " << c.enumeration_cap << '\n';
  os << "schedules_per_k = " << c.schedules_per_k << '\n';
  os << "validate_ks = " << join(c.validate_ks) << '\n';
  os << "rank_ks = " << join(c.rank_ks) << '\n';
  if (!c.pareto_ks.empty()) os << "pareto_ks = " << join(c.pareto_ks) << '\n';
  os << "small_profile = " << to_string(c.small_profile) << '\n';
  os << "small_structure = " << to_string(c.small_structure) << '\n';
  os << "small_scale = " << c.small_scale << '\n';
  os << "small_steps = " << c.small_steps << '\n';
  os.precision(old);
}

}  // namespace stepprec
