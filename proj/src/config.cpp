#include "lpr/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

const std::set<std::string> kTopKeys{"model",  "dt",     "t_final", "integrator",        "tol",
                                     "seed",   "samples", "output", "format", "compare_tolerance",
                                     "inject_fault", "params", "initial"};
const std::set<std::string> kInitialKeys{"x", "f", "xdot", "fdot", "p"};
const std::set<std::string> kFaults{"", "inv_hv", "flip_p"};

std::string where(const toml::node& n) {
  const auto& src = n.source();
  return " (line " + std::to_string(src.begin.line) + ")";
}

double get_double(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;
  throw ConfigError("'" + key + "' must be a number" + where(n));
}

std::string get_string(const toml::node& n, const std::string& key) {
  if (auto v = n.value<std::string>()) return *v;
  throw ConfigError("'" + key + "' must be a string" + where(n));
}

std::int64_t get_int(const toml::node& n, const std::string& key) {
  if (n.is_integer()) return *n.value<std::int64_t>();
  throw ConfigError("'" + key + "' must be an integer" + where(n));
}

VecD get_vector(const toml::node& n, const std::string& key) {
  const toml::array* arr = n.as_array();
  if (!arr) throw ConfigError("initial." + key + " must be an array of numbers" + where(n));
  VecD v(static_cast<int>(arr->size()));
  for (std::size_t i = 0; i < arr->size(); ++i) v(static_cast<int>(i)) = get_double((*arr)[i], "initial." + key);
  return v;
}

SimConfig from_table(const toml::table& tbl, SimConfig cfg) {
  for (auto&& [k, node] : tbl) {
    const std::string key(k.str());
    if (!kTopKeys.count(key)) throw ConfigError("unknown config key '" + key + "'" + where(node));
    if (key == "model") cfg.model = get_string(node, key);
    else if (key == "dt") cfg.dt = get_double(node, key);
    else if (key == "t_final") cfg.t_final = get_double(node, key);
    else if (key == "integrator") {
      try {
        cfg.integrator = parse_method(get_string(node, key));
      } catch (const ParameterError& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "tol") cfg.tol = get_double(node, key);
    else if (key == "seed") {
      auto s = get_int(node, key);
      if (s < 0) throw ConfigError("'seed' must be non-negative" + where(node));
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "samples") {
      auto s = get_int(node, key);
      if (s < 1 || s > 1000000) throw ConfigError("'samples' must be in [1, 1e6]" + where(node));
      cfg.samples = static_cast<int>(s);
    } else if (key == "output") cfg.output = get_string(node, key);
    else if (key == "format") cfg.format = get_string(node, key);
    else if (key == "compare_tolerance") cfg.compare_tolerance = get_double(node, key);
    else if (key == "inject_fault") cfg.inject_fault = get_string(node, key);
    else if (key == "params") {
      const toml::table* p = node.as_table();
      if (!p) throw ConfigError("'params' must be a table" + where(node));
      for (auto&& [pk, pv] : *p) cfg.params[std::string(pk.str())] = get_double(pv, "params." + std::string(pk.str()));
    } else if (key == "initial") {
      const toml::table* p = node.as_table();
      if (!p) throw ConfigError("'initial' must be a table" + where(node));
      for (auto&& [ik, iv] : *p) {
        const std::string name(ik.str());
        if (!kInitialKeys.count(name)) throw ConfigError("unknown initial component '" + name + "'" + where(iv));
        VecD v = get_vector(iv, name);
        if (name == "x") cfg.initial.x = v;
        else if (name == "f") cfg.initial.f = v;
        else if (name == "xdot") cfg.initial.xdot = v;
        else if (name == "fdot") cfg.initial.fdot = v;
        else cfg.initial.p = v;
      }
    }
  }
  return cfg;
}

std::vector<double> to_std(const VecD& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

void SimConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be a positive finite number");
  };
  positive(dt, "dt");
  positive(t_final, "t_final");
  positive(tol, "tol");
  if (compare_tolerance) positive(*compare_tolerance, "compare_tolerance");
  if (dt > t_final) throw ConfigError("dt must not exceed t_final");
  if (t_final / dt > 1e8) throw ConfigError("t_final / dt exceeds 1e8 steps");
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (!kFaults.count(inject_fault)) throw ConfigError("unknown fault '" + inject_fault + "'");
  const auto names = model_names();
  if (std::find(names.begin(), names.end(), model) == names.end()) throw ConfigError("unknown model '" + model + "'");
}

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["params"] = params;
  j["dt"] = dt;
  j["t_final"] = t_final;
  j["integrator"] = to_string(integrator);
  j["tol"] = tol;
  j["seed"] = seed;
  j["samples"] = samples;
  j["format"] = format;
  if (compare_tolerance) j["compare_tolerance"] = *compare_tolerance;
  if (!inject_fault.empty()) j["inject_fault"] = inject_fault;
  nlohmann::json init = nlohmann::json::object();
  if (initial.x) init["x"] = to_std(*initial.x);
  if (initial.f) init["f"] = to_std(*initial.f);
  if (initial.xdot) init["xdot"] = to_std(*initial.xdot);
  if (initial.fdot) init["fdot"] = to_std(*initial.fdot);
  if (initial.p) init["p"] = to_std(*initial.p);
  j["initial"] = init;
  return j;
}

SimConfig parse_config_string(const std::string& text, SimConfig base) {
  try {
    return from_table(toml::parse(text), std::move(base));
  } catch (const toml::parse_error& e) {
    throw ConfigError("config parse error: " + std::string(e.description()) + " (line " +
                      std::to_string(e.source().begin.line) + ")");
  }
}

SimConfig parse_config_file(const std::string& path, SimConfig base) {
  try {
    return from_table(toml::parse_file(path), std::move(base));
  } catch (const toml::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + std::string(e.description()) + " (line " +
                      std::to_string(e.source().begin.line) + ")");
  }
}

ReducedState initial_state(const SimConfig& cfg, const Model& model) {
  ReducedState s = ReducedState::from_vector(model.default_initial_state(), model.dims());
  auto take = [](const std::optional<VecD>& given, VecD& slot, const char* name) {
    if (!given) return;
    if (given->size() != slot.size())
      throw ConfigError(std::string("initial.") + name + " needs " + std::to_string(slot.size()) + " entries");
    slot = *given;
  };
  take(cfg.initial.x, s.x, "x");
  take(cfg.initial.f, s.f, "f");
  take(cfg.initial.xdot, s.xdot, "xdot");
  take(cfg.initial.fdot, s.fdot, "fdot");
  take(cfg.initial.p, s.p, "p");
  return s;
}

}  // namespace lpr
