#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lpr/dynamics.hpp"
#include "lpr/integrate.hpp"
#include "lpr/models.hpp"

namespace lpr {

// Initial reduced data; missing components take the model's default.
struct InitialData {
  std::optional<VecD> x, f, xdot, fdot, p;
};

struct SimConfig {
  std::string model = "abelian_disk";
  ModelParams params;
  InitialData initial;
  double dt = 1e-3;
  double t_final = 10.0;
  Method integrator = Method::rk4;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int samples = 100;
  std::string output;  // empty: stdout
  std::string format = "csv";
  // Pass bound for `compare`; unset means the per-model default.
  std::optional<double> compare_tolerance;
  // Test hooks: "inv_hv" perturbs the inverse block in `check`, "flip_p"
  // negates the reduced side's initial momentum in `compare`.
  std::string inject_fault;

  // Throws ConfigError when an invariant (dt, t_final, tol > 0, ...) fails.
  void validate() const;
  nlohmann::json to_json() const;
};

// TOML: top-level keys as the field names above (integrator = "rk4"),
// plus [params] and [initial] (x, f, xdot, fdot, p arrays).
SimConfig parse_config_string(const std::string& text, SimConfig base = {});
SimConfig parse_config_file(const std::string& path, SimConfig base = {});

ReducedState initial_state(const SimConfig& cfg, const Model& model);

}  // namespace lpr
