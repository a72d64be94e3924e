#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lpr/check_report.hpp"
#include "lpr/config.hpp"
#include "lpr/trajectory.hpp"

namespace lpr {

enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitVerification = 2, kExitRuntime = 3 };

// Integrates the reduced equations and tabulates the energy. A run that
// leaves the domain yields a truncated trajectory; StiffnessError propagates.
Trajectory simulate_reduced(const Model& model, const ReducedState& s0, const IntegrateOptions& opts);

// Integrates the full Euler-Lagrange equations, re-centering the group chart
// after every step.
OdeSolution simulate_full(const Model& model, const FullState& s0, IntegrateOptions opts);

// Everything `check` verifies: structure constants, Killing brackets,
// the identity suite at cfg.samples points and derivative checks at
// min(samples, 50) points.
CheckReport check_model(const Model& model, const SimConfig& cfg);

struct Comparison {
  double max_dx = 0.0, max_df = 0.0, max_dE = 0.0, max_dp = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string advisory;  // set when a run was truncated
  bool passed() const { return max_dx <= tolerance && max_df <= tolerance && max_dE <= tolerance; }
  nlohmann::json to_json() const;
};

// Reduced trajectory vs the projection of the full trajectory started from
// initial_lift of the same data, compared at every output time both reach.
Comparison compare_dynamics(const Model& model, const SimConfig& cfg);
double default_compare_tolerance(const std::string& model);

// Drivers behind the CLI subcommands; they write to cfg.output (stdout when
// empty) and return the process exit code. Errors propagate as exceptions.
int run_check(const SimConfig& cfg);
int run_simulate(const SimConfig& cfg);
int run_compare(const SimConfig& cfg);

// Maps an exception escaping a driver to its exit code.
int exit_code_for(const std::exception& e);

}  // namespace lpr
