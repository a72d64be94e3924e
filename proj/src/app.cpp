#include "lpr/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include <spdlog/spdlog.h>

#include "lpr/christoffel.hpp"
#include "lpr/errors.hpp"

namespace lpr {

namespace {

// Size of the inv_hv perturbation used by the "inv_hv" fault.
constexpr double kInjectedFault = 1e-3;
constexpr int kMaxDerivativePoints = 50;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
}

IntegrateOptions options_from(const SimConfig& cfg) {
  IntegrateOptions o;
  o.dt = cfg.dt;
  o.t_final = cfg.t_final;
  o.method = cfg.integrator;
  o.tol = cfg.tol;
  return o;
}

}  // namespace

Trajectory simulate_reduced(const Model& model, const ReducedState& s0, const IntegrateOptions& opts) {
  const Dims dims = model.dims();
  OdeSolution sol = integrate([&](double, const VecD& y) { return reduced_rhs(model, y); }, s0.to_vector(), opts);
  Trajectory traj;
  traj.dims = dims;
  traj.times = std::move(sol.times);
  traj.states = std::move(sol.states);
  traj.error = std::move(sol.error);
  traj.energies.reserve(traj.states.size());
  for (const auto& y : traj.states) traj.energies.push_back(energy(model, ReducedState::from_vector(y, dims)));
  return traj;
}

OdeSolution simulate_full(const Model& model, const FullState& s0, IntegrateOptions opts) {
  const Dims dims = model.dims();
  opts.after_step = [&](VecD& y) {
    FullState s = FullState::from_vector(y, dims);
    model.recenter(s.q, s.qdot);
    y = s.to_vector();
  };
  return integrate([&](double, const VecD& y) { return full_rhs(model, y); }, s0.to_vector(), opts);
}

CheckReport check_model(const Model& model, const SimConfig& cfg) {
  CheckReport report;
  CheckReport lie = validate_lie_data(model.lie().c);
  for (const auto& e : lie.entries()) report.record("lie_" + e.name, e.max_residual, e.tolerance, e.worst_point);
  report.merge(killing_consistency(model, sample_full_points(model, cfg.samples, cfg.seed)));

  IdentityOptions opts;
  if (cfg.inject_fault == "inv_hv") opts.inv_hv_fault = kInjectedFault;
  spdlog::info("identity suite: {} points, seed {}", cfg.samples, cfg.seed);
  report.merge(identity_suite(model, sample_reduced_points(model, cfg.samples, cfg.seed), opts));

  const int n_fd = std::min(cfg.samples, kMaxDerivativePoints);
  spdlog::info("derivative checks: {} points", n_fd);
  CheckReport fd = model_derivative_check(model, n_fd, cfg.seed);
  for (const auto& e : fd.entries()) report.record("fd_" + e.name, e.max_residual, e.tolerance, e.worst_point);
  return report;
}

nlohmann::json Comparison::to_json() const {
  nlohmann::json j;
  j["max_dx"] = max_dx;
  j["max_df"] = max_df;
  j["max_dE"] = max_dE;
  j["max_dp"] = max_dp;
  j["tolerance"] = tolerance;
  j["samples"] = samples;
  j["advisory"] = advisory.empty() ? nlohmann::json(nullptr) : nlohmann::json(advisory);
  j["passed"] = passed();
  return j;
}

double default_compare_tolerance(const std::string& model) { return model == "abelian_disk" ? 1e-7 : 1e-5; }

Comparison compare_dynamics(const Model& model, const SimConfig& cfg) {
  const Dims dims = model.dims();
  const ReducedState s0 = initial_state(cfg, model);
  const FullState full0 = initial_lift(model, s0);
  ReducedState r0 = s0;
  if (cfg.inject_fault == "flip_p") r0.p = -r0.p;

  const IntegrateOptions opts = options_from(cfg);
  const Trajectory reduced = simulate_reduced(model, r0, opts);
  const OdeSolution full = simulate_full(model, full0, opts);

  Comparison cmp;
  cmp.tolerance = cfg.compare_tolerance.value_or(default_compare_tolerance(cfg.model));
  std::size_t n = std::min(reduced.states.size(), full.states.size());
  for (std::size_t k = 0; k < n; ++k) {
    const FullState fs = FullState::from_vector(full.states[k], dims);
    ReducedState proj;
    try {
      proj = project_full_state(model, fs);
    } catch (const ChartError& e) {
      cmp.advisory = "projection failed at t = " + format_double(full.times[k]) + ": " + e.what();
      n = k;
      break;
    }
    const ReducedState red = ReducedState::from_vector(reduced.states[k], dims);
    cmp.max_dx = std::max(cmp.max_dx, (proj.x - red.x).cwiseAbs().maxCoeff());
    cmp.max_df = std::max(cmp.max_df, (proj.f - red.f).cwiseAbs().maxCoeff());
    cmp.max_dp = std::max(cmp.max_dp, (proj.p - red.p).cwiseAbs().maxCoeff());
    cmp.max_dE = std::max(cmp.max_dE, std::abs(full_energy(model, fs) - reduced.energies[k]));
  }
  cmp.samples = n;
  if (full.truncated())
    cmp.advisory = "full integration truncated at t = " + format_double(full.times.back()) + ": " + full.error;
  if (reduced.truncated())
    cmp.advisory += (cmp.advisory.empty() ? "" : "; ") + std::string("reduced integration truncated at t = ") +
                    format_double(reduced.times.back()) + ": " + reduced.error;
  return cmp;
}

int run_check(const SimConfig& cfg) {
  cfg.validate();
  auto model = instantiate(cfg.model, cfg.params);
  CheckReport report = check_model(*model, cfg);
  nlohmann::json j = report.to_json();
  j["model"] = cfg.model;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  write_text(cfg.output, j.dump(2) + "\n");
  for (const auto& e : report.entries())
    if (!e.passed()) spdlog::warn("{}: residual {:.3e} above {:.1e}", e.name, e.max_residual, e.tolerance);
  return report.passed() ? kExitPass : kExitVerification;
}

int run_simulate(const SimConfig& cfg) {
  cfg.validate();
  auto model = instantiate(cfg.model, cfg.params);
  const ReducedState s0 = initial_state(cfg, *model);
  Trajectory traj = simulate_reduced(*model, s0, options_from(cfg));
  double drift = 0.0;
  for (double e : traj.energies) drift = std::max(drift, std::abs(e - traj.energies.front()));
  traj.metadata["config"] = cfg.to_json();
  traj.metadata["max_energy_drift"] = drift;
  write_trajectory(cfg.output, cfg.format, traj);
  if (traj.truncated()) {
    spdlog::error("integration truncated at t = {}: {}", traj.times.back(), traj.error);
    return kExitRuntime;
  }
  spdlog::info("{} samples, max |E - E0| = {:.3e}", traj.times.size(), drift);
  return kExitPass;
}

int run_compare(const SimConfig& cfg) {
  cfg.validate();
  auto model = instantiate(cfg.model, cfg.params);
  Comparison cmp = compare_dynamics(*model, cfg);
  nlohmann::json j = cmp.to_json();
  j["config"] = cfg.to_json();
  write_text(cfg.output, j.dump(2) + "\n");
  if (!cmp.advisory.empty()) spdlog::warn("advisory: {}", cmp.advisory);
  if (cmp.samples < 2) {
    spdlog::error("no overlapping samples to compare");
    return kExitRuntime;
  }
  spdlog::info("max |dx| {:.3e}, |df| {:.3e}, |dE| {:.3e} (bound {:.1e})", cmp.max_dx, cmp.max_df, cmp.max_dE,
               cmp.tolerance);
  return cmp.passed() ? kExitPass : kExitVerification;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const ShapeError*>(&e))
    return kExitUsage;
  return kExitRuntime;
}

}  // namespace lpr
