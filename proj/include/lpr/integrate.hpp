#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lpr/linalg.hpp"

namespace lpr {

enum class Method { rk4, rkf45 };

Method parse_method(const std::string& name);
std::string to_string(Method m);

using OdeRhs = std::function<VecD(double t, const VecD& y)>;
// Applied to the state after every accepted step (e.g. chart re-centering).
using StepHook = std::function<void(VecD& y)>;

struct IntegrateOptions {
  double dt = 1e-3;  // RK4 step; output spacing for both methods
  double t_final = 1.0;
  Method method = Method::rk4;
  double tol = 1e-10;  // RKF45 local error per unit step, mixed abs/rel
  StepHook after_step;
};

// Samples at t_k = k dt (the last one at t_final). When the RHS throws a
// DomainError (or a subclass-like geometric error) mid-run the samples so far
// are kept and `error` names the cause.
struct OdeSolution {
  std::vector<double> times;
  std::vector<VecD> states;
  std::string error;
  bool truncated() const { return !error.empty(); }
};

// Throws ParameterError for dt, t_final or tol <= 0 and StiffnessError when
// the adaptive step falls below 1e-12.
OdeSolution integrate(const OdeRhs& rhs, const VecD& y0, const IntegrateOptions& opts);

VecD rk4_step(const OdeRhs& rhs, double t, const VecD& y, double h);

}  // namespace lpr
