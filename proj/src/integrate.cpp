#include "lpr/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "lpr/errors.hpp"

namespace lpr {

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rkf45") return Method::rkf45;
  throw ParameterError("unknown integrator '" + name + "' (expected rk4 or rkf45)");
}

std::string to_string(Method m) { return m == Method::rk4 ? "rk4" : "rkf45"; }

VecD rk4_step(const OdeRhs& rhs, double t, const VecD& y, double h) {
  VecD k1 = rhs(t, y);
  VecD k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
  VecD k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
  VecD k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

constexpr double kMinStep = 1e-12;

struct FehlbergResult {
  VecD y5;
  double err;
};

// Runge-Kutta-Fehlberg 4(5); the fifth-order solution is propagated.
FehlbergResult fehlberg_step(const OdeRhs& rhs, double t, const VecD& y, double h, double tol) {
  VecD k1 = rhs(t, y);
  VecD k2 = rhs(t + h / 4, y + h * (k1 / 4));
  VecD k3 = rhs(t + 3 * h / 8, y + h * (3.0 / 32 * k1 + 9.0 / 32 * k2));
  VecD k4 = rhs(t + 12 * h / 13, y + h * (1932.0 / 2197 * k1 - 7200.0 / 2197 * k2 + 7296.0 / 2197 * k3));
  VecD k5 = rhs(t + h, y + h * (439.0 / 216 * k1 - 8.0 * k2 + 3680.0 / 513 * k3 - 845.0 / 4104 * k4));
  VecD k6 = rhs(t + h / 2,
                y + h * (-8.0 / 27 * k1 + 2.0 * k2 - 3544.0 / 2565 * k3 + 1859.0 / 4104 * k4 - 11.0 / 40 * k5));
  VecD y4 = y + h * (25.0 / 216 * k1 + 1408.0 / 2565 * k3 + 2197.0 / 4104 * k4 - 1.0 / 5 * k5);
  VecD y5 = y + h * (16.0 / 135 * k1 + 6656.0 / 12825 * k3 + 28561.0 / 56430 * k4 - 9.0 / 50 * k5 + 2.0 / 55 * k6);
  double err = 0.0;
  for (int i = 0; i < y.size(); ++i) err = std::max(err, std::abs(y5(i) - y4(i)) / (tol * (1.0 + std::abs(y(i)))));
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return {y5, err};
}

void require_finite(const VecD& y) {
  if (!y.allFinite()) throw DomainError("state became non-finite");
}

}  // namespace

OdeSolution integrate(const OdeRhs& rhs, const VecD& y0, const IntegrateOptions& opts) {
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt)) throw ParameterError("dt must be positive");
  if (!(opts.t_final > 0.0) || !std::isfinite(opts.t_final)) throw ParameterError("t_final must be positive");
  if (opts.method == Method::rkf45 && !(opts.tol > 0.0)) throw ParameterError("tolerance must be positive");

  long n_steps = static_cast<long>(std::ceil(opts.t_final / opts.dt - 1e-9));
  n_steps = std::max(n_steps, 1L);
  auto grid = [&](long k) { return k == n_steps ? opts.t_final : static_cast<double>(k) * opts.dt; };

  OdeSolution sol;
  sol.times.reserve(n_steps + 1);
  sol.states.reserve(n_steps + 1);
  VecD y = y0;
  sol.times.push_back(0.0);
  sol.states.push_back(y);
  double h = opts.dt;
  try {
    require_finite(y);
    for (long k = 1; k <= n_steps; ++k) {
      const double t0 = grid(k - 1), t1 = grid(k);
      if (opts.method == Method::rk4) {
        y = rk4_step(rhs, t0, y, t1 - t0);
        require_finite(y);
        if (opts.after_step) opts.after_step(y);
      } else {
        double t = t0;
        while (t < t1) {
          const double remaining = t1 - t;
          const bool last = h >= remaining;
          const double step = last ? remaining : h;
          FehlbergResult r = fehlberg_step(rhs, t, y, step, opts.tol);
          if (r.err <= 1.0) {
            y = r.y5;
            require_finite(y);
            if (opts.after_step) opts.after_step(y);
            t = last ? t1 : t + step;
          }
          const double factor = r.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 5.0);
          // Do not let the clipped final step shrink the controller's step.
          h = (last && r.err <= 1.0) ? std::max(h, step * factor) : step * factor;
          h = std::min(h, opts.dt);
          if (t < t1 && h < kMinStep)
            throw StiffnessError("adaptive step fell below 1e-12 at t = " + std::to_string(t));
        }
      }
      sol.times.push_back(t1);
      sol.states.push_back(y);
    }
  } catch (const StiffnessError&) {
    throw;
  } catch (const DomainError& e) {
    sol.error = e.what();
  } catch (const DegeneracyError& e) {
    sol.error = e.what();
  } catch (const GaugeError& e) {
    sol.error = e.what();
  } catch (const ChartError& e) {
    sol.error = e.what();
  }
  return sol;
}

}  // namespace lpr
