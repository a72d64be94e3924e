#include "lpr/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace lpr {

namespace {

void require_domain(const SmoothMap& map, const VecD& point) {
  if (point.size() != map.inputs())
    throw ShapeError(map.name() + ": expected " + std::to_string(map.inputs()) + " inputs");
  if (!map.in_domain(point)) throw DomainError(map.name() + ": point outside domain");
}

MatD dual_jacobian(const SmoothMap& map, const VecD& point) {
  const int n = map.inputs();
  MatD jac(map.outputs(), n);
  for (int j = 0; j < n; ++j) {
    Vec<D1> x = point.cast<D1>();
    x(j).d = 1.0;
    jac.col(j) = tangent_part(map.eval(x));
  }
  return jac;
}

double rel(double exact, double approx) { return std::abs(exact - approx) / std::max(1.0, std::abs(exact)); }

}  // namespace

Jet2 evaluate_jet(const SmoothMap& map, const VecD& point, int order) {
  if (order != 1 && order != 2) throw ParameterError("evaluate_jet: order must be 1 or 2");
  require_domain(map, point);
  Jet2 jet;
  jet.value = map.eval(point);
  jet.jacobian = dual_jacobian(map, point);
  if (order == 2) {
    const int n = map.inputs();
    const int m = map.outputs();
    jet.hessian = Tensor3(m, n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Vec<D2> x = point.cast<D2>();
        x(i).v.d = 1.0;
        x(j).d.v = 1.0;
        Vec<D2> y = map.eval(x);
        for (int o = 0; o < m; ++o) {
          jet.hessian(o, i, j) = y(o).d.d;
          jet.hessian(o, j, i) = y(o).d.d;
        }
      }
    }
  }
  return jet;
}

CheckReport fd_check(const SmoothMap& map, const VecD& point, double h) {
  if (!(h > 0.0)) throw ParameterError("fd_check: step must be positive");
  require_domain(map, point);
  const int n = map.inputs();
  const int m = map.outputs();
  Jet2 jet = evaluate_jet(map, point, 2);

  double jac_res = 0.0, hess_res = 0.0, sym_res = 0.0;
  for (int j = 0; j < n; ++j) {
    VecD xp = point, xm = point;
    xp(j) += h;
    xm(j) -= h;
    VecD fd = (map.eval(xp) - map.eval(xm)) / (2.0 * h);
    MatD jp = dual_jacobian(map, xp), jm = dual_jacobian(map, xm);
    for (int o = 0; o < m; ++o) {
      jac_res = std::max(jac_res, rel(jet.jacobian(o, j), fd(o)));
      for (int k = 0; k < n; ++k) {
        double fdh = (jp(o, k) - jm(o, k)) / (2.0 * h);
        hess_res = std::max(hess_res, rel(jet.hessian(o, k, j), fdh));
      }
    }
  }
  // The dual hessian is filled symmetrically; check the independent
  // mixed partials instead by re-seeding in swapped order.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec<D2> x = point.cast<D2>();
      x(j).v.d = 1.0;
      x(i).d.v = 1.0;
      Vec<D2> y = map.eval(x);
      for (int o = 0; o < m; ++o) sym_res = std::max(sym_res, rel(jet.hessian(o, i, j), y(o).d.d));
    }
  }
  std::vector<double> pt(point.data(), point.data() + point.size());
  CheckReport report;
  report.record(map.name() + "/jacobian", jac_res, 1e-6, pt);
  report.record(map.name() + "/hessian", hess_res, 1e-5, pt);
  report.record(map.name() + "/hessian_symmetry", sym_res, 1e-10, pt);
  return report;
}

}  // namespace lpr
