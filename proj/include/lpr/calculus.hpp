#pragma once

#include <functional>
#include <string>
#include <utility>

#include "lpr/check_report.hpp"
#include "lpr/dual.hpp"
#include "lpr/linalg.hpp"

namespace lpr {

// Value, first and second derivatives of a vector map.
// jacobian(o, i) = d out_o / d in_i, hessian(o, i, j) = d^2 out_o / d in_i d in_j.
struct Jet2 {
  VecD value;
  MatD jacobian;
  Tensor3 hessian;  // empty for order-1 jets
};

// A map R^n -> R^m evaluable on double, first- and second-order dual scalars.
class SmoothMap {
 public:
  template <class S>
  using Fn = std::function<Vec<S>(const Vec<S>&)>;
  using DomainFn = std::function<bool(const VecD&)>;

  SmoothMap(std::string name, int n_in, int n_out, Fn<double> f0, Fn<D1> f1, Fn<D2> f2,
            DomainFn domain = {})
      : name_(std::move(name)),
        n_in_(n_in),
        n_out_(n_out),
        f0_(std::move(f0)),
        f1_(std::move(f1)),
        f2_(std::move(f2)),
        domain_(std::move(domain)) {}

  const std::string& name() const { return name_; }
  int inputs() const { return n_in_; }
  int outputs() const { return n_out_; }
  bool in_domain(const VecD& x) const { return !domain_ || domain_(x); }

  template <class S>
  Vec<S> eval(const Vec<S>& x) const {
    if constexpr (std::is_same_v<S, double>) return f0_(x);
    else if constexpr (std::is_same_v<S, D1>) return f1_(x);
    else return f2_(x);
  }

 private:
  std::string name_;
  int n_in_, n_out_;
  Fn<double> f0_;
  Fn<D1> f1_;
  Fn<D2> f2_;
  DomainFn domain_;
};

// Wraps a generic lambda `[](const auto& x) { ... }` returning Vec<S>.
template <class F>
SmoothMap make_smooth_map(std::string name, int n_in, int n_out, F f,
                          SmoothMap::DomainFn domain = {}) {
  return SmoothMap(
      std::move(name), n_in, n_out, [f](const Vec<double>& x) { return Vec<double>(f(x)); },
      [f](const Vec<D1>& x) { return Vec<D1>(f(x)); }, [f](const Vec<D2>& x) { return Vec<D2>(f(x)); },
      std::move(domain));
}

// Throws DomainError outside the map's domain, ParameterError for order not in {1, 2}.
Jet2 evaluate_jet(const SmoothMap& map, const VecD& point, int order = 2);

// Dual-number jacobian/hessian against central differences with step h.
// Entries: "<name>/jacobian" (tol 1e-6), "<name>/hessian" (tol 1e-5),
// "<name>/hessian_symmetry" (tol 1e-10). Residuals are |diff| / max(1, |exact|).
CheckReport fd_check(const SmoothMap& map, const VecD& point, double h = 1e-5);

// Directional derivative helpers used throughout: seed x + eps * dir.
template <class T>
Vec<Dual<T>> seed_direction(const Vec<T>& x, const Vec<T>& dir) {
  Vec<Dual<T>> out(x.size());
  for (int i = 0; i < x.size(); ++i) out(i) = Dual<T>(x(i), dir(i));
  return out;
}

}  // namespace lpr
