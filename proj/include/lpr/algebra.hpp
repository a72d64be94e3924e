#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "lpr/check_report.hpp"
#include "lpr/linalg.hpp"

namespace lpr {

class Model;

// Structure constants c(alpha, mu, nu) = c^alpha_{mu nu} of the Lie algebra, in
// the convention fixed by the Killing fields: [K_mu, K_nu] = c^alpha_{mu nu} K_alpha
// with the vector-field bracket [X, Y]^A = X^B d_B Y^A - Y^B d_B X^A.
struct LieData {
  int dim_g = 0;
  Tensor3 c;
  std::optional<MatD> ad_invariant_form;  // informational only

  static LieData abelian(int n);
  // c^alpha_{mu nu} = sign * eps_{alpha mu nu}.
  static LieData so3(double sign);
};

// Entries "antisymmetry" and "jacobi", each with tolerance 1e-12.
// Throws ShapeError unless c is cubic.
CheckReport validate_lie_data(const Tensor3& c);

// Residual of [K_a, K_b] - c^g_{ab} K_g on P and on V at each sample point
// (Q, f), with the bracket built from dual-number jets. Entries
// "killing_bracket_P" and "killing_bracket_V", tolerance 1e-8.
CheckReport killing_consistency(const Model& model,
                                const std::vector<std::pair<VecD, VecD>>& sample_points);

// Coordinates on a neighbourhood of the identity of G.
class GroupChart {
 public:
  virtual ~GroupChart() = default;
  virtual int dim() const = 0;
  virtual VecD compose(const VecD& a, const VecD& b) const = 0;
  virtual VecD inverse(const VecD& a) const = 0;
  virtual VecD identity() const { return VecD::Zero(dim()); }
  // Group element reached by the one-parameter subgroup through xi at time 1.
  virtual VecD exp(const VecD& xi) const = 0;
  virtual double chart_radius() const = 0;
  bool in_chart(const VecD& a) const { return a.norm() < chart_radius(); }
  virtual VecD random_element(std::mt19937_64& rng, double max_radius) const = 0;
};

// SO(2) by its angle in (-pi, pi].
class SO2Chart final : public GroupChart {
 public:
  int dim() const override { return 1; }
  VecD compose(const VecD& a, const VecD& b) const override;
  VecD inverse(const VecD& a) const override;
  VecD exp(const VecD& xi) const override;
  double chart_radius() const override;
  VecD random_element(std::mt19937_64& rng, double max_radius) const override;
};

// SO(3) in rotation-vector coordinates, |q| < pi.
class SO3Chart final : public GroupChart {
 public:
  int dim() const override { return 3; }
  VecD compose(const VecD& a, const VecD& b) const override;
  VecD inverse(const VecD& a) const override;
  VecD exp(const VecD& xi) const override;
  double chart_radius() const override;
  VecD random_element(std::mt19937_64& rng, double max_radius) const override;
};

double wrap_angle(double a);

namespace so3 {

// Coefficient functions of t = |q|^2, smooth at t = 0 for every scalar type.
//   sinc(t) = sin(th)/th        one_minus_cos(t) = (1 - cos th)/th^2
//   th_minus_sin(t) = (th - sin th)/th^3
//   inv_coeff(t) = 1/th^2 - (1 + cos th)/(2 th sin th)
template <class S>
S series(const S& t, const std::array<double, 7>& k) {
  S acc = S(k[6]);
  for (int i = 5; i >= 0; --i) acc = acc * t + k[i];
  return acc;
}

inline constexpr double kSeriesBelow = 1e-2;

template <class S>
S sinc(const S& t) {
  using std::sin;
  using std::sqrt;
  if (value_of(t) < kSeriesBelow)
    return series(t, {1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880, -1.0 / 39916800,
                      1.0 / 6227020800.0});
  S th = sqrt(t);
  return sin(th) / th;
}

template <class S>
S one_minus_cos(const S& t) {
  using std::cos;
  using std::sqrt;
  if (value_of(t) < kSeriesBelow)
    return series(t, {0.5, -1.0 / 24, 1.0 / 720, -1.0 / 40320, 1.0 / 3628800, -1.0 / 479001600,
                      1.0 / 87178291200.0});
  S th = sqrt(t);
  return (1.0 - cos(th)) / t;
}

template <class S>
S th_minus_sin(const S& t) {
  using std::sin;
  using std::sqrt;
  if (value_of(t) < kSeriesBelow)
    return series(t, {1.0 / 6, -1.0 / 120, 1.0 / 5040, -1.0 / 362880, 1.0 / 39916800,
                      -1.0 / 6227020800.0, 1.0 / 1307674368000.0});
  S th = sqrt(t);
  return (th - sin(th)) / (t * th);
}

template <class S>
S inv_coeff(const S& t) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (value_of(t) < kSeriesBelow)
    return series(t, {1.0 / 12, 1.0 / 720, 1.0 / 30240, 1.0 / 1209600, 1.0 / 47900160,
                      691.0 / 1307674368000.0, 1.0 / 74724249600.0});
  S th = sqrt(t);
  return 1.0 / t - (1.0 + cos(th)) / (2.0 * th * sin(th));
}

template <class S>
Mat<S> hat(const Vec<S>& w) {
  Mat<S> m = Mat<S>::Zero(3, 3);
  m(0, 1) = -w(2);
  m(0, 2) = w(1);
  m(1, 0) = w(2);
  m(1, 2) = -w(0);
  m(2, 0) = -w(1);
  m(2, 1) = w(0);
  return m;
}

// R = exp(hat(q)).
template <class S>
Mat<S> rotation(const Vec<S>& q) {
  S t = q.dot(q);
  Mat<S> h = hat(q);
  return Mat<S>::Identity(3, 3) + sinc(t) * h + one_minus_cos(t) * (h * h);
}

// exp(q + dq) ~ exp(J_l(q) dq) exp(q).
template <class S>
Mat<S> left_jacobian(const Vec<S>& q) {
  S t = q.dot(q);
  Mat<S> h = hat(q);
  return Mat<S>::Identity(3, 3) + one_minus_cos(t) * h + th_minus_sin(t) * (h * h);
}

// exp(q + dq) ~ exp(q) exp(J_r(q) dq); J_r(q) = J_l(-q).
template <class S>
Mat<S> right_jacobian(const Vec<S>& q) {
  S t = q.dot(q);
  Mat<S> h = hat(q);
  return Mat<S>::Identity(3, 3) - one_minus_cos(t) * h + th_minus_sin(t) * (h * h);
}

template <class S>
Mat<S> left_jacobian_inv(const Vec<S>& q) {
  S t = q.dot(q);
  Mat<S> h = hat(q);
  return Mat<S>::Identity(3, 3) - 0.5 * h + inv_coeff(t) * (h * h);
}

template <class S>
Mat<S> right_jacobian_inv(const Vec<S>& q) {
  S t = q.dot(q);
  Mat<S> h = hat(q);
  return Mat<S>::Identity(3, 3) + 0.5 * h + inv_coeff(t) * (h * h);
}

// Quaternion (w, x, y, z) helpers, double only.
std::array<double, 4> to_quaternion(const VecD& q);
VecD from_quaternion(std::array<double, 4> quat);
std::array<double, 4> quat_mul(const std::array<double, 4>& a, const std::array<double, 4>& b);
// Rotation vector of exp(a) exp(b), |result| <= pi.
VecD compose(const VecD& a, const VecD& b);

}  // namespace so3

}  // namespace lpr
