#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lpr/algebra.hpp"
#include "lpr/calculus.hpp"
#include "lpr/model.hpp"

namespace lpr {

using ModelParams = std::map<std::string, double>;

// A point (x, f~) of the reduced configuration space.
struct ReducedPoint {
  VecD x;
  VecD f;
};

// G = SO(2) acting by rotation on P = R^2 \ {0} and on V = R^2, flat metrics,
// gauge chi = polar angle, section Q*(x) = (x, 0) for x > 0,
// potential k/2 (|Q|^2 + |f|^2). The group is abelian (c = 0).
struct AbelianDiskParams {
  double k = 1.0;
};

class AbelianDisk final : public ModelAdapter<AbelianDisk> {
 public:
  explicit AbelianDisk(AbelianDiskParams params = {});

  template <class S>
  Mat<S> metric_p_t(const Vec<S>&) const {
    return Mat<S>::Identity(2, 2);
  }
  template <class S>
  Mat<S> metric_v_t(const Vec<S>&) const {
    return Mat<S>::Identity(2, 2);
  }
  template <class S>
  Mat<S> killing_p_t(const Vec<S>& q) const {
    Mat<S> k(2, 1);
    k << -q(1), q(0);
    return k;
  }
  template <class S>
  Mat<S> killing_v_t(const Vec<S>& f) const {
    Mat<S> k(2, 1);
    k << -f(1), f(0);
    return k;
  }
  template <class S>
  Vec<S> gauge_t(const Vec<S>& q) const {
    using std::atan2;
    Vec<S> chi(1);
    chi(0) = atan2(q(1), q(0));
    return chi;
  }
  template <class S>
  Vec<S> section_t(const Vec<S>& x) const {
    Vec<S> q(2);
    q << x(0), S(0.0);
    return q;
  }
  template <class S>
  S potential_t(const Vec<S>& q, const Vec<S>& f) const {
    return 0.5 * params_.k * (q.dot(q) + f.dot(f));
  }

  std::string name() const override { return "abelian_disk"; }
  Dims dims() const override { return {2, 1, 2}; }
  const LieData& lie() const override { return lie_; }
  const GroupChart& chart() const override { return chart_; }

  VecD act_p(const VecD& q, const VecD& a) const override;
  VecD act_v(const VecD& f, const VecD& a) const override;
  VecD push_p(const VecD& q, const VecD& a, const VecD& qdot) const override;
  VecD push_v(const VecD& f, const VecD& a, const VecD& fdot) const override;
  VecD section_guess(const VecD& q_sigma) const override;
  bool in_section_domain(const VecD& x) const override;
  void check_gauge_domain(const VecD& q) const override;

  VecD sample_base(std::mt19937_64& rng) const override;
  VecD sample_fiber(std::mt19937_64& rng) const override;
  VecD sample_group(std::mt19937_64& rng) const override;
  VecD default_initial_state() const override;

  const AbelianDiskParams& params() const { return params_; }

 private:
  AbelianDiskParams params_;
  LieData lie_;
  SO2Chart chart_;
};

// G = SO(3) acting by left translation on P = SO(3) x R^2 (rotation-vector
// chart q, base coordinates y) and by rotation on V = R^3.
//
// Kinetic energy on P: 1/2 W^T I(y) W + lambda W^T B ydot + 1/2 |ydot|^2 with
// body angular velocity W = J_r(q) qdot, I(y) = diag(i1 + s y1^2, i2 + s y2^2,
// i3 + s (y1^2 + y2^2)) and a fixed 3x2 coupling matrix B. Gauge
// chi = q - g0(y), section Q*(x) = (g0(x), x), g0(y) = twist (y1^2, y1 y2, sin y2).
// Potential k1/2 |f|^2 + k2/2 |y|^2 + k3 y1 |f|^2.
struct So3CoupledParams {
  double lambda = 0.3;
  double i1 = 1.0;
  double i2 = 1.5;
  double i3 = 2.0;
  double inertia_slope = 0.2;
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 0.1;
  double twist = 0.0;
  // Fault-injection hook for the Killing consistency check; not a model parameter.
  double killing_v_sign = 1.0;
};

class So3Coupled final : public ModelAdapter<So3Coupled> {
 public:
  explicit So3Coupled(So3CoupledParams params = {});

  static MatD coupling_matrix();

  template <class S>
  Vec<S> offset_t(const Vec<S>& y) const {
    using std::sin;
    Vec<S> g(3);
    g << params_.twist * y(0) * y(0), params_.twist * y(0) * y(1), params_.twist * sin(y(1));
    return g;
  }

  template <class S>
  Mat<S> metric_p_t(const Vec<S>& q5) const {
    Vec<S> q = q5.head(3);
    const S y0 = q5(3), y1 = q5(4);
    const double s = params_.inertia_slope;
    Mat<S> inertia = Mat<S>::Zero(3, 3);
    inertia(0, 0) = params_.i1 + s * y0 * y0;
    inertia(1, 1) = params_.i2 + s * y1 * y1;
    inertia(2, 2) = params_.i3 + s * (y0 * y0 + y1 * y1);
    Mat<S> jr = so3::right_jacobian(q);
    Mat<S> b = cast_to<S>(MatD(params_.lambda * coupling_matrix()));
    Mat<S> g = Mat<S>::Zero(5, 5);
    g.topLeftCorner(3, 3) = jr.transpose() * inertia * jr;
    g.topRightCorner(3, 2) = jr.transpose() * b;
    g.bottomLeftCorner(2, 3) = b.transpose() * jr;
    g.bottomRightCorner(2, 2) = Mat<S>::Identity(2, 2);
    return g;
  }
  template <class S>
  Mat<S> metric_v_t(const Vec<S>&) const {
    return Mat<S>::Identity(3, 3);
  }
  template <class S>
  Mat<S> killing_p_t(const Vec<S>& q5) const {
    Mat<S> k = Mat<S>::Zero(5, 3);
    k.topRows(3) = so3::left_jacobian_inv(Vec<S>(q5.head(3)));
    return k;
  }
  // K^p_mu = eps_{p mu q} f^q, i.e. column mu is e_mu x f.
  template <class S>
  Mat<S> killing_v_t(const Vec<S>& f) const {
    return Mat<S>(-params_.killing_v_sign * so3::hat(f));
  }
  template <class S>
  Vec<S> gauge_t(const Vec<S>& q5) const {
    return Vec<S>(q5.head(3) - offset_t(Vec<S>(q5.tail(2))));
  }
  template <class S>
  Vec<S> section_t(const Vec<S>& x) const {
    Vec<S> q(5);
    q.head(3) = offset_t(x);
    q.tail(2) = x;
    return q;
  }
  template <class S>
  S potential_t(const Vec<S>& q5, const Vec<S>& f) const {
    const S y0 = q5(3), y1 = q5(4);
    const S ff = f.dot(f);
    return 0.5 * params_.k1 * ff + 0.5 * params_.k2 * (y0 * y0 + y1 * y1) + params_.k3 * y0 * ff;
  }

  std::string name() const override { return "so3_coupled"; }
  Dims dims() const override { return {5, 3, 3}; }
  const LieData& lie() const override { return lie_; }
  const GroupChart& chart() const override { return chart_; }

  VecD act_p(const VecD& q, const VecD& a) const override;
  VecD act_v(const VecD& f, const VecD& a) const override;
  VecD push_p(const VecD& q, const VecD& a, const VecD& qdot) const override;
  VecD push_v(const VecD& f, const VecD& a, const VecD& fdot) const override;
  VecD section_guess(const VecD& q_sigma) const override;
  bool in_section_domain(const VecD& x) const override;
  void check_gauge_domain(const VecD& q) const override;
  void recenter(VecD& q, VecD& qdot) const override;

  VecD sample_base(std::mt19937_64& rng) const override;
  VecD sample_fiber(std::mt19937_64& rng) const override;
  VecD sample_group(std::mt19937_64& rng) const override;
  VecD default_initial_state() const override;

  const So3CoupledParams& params() const { return params_; }

  // Rotation-vector chart is capped at |q| <= pi - 0.1.
  static constexpr double kChartCap = 3.0415926535897931;
  // recenter() switches to the representation q (1 - 2 pi / |q|), of norm
  // 2 pi - |q|, once |q| exceeds pi; below pi that would move away from e.
  static constexpr double kRecenterAbove = 3.1415926535897931;

 private:
  So3CoupledParams params_;
  LieData lie_;
  SO3Chart chart_;
};

std::vector<std::string> model_names();
ModelParams default_params(const std::string& name);
// Throws ParameterError for an unknown model, unknown parameter or a value
// violating the parameter's constraint.
std::shared_ptr<const Model> instantiate(const std::string& name, const ModelParams& params = {});

// Seeded uniform samples from the model's verification region.
std::vector<ReducedPoint> sample_reduced_points(const Model& model, int count, std::uint64_t seed);
// Off-section samples (Q, f) = (g Q*(x), g f~) for Killing and derivative checks.
std::vector<std::pair<VecD, VecD>> sample_full_points(const Model& model, int count, std::uint64_t seed);

// Each model map as a SmoothMap on flattened arguments, for derivative
// checks: "metric_p", "killing_p", "gauge" take Q; "metric_v", "killing_v"
// take f; "section" takes x; "potential" takes (Q, f). Matrices are
// flattened column-major. `model` must outlive the maps.
std::vector<SmoothMap> model_smooth_maps(const Model& model);

// fd_check of every model_smooth_maps entry at `count` off-section samples.
CheckReport model_derivative_check(const Model& model, int count, std::uint64_t seed);

}  // namespace lpr
