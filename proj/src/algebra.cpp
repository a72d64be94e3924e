#include "lpr/algebra.hpp"

#include <cmath>
#include <numbers>

#include "lpr/calculus.hpp"
#include "lpr/model.hpp"

namespace lpr {

LieData LieData::abelian(int n) {
  LieData lie;
  lie.dim_g = n;
  lie.c = Tensor3(n, n, n);
  return lie;
}

LieData LieData::so3(double sign) {
  LieData lie;
  lie.dim_g = 3;
  lie.c = Tensor3(3, 3, 3);
  for (int a = 0; a < 3; ++a) {
    lie.c(a, (a + 1) % 3, (a + 2) % 3) = sign;
    lie.c(a, (a + 2) % 3, (a + 1) % 3) = -sign;
  }
  lie.ad_invariant_form = MatD::Identity(3, 3);
  return lie;
}

CheckReport validate_lie_data(const Tensor3& c) {
  const int n = c.dim0();
  if (c.dim1() != n || c.dim2() != n) throw ShapeError("validate_lie_data: structure constants must be cubic");
  double anti = 0.0, jacobi = 0.0;
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) anti = std::max(anti, std::abs(c(a, m, v) + c(a, v, m)));
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v)
      for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r) {
          double s = 0.0;
          for (int sg = 0; sg < n; ++sg)
            s += c(sg, m, v) * c(r, sg, l) + c(sg, v, l) * c(r, sg, m) + c(sg, l, m) * c(r, sg, v);
          jacobi = std::max(jacobi, std::abs(s));
        }
  CheckReport report;
  report.record("antisymmetry", anti, 1e-12);
  report.record("jacobi", jacobi, 1e-12);
  return report;
}

namespace {

// Max over (alpha, beta) of |[K_a, K_b] - c^g_ab K_g|, scaled by max(1, |K|).
template <class KillingFn>
double bracket_residual(KillingFn killing, const VecD& y, const Tensor3& c) {
  MatD k = value_part(Mat<D1>(killing(Vec<D1>(y.cast<D1>()))));
  const int n_g = static_cast<int>(k.cols());
  std::vector<MatD> dk(n_g);
  for (int a = 0; a < n_g; ++a) dk[a] = tangent_part(Mat<D1>(killing(seed_direction(y, VecD(k.col(a))))));
  double worst = 0.0;
  for (int a = 0; a < n_g; ++a)
    for (int b = 0; b < n_g; ++b) {
      VecD bracket = dk[a].col(b) - dk[b].col(a);
      VecD expect = VecD::Zero(y.size());
      for (int g = 0; g < n_g; ++g) expect += c(g, a, b) * k.col(g);
      worst = std::max(worst, (bracket - expect).cwiseAbs().maxCoeff());
    }
  return worst / std::max(1.0, max_abs(k));
}

}  // namespace

CheckReport killing_consistency(const Model& model,
                                const std::vector<std::pair<VecD, VecD>>& sample_points) {
  const auto& m1 = model.maps<D1>();
  const Tensor3& c = model.lie().c;
  CheckReport report;
  for (const auto& [q, f] : sample_points) {
    std::vector<double> pt(q.data(), q.data() + q.size());
    pt.insert(pt.end(), f.data(), f.data() + f.size());
    double rp = bracket_residual([&](const Vec<D1>& y) { return m1.killing_p(y); }, q, c);
    double rv = model.dims().n_v > 0
                    ? bracket_residual([&](const Vec<D1>& y) { return m1.killing_v(y); }, f, c)
                    : 0.0;
    report.record("killing_bracket_P", rp, 1e-8, pt);
    report.record("killing_bracket_V", rv, 1e-8, pt);
  }
  return report;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a <= 0.0) a += 2.0 * pi;
  return a - pi;
}

VecD SO2Chart::compose(const VecD& a, const VecD& b) const { return VecD::Constant(1, wrap_angle(a(0) + b(0))); }
VecD SO2Chart::inverse(const VecD& a) const { return VecD::Constant(1, wrap_angle(-a(0))); }
VecD SO2Chart::exp(const VecD& xi) const { return VecD::Constant(1, wrap_angle(xi(0))); }
double SO2Chart::chart_radius() const { return std::numbers::pi; }
VecD SO2Chart::random_element(std::mt19937_64& rng, double max_radius) const {
  std::uniform_real_distribution<double> u(-max_radius, max_radius);
  return VecD::Constant(1, u(rng));
}

VecD SO3Chart::compose(const VecD& a, const VecD& b) const { return so3::compose(a, b); }
VecD SO3Chart::inverse(const VecD& a) const { return -a; }
VecD SO3Chart::exp(const VecD& xi) const { return so3::from_quaternion(so3::to_quaternion(xi)); }
double SO3Chart::chart_radius() const { return std::numbers::pi; }
VecD SO3Chart::random_element(std::mt19937_64& rng, double max_radius) const {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VecD axis(3);
  for (int i = 0; i < 3; ++i) axis(i) = n(rng);
  axis.normalize();
  return axis * (max_radius * std::cbrt(u(rng)));
}

namespace so3 {

std::array<double, 4> to_quaternion(const VecD& q) {
  double th = q.norm();
  double half = 0.5 * th;
  double s = th < 1e-8 ? 0.5 - th * th / 48.0 : std::sin(half) / th;
  return {std::cos(half), s * q(0), s * q(1), s * q(2)};
}

VecD from_quaternion(std::array<double, 4> quat) {
  if (quat[0] < 0.0)
    for (double& v : quat) v = -v;
  double vn = std::sqrt(quat[1] * quat[1] + quat[2] * quat[2] + quat[3] * quat[3]);
  double th = 2.0 * std::atan2(vn, quat[0]);
  double scale = vn < 1e-12 ? 2.0 / quat[0] : th / vn;
  VecD out(3);
  out << scale * quat[1], scale * quat[2], scale * quat[3];
  return out;
}

std::array<double, 4> quat_mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

VecD compose(const VecD& a, const VecD& b) { return from_quaternion(quat_mul(to_quaternion(a), to_quaternion(b))); }

}  // namespace so3

}  // namespace lpr
