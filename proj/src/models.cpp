#include "lpr/models.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "lpr/errors.hpp"

namespace lpr {

namespace {

MatD rotation2(double a) {
  MatD r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

VecD uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  VecD v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace

// ---------------------------------------------------------------- abelian_disk

AbelianDisk::AbelianDisk(AbelianDiskParams params) : params_(params), lie_(LieData::abelian(1)) {}

VecD AbelianDisk::act_p(const VecD& q, const VecD& a) const { return rotation2(a(0)) * q; }
VecD AbelianDisk::act_v(const VecD& f, const VecD& a) const { return rotation2(a(0)) * f; }
VecD AbelianDisk::push_p(const VecD&, const VecD& a, const VecD& qdot) const { return rotation2(a(0)) * qdot; }
VecD AbelianDisk::push_v(const VecD&, const VecD& a, const VecD& fdot) const { return rotation2(a(0)) * fdot; }
VecD AbelianDisk::section_guess(const VecD& q_sigma) const { return VecD::Constant(1, q_sigma(0)); }
bool AbelianDisk::in_section_domain(const VecD& x) const { return x.size() == 1 && x(0) > 0.0; }

void AbelianDisk::check_gauge_domain(const VecD& q) const {
  if (q.norm() < 1e-12) throw GaugeError("abelian_disk: gauge undefined at the origin");
}

VecD AbelianDisk::sample_base(std::mt19937_64& rng) const { return uniform_vec(rng, 1, 0.5, 2.0); }
VecD AbelianDisk::sample_fiber(std::mt19937_64& rng) const { return uniform_vec(rng, 2, -1.0, 1.0); }
VecD AbelianDisk::sample_group(std::mt19937_64& rng) const { return chart_.random_element(rng, 3.0); }

VecD AbelianDisk::default_initial_state() const {
  VecD s(7);
  s << 1.2, 0.5, -0.3, 0.1, 0.2, 0.4, 0.7;  // x, f~, xdot, f~dot, p
  return s;
}

// ----------------------------------------------------------------- so3_coupled

So3Coupled::So3Coupled(So3CoupledParams params) : params_(params), lie_(LieData::so3(-1.0)) {}

MatD So3Coupled::coupling_matrix() {
  MatD b(3, 2);
  b << 1.0, 0.0, 0.0, 1.0, 0.5, 0.5;
  return b;
}

VecD So3Coupled::act_p(const VecD& q, const VecD& a) const {
  VecD out = q;
  out.head(3) = so3::compose(a, VecD(q.head(3)));
  return out;
}

VecD So3Coupled::act_v(const VecD& f, const VecD& a) const { return so3::rotation(a) * f; }

// Left translation keeps the body angular velocity J_r(q) qdot fixed.
VecD So3Coupled::push_p(const VecD& q, const VecD& a, const VecD& qdot) const {
  VecD qn = act_p(q, a);
  VecD out = qdot;
  VecD w = so3::right_jacobian(VecD(q.head(3))) * qdot.head(3);
  out.head(3) = so3::right_jacobian_inv(VecD(qn.head(3))) * w;
  return out;
}

VecD So3Coupled::push_v(const VecD&, const VecD& a, const VecD& fdot) const { return so3::rotation(a) * fdot; }

VecD So3Coupled::section_guess(const VecD& q_sigma) const { return q_sigma.tail(2); }

bool So3Coupled::in_section_domain(const VecD& x) const {
  if (x.size() != 2 || !x.allFinite()) return false;
  return offset_t(x).norm() < kChartCap;
}

void So3Coupled::check_gauge_domain(const VecD& q) const {
  if (!(q.head(3).norm() < std::numbers::pi))
    throw GaugeError("so3_coupled: rotation vector outside the chart |q| < pi");
}

void So3Coupled::recenter(VecD& q, VecD& qdot) const {
  VecD r = q.head(3);
  const double th = r.norm();
  if (th <= kRecenterAbove) return;
  VecD rn = r * (1.0 - 2.0 * std::numbers::pi / th);
  VecD w = so3::right_jacobian(r) * qdot.head(3);
  qdot.head(3) = so3::right_jacobian_inv(rn) * w;
  q.head(3) = rn;
}

VecD So3Coupled::sample_base(std::mt19937_64& rng) const { return uniform_vec(rng, 2, -1.0, 1.0); }
VecD So3Coupled::sample_fiber(std::mt19937_64& rng) const { return uniform_vec(rng, 3, -1.0, 1.0); }
VecD So3Coupled::sample_group(std::mt19937_64& rng) const { return chart_.random_element(rng, 2.0); }

VecD So3Coupled::default_initial_state() const {
  VecD s(13);
  s << 0.3, -0.2,        // x
      0.4, -0.1, 0.3,    // f~
      0.1, 0.2,          // xdot
      -0.2, 0.1, 0.3,    // f~dot
      0.3, -0.2, 0.4;    // p
  return s;
}

// -------------------------------------------------------------------- registry

namespace {

struct ParamSpec {
  double* slot;
  std::function<bool(double)> valid;
  const char* constraint;
};

void apply_params(const std::string& model, const ModelParams& given, std::map<std::string, ParamSpec> spec) {
  for (const auto& [key, value] : given) {
    auto it = spec.find(key);
    if (it == spec.end()) throw ParameterError(model + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value) || !it->second.valid(value))
      throw ParameterError(model + ": parameter '" + key + "' must satisfy " + it->second.constraint);
    *it->second.slot = value;
  }
}

bool positive(double v) { return v > 0.0; }
bool non_negative(double v) { return v >= 0.0; }
bool any(double) { return true; }

}  // namespace

std::vector<std::string> model_names() { return {"abelian_disk", "so3_coupled"}; }

ModelParams default_params(const std::string& name) {
  if (name == "abelian_disk") return {{"k", AbelianDiskParams{}.k}};
  if (name == "so3_coupled") {
    So3CoupledParams p;
    return {{"lambda", p.lambda}, {"i1", p.i1}, {"i2", p.i2}, {"i3", p.i3}, {"inertia_slope", p.inertia_slope},
            {"k1", p.k1},         {"k2", p.k2}, {"k3", p.k3}, {"twist", p.twist}};
  }
  throw ParameterError("unknown model '" + name + "'");
}

std::shared_ptr<const Model> instantiate(const std::string& name, const ModelParams& params) {
  if (name == "abelian_disk") {
    AbelianDiskParams p;
    apply_params(name, params, {{"k", {&p.k, positive, "k > 0"}}});
    return std::make_shared<AbelianDisk>(p);
  }
  if (name == "so3_coupled") {
    So3CoupledParams p;
    apply_params(name, params,
                 {{"lambda", {&p.lambda, non_negative, "lambda >= 0"}},
                  {"i1", {&p.i1, positive, "i1 > 0"}},
                  {"i2", {&p.i2, positive, "i2 > 0"}},
                  {"i3", {&p.i3, positive, "i3 > 0"}},
                  {"inertia_slope", {&p.inertia_slope, non_negative, "inertia_slope >= 0"}},
                  {"k1", {&p.k1, positive, "k1 > 0"}},
                  {"k2", {&p.k2, positive, "k2 > 0"}},
                  {"k3", {&p.k3, any, "a finite value"}},
                  {"twist", {&p.twist, [](double v) { return std::abs(v) <= 1.0; }, "|twist| <= 1"}}});
    // Kinetic metric is positive definite iff I - lambda^2 B B^T > 0; check at y = 0,
    // where I is smallest.
    MatD inertia = MatD::Zero(3, 3);
    inertia.diagonal() << p.i1, p.i2, p.i3;
    MatD b = So3Coupled::coupling_matrix();
    if (min_eigenvalue(inertia - p.lambda * p.lambda * b * b.transpose()) <= 1e-6)
      throw ParameterError("so3_coupled: lambda too large, kinetic metric not positive definite");
    return std::make_shared<So3Coupled>(p);
  }
  throw ParameterError("unknown model '" + name + "'");
}

std::vector<ReducedPoint> sample_reduced_points(const Model& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ReducedPoint> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    VecD x = model.sample_base(rng);
    VecD f = model.sample_fiber(rng);
    if (model.in_section_domain(x)) out.push_back({x, f});
  }
  return out;
}

std::vector<std::pair<VecD, VecD>> sample_full_points(const Model& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<VecD, VecD>> out;
  for (const auto& pt : sample_reduced_points(model, count, seed)) {
    VecD a = model.sample_group(rng);
    out.emplace_back(model.act_p(model.maps<double>().section(pt.x), a), model.act_v(pt.f, a));
  }
  return out;
}

namespace {

template <class S>
Vec<S> flatten(const Mat<S>& m) {
  return Eigen::Map<const Vec<S>>(m.data(), m.size());
}

}  // namespace

std::vector<SmoothMap> model_smooth_maps(const Model& model) {
  const Dims d = model.dims();
  const Model* m = &model;
  auto q_domain = [m](const VecD& q) {
    try {
      m->check_gauge_domain(q);
      return true;
    } catch (const GaugeError&) {
      return false;
    }
  };
  std::vector<SmoothMap> maps;
  maps.push_back(make_smooth_map("metric_p", d.n_p, d.n_p * d.n_p, [m](const auto& q) {
    using S = typename std::decay_t<decltype(q)>::Scalar;
    return flatten<S>(m->maps<S>().metric_p(q));
  }));
  maps.push_back(make_smooth_map("killing_p", d.n_p, d.n_p * d.n_g, [m](const auto& q) {
    using S = typename std::decay_t<decltype(q)>::Scalar;
    return flatten<S>(m->maps<S>().killing_p(q));
  }));
  maps.push_back(make_smooth_map(
      "gauge", d.n_p, d.n_g,
      [m](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        return Vec<S>(m->maps<S>().gauge(q));
      },
      q_domain));
  maps.push_back(make_smooth_map("metric_v", d.n_v, d.n_v * d.n_v, [m](const auto& f) {
    using S = typename std::decay_t<decltype(f)>::Scalar;
    return flatten<S>(m->maps<S>().metric_v(f));
  }));
  maps.push_back(make_smooth_map("killing_v", d.n_v, d.n_v * d.n_g, [m](const auto& f) {
    using S = typename std::decay_t<decltype(f)>::Scalar;
    return flatten<S>(m->maps<S>().killing_v(f));
  }));
  maps.push_back(make_smooth_map(
      "section", d.n_x(), d.n_p,
      [m](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        return Vec<S>(m->maps<S>().section(x));
      },
      [m](const VecD& x) { return m->in_section_domain(x); }));
  const int np = d.n_p, nv = d.n_v;
  maps.push_back(make_smooth_map("potential", np + nv, 1, [m, np, nv](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::Scalar;
    Vec<S> out(1);
    out(0) = m->maps<S>().potential(Vec<S>(y.head(np)), Vec<S>(y.tail(nv)));
    return out;
  }));
  return maps;
}

CheckReport model_derivative_check(const Model& model, int count, std::uint64_t seed) {
  const auto maps = model_smooth_maps(model);
  const auto full = sample_full_points(model, count, seed);
  const auto reduced = sample_reduced_points(model, count, seed);
  CheckReport report;
  for (int k = 0; k < count; ++k) {
    const auto& [q, f] = full[k];
    for (const auto& map : maps) {
      VecD point;
      if (map.name() == "section")
        point = reduced[k].x;
      else if (map.name() == "potential") {
        point.resize(q.size() + f.size());
        point << q, f;
      } else if (map.name() == "metric_v" || map.name() == "killing_v")
        point = f;
      else
        point = q;
      report.merge(fd_check(map, point));
    }
  }
  return report;
}

}  // namespace lpr
