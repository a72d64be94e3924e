#include "lpr/bundle.hpp"

#include <Eigen/Dense>

#include "lpr/calculus.hpp"

namespace lpr {

namespace {

VecD unit(int n, int i) {
  VecD e = VecD::Zero(n);
  e(i) = 1.0;
  return e;
}

template <class S>
Mat<S> map_mat(const Mat<D1>& m, double (*part)(const D1&)) {
  Mat<S> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = part(m(i, j));
  return out;
}

double value_d(const D1& a) { return a.v; }
double tangent_d(const D1& a) { return a.d; }

Fields split(const FieldsT<D1>& f, double (*part)(const D1&)) {
  Fields out;
  out.G = map_mat<double>(f.G, part);
  out.K = map_mat<double>(f.K, part);
  out.gamma = map_mat<double>(f.gamma, part);
  out.gamma_prime = map_mat<double>(f.gamma_prime, part);
  out.d = map_mat<double>(f.d, part);
  out.d_inv = map_mat<double>(f.d_inv, part);
  out.conn = map_mat<double>(f.conn, part);
  out.GHt = map_mat<double>(f.GHt, part);
  out.V = part(f.V);
  return out;
}

// Q* and Q*_i only.
std::pair<VecD, MatD> section_d1(const Model& model, const VecD& x) {
  const auto& m1 = model.maps<D1>();
  const int nx = static_cast<int>(x.size());
  VecD value = model.maps<double>().section(x);
  MatD d1(value.size(), nx);
  for (int i = 0; i < nx; ++i) d1.col(i) = tangent_part(Vec<D1>(m1.section(seed_direction(x, unit(nx, i)))));
  return {value, d1};
}

MatD gauge_jacobian_at(const Model& model, const VecD& q) {
  const auto& m1 = model.maps<D1>();
  const int np = static_cast<int>(q.size());
  const int ng = model.dims().n_g;
  MatD j(ng, np);
  for (int a = 0; a < np; ++a) j.col(a) = tangent_part(Vec<D1>(m1.gauge(seed_direction(q, unit(np, a)))));
  return j;
}

double sup(const VecD& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Fields value_of(const FieldsT<D1>& f) { return split(f, value_d); }
Fields tangent_of(const FieldsT<D1>& f) { return split(f, tangent_d); }

std::vector<double> point_of(const VecD& x, const VecD& f) {
  std::vector<double> p(x.data(), x.data() + x.size());
  p.insert(p.end(), f.data(), f.data() + f.size());
  return p;
}

MatD ProjectorSet::full() const {
  const int np = static_cast<int>(N_PP.rows()), nv = static_cast<int>(N_VP.rows());
  MatD n = MatD::Zero(np + nv, np + nv);
  n.topLeftCorner(np, np) = N_PP;
  n.bottomLeftCorner(nv, np) = N_VP;
  n.bottomRightCorner(nv, nv).setIdentity();
  return n;
}

MatD BlockMetric::assembled() const {
  const int nx = static_cast<int>(h_tilde.rows()), nv = static_cast<int>(vv.rows());
  MatD h(nx + nv, nx + nv);
  h.topLeftCorner(nx, nx) = h_tilde;
  h.topRightCorner(nx, nv) = cross;
  h.bottomLeftCorner(nv, nx) = cross.transpose();
  h.bottomRightCorner(nv, nv) = vv;
  return h;
}

MatD BlockMetric::assembled_inverse() const {
  const int nx = static_cast<int>(inv_hh.rows()), nv = static_cast<int>(inv_vv.rows());
  MatD h(nx + nv, nx + nv);
  h.topLeftCorner(nx, nx) = inv_hh;
  h.topRightCorner(nx, nv) = inv_hv;
  h.bottomLeftCorner(nv, nx) = inv_hv.transpose();
  h.bottomRightCorner(nv, nv) = inv_vv;
  return h;
}

MatD FieldJets::embedding() const {
  const int np = dims.n_p, nv = dims.n_v, nx = dims.n_x();
  MatD j = MatD::Zero(np + nv, nx + nv);
  j.topLeftCorner(np, nx) = section.d1;
  j.bottomRightCorner(nv, nv).setIdentity();
  return j;
}

SectionJet section_jet(const Model& model, const VecD& x) {
  if (x.size() != model.dims().n_x()) throw ShapeError(model.name() + ": base point has wrong dimension");
  if (!model.in_section_domain(x)) throw DomainError(model.name() + ": x outside the section domain");
  const int nx = static_cast<int>(x.size());
  SectionJet jet;
  std::tie(jet.value, jet.d1) = section_d1(model, x);
  const int np = static_cast<int>(jet.value.size());
  jet.d2 = Tensor3(np, nx, nx);
  const auto& m2 = model.maps<D2>();
  for (int i = 0; i < nx; ++i)
    for (int j = i; j < nx; ++j) {
      Vec<D2> xs(nx);
      for (int k = 0; k < nx; ++k) xs(k) = D2(D1(x(k), k == i ? 1.0 : 0.0), D1(k == j ? 1.0 : 0.0, 0.0));
      Vec<D2> q = m2.section(xs);
      for (int a = 0; a < np; ++a) jet.d2(a, i, j) = jet.d2(a, j, i) = q(a).d.d;
    }
  return jet;
}

FieldJets field_jets(const Model& model, const VecD& x, const VecD& f, JetLevel level) {
  const Dims dm = model.dims();
  if (f.size() != dm.n_v) throw ShapeError(model.name() + ": fiber point has wrong dimension");
  FieldJets jets;
  jets.dims = dm;
  jets.x = x;
  jets.f = f;
  jets.section = section_jet(model, x);
  const VecD& q = jets.section.value;
  jets.at = fields_at<double>(model, q, f);
  jets.G_inv = MatD::Zero(dm.n_t(), dm.n_t());
  jets.G_inv.topLeftCorner(dm.n_p, dm.n_p) = inverse<double>(jets.at.G.topLeftCorner(dm.n_p, dm.n_p), "metric on P");
  jets.G_inv.bottomRightCorner(dm.n_v, dm.n_v) =
      inverse<double>(jets.at.G.bottomRightCorner(dm.n_v, dm.n_v), "metric on V");
  jets.gauge_jacobian = gauge_jacobian_at(model, q);
  jets.gauge_value = model.maps<double>().gauge(q);

  const Vec<D1> q0 = q.cast<D1>();
  const Vec<D1> f0 = f.cast<D1>();
  jets.along.reserve(dm.n_z());
  for (int i = 0; i < dm.n_x(); ++i)
    jets.along.push_back(tangent_of(fields_at<D1>(model, seed_direction(q, VecD(jets.section.d1.col(i))), f0)));
  for (int a = 0; a < dm.n_v; ++a)
    jets.along.push_back(tangent_of(fields_at<D1>(model, q0, seed_direction(f, unit(dm.n_v, a)))));

  if (level == JetLevel::full) {
    jets.coord.reserve(dm.n_t());
    for (int c = 0; c < dm.n_p; ++c)
      jets.coord.push_back(tangent_of(fields_at<D1>(model, seed_direction(q, unit(dm.n_p, c)), f0)));
    for (int a = 0; a < dm.n_v; ++a)
      jets.coord.push_back(tangent_of(fields_at<D1>(model, q0, seed_direction(f, unit(dm.n_v, a)))));
  }
  return jets;
}

OrbitMetrics orbit_metrics(const Model& model, const VecD& q, const VecD& f) {
  Fields fl = fields_at<double>(model, q, f);
  return {fl.gamma, fl.gamma_prime, fl.d, fl.d_inv};
}

HorizontalMetrics horizontal_metrics(const Model& model, const VecD& q, const VecD& f) {
  Fields fl = fields_at<double>(model, q, f);
  const int np = model.dims().n_p;
  MatD gp = fl.G.topLeftCorner(np, np);
  MatD gk = gp * fl.K.topRows(np);
  return {gp - gk * inverse<double>(fl.gamma, "orbit metric gamma") * gk.transpose(), fl.GHt};
}

MatD horizontal_metric_p(const FieldJets& jets) {
  const int np = jets.dims.n_p;
  MatD gp = jets.at.G.topLeftCorner(np, np);
  MatD gk = gp * jets.at.K.topRows(np);
  return gp - gk * inverse<double>(jets.at.gamma, "orbit metric gamma") * gk.transpose();
}

BaseMetric base_metric(const FieldJets& jets, const MatD& GH) {
  const MatD& qi = jets.section.d1;
  MatD h = qi.transpose() * GH * qi;
  return {h, inverse<double>(h, "base metric h")};
}

BaseMetric base_metric(const Model& model, const VecD& x) {
  if (!model.in_section_domain(x)) throw DomainError(model.name() + ": x outside the section domain");
  auto [q, qi] = section_d1(model, x);
  HorizontalMetrics hm = horizontal_metrics(model, q, VecD::Zero(model.dims().n_v));
  MatD h = qi.transpose() * hm.GH * qi;
  return {h, inverse<double>(h, "base metric h")};
}

ProjectorSet projector_set(const FieldJets& jets, const BaseMetric& base, const MatD& GH) {
  const int np = jets.dims.n_p, nv = jets.dims.n_v;
  const MatD& qi = jets.section.d1;
  const MatD& dchi = jets.gauge_jacobian;
  MatD kp = jets.at.K.topRows(np), kv = jets.at.K.bottomRows(nv);
  ProjectorSet p;
  p.Phi = dchi * kp;
  MatD phi_inv;
  try {
    phi_inv = inverse<double>(p.Phi, "gauge transversality matrix Phi");
  } catch (const DegeneracyError& e) {
    throw GaugeError(e.what());
  }
  MatD vertical = phi_inv * dchi;  // n_g x n_p
  p.N_PP = MatD::Identity(np, np) - kp * vertical;
  p.N_VP = -kv * vertical;
  p.N_metric = qi * base.h_inv * qi.transpose() * GH;
  p.P_perp = p.N_PP;
  p.T = base.h_inv * qi.transpose() * GH * p.P_perp;
  p.Pi_tilde = jets.G_inv * jets.at.GHt;
  return p;
}

ProjectorSet projector_set(const Model& model, const VecD& x, const VecD& f) {
  FieldJets jets = field_jets(model, x, f);
  MatD gh = horizontal_metric_p(jets);
  return projector_set(jets, base_metric(jets, gh), gh);
}

BlockMetric block_metric(const FieldJets& jets, const ProjectorSet& proj) {
  const int np = jets.dims.n_p, nv = jets.dims.n_v;
  const MatD& qi = jets.section.d1;
  const MatD& ght = jets.at.GHt;
  MatD gp_inv = jets.G_inv.topLeftCorner(np, np);
  MatD gv_inv = jets.G_inv.bottomRightCorner(nv, nv);
  BlockMetric b;
  b.h_tilde = qi.transpose() * ght.topLeftCorner(np, np) * qi;
  b.cross = qi.transpose() * ght.topRightCorner(np, nv);
  b.vv = ght.bottomRightCorner(nv, nv);
  MatD tn = proj.T * proj.N_PP;
  b.inv_hh = tn * gp_inv * tn.transpose();
  b.inv_hv = tn * gp_inv * proj.N_VP.transpose();
  b.inv_vv = gv_inv + proj.N_VP * gp_inv * proj.N_VP.transpose();
  return b;
}

BlockMetric block_metric(const Model& model, const VecD& x, const VecD& f) {
  FieldJets jets = field_jets(model, x, f);
  MatD gh = horizontal_metric_p(jets);
  return block_metric(jets, projector_set(jets, base_metric(jets, gh), gh));
}

InvariantCoords invariant_coordinates(const Model& model, const VecD& q, const VecD& f) {
  model.check_gauge_domain(q);
  const GroupChart& chart = model.chart();
  const auto& m0 = model.maps<double>();
  const auto& m1 = model.maps<D1>();
  constexpr int kMaxIter = 50;
  constexpr double kTol = 1e-13;

  auto residual = [&](const VecD& b) { return VecD(m0.gauge(model.act_p(q, b))); };
  VecD b = chart.identity();
  VecD r = residual(b);
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    if (sup(r) <= kTol) {
      converged = true;
      break;
    }
    VecD qb = model.act_p(q, b);
    model.check_gauge_domain(qb);
    MatD phi = gauge_jacobian_at(model, qb) * value_part(Mat<D1>(m1.killing_p(qb.cast<D1>())));
    VecD delta;
    try {
      delta = -inverse<double>(phi, "gauge transversality matrix Phi") * r;
    } catch (const DegeneracyError& e) {
      throw GaugeError(e.what());
    }
    double step = 1.0;
    VecD bn, rn;
    for (int half = 0; half < 40; ++half) {
      bn = chart.compose(chart.exp(step * delta), b);
      rn = residual(bn);
      if (sup(rn) < sup(r)) break;
      step *= 0.5;
    }
    if (!(sup(rn) < sup(r))) {
      // No descent left: accept if already at roundoff level.
      converged = sup(r) <= 1e-12;
      break;
    }
    b = bn;
    r = rn;
  }
  if (!converged && sup(r) <= 1e-12) converged = true;
  if (!converged) throw ChartError(model.name() + ": gauge Newton iteration did not converge");

  VecD q_sigma = model.act_p(q, b);
  VecD x = model.section_guess(q_sigma);
  double res = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    if (!model.in_section_domain(x)) throw ChartError(model.name() + ": section inversion left the section domain");
    auto [qs, qi] = section_d1(model, x);
    VecD diff = q_sigma - qs;
    res = sup(diff);
    if (res <= 1e-15 * std::max(1.0, sup(q_sigma))) break;
    VecD dx = qi.colPivHouseholderQr().solve(diff);
    x += dx;
    if (sup(dx) <= 1e-16 * std::max(1.0, sup(x))) {
      res = sup(q_sigma - m0.section(x));
      break;
    }
  }
  if (!(res <= 1e-9)) throw ChartError(model.name() + ": gauge-fixed point is not on the section");
  return {x, chart.inverse(b), model.act_v(f, b)};
}

CheckReport bundle_invariants(const FieldJets& jets, const MatD& GH, const BaseMetric& base,
                              const ProjectorSet& proj, const BlockMetric& block) {
  const Dims dm = jets.dims;
  const int np = dm.n_p, nv = dm.n_v, nx = dm.n_x();
  const MatD& qi = jets.section.d1;
  const Fields& at = jets.at;
  MatD kp = at.K.topRows(np);
  const std::vector<double> pt = point_of(jets.x, jets.f);
  CheckReport rep;
  auto zero = [](const MatD& m, double scale = 1.0) { return max_abs(m) / std::max(1.0, scale); };
  auto sym = [](const MatD& m) { return max_abs(m - m.transpose()) / std::max(1.0, max_abs(m)); };
  auto positive = [](const MatD& m) {
    if (m.size() == 0) return 0.0;
    double l = min_eigenvalue(0.5 * (m + m.transpose()));
    return l > 0.0 ? 0.0 : 1.0 - l;
  };

  rep.record("section_gauge", sup(jets.gauge_value), 1e-10, pt);
  rep.record("section_rank", min_singular_value(qi) > 1e-8 ? 0.0 : 1.0, 0.0, pt);
  rep.record("orbit_symmetry", std::max({sym(at.gamma), sym(at.gamma_prime), sym(at.d)}), 1e-12, pt);
  rep.record("orbit_inverse", scaled_diff(MatD(at.d_inv * at.d), MatD::Identity(dm.n_g, dm.n_g)), 1e-12, pt);
  rep.record("orbit_positive", positive(at.d), 0.0, pt);
  rep.record("GH_symmetry", std::max(sym(GH), sym(at.GHt)), 1e-10, pt);
  rep.record("GH_kills_K", zero(GH * kp, max_abs(GH) * max_abs(kp)), 1e-10, pt);
  rep.record("GHt_kills_K", zero(at.GHt * at.K, max_abs(at.GHt) * max_abs(at.K)), 1e-10, pt);
  rep.record("h_inverse", scaled_diff(MatD(base.h * base.h_inv), MatD::Identity(nx, nx)), 1e-10, pt);

  MatD n = proj.full();
  rep.record("N_fixes_section", scaled_diff(MatD(proj.N_PP * qi), qi), 1e-10, pt);
  rep.record("NVP_kills_section", zero(proj.N_VP * qi, max_abs(qi)), 1e-10, pt);
  rep.record("T_left_inverse", scaled_diff(MatD(proj.T * qi), MatD::Identity(nx, nx)), 1e-10, pt);
  rep.record("section_T_is_Pperp", scaled_diff(MatD(qi * proj.T), proj.P_perp), 1e-10, pt);
  rep.record("N_idempotent", scaled_diff(MatD(n * n), n), 1e-10, pt);
  rep.record("N_kills_K", zero(n * at.K, max_abs(at.K)), 1e-10, pt);
  rep.record("Pperp_kills_K", zero(proj.P_perp * kp, max_abs(kp)), 1e-10, pt);
  rep.record("Pperp_fixes_N", scaled_diff(MatD(proj.P_perp * proj.N_PP), proj.N_PP), 1e-10, pt);
  rep.record("N_metric_equals_gauge", scaled_diff(proj.N_metric, proj.N_PP), 1e-9, pt);

  const MatD& pi = proj.Pi_tilde;
  MatD lhs_v = proj.N_VP * pi.topRows(np) + pi.bottomRows(nv);
  rep.record("Pi_identity_V", scaled_diff(lhs_v, MatD(n.bottomRows(nv))), 1e-9, pt);
  MatD lhs_p = proj.N_PP * pi.topRows(np);
  rep.record("Pi_identity_P", scaled_diff(lhs_p, MatD(n.topRows(np))), 1e-9, pt);

  MatD h = block.assembled(), hinv = block.assembled_inverse();
  rep.record("block_inverse", scaled_diff(MatD(h * hinv), MatD::Identity(dm.n_z(), dm.n_z())), 1e-10, pt);
  rep.record("block_symmetry", std::max(sym(h), sym(hinv)), 1e-10, pt);
  rep.record("block_positive", std::max(positive(h), positive(hinv)), 0.0, pt);
  return rep;
}

CheckReport bundle_invariants(const Model& model, const VecD& x, const VecD& f) {
  FieldJets jets = field_jets(model, x, f);
  MatD gh = horizontal_metric_p(jets);
  BaseMetric base = base_metric(jets, gh);
  ProjectorSet proj = projector_set(jets, base, gh);
  BlockMetric block = block_metric(jets, proj);
  return bundle_invariants(jets, gh, base, proj, block);
}

}  // namespace lpr
