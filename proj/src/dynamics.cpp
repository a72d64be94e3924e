#include "lpr/dynamics.hpp"

#include <Eigen/Dense>

namespace lpr {

namespace {

void check_size(const VecD& v, int n, const char* what) {
  if (v.size() != n) throw ShapeError(std::string("state component ") + what + " has wrong dimension");
  if (!v.allFinite()) throw DomainError(std::string("state component ") + what + " is not finite");
}

VecD concat(const VecD& a, const VecD& b) {
  VecD out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

ReducedState ReducedState::from_vector(const VecD& y, const Dims& d) {
  const int nx = d.n_x(), nv = d.n_v, ng = d.n_g;
  if (y.size() != 2 * nx + 2 * nv + ng) throw ShapeError("reduced state vector has wrong length");
  ReducedState s;
  int o = 0;
  s.x = y.segment(o, nx), o += nx;
  s.f = y.segment(o, nv), o += nv;
  s.xdot = y.segment(o, nx), o += nx;
  s.fdot = y.segment(o, nv), o += nv;
  s.p = y.segment(o, ng);
  return s;
}

VecD ReducedState::to_vector() const {
  VecD y(2 * x.size() + 2 * f.size() + p.size());
  y << x, f, xdot, fdot, p;
  return y;
}

FullState FullState::from_vector(const VecD& y, const Dims& d) {
  const int np = d.n_p, nv = d.n_v;
  if (y.size() != 2 * (np + nv)) throw ShapeError("full state vector has wrong length");
  FullState s;
  s.q = y.segment(0, np);
  s.f = y.segment(np, nv);
  s.qdot = y.segment(np + nv, np);
  s.fdot = y.segment(2 * np + nv, nv);
  return s;
}

VecD FullState::to_vector() const {
  VecD y(2 * (q.size() + f.size()));
  y << q, f, qdot, fdot;
  return y;
}

GeometryPoint geometry_point(const Model& model, const VecD& x, const VecD& f, JetLevel level) {
  const Tensor3& c = model.lie().c;
  GeometryPoint g;
  g.jets = field_jets(model, x, f, level);
  g.GH = horizontal_metric_p(g.jets);
  g.base = base_metric(g.jets, g.GH);
  g.proj = projector_set(g.jets, g.base, g.GH);
  g.block = block_metric(g.jets, g.proj);
  g.conn = connection(g.jets);
  g.curv = curvature(g.jets, c);
  g.cov = covariant_derivative_d(g.jets, c);
  g.chr = christoffels(g.jets, g.block);
  g.grad_V.resize(model.dims().n_z());
  for (int w = 0; w < g.grad_V.size(); ++w) g.grad_V(w) = g.jets.along[w].V;
  return g;
}

VecD reduced_rhs(const GeometryPoint& g, const Tensor3& c, const ReducedState& s) {
  const Dims dm = g.jets.dims;
  const int nz = dm.n_z(), ng = dm.n_g;
  const VecD zdot = concat(s.xdot, s.fdot);
  const VecD& p = s.p;

  // Lowered forces: curvature coupling, covariant derivative of d, potential.
  VecD force = g.grad_V;
  for (int a = 0; a < ng; ++a) {
    if (p(a) == 0.0) continue;
    force += p(a) * (g.curv.reduced(a).transpose() * zdot);
  }
  for (int w = 0; w < nz; ++w) force(w) += 0.5 * p.dot(g.cov.reduced(w) * p);

  VecD zddot = -(g.block.assembled_inverse() * force);
  for (int s_ = 0; s_ < nz; ++s_) {
    double acc = 0.0;
    for (int u = 0; u < nz; ++u)
      for (int v = 0; v < nz; ++v) acc += g.chr.raised(s_, u, v) * zdot(u) * zdot(v);
    zddot(s_) -= acc;
  }

  // Vertical equation: pdot_b = -c^n_{mb} d^{ms} p_s p_n + c^n_{sb} (A zdot)^s p_n.
  const VecD omega = g.jets.at.d_inv * p;
  const VecD transport = g.conn.reduced() * zdot;
  VecD pdot = VecD::Zero(ng);
  for (int b = 0; b < ng; ++b)
    for (int n = 0; n < ng; ++n)
      for (int m = 0; m < ng; ++m) pdot(b) += c(n, m, b) * p(n) * (transport(m) - omega(m));

  VecD out(2 * nz + ng);
  out << zdot, zddot, pdot;
  return out;
}

VecD reduced_rhs(const Model& model, const ReducedState& s) {
  const Dims dm = model.dims();
  check_size(s.x, dm.n_x(), "x");
  check_size(s.f, dm.n_v, "f");
  check_size(s.xdot, dm.n_x(), "xdot");
  check_size(s.fdot, dm.n_v, "fdot");
  check_size(s.p, dm.n_g, "p");
  return reduced_rhs(geometry_point(model, s.x, s.f), model.lie().c, s);
}

VecD reduced_rhs(const Model& model, const VecD& y) {
  return reduced_rhs(model, ReducedState::from_vector(y, model.dims()));
}

double energy(const Model& model, const ReducedState& s) {
  if (!model.in_section_domain(s.x)) throw DomainError(model.name() + ": x outside the section domain");
  ReducedFieldsT<double> r = reduced_fields<double>(model, concat(s.x, s.f));
  const VecD zdot = concat(s.xdot, s.fdot);
  return 0.5 * zdot.dot(r.H * zdot) + 0.5 * s.p.dot(r.d_inv * s.p) + r.V;
}

namespace {

MatD block_metric_full(const Model& model, const VecD& q, const VecD& f) {
  const Dims dm = model.dims();
  MatD g = MatD::Zero(dm.n_t(), dm.n_t());
  g.topLeftCorner(dm.n_p, dm.n_p) = model.maps<double>().metric_p(q);
  g.bottomRightCorner(dm.n_v, dm.n_v) = model.maps<double>().metric_v(f);
  return g;
}

// Derivative of the block metric and of V along (dq, df).
std::pair<MatD, double> directional(const Model& model, const VecD& q, const VecD& f, const VecD& dq,
                                    const VecD& df) {
  const Dims dm = model.dims();
  const auto& m1 = model.maps<D1>();
  Vec<D1> qs = seed_direction(q, dq), fs = seed_direction(f, df);
  MatD dg = MatD::Zero(dm.n_t(), dm.n_t());
  dg.topLeftCorner(dm.n_p, dm.n_p) = tangent_part(Mat<D1>(m1.metric_p(qs)));
  dg.bottomRightCorner(dm.n_v, dm.n_v) = tangent_part(Mat<D1>(m1.metric_v(fs)));
  return {dg, m1.potential(qs, fs).d};
}

}  // namespace

VecD full_rhs(const Model& model, const FullState& s) {
  const Dims dm = model.dims();
  check_size(s.q, dm.n_p, "Q");
  check_size(s.f, dm.n_v, "f");
  check_size(s.qdot, dm.n_p, "Qdot");
  check_size(s.fdot, dm.n_v, "fdot");
  const int nt = dm.n_t();
  const VecD ydot = concat(s.qdot, s.fdot);
  MatD g = block_metric_full(model, s.q, s.f);
  // G Ydd = 1/2 grad(Ydot^T G Ydot) - (D_Ydot G) Ydot - grad V.
  VecD rhs(nt);
  for (int C = 0; C < nt; ++C) {
    VecD e = VecD::Zero(nt);
    e(C) = 1.0;
    auto [dg, dv] = directional(model, s.q, s.f, e.head(dm.n_p), e.tail(dm.n_v));
    rhs(C) = 0.5 * ydot.dot(dg * ydot) - dv;
  }
  rhs -= directional(model, s.q, s.f, s.qdot, s.fdot).first * ydot;
  Eigen::LDLT<MatD> ldlt(g);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw DegeneracyError(model.name() + ": metric on P x V is not positive definite");
  VecD out(2 * nt);
  out << ydot, ldlt.solve(rhs);
  return out;
}

VecD full_rhs(const Model& model, const VecD& y) { return full_rhs(model, FullState::from_vector(y, model.dims())); }

double full_energy(const Model& model, const FullState& s) {
  const VecD ydot = concat(s.qdot, s.fdot);
  return 0.5 * ydot.dot(block_metric_full(model, s.q, s.f) * ydot) + model.maps<double>().potential(s.q, s.f);
}

ReducedState project_full_state(const Model& model, const FullState& s) {
  const Dims dm = model.dims();
  const int np = dm.n_p, nv = dm.n_v;
  InvariantCoords ic = invariant_coordinates(model, s.q, s.f);
  const VecD b = model.chart().inverse(ic.a);
  const VecD wp = model.push_p(s.q, b, s.qdot);
  const VecD wv = model.push_v(s.f, b, s.fdot);

  FieldJets jets = field_jets(model, ic.x, ic.f);
  const MatD& qi = jets.section.d1;
  const MatD kp = jets.at.K.topRows(np), kv = jets.at.K.bottomRows(nv);
  MatD phi = jets.gauge_jacobian * kp;
  VecD xi;
  try {
    xi = inverse<double>(phi, "gauge transversality matrix Phi") * (jets.gauge_jacobian * wp);
  } catch (const DegeneracyError& e) {
    throw GaugeError(e.what());
  }
  ReducedState r;
  r.x = ic.x;
  r.f = ic.f;
  r.xdot = qi.colPivHouseholderQr().solve(VecD(wp - kp * xi));
  r.fdot = wv - kv * xi;
  r.p = jets.at.K.transpose() * (jets.at.G * concat(wp, wv));
  return r;
}

FullState initial_lift(const Model& model, const ReducedState& s) {
  const Dims dm = model.dims();
  const int np = dm.n_p, nv = dm.n_v;
  check_size(s.x, dm.n_x(), "x");
  check_size(s.f, dm.n_v, "f");
  check_size(s.xdot, dm.n_x(), "xdot");
  check_size(s.fdot, dm.n_v, "fdot");
  check_size(s.p, dm.n_g, "p");
  FieldJets jets = field_jets(model, s.x, s.f);
  const VecD zdot = concat(s.xdot, s.fdot);
  const VecD xi = jets.at.d_inv * s.p - jets.at.conn * (jets.embedding() * zdot);
  FullState out;
  out.q = jets.section.value;
  out.f = s.f;
  out.qdot = jets.section.d1 * s.xdot + jets.at.K.topRows(np) * xi;
  out.fdot = s.fdot + jets.at.K.bottomRows(nv) * xi;
  return out;
}

FullState translate(const Model& model, const FullState& s, const VecD& g) {
  FullState out;
  out.q = model.act_p(s.q, g);
  out.f = model.act_v(s.f, g);
  out.qdot = model.push_p(s.q, g, s.qdot);
  out.fdot = model.push_v(s.f, g, s.fdot);
  return out;
}

}  // namespace lpr
