#include "lpr/gaugefield.hpp"

namespace lpr {

namespace {

// M(u, v) = sum_C c^alpha_{mu nu} a(mu, u) b(nu, v) for one alpha.
MatD bracket_term(const MatD& a, const MatD& b, const Tensor3& c, int alpha) {
  const int ng = static_cast<int>(a.rows());
  MatD out = MatD::Zero(a.cols(), b.cols());
  for (int m = 0; m < ng; ++m)
    for (int n = 0; n < ng; ++n) {
      const double cc = c(alpha, m, n);
      if (cc != 0.0) out += cc * a.row(m).transpose() * b.row(n);
    }
  return out;
}

// d_u A_v - d_v A_u + c A_u A_v where dA[u] is the derivative of the
// n_g x n columns along direction u.
MatD curvature_from(const std::vector<MatD>& dA, const MatD& A, const Tensor3& c, int alpha) {
  const int n = static_cast<int>(dA.size());
  MatD m(n, n);
  for (int u = 0; u < n; ++u) m.row(u) = dA[u].row(alpha);
  return m - m.transpose() + bracket_term(A, A, c, alpha);
}

double antisym(const MatD& m) { return max_abs(m + m.transpose()) / std::max(1.0, max_abs(m)); }

}  // namespace

MatD ConnectionField::reduced() const {
  MatD a(A_base.rows(), A_base.cols() + A_V.cols());
  a << A_base, A_V;
  return a;
}

MatD CurvatureField::reduced(int alpha) const {
  const int nx = static_cast<int>(F_xx[alpha].rows()), nv = static_cast<int>(F_VV[alpha].rows());
  MatD f(nx + nv, nx + nv);
  f.topLeftCorner(nx, nx) = F_xx[alpha];
  f.topRightCorner(nx, nv) = F_xV[alpha];
  f.bottomLeftCorner(nv, nx) = F_Vx[alpha];
  f.bottomRightCorner(nv, nv) = F_VV[alpha];
  return f;
}

MatD covariant_d_term(const MatD& dd_inv, const MatD& d_inv, const VecD& a, const Tensor3& c) {
  const int ng = static_cast<int>(d_inv.rows());
  MatD x = MatD::Zero(ng, ng);
  for (int k = 0; k < ng; ++k)
    for (int m = 0; m < ng; ++m) {
      if (a(m) == 0.0) continue;
      for (int n = 0; n < ng; ++n) {
        const double cc = c(k, m, n);
        if (cc != 0.0) x.row(k) += cc * a(m) * d_inv.row(n);
      }
    }
  return dd_inv + x + x.transpose();
}

ConnectionField connection(const FieldJets& jets) {
  const int np = jets.dims.n_p, nv = jets.dims.n_v;
  ConnectionField out;
  out.A_P = jets.at.conn.leftCols(np);
  out.A_V = jets.at.conn.rightCols(nv);
  out.A_base = out.A_P * jets.section.d1;
  return out;
}

CurvatureField curvature(const FieldJets& jets, const Tensor3& c) {
  const Dims dm = jets.dims;
  const int np = dm.n_p, nv = dm.n_v, nx = dm.n_x(), ng = dm.n_g;
  const MatD J = jets.embedding();
  const MatD Az = jets.at.conn * J;
  std::vector<MatD> dAz(dm.n_z());
  for (int w = 0; w < dm.n_z(); ++w) dAz[w] = jets.along[w].conn * J;

  CurvatureField out;
  for (int alpha = 0; alpha < ng; ++alpha) {
    MatD fr = curvature_from(dAz, Az, c, alpha);
    out.F_xx.push_back(fr.topLeftCorner(nx, nx));
    out.F_xV.push_back(fr.topRightCorner(nx, nv));
    out.F_Vx.push_back(fr.bottomLeftCorner(nv, nx));
    out.F_VV.push_back(fr.bottomRightCorner(nv, nv));
  }
  if (!jets.coord.empty()) {
    std::vector<MatD> dA(dm.n_t());
    for (int C = 0; C < dm.n_t(); ++C) dA[C] = jets.coord[C].conn;
    for (int alpha = 0; alpha < ng; ++alpha) {
      MatD full = curvature_from(dA, jets.at.conn, c, alpha);
      out.F_PP.push_back(full.topLeftCorner(np, np));
      out.F_PV.push_back(full.topRightCorner(np, nv));
      out.F_VP.push_back(full.bottomLeftCorner(nv, np));
    }
  }
  return out;
}

CovariantD covariant_derivative_d(const FieldJets& jets, const Tensor3& c) {
  const Dims dm = jets.dims;
  const MatD Az = jets.at.conn * jets.embedding();
  CovariantD out;
  for (int w = 0; w < dm.n_z(); ++w) {
    MatD dd = covariant_d_term(jets.along[w].d_inv, jets.at.d_inv, Az.col(w), c);
    (w < dm.n_x() ? out.D_base : out.D_V).push_back(dd);
  }
  if (!jets.coord.empty())
    for (int C = 0; C < dm.n_p; ++C)
      out.D_P.push_back(covariant_d_term(jets.coord[C].d_inv, jets.at.d_inv, jets.at.conn.col(C), c));
  return out;
}

ConnectionField connection(const Model& model, const VecD& x, const VecD& f) {
  return connection(field_jets(model, x, f));
}
CurvatureField curvature(const Model& model, const VecD& x, const VecD& f) {
  return curvature(field_jets(model, x, f, JetLevel::full), model.lie().c);
}
CovariantD covariant_derivative_d(const Model& model, const VecD& x, const VecD& f) {
  return covariant_derivative_d(field_jets(model, x, f, JetLevel::full), model.lie().c);
}

ReducedDerivatives reduced_derivatives(const Model& model, const VecD& x, const VecD& f) {
  const Dims dm = model.dims();
  VecD z(dm.n_z());
  z << x, f;
  auto split = [](const ReducedFieldsT<D1>& r, bool tangent) {
    auto part = [tangent](const Mat<D1>& m) { return tangent ? tangent_part(m) : value_part(m); };
    return ReducedFieldsT<double>{part(r.H), part(r.A), part(r.d_inv), tangent ? r.V.d : r.V.v};
  };
  ReducedDerivatives rd;
  for (int w = 0; w < dm.n_z(); ++w) {
    VecD e = VecD::Zero(dm.n_z());
    e(w) = 1.0;
    ReducedFieldsT<D1> r = reduced_fields<D1>(model, seed_direction(z, e));
    if (w == 0) rd.at = split(r, false);
    rd.d.push_back(split(r, true));
  }
  if (dm.n_z() == 0) rd.at = reduced_fields<double>(model, z);
  return rd;
}

std::vector<MatD> curvature_direct(const ReducedDerivatives& rd, const Tensor3& c) {
  std::vector<MatD> dA;
  for (const auto& d : rd.d) dA.push_back(d.A);
  std::vector<MatD> out;
  for (int alpha = 0; alpha < rd.at.A.rows(); ++alpha) out.push_back(curvature_from(dA, rd.at.A, c, alpha));
  return out;
}

std::vector<MatD> covariant_d_direct(const ReducedDerivatives& rd, const Tensor3& c) {
  std::vector<MatD> out;
  for (std::size_t w = 0; w < rd.d.size(); ++w)
    out.push_back(covariant_d_term(rd.d[w].d_inv, rd.at.d_inv, rd.at.A.col(static_cast<int>(w)), c));
  return out;
}

CheckReport gaugefield_invariants(const FieldJets& jets, const ConnectionField& conn, const CurvatureField& curv,
                                  const CovariantD& cov, const ReducedDerivatives& rd, const Tensor3& c) {
  const Dims dm = jets.dims;
  const int ng = dm.n_g;
  const MatD& qi = jets.section.d1;
  const auto pt = point_of(jets.x, jets.f);
  CheckReport rep;

  MatD full_conn(ng, dm.n_t());
  full_conn << conn.A_P, conn.A_V;
  rep.record("connection_normalization", scaled_diff(MatD(full_conn * jets.at.K), MatD::Identity(ng, ng)), 1e-10,
             pt);

  std::vector<MatD> direct = curvature_direct(rd, c);
  double anti = 0.0, pull = 0.0, contraction = 0.0;
  for (int a = 0; a < ng; ++a) {
    MatD fr = curv.reduced(a);
    anti = std::max(anti, antisym(fr));
    pull = std::max(pull, scaled_diff(direct[a], fr));
    if (curv.has_full_blocks()) {
      anti = std::max({anti, antisym(curv.F_PP[a]), max_abs(curv.F_PV[a] + curv.F_VP[a].transpose()) /
                                                        std::max(1.0, max_abs(curv.F_PV[a]))});
      contraction = std::max({contraction, scaled_diff(MatD(qi.transpose() * curv.F_PP[a] * qi), curv.F_xx[a]),
                              scaled_diff(MatD(qi.transpose() * curv.F_PV[a]), curv.F_xV[a]),
                              scaled_diff(MatD(curv.F_VP[a] * qi), curv.F_Vx[a])});
    }
  }
  rep.record("curvature_antisymmetry", anti, 1e-10, pt);
  rep.record("curvature_pullback_direct", pull, 1e-8, pt);
  if (curv.has_full_blocks()) rep.record("curvature_pullback_contraction", contraction, 1e-8, pt);

  std::vector<MatD> dd_direct = covariant_d_direct(rd, c);
  double sym = 0.0, chain = 0.0, route = 0.0;
  for (int w = 0; w < dm.n_z(); ++w) {
    const MatD& d = cov.reduced(w);
    sym = std::max(sym, max_abs(d - d.transpose()) / std::max(1.0, max_abs(d)));
    route = std::max(route, scaled_diff(dd_direct[w], d));
  }
  if (!cov.D_P.empty())
    for (int i = 0; i < dm.n_x(); ++i) {
      MatD acc = MatD::Zero(ng, ng);
      for (int R = 0; R < dm.n_p; ++R) acc += qi(R, i) * cov.D_P[R];
      chain = std::max(chain, scaled_diff(acc, cov.D_base[i]));
    }
  rep.record("covariant_d_symmetry", sym, 1e-10, pt);
  rep.record("covariant_d_direct", route, 1e-8, pt);
  if (!cov.D_P.empty()) rep.record("covariant_d_chain", chain, 1e-9, pt);
  return rep;
}

CheckReport gaugefield_invariants(const Model& model, const VecD& x, const VecD& f) {
  FieldJets jets = field_jets(model, x, f, JetLevel::full);
  const Tensor3& c = model.lie().c;
  return gaugefield_invariants(jets, connection(jets), curvature(jets, c), covariant_derivative_d(jets, c),
                               reduced_derivatives(model, x, f), c);
}

}  // namespace lpr
