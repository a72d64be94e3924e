#include "lpr/christoffel.hpp"

#include <limits>

#include <Eigen/Dense>

namespace lpr {

namespace {

double scaled_tensor_diff(const Tensor3& a, const Tensor3& b) { return scaled_diff(a, b); }

// d/dz^w of the embedding J = [[Q*_i, 0], [0, I]].
std::vector<MatD> embedding_derivatives(const FieldJets& jets) {
  const Dims dm = jets.dims;
  std::vector<MatD> dJ(dm.n_z(), MatD::Zero(dm.n_t(), dm.n_z()));
  for (int w = 0; w < dm.n_x(); ++w)
    for (int i = 0; i < dm.n_x(); ++i)
      for (int A = 0; A < dm.n_p; ++A) dJ[w](A, i) = jets.section.d2(A, i, w);
  return dJ;
}

// Gamma_{A~B~C~} of G~^H in P x V coordinates from coordinate jets.
Tensor3 dependent_lowered(const FieldJets& jets) {
  std::vector<MatD> dG;
  for (const auto& c : jets.coord) dG.push_back(c.GHt);
  return lowered_from_derivatives(dG);
}

// Rows of M G^-1 N~^T X split into P rows (n_p) and V rows (n_v).
struct Projected {
  MatD p;  // N_PP G_P^-1 (N~^T X)_P
  MatD v;  // N_VP G_P^-1 (N~^T X)_P + G_V^-1 (N~^T X)_V
};
Projected project(const FieldJets& jets, const ProjectorSet& proj, const MatD& X) {
  const int np = jets.dims.n_p, nv = jets.dims.n_v;
  MatD nx = proj.full().transpose() * X;
  MatD gp = jets.G_inv.topLeftCorner(np, np) * nx.topRows(np);
  MatD gv = jets.G_inv.bottomRightCorner(nv, nv) * nx.bottomRows(nv);
  return {proj.N_PP * gp, proj.N_VP * gp + gv};
}

}  // namespace

Tensor3 lowered_from_derivatives(const std::vector<MatD>& dH) {
  const int n = static_cast<int>(dH.size());
  Tensor3 g(n, n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) g(u, v, w) = 0.5 * (dH[v](u, w) + dH[u](v, w) - dH[w](u, v));
  return g;
}

Tensor3 raise(const Tensor3& lowered, const MatD& h_inverse) {
  const int n = lowered.dim0();
  Tensor3 r(n, n, n);
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        double acc = 0.0;
        for (int w = 0; w < n; ++w) acc += h_inverse(s, w) * lowered(u, v, w);
        r(s, u, v) = acc;
      }
  return r;
}

std::vector<MatD> block_metric_derivatives(const FieldJets& jets) {
  const MatD J = jets.embedding();
  const MatD& ght = jets.at.GHt;
  const std::vector<MatD> dJ = embedding_derivatives(jets);
  std::vector<MatD> dH;
  for (int w = 0; w < jets.dims.n_z(); ++w) {
    MatD cross = dJ[w].transpose() * ght * J;
    dH.push_back(cross + cross.transpose() + J.transpose() * jets.along[w].GHt * J);
  }
  return dH;
}

Tensor3 lowered_christoffels(const FieldJets& jets) { return lowered_from_derivatives(block_metric_derivatives(jets)); }

ChristoffelSet christoffels(const FieldJets& jets, const BlockMetric& block) {
  ChristoffelSet set;
  set.n_x = jets.dims.n_x();
  set.n_v = jets.dims.n_v;
  set.lowered = lowered_christoffels(jets);
  set.raised = raise(set.lowered, block.assembled_inverse());
  return set;
}

Tensor3 lowered_christoffels(const Model& model, const VecD& x, const VecD& f) {
  return lowered_christoffels(field_jets(model, x, f));
}

ChristoffelSet raised_christoffels(const Model& model, const VecD& x, const VecD& f) {
  return christoffels(field_jets(model, x, f), block_metric(model, x, f));
}

CheckReport identity_residuals(const Model& model, const VecD& x, const VecD& f, const IdentityOptions& opts) {
  CheckReport rep;
  const auto pt = point_of(x, f);
  try {
    const Dims dm = model.dims();
    const int np = dm.n_p, nv = dm.n_v, nx = dm.n_x(), nz = dm.n_z(), nt = dm.n_t(), ng = dm.n_g;
    const Tensor3& c = model.lie().c;
    FieldJets jets = field_jets(model, x, f, JetLevel::full);
    MatD gh = horizontal_metric_p(jets);
    BaseMetric base = base_metric(jets, gh);
    ProjectorSet proj = projector_set(jets, base, gh);
    BlockMetric block = block_metric(jets, proj);
    if (opts.inv_hv_fault != 0.0) block.inv_hv.array() += opts.inv_hv_fault;
    ConnectionField conn = connection(jets);
    CurvatureField curv = curvature(jets, c);
    CovariantD cov = covariant_derivative_d(jets, c);
    ReducedDerivatives rd = reduced_derivatives(model, x, f);
    ChristoffelSet chr = christoffels(jets, block);

    rep.merge(bundle_invariants(jets, gh, base, proj, block));
    rep.merge(gaugefield_invariants(jets, conn, curv, cov, rd, c));

    const MatD& qi = jets.section.d1;
    const MatD J = jets.embedding();
    const MatD& ght = jets.at.GHt;
    const MatD gp_inv = jets.G_inv.topLeftCorner(np, np);
    const MatD gv_inv = jets.G_inv.bottomRightCorner(nv, nv);
    const MatD H = block.assembled();

    // Christoffel symmetry, direct-route lowering, raising oracle.
    double sym = 0.0;
    for (int s = 0; s < nz; ++s)
      for (int u = 0; u < nz; ++u)
        for (int v = 0; v < nz; ++v)
          sym = std::max({sym, std::abs(chr.lowered(u, v, s) - chr.lowered(v, u, s)),
                          std::abs(chr.raised(s, u, v) - chr.raised(s, v, u))});
    rep.record("christoffel_symmetry", sym / std::max(1.0, chr.lowered.max_abs()), 1e-10, pt);
    std::vector<MatD> dh_direct;
    for (const auto& d : rd.d) dh_direct.push_back(d.H);
    rep.record("lowered_vs_direct", scaled_tensor_diff(lowered_from_derivatives(dh_direct), chr.lowered), 1e-8, pt);
    rep.record("block_metric_vs_direct", scaled_diff(rd.at.H, H), 1e-10, pt);
    rep.record("raised_vs_full_inverse", scaled_tensor_diff(raise(chr.lowered, H.inverse()), chr.raised), 1e-9,
               pt);

    // (a) lowered pullback from the dependent-coordinate symbols.
    const Tensor3 dep = dependent_lowered(jets);
    std::vector<MatD> L(nz * nz, MatD());  // L[u*nz+v] = Gamma_{A~B~C~} J^A~_u J^B~_v, n_t vector
    Tensor3 pulled(nz, nz, nz);
    for (int u = 0; u < nz; ++u)
      for (int v = 0; v < nz; ++v) {
        VecD lv = VecD::Zero(nt);
        for (int A = 0; A < nt; ++A)
          for (int B = 0; B < nt; ++B) {
            const double jj = J(A, u) * J(B, v);
            if (jj == 0.0) continue;
            for (int C = 0; C < nt; ++C) lv(C) += dep(A, B, C) * jj;
          }
        VecD d2 = VecD::Zero(nt);
        if (u < nx && v < nx)
          for (int A = 0; A < np; ++A) d2(A) = jets.section.d2(A, u, v);
        VecD y = lv + ght * d2;
        VecD low = J.transpose() * y;
        for (int w = 0; w < nz; ++w) pulled(u, v, w) = low(w);
        L[u * nz + v] = lv;
      }
    rep.record("lowered_pullback", scaled_tensor_diff(pulled, chr.lowered), 1e-8, pt);

    // (b) raised symbols through the projectors and the full metric inverse.
    double proj_x = 0.0, proj_v = 0.0;
    for (int u = 0; u < nz; ++u)
      for (int v = 0; v < nz; ++v) {
        Projected pr = project(jets, proj, L[u * nz + v]);
        VecD d2 = VecD::Zero(np);
        if (u < nx && v < nx)
          for (int A = 0; A < np; ++A) d2(A) = jets.section.d2(A, u, v);
        VecD rhs_x = pr.p.col(0) + proj.N_PP * d2;
        VecD rhs_v = pr.v.col(0) + proj.N_VP * d2;
        VecD gx(nx), gv(nv);
        for (int i = 0; i < nx; ++i) gx(i) = chr.raised(i, u, v);
        for (int b = 0; b < nv; ++b) gv(b) = chr.raised(nx + b, u, v);
        proj_x = std::max(proj_x, scaled_diff(MatD(rhs_x), MatD(qi * gx)));
        proj_v = std::max(proj_v, scaled_diff(MatD(rhs_v), MatD(gv)));
      }
    rep.record("raised_projection_x", proj_x, 1e-8, pt);
    rep.record("raised_projection_V", proj_v, 1e-8, pt);

    // (c) curvature raisings.
    const MatD& N = proj.N_PP;
    const MatD& NV = proj.N_VP;
    MatD ngn = N * gp_inv * N.transpose();
    MatD ngv = N * gp_inv * NV.transpose();
    MatD vgv = gv_inv + NV * gp_inv * NV.transpose();
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c6 = 0.0;
    for (int a = 0; a < ng; ++a) {
      c1 = std::max(c1, scaled_diff(MatD(ngn * curv.F_PP[a].transpose() * qi),
                                    MatD(qi * block.inv_hh * curv.F_xx[a].transpose())));
      c2 = std::max(c2, scaled_diff(MatD(ngv * curv.F_PV[a].transpose() * qi),
                                    MatD(qi * block.inv_hv * curv.F_xV[a].transpose())));
      c3 = std::max(c3, scaled_diff(MatD(ngn * curv.F_VP[a].transpose()),
                                    MatD(qi * block.inv_hh * curv.F_Vx[a].transpose())));
      c4 = std::max(c4, scaled_diff(MatD(ngv * curv.F_VV[a].transpose()),
                                    MatD(qi * block.inv_hv * curv.F_VV[a].transpose())));
      c6 = std::max({c6,
                     scaled_diff(MatD(ngv.transpose() * curv.F_PP[a].transpose() * qi),
                                 MatD(block.inv_hv.transpose() * curv.F_xx[a].transpose())),
                     scaled_diff(MatD(vgv * curv.F_PV[a].transpose() * qi),
                                 MatD(block.inv_vv * curv.F_xV[a].transpose())),
                     scaled_diff(MatD(ngv.transpose() * curv.F_VP[a].transpose()),
                                 MatD(block.inv_hv.transpose() * curv.F_Vx[a].transpose())),
                     scaled_diff(MatD(vgv * curv.F_VV[a].transpose()),
                                 MatD(block.inv_vv * curv.F_VV[a].transpose()))});
    }
    rep.record("curvature_raise_xx", c1, 1e-8, pt);
    rep.record("curvature_raise_xV", c2, 1e-8, pt);
    rep.record("curvature_raise_Vx", c3, 1e-8, pt);
    rep.record("curvature_raise_VV", c4, 1e-8, pt);
    rep.record("curvature_raise_second_equation", c6, 1e-8, pt);
    rep.record("mixed_inverse_projector", scaled_diff(ngv, MatD(qi * block.inv_hv)), 1e-8, pt);
    rep.record("vertical_inverse_projector", scaled_diff(vgv, block.inv_vv), 1e-8, pt);

    // (d) covariant-derivative and potential projections.
    auto projection_residual = [&](const VecD& full, const VecD& reduced) {
      Projected pr = project(jets, proj, MatD(full));
      VecD rx = qi * (block.inv_hh * reduced.head(nx) + block.inv_hv * reduced.tail(nv));
      VecD rv = block.inv_hv.transpose() * reduced.head(nx) + block.inv_vv * reduced.tail(nv);
      return std::make_pair(scaled_diff(MatD(pr.p), MatD(rx)), scaled_diff(MatD(pr.v), MatD(rv)));
    };
    double dx = 0.0, dv = 0.0;
    for (int k = 0; k < ng; ++k)
      for (int s = 0; s < ng; ++s) {
        VecD full(nt), red(nz);
        for (int R = 0; R < np; ++R) full(R) = cov.D_P[R](k, s);
        for (int a = 0; a < nv; ++a) full(np + a) = cov.D_V[a](k, s);
        for (int w = 0; w < nz; ++w) red(w) = cov.reduced(w)(k, s);
        auto [rx, rv] = projection_residual(full, red);
        dx = std::max(dx, rx);
        dv = std::max(dv, rv);
      }
    rep.record("covariant_d_projection_x", dx, 1e-8, pt);
    rep.record("covariant_d_projection_V", dv, 1e-8, pt);
    VecD grad(nt), red(nz);
    for (int C = 0; C < nt; ++C) grad(C) = jets.coord[C].V;
    for (int w = 0; w < nz; ++w) red(w) = jets.along[w].V;
    auto [vx, vv] = projection_residual(grad, red);
    rep.record("potential_projection_x", vx, 1e-8, pt);
    rep.record("potential_projection_V", vv, 1e-8, pt);
    VecD red_direct(nz);
    for (int w = 0; w < nz; ++w) red_direct(w) = rd.d[w].V;
    rep.record("potential_gradient_direct", scaled_diff(MatD(red_direct), MatD(red)), 1e-10, pt);
  } catch (const Error&) {
    rep.record("evaluation_error", std::numeric_limits<double>::infinity(), 0.0, pt);
  }
  return rep;
}

namespace {

CheckReport run_suite(const Model& model, const std::vector<ReducedPoint>& points, const IdentityOptions& opts,
                      bool parallel) {
  const int n = static_cast<int>(points.size());
  std::vector<CheckReport> per_point(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) per_point[i] = identity_residuals(model, points[i].x, points[i].f, opts);
  CheckReport out;
  for (const auto& r : per_point) out.merge(r);
  return out;
}

}  // namespace

CheckReport identity_suite(const Model& model, const std::vector<ReducedPoint>& points, const IdentityOptions& opts) {
  return run_suite(model, points, opts, true);
}

CheckReport identity_suite_serial(const Model& model, const std::vector<ReducedPoint>& points,
                                  const IdentityOptions& opts) {
  return run_suite(model, points, opts, false);
}

}  // namespace lpr
