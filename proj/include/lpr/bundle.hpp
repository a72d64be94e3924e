#pragma once

#include <vector>

#include "lpr/calculus.hpp"
#include "lpr/check_report.hpp"
#include "lpr/linalg.hpp"
#include "lpr/model.hpp"

namespace lpr {

// Q*(x) with first and second derivatives: d1(A, i) = Q*^A_i, d2(A, i, j) = Q*^A_ij.
struct SectionJet {
  VecD value;
  MatD d1;
  Tensor3 d2;
};

struct OrbitMetrics {
  MatD gamma;        // K_P^T G_P K_P
  MatD gamma_prime;  // K_V^T G_V K_V
  MatD d_lower;      // gamma + gamma'
  MatD d_upper;      // inverse of d_lower
};

struct HorizontalMetrics {
  MatD GH;   // n_p x n_p, G - G K gamma^-1 K^T G
  MatD GHt;  // n_t x n_t, block version with d
};

struct BaseMetric {
  MatD h;      // Q*_i^T G^H Q*_j
  MatD h_inv;
};

struct ProjectorSet {
  MatD N_PP;      // N^A_B, gauge-based
  MatD N_VP;      // N^a_B
  MatD N_metric;  // G^H_BR Q*^R_m h^mn Q*^A_n, as (A, B)
  MatD P_perp;    // projection onto T(Sigma) along orbits
  MatD T;         // T^i_A, n_x x n_p
  MatD Phi;       // chi^mu_{,A} K^A_nu
  MatD Pi_tilde;  // G^{E C} G~^H_{C R}, n_t x n_t
  // Block projector [[N_PP, 0], [N_VP, I]].
  MatD full() const;
};

// Block-metric blocks and their inverse blocks from the projector formulas.
struct BlockMetric {
  MatD h_tilde;  // n_x x n_x
  MatD cross;    // G~^H_{Aa} Q*^A_i, n_x x n_v
  MatD vv;       // G~^H_ab
  MatD inv_hh;
  MatD inv_hv;
  MatD inv_vv;
  MatD assembled() const;
  MatD assembled_inverse() const;
};

// Everything the Euler-Lagrange data of the model needs at one point, in
// scalar S: block metric G on P x V, block Killing fields K (n_t x n_g), orbit
// metrics, the mechanical connection (n_g x n_t), G~^H and V.
template <class S>
struct FieldsT {
  Mat<S> G;
  Mat<S> K;
  Mat<S> gamma;
  Mat<S> gamma_prime;
  Mat<S> d;
  Mat<S> d_inv;
  Mat<S> conn;
  Mat<S> GHt;
  S V{};
};
using Fields = FieldsT<double>;

template <class S>
FieldsT<S> fields_at(const Model& model, const Vec<S>& q, const Vec<S>& f) {
  const auto& m = model.template maps<S>();
  const Dims dm = model.dims();
  const int np = dm.n_p, nv = dm.n_v, ng = dm.n_g, nt = dm.n_t();
  Mat<S> gp = m.metric_p(q);
  Mat<S> gv = m.metric_v(f);
  Mat<S> kp = m.killing_p(q);
  Mat<S> kv = m.killing_v(f);
  if (gp.rows() != np || gp.cols() != np || kp.rows() != np || kp.cols() != ng || gv.rows() != nv ||
      kv.rows() != nv || kv.cols() != ng)
    throw ShapeError(model.name() + ": model maps disagree with declared dimensions");
  FieldsT<S> out;
  out.G = Mat<S>::Zero(nt, nt);
  out.G.topLeftCorner(np, np) = gp;
  out.G.bottomRightCorner(nv, nv) = gv;
  out.K = Mat<S>(nt, ng);
  out.K.topRows(np) = kp;
  out.K.bottomRows(nv) = kv;
  out.gamma = kp.transpose() * gp * kp;
  out.gamma_prime = kv.transpose() * gv * kv;
  out.d = out.gamma + out.gamma_prime;
  out.d_inv = inverse<S>(out.d, "orbit metric d");
  Mat<S> gk = out.G * out.K;
  out.conn = out.d_inv * gk.transpose();
  out.GHt = out.G - gk * out.conn;
  out.V = m.potential(q, f);
  return out;
}

// Block metric, connection pullback A^alpha_u, d^-1 and V as functions
// of z = (x, f~) in scalar S. Differentiating these with dual numbers gives a
// route to reduced derivatives that never uses the projector formulas.
template <class S>
struct ReducedFieldsT {
  Mat<S> H;  // n_z x n_z
  Mat<S> A;  // n_g x n_z
  Mat<S> d_inv;
  S V{};
};

template <class S>
ReducedFieldsT<S> reduced_fields(const Model& model, const Vec<S>& z) {
  const Dims dm = model.dims();
  const int nx = dm.n_x(), nv = dm.n_v, np = dm.n_p;
  Vec<S> x = z.head(nx), f = z.tail(nv);
  Vec<S> q = model.template maps<S>().section(x);
  Mat<S> J = Mat<S>::Zero(dm.n_t(), dm.n_z());
  for (int i = 0; i < nx; ++i) {
    Vec<S> dir = Vec<S>::Zero(nx);
    dir(i) = S(1.0);
    Vec<Dual<S>> qd = model.template maps<Dual<S>>().section(seed_direction(x, dir));
    for (int a = 0; a < np; ++a) J(a, i) = qd(a).d;
  }
  for (int a = 0; a < nv; ++a) J(np + a, nx + a) = S(1.0);
  FieldsT<S> fl = fields_at<S>(model, q, f);
  ReducedFieldsT<S> out;
  out.H = J.transpose() * fl.GHt * J;
  out.A = fl.conn * J;
  out.d_inv = fl.d_inv;
  out.V = fl.V;
  return out;
}

Fields value_of(const FieldsT<D1>& f);
Fields tangent_of(const FieldsT<D1>& f);

enum class JetLevel {
  reduced,  // derivatives along the n_z reduced directions only
  full      // additionally along every coordinate of P x V
};

// Field values and first derivatives at (Q*(x), f~).
struct FieldJets {
  Dims dims;
  VecD x;
  VecD f;
  SectionJet section;
  Fields at;
  MatD G_inv;
  MatD gauge_jacobian;        // chi^alpha_{,A}
  VecD gauge_value;           // chi(Q*(x)), zero up to roundoff
  std::vector<Fields> along;  // d/dz^w of the fields along z -> (Q*(x), f~), w < n_z
  std::vector<Fields> coord;  // d/dY^C at fixed point, C < n_t (full level only)
  // [[Q*_i, 0], [0, I]], n_t x n_z.
  MatD embedding() const;
};

SectionJet section_jet(const Model& model, const VecD& x);
FieldJets field_jets(const Model& model, const VecD& x, const VecD& f, JetLevel level = JetLevel::reduced);

OrbitMetrics orbit_metrics(const Model& model, const VecD& q, const VecD& f);
HorizontalMetrics horizontal_metrics(const Model& model, const VecD& q, const VecD& f);
MatD horizontal_metric_p(const FieldJets& jets);
BaseMetric base_metric(const Model& model, const VecD& x);
BaseMetric base_metric(const FieldJets& jets, const MatD& GH);
ProjectorSet projector_set(const Model& model, const VecD& x, const VecD& f);
ProjectorSet projector_set(const FieldJets& jets, const BaseMetric& base, const MatD& GH);
BlockMetric block_metric(const Model& model, const VecD& x, const VecD& f);
BlockMetric block_metric(const FieldJets& jets, const ProjectorSet& proj);

struct InvariantCoords {
  VecD x;
  VecD a;  // Q = F(Q*(x), a)
  VecD f;  // f~ = a^-1 f
};
// Newton on the group chart for chi(F(Q, b)) = 0, b = a^-1, starting at b = e.
InvariantCoords invariant_coordinates(const Model& model, const VecD& q, const VecD& f);

// Section, orbit, horizontal-metric, projector and block-metric invariants.
CheckReport bundle_invariants(const FieldJets& jets, const MatD& GH, const BaseMetric& base,
                              const ProjectorSet& proj, const BlockMetric& block);
CheckReport bundle_invariants(const Model& model, const VecD& x, const VecD& f);

// Concatenated (x, f) as a report location.
std::vector<double> point_of(const VecD& x, const VecD& f);

}  // namespace lpr
