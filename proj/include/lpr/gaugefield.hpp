#pragma once

#include <vector>

#include "lpr/bundle.hpp"
#include "lpr/check_report.hpp"

namespace lpr {

// Mechanical connection A^alpha = d^{alpha mu} K^B~_mu G_{B~ A~} split by legs.
struct ConnectionField {
  MatD A_P;     // n_g x n_p
  MatD A_V;     // n_g x n_v
  MatD A_base;  // A^alpha_R Q*^R_i, n_g x n_x
  // [A_base, A_V], n_g x n_z.
  MatD reduced() const;
};

// F^alpha = dA - dA + c A A, one matrix per alpha. The P-leg blocks need
// coordinate jets (JetLevel::full) and are left empty otherwise.
struct CurvatureField {
  std::vector<MatD> F_PP;  // F^alpha_BR
  std::vector<MatD> F_PV;  // F^alpha_Br
  std::vector<MatD> F_VP;  // F^alpha_bR
  std::vector<MatD> F_VV;  // F^alpha_ba
  std::vector<MatD> F_xx;  // F^alpha_kl
  std::vector<MatD> F_xV;  // F^alpha_ka = F^alpha_Ba Q*^B_k
  std::vector<MatD> F_Vx;  // F^alpha_bi = F^alpha_bR Q*^R_i
  bool has_full_blocks() const { return !F_PP.empty(); }
  // [[F_xx, F_xV], [F_Vx, F_VV]] for one alpha, n_z x n_z.
  MatD reduced(int alpha) const;
};

// D_C d^{kappa sigma} = d_C d^{ks} + c^k_{mn} A^m_C d^{ns} + c^s_{mn} A^m_C d^{nk}.
struct CovariantD {
  std::vector<MatD> D_P;     // per P coordinate (full jets only)
  std::vector<MatD> D_V;     // per V coordinate
  std::vector<MatD> D_base;  // per base coordinate
  const MatD& reduced(int w) const {
    const int nx = static_cast<int>(D_base.size());
    return w < nx ? D_base[w] : D_V[w - nx];
  }
};

ConnectionField connection(const FieldJets& jets);
CurvatureField curvature(const FieldJets& jets, const Tensor3& c);
CovariantD covariant_derivative_d(const FieldJets& jets, const Tensor3& c);

ConnectionField connection(const Model& model, const VecD& x, const VecD& f);
CurvatureField curvature(const Model& model, const VecD& x, const VecD& f);
CovariantD covariant_derivative_d(const Model& model, const VecD& x, const VecD& f);

// Derivatives of reduced_fields along each z-direction (independent route).
struct ReducedDerivatives {
  ReducedFieldsT<double> at;
  std::vector<ReducedFieldsT<double>> d;  // d[w] = d/dz^w
};
ReducedDerivatives reduced_derivatives(const Model& model, const VecD& x, const VecD& f);
// d_u A_v - d_v A_u + c A_u A_v from the reduced connection, per alpha.
std::vector<MatD> curvature_direct(const ReducedDerivatives& rd, const Tensor3& c);
// D_w d from the reduced derivatives of d^-1, per reduced direction w.
std::vector<MatD> covariant_d_direct(const ReducedDerivatives& rd, const Tensor3& c);

// D d for a given derivative of d^-1 and connection column a (n_g).
MatD covariant_d_term(const MatD& dd_inv, const MatD& d_inv, const VecD& a, const Tensor3& c);

// Connection normalisation, curvature antisymmetry and pullbacks, D d chain
// rule and symmetry, each checked against the direct route.
CheckReport gaugefield_invariants(const FieldJets& jets, const ConnectionField& conn, const CurvatureField& curv,
                                  const CovariantD& cov, const ReducedDerivatives& rd, const Tensor3& c);
CheckReport gaugefield_invariants(const Model& model, const VecD& x, const VecD& f);

}  // namespace lpr
