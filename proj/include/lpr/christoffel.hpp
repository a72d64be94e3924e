#pragma once

#include <vector>

#include "lpr/bundle.hpp"
#include "lpr/check_report.hpp"
#include "lpr/gaugefield.hpp"
#include "lpr/models.hpp"

namespace lpr {

// Christoffel symbols of the block metric in z = (x, f~), with base
// indices first. lowered(u, v, w) = Gamma_{uvw} (lowered index last),
// raised(s, u, v) = Gamma^s_{uv}.
struct ChristoffelSet {
  int n_x = 0;
  int n_v = 0;
  Tensor3 lowered;
  Tensor3 raised;

  double Gi_jk(int i, int j, int k) const { return raised(i, j, k); }
  double Gi_aj(int i, int a, int j) const { return raised(i, n_x + a, j); }
  double Gi_ab(int i, int a, int b) const { return raised(i, n_x + a, n_x + b); }
  double Gb_ij(int b, int i, int j) const { return raised(n_x + b, i, j); }
  double Gb_ia(int b, int i, int a) const { return raised(n_x + b, i, n_x + a); }
  double Gb_ac(int b, int a, int c) const { return raised(n_x + b, n_x + a, n_x + c); }

  double G_jkl(int j, int k, int l) const { return lowered(j, k, l); }
  double G_jka(int j, int k, int a) const { return lowered(j, k, n_x + a); }
  double G_ajk(int a, int j, int k) const { return lowered(n_x + a, j, k); }
  double G_ajb(int a, int j, int b) const { return lowered(n_x + a, j, n_x + b); }
  double G_abk(int a, int b, int k) const { return lowered(n_x + a, n_x + b, k); }
  double G_abc(int a, int b, int c) const { return lowered(n_x + a, n_x + b, n_x + c); }
};

// Gamma_{uvw} = 1/2 (dH_uw/dz^v + dH_vw/dz^u - dH_uv/dz^w) from dH[w] = dH/dz^w.
Tensor3 lowered_from_derivatives(const std::vector<MatD>& dH);
// Gamma^s_{uv} = Hinv^{sw} Gamma_{uvw}.
Tensor3 raise(const Tensor3& lowered, const MatD& h_inverse);

// Product-rule derivatives of the block metric from the field jets.
std::vector<MatD> block_metric_derivatives(const FieldJets& jets);
Tensor3 lowered_christoffels(const FieldJets& jets);
// Raised with the projector-formula inverse blocks.
ChristoffelSet christoffels(const FieldJets& jets, const BlockMetric& block);

Tensor3 lowered_christoffels(const Model& model, const VecD& x, const VecD& f);
ChristoffelSet raised_christoffels(const Model& model, const VecD& x, const VecD& f);

struct IdentityOptions {
  // Added to every entry of h~^{ib} before use; fault-injection hook.
  double inv_hv_fault = 0.0;
};

// Every identity at one point. Evaluation failures are recorded as an
// "evaluation_error" entry with infinite residual.
CheckReport identity_residuals(const Model& model, const VecD& x, const VecD& f, const IdentityOptions& opts = {});
// Parallel over points (OpenMP); the result does not depend on thread count.
CheckReport identity_suite(const Model& model, const std::vector<ReducedPoint>& points,
                           const IdentityOptions& opts = {});
CheckReport identity_suite_serial(const Model& model, const std::vector<ReducedPoint>& points,
                                  const IdentityOptions& opts = {});

}  // namespace lpr
