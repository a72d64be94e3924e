#include <doctest.h>

#include <chrono>

#include "helpers.hpp"
#include "lpr/christoffel.hpp"
#include "lpr/models.hpp"
#include "translation_model.hpp"

using namespace lpr;
using lpr::testing::max_abs_diff;
using lpr::testing::vec;

namespace {

MatD block_at(const Model& m, const VecD& z) {
  const int nx = m.dims().n_x();
  return block_metric(m, VecD(z.head(nx)), VecD(z.tail(m.dims().n_v))).assembled();
}

// Gamma_{uvw} = 1/2 (d_v H_uw + d_u H_vw - d_w H_uv) by central differences of H.
Tensor3 lowered_fd(const Model& m, const VecD& z) {
  const int n = static_cast<int>(z.size());
  const double h = 1e-5;
  std::vector<MatD> dH(n);
  for (int w = 0; w < n; ++w) {
    VecD e = VecD::Unit(n, w) * h;
    dH[w] = (block_at(m, z + e) - block_at(m, z - e)) / (2 * h);
  }
  Tensor3 g(n, n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) g(u, v, w) = 0.5 * (dH[v](u, w) + dH[u](v, w) - dH[w](u, v));
  return g;
}

double tensor_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("flat translation model: all Christoffel symbols vanish") {
  lpr::testing::TranslationModel m(1.5, 0.5);
  ChristoffelSet s = raised_christoffels(m, vec({0.7}), vec({-0.3}));
  CHECK(s.lowered.max_abs() < 1e-14);
  CHECK(s.raised.max_abs() < 1e-14);
  CheckReport r = identity_suite(m, sample_reduced_points(m, 20, 1));
  for (const auto& e : r.entries()) {
    INFO(e.name);
    CHECK(e.max_residual <= 1e-13);
  }
}

TEST_CASE("lowered symbols match finite differences of the block metric") {
  for (auto [name, params] : {std::pair<std::string, ModelParams>{"abelian_disk", {}},
                              {"so3_coupled", {}},
                              {"so3_coupled", {{"twist", 0.5}}}}) {
    auto m = instantiate(name, params);
    for (const auto& pt : sample_reduced_points(*m, 10, 44)) {
      VecD z(m->dims().n_z());
      z << pt.x, pt.f;
      INFO(name);
      CHECK(tensor_diff(lowered_christoffels(*m, pt.x, pt.f), lowered_fd(*m, z)) < 1e-6);
    }
  }
}

TEST_CASE("symmetry in the two lower slots and raising against the full inverse") {
  auto m = instantiate("so3_coupled", {{"twist", 0.2}});
  for (const auto& pt : sample_reduced_points(*m, 20, 9)) {
    ChristoffelSet s = raised_christoffels(*m, pt.x, pt.f);
    const int n = m->dims().n_z();
    MatD Hinv = block_at(*m, (VecD(n) << pt.x, pt.f).finished()).inverse();
    Tensor3 oracle = raise(s.lowered, Hinv);
    CHECK(tensor_diff(s.raised, oracle) < 1e-9);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          CHECK(s.lowered(a, b, c) == doctest::Approx(s.lowered(b, a, c)).epsilon(1e-12));
          CHECK(s.raised(c, a, b) == doctest::Approx(s.raised(c, b, a)).epsilon(1e-12));
        }
  }
}

TEST_CASE("identity suite: every identity holds at 100 points, < 30 s") {
  std::vector<std::shared_ptr<const Model>> models{instantiate("abelian_disk"), instantiate("so3_coupled"),
                                                   instantiate("so3_coupled", {{"twist", 0.4}})};
  for (const auto& m : models) {
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r = identity_suite(*m, sample_reduced_points(*m, 100, 2024));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    INFO(m->name());
    CHECK(secs < 30.0);
    CHECK(r.find("evaluation_error") == nullptr);
    for (const auto& e : r.entries()) {
      INFO(e.name);
      CHECK(e.passed());
      CHECK(e.max_residual <= 1e-8);
    }
    for (const char* key : {"raised_vs_full_inverse", "lowered_pullback", "raised_projection_x", "raised_projection_V",
                            "curvature_raise_xx", "curvature_raise_VV", "covariant_d_projection_x",
                            "potential_projection_V", "N_idempotent", "Pi_identity_P"})
      CHECK(r.find(key) != nullptr);
  }
}

TEST_CASE("a perturbed inverse block is caught at the 1e-3 level") {
  auto m = instantiate("so3_coupled");
  IdentityOptions bad;
  bad.inv_hv_fault = 1e-3;
  CheckReport r = identity_suite(*m, sample_reduced_points(*m, 10, 5), bad);
  CHECK_FALSE(r.passed());
  CHECK(r.residual("raised_vs_full_inverse") > 1e-4);
  CHECK(r.residual("raised_vs_full_inverse") < 1e-1);
  CHECK(r.residual("mixed_inverse_projector") > 1e-4);
  // The dependent-coordinate identities do not involve h~^{ib}.
  CHECK(r.residual("lowered_pullback") < 1e-8);
}

TEST_CASE("parallel and serial suites agree exactly") {
  auto m = instantiate("so3_coupled");
  auto pts = sample_reduced_points(*m, 64, 3);
  CHECK(identity_suite(*m, pts).to_json().dump() == identity_suite_serial(*m, pts).to_json().dump());
}

TEST_CASE("evaluation errors are reported, not thrown") {
  auto m = instantiate("abelian_disk");
  std::vector<ReducedPoint> pts{{vec({1.0}), vec({0.1, 0.2})}, {vec({-1.0}), vec({0.1, 0.2})}};
  CheckReport r = identity_suite(*m, pts);
  CHECK_FALSE(r.passed());
  REQUIRE(r.find("evaluation_error") != nullptr);
}
