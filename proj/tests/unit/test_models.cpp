#include <doctest.h>

#include "helpers.hpp"
#include "lpr/bundle.hpp"
#include "lpr/errors.hpp"
#include "lpr/models.hpp"

using namespace lpr;
using lpr::testing::max_abs_diff;
using lpr::testing::vec;

namespace {

// Columns: push-forward of each coordinate direction.
MatD push_matrix(const Model& m, const VecD& q, const VecD& a, bool on_p) {
  const int n = static_cast<int>(q.size());
  MatD out(n, n);
  for (int i = 0; i < n; ++i) {
    VecD e = VecD::Unit(n, i);
    out.col(i) = on_p ? m.push_p(q, a, e) : m.push_v(q, a, e);
  }
  return out;
}

}  // namespace

TEST_CASE("registry and parameter validation") {
  CHECK(model_names() == std::vector<std::string>{"abelian_disk", "so3_coupled"});
  CHECK(default_params("so3_coupled").at("lambda") == 0.3);
  CHECK_THROWS_AS(instantiate("su2_quaternion"), ParameterError);
  CHECK_THROWS_AS(instantiate("abelian_disk", {{"mass", 1.0}}), ParameterError);
  CHECK_THROWS_AS(instantiate("abelian_disk", {{"k", -1.0}}), ParameterError);
  CHECK_THROWS_AS(instantiate("so3_coupled", {{"i2", 0.0}}), ParameterError);
  CHECK_THROWS_AS(instantiate("so3_coupled", {{"lambda", 2.0}}), ParameterError);
  CHECK_THROWS_AS(instantiate("so3_coupled", {{"twist", 1.5}}), ParameterError);
  CHECK_NOTHROW(instantiate("so3_coupled", {{"lambda", 0.0}, {"twist", -0.5}}));
}

TEST_CASE("sampling is seeded and stays in the declared regions") {
  auto m = instantiate("so3_coupled");
  auto a = sample_reduced_points(*m, 20, 42), b = sample_reduced_points(*m, 20, 42);
  auto c = sample_reduced_points(*m, 20, 43);
  CHECK(a[7].x == b[7].x);
  CHECK(a[7].f == b[7].f);
  CHECK(a[7].x != c[7].x);
  for (const auto& p : a) {
    CHECK(p.x.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(m->in_section_domain(p.x));
  }
  auto d = instantiate("abelian_disk");
  for (const auto& p : sample_reduced_points(*d, 50, 1)) CHECK((p.x(0) >= 0.5 && p.x(0) <= 2.0));
}

TEST_CASE("the section satisfies the gauge condition") {
  for (auto [name, params] : {std::pair<std::string, ModelParams>{"abelian_disk", {}},
                              {"so3_coupled", {}},
                              {"so3_coupled", {{"twist", 0.6}}}}) {
    auto m = instantiate(name, params);
    for (const auto& p : sample_reduced_points(*m, 30, 2))
      CHECK(m->maps<double>().gauge(m->maps<double>().section(p.x)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("abelian_disk section Q*(x) = (x, 0) with jets (1, 0) and 0") {
  auto m = instantiate("abelian_disk");
  SectionJet j = section_jet(*m, vec({2.0}));
  CHECK(max_abs_diff(j.value, vec({2.0, 0.0})) == 0.0);
  CHECK(max_abs_diff(j.d1, vec({1.0, 0.0})) == 0.0);
  CHECK(j.d2.max_abs() == 0.0);
}

TEST_CASE("so3_coupled untwisted section: group part constant, base part x") {
  auto m = instantiate("so3_coupled");
  SectionJet j = section_jet(*m, vec({0.4, -0.7}));
  CHECK(max_abs_diff(j.value, vec({0, 0, 0, 0.4, -0.7})) == 0.0);
  CHECK(j.d1.topRows(3).isZero(0.0));
  CHECK(max_abs_diff(j.d1.bottomRows(2), MatD::Identity(2, 2)) == 0.0);
}

TEST_CASE("the actions are isometries and preserve the potential") {
  for (auto [name, params] : {std::pair<std::string, ModelParams>{"abelian_disk", {}},
                              {"so3_coupled", {{"twist", 0.3}}}}) {
    auto m = instantiate(name, params);
    std::mt19937_64 rng(17);
    for (const auto& [q, f] : sample_full_points(*m, 20, 8)) {
      VecD g = m->sample_group(rng);
      VecD gq = m->act_p(q, g), gf = m->act_v(f, g);
      MatD Pp = push_matrix(*m, q, g, true), Pv = push_matrix(*m, f, g, false);
      INFO(name);
      CHECK(max_abs_diff(Pp.transpose() * m->maps<double>().metric_p(gq) * Pp, m->maps<double>().metric_p(q)) <
            1e-12);
      CHECK(max_abs_diff(Pv.transpose() * m->maps<double>().metric_v(gf) * Pv, m->maps<double>().metric_v(f)) <
            1e-12);
      CHECK(std::abs(m->maps<double>().potential(gq, gf) - m->maps<double>().potential(q, f)) <= 1e-12);
    }
  }
}

TEST_CASE("Killing fields generate the action: d/dt F(Q, exp(t xi)) at t = 0") {
  for (const auto& name : model_names()) {
    auto m = instantiate(name);
    const int ng = m->dims().n_g;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& [q, f] : sample_full_points(*m, 10, 6)) {
      VecD xi(ng);
      for (int i = 0; i < ng; ++i) xi(i) = u(rng);
      const double h = 1e-6;
      VecD ap = m->chart().exp(VecD(h * xi)), am = m->chart().exp(VecD(-h * xi));
      VecD dq = (m->act_p(q, ap) - m->act_p(q, am)) / (2 * h);
      VecD df = (m->act_v(f, ap) - m->act_v(f, am)) / (2 * h);
      INFO(name);
      CHECK(max_abs_diff(dq, m->maps<double>().killing_p(q) * xi) < 1e-8);
      CHECK(max_abs_diff(df, m->maps<double>().killing_v(f) * xi) < 1e-8);
    }
  }
}

TEST_CASE("so3_coupled re-centering keeps the configuration and velocity") {
  auto m = instantiate("so3_coupled");
  VecD q = vec({0.0, 0.6, 3.2, 0.1, -0.2}), qdot = vec({0.3, -0.1, 0.2, 0.05, 0.0});
  VecD q2 = q, qdot2 = qdot;
  m->recenter(q2, qdot2);
  CHECK(q2.head(3).norm() == doctest::Approx(2 * M_PI - q.head(3).norm()));
  VecD q3 = vec({0.0, 0.0, 2.9, 0.0, 0.0}), qdot3 = qdot;
  m->recenter(q3, qdot3);
  CHECK(q3(2) == 2.9);
  CHECK(max_abs_diff(so3::rotation<double>(VecD(q2.head(3))), so3::rotation<double>(VecD(q.head(3)))) < 1e-12);
  // Same body angular velocity J_r q qdot in both charts.
  CHECK(max_abs_diff(so3::right_jacobian<double>(VecD(q2.head(3))) * qdot2.head(3),
                     so3::right_jacobian<double>(VecD(q.head(3))) * qdot.head(3)) < 1e-12);
  CHECK(max_abs_diff(qdot2.tail(2), qdot.tail(2)) == 0.0);
}
