#include <doctest.h>

#include <Eigen/Geometry>

#include "helpers.hpp"
#include "lpr/algebra.hpp"
#include "lpr/errors.hpp"
#include "lpr/models.hpp"

using namespace lpr;
using lpr::testing::max_abs_diff;
using lpr::testing::vec;

namespace {

MatD rotation_oracle(const VecD& q) {
  const double th = q.norm();
  if (th == 0.0) return MatD::Identity(3, 3);
  return Eigen::AngleAxisd(th, Eigen::Vector3d(q / th)).toRotationMatrix();
}

}  // namespace

TEST_CASE("structure constants: so(3), abelian and a broken tensor") {
  for (double sign : {1.0, -1.0}) {
    LieData so3 = LieData::so3(sign);
    CHECK(so3.c(0, 1, 2) == sign);
    CHECK(so3.c(0, 2, 1) == -sign);
    CHECK(validate_lie_data(so3.c).passed());
  }
  CHECK(validate_lie_data(LieData::abelian(4).c).passed());

  Tensor3 bad(2, 2, 2);
  bad(0, 0, 1) = 1.0;
  bad(0, 1, 0) = 1.0;
  CheckReport r = validate_lie_data(bad);
  CHECK_FALSE(r.passed());
  CHECK(r.residual("antisymmetry") == doctest::Approx(2.0));

  // Antisymmetric but violating Jacobi: c^k_ij = eps_ijl M_lk with M not symmetric.
  Tensor3 skew(3, 3, 3);
  MatD M = MatD::Identity(3, 3);
  M(0, 1) = 1.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          const double eps = (i == j || j == l || i == l) ? 0.0 : ((j - i + 3) % 3 == 1 ? 1.0 : -1.0);
          skew(k, i, j) += eps * M(l, k);
        }
  CheckReport s = validate_lie_data(skew);
  CHECK(s.residual("antisymmetry") == 0.0);
  CHECK(s.residual("jacobi") > 0.1);

  CHECK_THROWS_AS(validate_lie_data(Tensor3(2, 2, 3)), ShapeError);
}

TEST_CASE("SO(3) chart agrees with an axis-angle oracle") {
  SO3Chart chart;
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    VecD a = chart.random_element(rng, 2.0), b = chart.random_element(rng, 2.0);
    CHECK(a.norm() <= 2.0);
    MatD ra = rotation_oracle(a), rb = rotation_oracle(b);
    CHECK(max_abs_diff(so3::rotation<double>(a), ra) < 1e-14);
    VecD ab = chart.compose(a, b);
    CHECK(ab.norm() <= M_PI + 1e-12);
    CHECK(max_abs_diff(rotation_oracle(ab), ra * rb) < 1e-13);
    CHECK(max_abs_diff(chart.compose(a, chart.inverse(a)), VecD::Zero(3)) < 1e-14);
    // Exponential of the hat map
    CHECK(max_abs_diff(rotation_oracle(chart.exp(a)), rotation_oracle(a)) < 1e-14);
  }
}

TEST_CASE("SO(3) Jacobians: J_l = R J_r, inverses, small-angle series continuity") {
  for (double scale : {1e-9, 1e-3, 0.0999, 0.1001, 0.7, 2.5}) {
    VecD q = vec({0.3, -0.5, 0.8}).normalized() * scale;
    MatD jl = so3::left_jacobian<double>(q), jr = so3::right_jacobian<double>(q);
    CHECK(max_abs_diff(jl, so3::rotation<double>(q) * jr) < 1e-14);
    CHECK(max_abs_diff(so3::left_jacobian_inv<double>(q) * jl, MatD::Identity(3, 3)) < 1e-12);
    CHECK(max_abs_diff(so3::right_jacobian_inv<double>(q) * jr, MatD::Identity(3, 3)) < 1e-12);
  }
  // d/dt R(q + t dq) = R hat(J_r dq): right Jacobian via central differences.
  VecD q = vec({0.4, 0.2, -0.9}), dq = vec({0.1, -0.3, 0.2});
  const double h = 1e-6;
  MatD dR = (so3::rotation<double>(VecD(q + h * dq)) - so3::rotation<double>(VecD(q - h * dq))) / (2 * h);
  MatD expect = so3::rotation<double>(q) * so3::hat<double>(VecD(so3::right_jacobian<double>(q) * dq));
  CHECK(max_abs_diff(dR, expect) < 1e-9);
}

TEST_CASE("SO(2) chart wraps angles") {
  SO2Chart chart;
  CHECK(chart.compose(vec({3.0}), vec({1.0}))(0) == doctest::Approx(4.0 - 2 * M_PI));
  CHECK(chart.inverse(vec({0.5}))(0) == doctest::Approx(-0.5));
  CHECK(wrap_angle(M_PI + 0.25) == doctest::Approx(-M_PI + 0.25));
}

TEST_CASE("Killing consistency of the built-in models") {
  for (const auto& name : model_names()) {
    auto model = instantiate(name);
    CheckReport r = killing_consistency(*model, sample_full_points(*model, 30, 3));
    INFO(name);
    CHECK(r.passed());
    CHECK(r.residual("killing_bracket_P") < 1e-12);
    CHECK(r.residual("killing_bracket_V") < 1e-12);
  }
}

TEST_CASE("negated V-Killing fields break the bracket relation by about 2|c|") {
  So3CoupledParams p;
  p.killing_v_sign = -1.0;
  So3Coupled model(p);
  CheckReport r = killing_consistency(model, sample_full_points(model, 10, 3));
  CHECK_FALSE(r.passed());
  CHECK(r.residual("killing_bracket_P") < 1e-12);
  CHECK(r.residual("killing_bracket_V") > 0.1);
}

TEST_CASE("so(3) with the opposite sign convention fails against the model's fields") {
  // The model's brackets fix c = -eps; the textbook sign must be rejected.
  auto model = instantiate("so3_coupled");
  const Tensor3 wrong = LieData::so3(1.0).c;
  const auto pts = sample_full_points(*model, 5, 9);
  double worst = 0.0;
  for (const auto& [q, f] : pts) {
    const auto& m1 = model->maps<D1>();
    MatD k = model->maps<double>().killing_v(f);
    std::vector<MatD> dk(3);
    for (int a = 0; a < 3; ++a)
      dk[a] = tangent_part(Mat<D1>(m1.killing_v(seed_direction(f, VecD(k.col(a))))));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        VecD bracket = dk[a].col(b) - dk[b].col(a), expect = VecD::Zero(3);
        for (int g = 0; g < 3; ++g) expect += wrong(g, a, b) * k.col(g);
        worst = std::max(worst, (bracket - expect).norm());
      }
  }
  CHECK(worst > 0.1);
}
