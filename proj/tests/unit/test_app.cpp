#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lpr/app.hpp"
#include "lpr/config.hpp"
#include "lpr/errors.hpp"
#include "lpr/integrate.hpp"
#include "lpr/trajectory.hpp"

using namespace lpr;
using lpr::testing::vec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "lpr_test_app";
  fs::create_directories(dir);
  return dir / name;
}

// Pendulum: theta'' = -sin(theta), used as the nonlinear order test problem.
VecD pendulum(double, const VecD& y) { return vec({y(1), -std::sin(y(0))}); }

double rk4_endpoint(double dt) {
  IntegrateOptions o;
  o.dt = dt;
  o.t_final = 2.0;
  return integrate(pendulum, vec({1.0, 0.0}), o).states.back()(0);
}

}  // namespace

TEST_CASE("RK4: y' = y to t = 1") {
  IntegrateOptions o;
  o.dt = 1e-3;
  o.t_final = 1.0;
  OdeSolution s = integrate([](double, const VecD& y) { return y; }, vec({1.0}), o);
  CHECK(s.times.size() == 1001);
  CHECK(s.times.back() == 1.0);
  CHECK(std::abs(s.states.back()(0) - std::exp(1.0)) < 1e-9);
}

TEST_CASE("RK4 Richardson ratio on the pendulum is 16") {
  const double a = rk4_endpoint(0.04), b = rk4_endpoint(0.02), c = rk4_endpoint(0.01);
  const double ratio = (a - b) / (b - c);
  CHECK(ratio == doctest::Approx(16.0).epsilon(1.0 / 16.0));
}

TEST_CASE("RKF45 with tol 1e-10 matches RK4 with dt 1e-4") {
  IntegrateOptions o;
  o.dt = 1e-4;
  o.t_final = 3.0;
  OdeSolution ref = integrate(pendulum, vec({1.2, 0.3}), o);
  o.method = Method::rkf45;
  o.tol = 1e-10;
  o.dt = 0.1;
  OdeSolution adapt = integrate(pendulum, vec({1.2, 0.3}), o);
  CHECK(adapt.times.size() == 31);
  CHECK((adapt.states.back() - ref.states.back()).cwiseAbs().maxCoeff() < 1e-8);
  // t = 1 on both grids.
  CHECK((adapt.states[10] - ref.states[10000]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("output grid ends exactly at t_final") {
  IntegrateOptions o;
  o.dt = 0.3;
  o.t_final = 1.0;
  OdeSolution s = integrate([](double, const VecD& y) { return -y; }, vec({1.0}), o);
  CHECK(s.times == std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0});
  for (std::size_t k = 1; k < s.times.size(); ++k) CHECK(s.times[k] > s.times[k - 1]);
}

TEST_CASE("integrator errors") {
  IntegrateOptions o;
  o.dt = 0.0;
  CHECK_THROWS_AS(integrate(pendulum, vec({0.0, 0.0}), o), ParameterError);
  o.dt = 0.1;
  o.t_final = -1.0;
  CHECK_THROWS_AS(integrate(pendulum, vec({0.0, 0.0}), o), ParameterError);
  CHECK_THROWS_AS(parse_method("euler"), ParameterError);

  SUBCASE("step-size underflow is a stiffness error") {
    IntegrateOptions s;
    s.method = Method::rkf45;
    s.tol = 1e-12;
    s.dt = 0.1;
    s.t_final = 1.0;
    CHECK_THROWS_AS(integrate([](double, const VecD& y) { return VecD(-1e14 * y); }, vec({1.0}), s), StiffnessError);
  }
  SUBCASE("domain error mid-run truncates") {
    IntegrateOptions s;
    s.dt = 0.01;
    s.t_final = 1.0;
    OdeSolution sol = integrate(
        [](double t, const VecD& y) -> VecD {
          if (t > 0.5) throw DomainError("left the chart");
          return y;
        },
        vec({1.0}), s);
    CHECK(sol.truncated());
    CHECK(sol.error == "left the chart");
    CHECK(sol.times.back() <= 0.5);
    CHECK(sol.times.back() > 0.48);
  }
}

TEST_CASE("trajectory serialisation round-trips bitwise") {
  auto m = instantiate("so3_coupled");
  IntegrateOptions o;
  o.dt = 0.01;
  o.t_final = 0.2;
  Trajectory t = simulate_reduced(*m, ReducedState::from_vector(m->default_initial_state(), m->dims()), o);
  t.states[3](4) = 1.0 / 3.0;
  t.states[4](0) = -5e-324;
  t.energies[2] = 1e300;

  std::ostringstream csv;
  write_csv(csv, t);
  CHECK(csv.str().substr(0, csv.str().find('\n')) == "t,x1,x2,f1,f2,f3,xdot1,xdot2,fdot1,fdot2,fdot3,p1,p2,p3,E");
  std::istringstream in(csv.str());
  Trajectory back = read_csv(in);
  CHECK(back.times == t.times);
  CHECK(back.energies == t.energies);
  for (std::size_t k = 0; k < t.states.size(); ++k) CHECK((back.states[k].array() == t.states[k].array()).all());

  Trajectory jback = trajectory_from_json(nlohmann::json::parse(to_json(t).dump()));
  CHECK(jback.times == t.times);
  CHECK(jback.energies == t.energies);
  for (std::size_t k = 0; k < t.states.size(); ++k) CHECK((jback.states[k].array() == t.states[k].array()).all());
  CHECK(to_json(t)["p3"].size() == t.times.size());

  t.error = "left the chart";
  std::ostringstream csv2;
  write_csv(csv2, t);
  std::istringstream in2(csv2.str());
  CHECK(read_csv(in2).error == "left the chart");
  CHECK(trajectory_from_json(to_json(t)).error == "left the chart");
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-3) == "0.001");
  CHECK(format_double(2.0) == "2");
  const double x = 0.30000000000000004;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("malformed trajectory input") {
  std::istringstream bad_header("t,x1,q1,E\n0,1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad_header), ConfigError);
  std::istringstream bad_number("t,x1,f1,f2,xdot1,fdot1,fdot2,p1,E\n0,1,2,3,4,5,6,abc,8\n");
  CHECK_THROWS_AS(read_csv(bad_number), ConfigError);
  std::istringstream ragged("t,x1,f1,f2,xdot1,fdot1,fdot2,p1,E\n0,1,2\n");
  CHECK_THROWS_AS(read_csv(ragged), ConfigError);
}

TEST_CASE("config parsing") {
  const std::string text = R"(
model = "so3_coupled"
dt = 0.002
t_final = 3
integrator = "rkf45"
tol = 1e-9
seed = 7
samples = 25
format = "json"

[params]
lambda = 0.2
twist = 0.1

[initial]
x = [0.1, 0.2]
p = [0, 0, 1]
)";
  SimConfig c = parse_config_string(text);
  CHECK(c.model == "so3_coupled");
  CHECK(c.dt == 0.002);
  CHECK(c.t_final == 3.0);
  CHECK(c.integrator == Method::rkf45);
  CHECK(c.seed == 7);
  CHECK(c.samples == 25);
  CHECK(c.params.at("lambda") == 0.2);
  CHECK_NOTHROW(c.validate());
  auto m = instantiate(c.model, c.params);
  ReducedState s = initial_state(c, *m);
  CHECK(s.x == vec({0.1, 0.2}));
  CHECK(s.p == vec({0.0, 0.0, 1.0}));
  CHECK(s.f == ReducedState::from_vector(m->default_initial_state(), m->dims()).f);

  CHECK_THROWS_AS(parse_config_string("dt = 0.1\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("dt = \"fast\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("dt = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("integrator = \"euler\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[initial]\nq = [1]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("dt = -0.1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config_string("tol = 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config_string("model = \"nope\"\n").validate(), ConfigError);
  SimConfig wrong = parse_config_string("[initial]\nx = [1, 2, 3]\n");
  CHECK_THROWS_AS(initial_state(wrong, *instantiate("abelian_disk")), ConfigError);
}

TEST_CASE("run_simulate: abelian p constant, determinism, equilibrium") {
  SimConfig c;
  c.model = "abelian_disk";
  c.t_final = 2.0;
  c.output = scratch("abelian.csv").string();
  CHECK(run_simulate(c) == kExitPass);
  std::ifstream in(c.output);
  Trajectory t = read_csv(in);
  for (const auto& s : t.states) CHECK(s.tail(1)(0) == 0.7);

  std::string first = slurp(c.output);
  CHECK(run_simulate(c) == kExitPass);
  CHECK(slurp(c.output) == first);

  SimConfig e;
  e.model = "so3_coupled";
  e.t_final = 5.0;
  e.initial.x = VecD::Zero(2);
  e.initial.f = VecD::Zero(3);
  e.initial.xdot = VecD::Zero(2);
  e.initial.fdot = VecD::Zero(3);
  e.initial.p = VecD::Zero(3);
  e.format = "json";
  e.output = scratch("eq.json").string();
  CHECK(run_simulate(e) == kExitPass);
  Trajectory eq = trajectory_from_json(nlohmann::json::parse(slurp(e.output)));
  double worst = 0.0;
  for (const auto& s : eq.states) worst = std::max(worst, s.cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-10);
  CHECK(eq.metadata["config"]["model"] == "so3_coupled");
}

TEST_CASE("run_simulate: leaving the domain truncates with exit code 3") {
  SimConfig c;
  c.model = "abelian_disk";
  c.initial.x = vec({0.05});
  c.initial.xdot = vec({-2.0});
  c.initial.p = vec({0.0});
  c.initial.f = vec({0.0, 0.0});
  c.initial.fdot = vec({0.0, 0.0});
  c.t_final = 1.0;
  c.output = scratch("trunc.csv").string();
  CHECK(run_simulate(c) == kExitRuntime);
  std::ifstream in(c.output);
  Trajectory t = read_csv(in);
  CHECK(t.truncated());
  CHECK(t.times.back() < 0.05);
}

TEST_CASE("run_check and run_compare exit codes") {
  SimConfig c;
  c.samples = 20;
  c.output = scratch("check.json").string();
  for (const auto& name : model_names()) {
    c.model = name;
    CHECK(run_check(c) == kExitPass);
    auto j = nlohmann::json::parse(slurp(c.output));
    CHECK(j["passed"] == true);
  }
  c.inject_fault = "inv_hv";
  CHECK(run_check(c) == kExitVerification);

  SimConfig k;
  k.t_final = 1.0;
  k.output = scratch("compare.json").string();
  for (const auto& name : model_names()) {
    k.model = name;
    k.inject_fault.clear();
    CHECK(run_compare(k) == kExitPass);
    k.inject_fault = "flip_p";
    CHECK(run_compare(k) == kExitVerification);
    auto j = nlohmann::json::parse(slurp(k.output));
    CHECK(j["max_df"].get<double>() > 1e-2);
  }
}

TEST_CASE("exit codes for escaping exceptions") {
  CHECK(exit_code_for(ConfigError("x")) == kExitUsage);
  CHECK(exit_code_for(ParameterError("x")) == kExitUsage);
  CHECK(exit_code_for(StiffnessError("x")) == kExitRuntime);
  CHECK(exit_code_for(DomainError("x")) == kExitRuntime);
}
