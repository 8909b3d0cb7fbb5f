#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::quick_config;

TEST_CASE("wedge bisecting three planar masses") {
  Instance inst = random_instance(2, 3, 50, 1);
  SolveReport r = solve_cone(inst, 2, quick_config());
  REQUIRE(r.status == Status::Found);
  CHECK(r.residual_smoothed <= 1e-6);
  PartitionReport v = verify_report(inst, r, 2e-6, inst.masses[0].smoothing_radius);
  CHECK(v.pass);
  const auto& sol = std::get<ConeSolution>(r.solution);
  REQUIRE(sol.decoded.has_value());
}

TEST_CASE("cone requests outside the theorem are infeasible") {
  Instance inst = random_instance(2, 3, 20, 2);
  CHECK(solve_cone(inst, 1).status == Status::Infeasible);
  CHECK(solve_cone(inst, 3).status == Status::Infeasible);
}

TEST_CASE("the simplex counterexample is not bisected") {
  SolveReport r = solve_cone(make_simplex_counterexample(2), 2, quick_config());
  CHECK(r.status == Status::NotFound);
  CHECK(r.residual_smoothed >= 0.1);
}

TEST_CASE("origin fans report the failed inequality") {
  Instance inst = random_instance(2, 2, 30, 3);
  std::vector<double> thirds(3, 1.0 / 3.0);
  SolveReport r = solve_fan(inst, thirds, quick_config(), LiftMode::Never);
  CHECK(r.status == Status::Infeasible);
  CHECK(r.message.find("<") != std::string::npos);
}

TEST_CASE("lifted three-fan equipartitions two masses") {
  Instance inst = random_instance(2, 2, 50, 4);
  std::vector<double> thirds(3, 1.0 / 3.0);
  SolveReport r = solve_fan(inst, thirds, quick_config());
  REQUIRE(r.status == Status::Found);
  CHECK(r.residual_smoothed <= 1e-6);
  CHECK(verify_report(inst, r, 2e-6, inst.masses[0].smoothing_radius).pass);
  for (const auto& row : r.fractions)
    for (double f : row) CHECK(f == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("fan targets must sum to one") {
  Instance inst = random_instance(2, 2, 20, 5);
  std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(solve_fan(inst, bad), Error);
}

TEST_CASE("double wedge bisects three planar masses") {
  Instance inst = random_instance(2, 3, 50, 6);
  SolveReport r = solve_double_wedge(inst, quick_config());
  REQUIRE(r.status == Status::Found);
  CHECK(r.residual_smoothed <= 1e-6);
  CHECK(verify_report(inst, r, 2e-6, inst.masses[0].smoothing_radius).pass);
}

TEST_CASE("shared h1 double wedges") {
  Instance inst = random_instance(2, 6, 30, 7);
  inst.families = {{0, 1, 2}, {3, 4, 5}};
  SolveReport r = solve_shared_h1(inst, quick_config());
  CHECK(r.status == Status::Found);
  const auto& sol = std::get<SharedH1Solution>(r.solution);
  CHECK(sol.h2.size() == 2);
  for (double res : sol.family_residuals) CHECK(res <= 1e-6);
}

TEST_CASE("solver runs are deterministic") {
  Instance inst = random_instance(2, 3, 30, 8);
  SolveReport a = solve_cone(inst, 2, quick_config(3)), b = solve_cone(inst, 2, quick_config(3));
  CHECK(a.residual_smoothed == b.residual_smoothed);
  CHECK(a.evaluations == b.evaluations);
  CHECK(to_string(to_json(a, "cone")) == to_string(to_json(b, "cone")));
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.multistarts = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.tolerance = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("apex on a line: hypotheses and end degrees") {
  Instance planar = random_instance(2, 3, 20, 3);
  const Line planar_line{Vector::Zero(2), UnitVector(Vector::Unit(2, 1))};
  CHECK(solve_cone_apex_on_line(planar, planar_line).status == Status::Infeasible);

  Instance inst = random_instance(3, 4, 31, 1);
  std::mt19937_64 rng(10);
  for (auto& mu : inst.masses)
    for (double& w : mu.weights) w = 0.5 + uniform_draw(rng);
  const Line g{Vector::Constant(3, 0.5), UnitVector(Vector::Unit(3, 2))};
  const double end = apex_line_end_parameter(inst, g);
  CHECK(end == doctest::Approx(100.0 * std::max(1.0, instance_radius(inst) + std::sqrt(0.75))));
  const int lo = apex_line_degree(inst, g, -end, 1);
  const int hi = apex_line_degree(inst, g, end, 1);
  CHECK(lo % 2 != 0);
  CHECK(lo == -hi);
}
