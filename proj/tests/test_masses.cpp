#include "doctest.h"
#include "support.hpp"

#include <filesystem>

using namespace mpart;
using mpart::test::point_mass;

TEST_CASE("mass validation") {
  Matrix a = Matrix::Ones(2, 3);
  CHECK_THROWS_AS(MassDistribution::make("w", a, Vector::Ones(2)), Error);
  Vector w = Vector::Ones(3);
  w[1] = 0.0;
  CHECK_THROWS_AS(MassDistribution::make("w", a, w), Error);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(MassDistribution::unit_weights("n", a), Error);
  CHECK_THROWS_AS(MassDistribution::unit_weights("r", Matrix::Ones(2, 3), -1.0), Error);
}

TEST_CASE("instance validation catches mixed dimensions") {
  Instance inst{2, {MassDistribution::unit_weights("a", Matrix::Ones(2, 3)),
                    MassDistribution::unit_weights("b", Matrix::Ones(3, 3))}, {}};
  CHECK_THROWS_AS(inst.validate(), Error);
}

TEST_CASE("total mass and halfspace measure on a hand example") {
  MassDistribution mu = point_mass("m", {{-1, 0}, {1, 0}, {2, 0}, {0, 0}});
  CHECK(total_mass(mu) == doctest::Approx(4.0));
  Halfspace h{OrientedHyperplane{UnitVector(Vector::Unit(2, 0)), 0.0}};
  CHECK(region_measure(mu, h) == doctest::Approx(2.5));  // the atom on the line counts half
  CHECK_THROWS_AS(region_measure(mu, h, {BoundaryRule::Strict, 0.0}), Error);
}

TEST_CASE("combine concatenates atoms") {
  std::vector<MassDistribution> ms{point_mass("a", {{0, 0}}), point_mass("b", {{1, 1}, {2, 2}})};
  MassDistribution all = combine(ms);
  CHECK(all.size() == 3);
  CHECK(total_mass(all) == doctest::Approx(3.0));
}

TEST_CASE("lifted masses sit on the upper hemisphere") {
  Instance inst = random_instance(2, 2, 20, 4);
  Instance up = lift_instance(inst);
  CHECK(up.dimension == 3);
  for (const auto& mu : up.masses) {
    CHECK((mu.atoms.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(mu.atoms.row(2).minCoeff() > 0.0);
  }
}

TEST_CASE("random instances are reproducible and in general position") {
  Instance a = random_instance(2, 3, 30, 17), b = random_instance(2, 3, 30, 17);
  CHECK(dump_instance(a) == dump_instance(b));
  Matrix all(2, 90);
  for (int i = 0; i < 3; ++i) all.middleCols(30 * i, 30) = a.masses[i].atoms;
  CHECK(in_general_position(all, 1e-9));
  CHECK(dump_instance(random_instance(2, 3, 30, 18)) != dump_instance(a));
}

TEST_CASE("general position oracle") {
  Matrix pts(2, 3);
  pts << 0, 1, 2, 0, 1, 2;
  CHECK_FALSE(in_general_position(pts, 1e-9));
  pts(1, 2) = 3;
  CHECK(in_general_position(pts, 1e-9));
}

TEST_CASE("simplex counterexample layout") {
  Instance inst = make_simplex_counterexample(2);
  CHECK(inst.mass_count() == 4);
  CHECK(inst.masses.back().atoms.rowwise().mean().isApprox(Vector::Constant(2, 1.0 / 3.0), 1e-2));
}

TEST_CASE("tight projective instance has families") {
  Instance inst = make_projective_tight_instance(2, 4, 1);
  CHECK(inst.families.size() == 3);
  CHECK(inst.mass_count() == 9);
}

TEST_CASE("instance files round trip") {
  Instance inst = random_instance(2, 2, 10, 2);
  inst.families = {{0, 1}};
  auto path = std::filesystem::temp_directory_path() / "mpart_test_instance.json";
  save_instance(path, inst);
  Instance back = load_instance(path);
  CHECK(dump_instance(back) == dump_instance(inst));
  for (int i = 0; i < 2; ++i) CHECK(back.masses[i].atoms == inst.masses[i].atoms);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_instance(path), Error);
}

TEST_CASE("malformed instance files are rejected") {
  auto path = std::filesystem::temp_directory_path() / "mpart_bad_instance.json";
  write_text(path, "{\"dimension\": 2, \"masses\": [{\"name\": \"a\"}]}");
  CHECK_THROWS_AS(load_instance(path), Error);
  write_text(path, "not json");
  CHECK_THROWS_AS(load_instance(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("instance radius") {
  Instance inst{2, {point_mass("a", {{3, 4}, {0, 1}})}, {}};
  CHECK(instance_radius(inst) == doctest::Approx(5.0));
}
