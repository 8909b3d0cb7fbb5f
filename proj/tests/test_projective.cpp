#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::point_mass;
using mpart::test::quick_config;

TEST_CASE("cut verification counts strict sides") {
  std::vector<MassDistribution> sets{point_mass("a", {{-1, 0}, {1, 0}}), point_mass("b", {{0, 0}, {2, 1}})};
  OrientedHyperplane cut{UnitVector(Vector::Unit(2, 0)), 0.0};
  auto counts = verify_cuts(sets, cut);
  CHECK(counts[0].bisected());
  CHECK(counts[1].on == 1);
  CHECK_FALSE(counts[1].bisected());
}

TEST_CASE("verify_partition on a hand example") {
  std::vector<MassDistribution> ms{point_mass("a", {{-1, 0}, {1, 0}, {2, 0}, {-2, 0}})};
  Halfspace right{{UnitVector(Vector::Unit(2, 0)), 0.0}};
  std::vector<Region> regions{right, complement(right)};
  std::vector<double> halves{0.5, 0.5};
  PartitionReport r = verify_partition(ms, regions, halves, 1e-12, {BoundaryRule::Half, 0.0});
  CHECK(r.pass);
  CHECK(r.fractions[0][0] == doctest::Approx(0.5));
  std::vector<double> skew{0.25, 0.75};
  CHECK_FALSE(verify_partition(ms, regions, skew, 1e-3, {BoundaryRule::Half, 0.0}).pass);
}

TEST_CASE("planted instances have the advertised shape") {
  Instance inst = make_planted_hs_instance(2, 4, 3);
  CHECK(inst.families.size() == 2);
  CHECK(inst.mass_count() == 6);
  Matrix all(2, 24);
  for (int i = 0; i < 6; ++i) all.middleCols(4 * i, 4) = inst.masses[i].atoms;
  CHECK(in_general_position(all, 1e-9));
}

TEST_CASE("Ham-Sandwich after a projective transformation on a planted instance") {
  Instance inst = make_planted_hs_instance(2, 4, 5);
  HsAfterTransformResult r = hs_after_transform(inst, quick_config());
  REQUIRE(r.status == Status::Found);
  REQUIRE(r.cuts.size() == 2);
  for (std::size_t f = 0; f < 2; ++f) {
    if (!r.exact_flags[f]) {
      CHECK(r.per_family_residuals[f] <= 1e-4);
      continue;
    }
    std::vector<MassDistribution> sets;
    for (int i : inst.families[f]) {
      MassDistribution img = inst.masses[i];
      for (Eigen::Index j = 0; j < img.size(); ++j) img.atoms.col(j) = apply_projective(r.transform, Vector(img.atoms.col(j)));
      sets.push_back(img);
    }
    for (const auto& c : verify_cuts(sets, r.cuts[f])) CHECK(c.bisected());
  }
}

TEST_CASE("Ham-Sandwich rejects degenerate point sets") {
  Instance inst = make_planted_hs_instance(2, 4, 6);
  inst.masses[1].atoms.col(0) = inst.masses[0].atoms.col(0);
  CHECK_THROWS_AS(hs_after_transform(inst, quick_config()), Error);
}

TEST_CASE("stripes cut two masses into thirds") {
  Instance inst = random_instance(2, 2, 50, 9);
  StripesResult r = stripes(inst, 3, quick_config());
  REQUIRE(r.status == Status::Found);
  CHECK(r.slabs.k() == 3);
  CHECK(r.normal_deviation <= 1e-9);
  for (const auto& row : r.fractions)
    for (double f : row) CHECK(f == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
  for (std::size_t j = 1; j < r.slabs.offsets.size(); ++j) CHECK(r.slabs.offsets[j] > r.slabs.offsets[j - 1]);
}

TEST_CASE("stripes outside the theorem are infeasible") {
  Instance inst = random_instance(2, 3, 20, 10);
  CHECK(stripes(inst, 2, quick_config()).status == Status::Infeasible);
}
