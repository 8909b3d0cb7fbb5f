#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::random_flag;
using mpart::test::random_frame;
using mpart::test::random_unit;

TEST_CASE("fan residual blocks sum to zero") {
  std::mt19937_64 rng(21);
  Instance inst = random_instance(2, 3, 40, 2);
  Instance up = lift_instance(inst);
  std::vector<double> thirds(3, 1.0 / 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    ResidualVector r = fan_residual(up, random_frame(rng, 3), thirds);
    REQUIRE(r.blocks.size() == 2);
    std::size_t at = 0;
    for (int b : r.blocks) {
      double s = 0.0;
      for (int j = 0; j < b; ++j) s += r.components[at + j];
      at += b;
      CHECK(std::abs(s) <= 1e-12);
    }
  }
}

TEST_CASE("cone residual is odd under flipping the flag") {
  std::mt19937_64 rng(22);
  Instance up = lift_instance(random_instance(2, 3, 41, 3));
  for (int rep = 0; rep < 100; ++rep) {
    OrientedFlag f = random_flag(rng, 3, 2);
    ResidualVector a = cone_residual(up, f, Vector::Zero(3), 0.0);
    ResidualVector b = cone_residual(up, f.flipped(), Vector::Zero(3), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.components[i] == -b.components[i]);
  }
}

TEST_CASE("double-wedge residual is odd in each hyperplane") {
  std::mt19937_64 rng(23);
  Instance up = lift_instance(random_instance(2, 3, 40, 4));
  for (int rep = 0; rep < 100; ++rep) {
    UnitVector h1 = random_unit(rng, 3), h2 = random_unit(rng, 3);
    ResidualVector a = dw_residual(up.masses, h1, h2, 0.0);
    ResidualVector b = dw_residual(up.masses, -h1, h2, 0.0);
    ResidualVector c = dw_residual(up.masses, -h1, -h2, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.components[i] == -b.components[i]);
      CHECK(a.components[i] == c.components[i]);
    }
  }
}

TEST_CASE("cyclic shift of residual blocks") {
  ResidualVector v{{1, 2, 3, 4, 5, 6}, {3, 3}};
  ResidualVector s = zk_shift(v, 1);
  CHECK(s.components == std::vector<double>{3, 1, 2, 6, 4, 5});
  CHECK(zk_shift(s, 2).components == v.components);
  CHECK(v.inf_norm() == 6.0);
}

TEST_CASE("fan residual is equivariant under rotating to the next cut") {
  std::mt19937_64 rng(24);
  Instance up = lift_instance(random_instance(2, 2, 37, 5));
  int passed = 0;
  for (int rep = 0; rep < 100; ++rep) {
    EquivarianceReport r = check_equivariance(up, random_frame(rng, 3), 3, 1e-8);
    CHECK(r.max_deviation <= 1e-8);
    passed += r.pass;
  }
  CHECK(passed == 100);
}

TEST_CASE("feasibility table") {
  CHECK(is_odd_prime(3));
  CHECK_FALSE(is_odd_prime(2));
  CHECK_FALSE(is_odd_prime(9));
  CHECK(is_product_of_distinct_odd_primes(15));
  CHECK_FALSE(is_product_of_distinct_odd_primes(9));
  CHECK(feasibility(2, 2, 2, Variant::Cone).ok);
  CHECK(feasibility(3, 3, 3, Variant::Cone).ok);
  CHECK_FALSE(feasibility(2, 3, 2, Variant::Cone).ok);
  CHECK_FALSE(feasibility(2, 2, 2, Variant::FanOrigin).ok);
  CHECK(feasibility(3, 3, 1, Variant::FanGeneral).ok);
  CHECK_FALSE(feasibility(2, 3, 1, Variant::FanOrigin).ok);
  auto bad = feasibility(2, 3, 1, Variant::FanOrigin);
  CHECK(bad.explanation.find("<") != std::string::npos);
  CHECK(parse_variant("cone") == Variant::Cone);
  CHECK_FALSE(parse_variant("wedge").has_value());
  for (Variant v : {Variant::FanOrigin, Variant::FanGeneral, Variant::Cone, Variant::DwShared, Variant::Stripes})
    CHECK(parse_variant(to_string(v)) == v);
}
