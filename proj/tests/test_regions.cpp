#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::point_mass;
using mpart::test::random_frame;
using mpart::test::random_flag;
using mpart::test::random_vector;

namespace {

KFan quarter_fan() {
  return KFan{Frame2::standard(2), Vector::Zero(2), {0.0, kPi / 2, kPi}};
}

}  // namespace

TEST_CASE("fan sector index on a hand example") {
  KFan fan = quarter_fan();
  Vector p(2);
  p << 1, 1;
  CHECK(fan_sector_index(fan, p) == 1);
  p << -1, 1;
  CHECK(fan_sector_index(fan, p) == 2);
  p << 0, -1;
  CHECK(fan_sector_index(fan, p) == 3);
  p << 1, 0;
  CHECK_FALSE(fan_sector_index(fan, p).has_value());
  CHECK_FALSE(fan_sector_index(fan, Vector::Zero(2)).has_value());
}

TEST_CASE("fan validation") {
  KFan bad{Frame2::standard(2), Vector::Zero(2), {1.0, 0.5}};
  CHECK_THROWS_AS(validate(bad), Error);
  KFan wide{Frame2::standard(2), Vector::Zero(2), {0.0, 7.0}};
  CHECK_THROWS_AS(validate(wide), Error);
  CHECK_NOTHROW(validate(quarter_fan()));
}

TEST_CASE("cone containment on a hand example") {
  KCone cone{Matrix::Identity(2, 2), Vector::Zero(2), UnitVector(Vector::Unit(2, 0)), kPi / 4};
  Vector p(2);
  p << 1, 0.5;
  CHECK(cone_contains(cone, p) == Side::Inside);
  p << 0.5, 1;
  CHECK(cone_contains(cone, p) == Side::Outside);
  p << 1, 1;
  CHECK(cone_contains(cone, p) == Side::Boundary);
  KCone comp = complement(cone);
  p << 0.5, 1;
  CHECK(cone_contains(comp, p) == Side::Inside);
}

TEST_CASE("double wedge containment") {
  DoubleWedge dw{{UnitVector(Vector::Unit(2, 0)), 0.0}, {UnitVector(Vector::Unit(2, 1)), 0.0}};
  Vector p(2);
  p << 1, 1;
  CHECK(double_wedge_contains(dw, p) == Side::Inside);
  p << -1, -1;
  CHECK(double_wedge_contains(dw, p) == Side::Inside);
  p << 1, -1;
  CHECK(double_wedge_contains(dw, p) == Side::Outside);
  CHECK(double_wedge_contains(complement(dw), p) == Side::Inside);
}

TEST_CASE("equipartition fan hits its targets") {
  std::mt19937_64 rng(11);
  Instance inst = random_instance(2, 1, 101, 3);
  const auto& mu = inst.masses[0];
  std::vector<double> targets{0.2, 0.3, 0.5};
  for (int rep = 0; rep < 20; ++rep) {
    Vector apex = 0.3 * random_vector(rng, 2);
    KFan fan = build_equipartition_fan(Frame2::standard(2), apex, mu, targets, uniform_draw(rng) * kTwoPi);
    CHECK_NOTHROW(validate(fan));
    auto m = fan_sector_measures(fan, mu, mu.smoothing_radius);
    for (int j = 0; j < 3; ++j) CHECK(m[j] / total_mass(mu) == doctest::Approx(targets[j]).epsilon(1e-9));
  }
}

TEST_CASE("raw equipartition on atoms uses plateau midpoints") {
  MassDistribution mu = point_mass("sq", {{1, 0.1}, {-0.1, 1}, {-1, -0.1}, {0.1, -1}});
  std::vector<double> half{0.5, 0.5};
  KFan fan = build_equipartition_fan(Frame2::standard(2), Vector::Zero(2), mu, half, 0.0, 0.0);
  auto m = fan_sector_measures(fan, mu, 0.0);
  CHECK(m[0] == doctest::Approx(2.0));
  CHECK(m[1] == doctest::Approx(2.0));
}

TEST_CASE("bisecting cones and their flips are complements") {
  std::mt19937_64 rng(12);
  Instance inst = lift_instance(random_instance(2, 3, 40, 5));
  MassDistribution all = combine(inst.masses);
  for (int rep = 0; rep < 20; ++rep) {
    OrientedFlag flag = random_flag(rng, 3, 2);
    KCone c = build_bisecting_cone(flag, Vector::Zero(3), all);
    KCone f = build_bisecting_cone(flag.flipped(), Vector::Zero(3), all);
    CHECK(c.half_angle + f.half_angle == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(cone_imbalance(c, all, all.smoothing_radius) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("double-wedge fans split the reference evenly") {
  Instance inst = random_instance(2, 1, 99, 6);
  const auto& mu = inst.masses[0];
  DwFan fan = build_dw_fan(Frame2::standard(2), Vector::Zero(2), mu, 3, 0.4);
  CHECK_NOTHROW(validate(fan));
  auto m = dw_pair_measures(fan, mu, mu.smoothing_radius);
  for (double v : m) CHECK(v / total_mass(mu) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("measure additivity over complements") {
  std::mt19937_64 rng(13);
  Instance inst = random_instance(2, 1, 80, 7);
  const auto& mu = inst.masses[0];
  const double total = total_mass(mu);
  for (int rep = 0; rep < 50; ++rep) {
    Halfspace h{{UnitVector(random_vector(rng, 2)), 0.3 * normal_draw(rng)}};
    DoubleWedge dw{{UnitVector(random_vector(rng, 2)), 0.2 * normal_draw(rng)},
                   {UnitVector(random_vector(rng, 2)), 0.2 * normal_draw(rng)}};
    KCone cone{Matrix::Identity(2, 2), 0.2 * random_vector(rng, 2), UnitVector(random_vector(rng, 2)),
               uniform_draw(rng) * kPi};
    for (const Region& r : {Region{h}, Region{dw}, Region{cone}}) {
      for (double eps : {0.0, 1e-3, 0.05}) {
        const double a = region_measure(mu, r, {BoundaryRule::Half, eps});
        const double b = region_measure(mu, complement(r), {BoundaryRule::Half, eps});
        CHECK(std::abs(a + b - total) <= 1e-12 * total);
      }
    }
  }
}

TEST_CASE("smoothed membership is within [0, 1] and tends to the raw value") {
  std::mt19937_64 rng(14);
  KFan fan = quarter_fan();
  for (int rep = 0; rep < 200; ++rep) {
    Vector p = random_vector(rng, 2);
    const double s = membership(FanSector{fan, 0}, p, 0.01, BoundaryRule::Half);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    const double raw = membership(FanSector{fan, 0}, p, 0.0, BoundaryRule::Half);
    const double far = membership(FanSector{fan, 0}, p, 1e-9, BoundaryRule::Half);
    CHECK(far == doctest::Approx(raw));
  }
}

TEST_CASE("fan sectors partition every atom") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 30; ++rep) {
    Frame2 fr = random_frame(rng, 3);
    KFan fan{fr, 0.1 * random_vector(rng, 3), {0.3, 1.9, 4.0, 5.5}};
    Vector p = random_vector(rng, 3);
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) sum += membership(FanSector{fan, j}, p, 0.02, BoundaryRule::Half);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lifted regions evaluate on lifted atoms") {
  Halfspace up{{UnitVector(Vector::Unit(3, 2)), 0.0}};
  Vector p = Vector::Zero(2);
  CHECK(membership(Lifted{up}, p, 0.0, BoundaryRule::Half) == doctest::Approx(1.0));
}
