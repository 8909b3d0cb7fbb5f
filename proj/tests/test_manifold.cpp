#include "doctest.h"
#include "support.hpp"

using namespace mpart;

TEST_CASE("chart dimensions") {
  CHECK(ManifoldSpec{{RotationFactor::sphere(3)}, {}}.dof() == 2);
  CHECK(ManifoldSpec{{RotationFactor::stiefel_pair(3)}, {}}.dof() == 3);
  CHECK(ManifoldSpec{{RotationFactor::flag(3, 2)}, {}}.dof() == 3);
  CHECK(ManifoldSpec{{RotationFactor::sphere(3), RotationFactor::sphere(3)}, {{0.0, 1.0}}}.dof() == 5);
}

TEST_CASE("random points are rotations and deterministic") {
  ManifoldSpec spec{{RotationFactor::stiefel_pair(4)}, {{-1.0, 2.0}}};
  std::mt19937_64 a(5), b(5);
  ManifoldPoint p = random_point(spec, a), q = random_point(spec, b);
  CHECK(p.rotations[0] == q.rotations[0]);
  const Matrix& r = p.rotations[0];
  CHECK((r.transpose() * r - Matrix::Identity(4, 4)).norm() <= 1e-12);
  CHECK(r.determinant() == doctest::Approx(1.0));
  CHECK(p.scalars[0] >= -1.0);
  CHECK(p.scalars[0] <= 2.0);
}

TEST_CASE("retraction at zero is the identity") {
  ManifoldSpec spec{{RotationFactor::flag(4, 3)}, {{0.0, 1.0}}};
  std::mt19937_64 rng(6);
  ManifoldPoint p = random_point(spec, rng);
  ManifoldPoint q = retract(spec, p, Vector::Zero(spec.dof()));
  CHECK((q.rotations[0] - p.rotations[0]).norm() <= 1e-14);
  CHECK(q.scalars[0] == p.scalars[0]);
}

TEST_CASE("Nelder-Mead minimizes a quadratic") {
  long evals = 0;
  auto f = [](const Vector& x) { return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2); };
  Vector x = nelder_mead(f, Vector::Zero(2), 0.5, 2000, 1e-16, evals);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(x[1] == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(evals > 0);
}

TEST_CASE("zero search finds a point on the sphere") {
  ManifoldSpec spec{{RotationFactor::sphere(3)}, {}};
  Vector target(3);
  target << 0.6, 0.0, 0.8;
  ResidualFn fn = [&](const ManifoldPoint& p, double) -> std::optional<Vector> {
    Vector r = p.rotations[0].col(0) - target;
    return r.head(2);
  };
  SearchSettings s;
  s.multistarts = 4;
  s.samples = 64;
  SearchResult r = search_zero(spec, fn, s);
  CHECK(r.found);
  CHECK(r.inf_norm <= 1e-6);
  SearchResult again = search_zero(spec, fn, s);
  CHECK(again.inf_norm == r.inf_norm);
  CHECK(again.evaluations == r.evaluations);
}
