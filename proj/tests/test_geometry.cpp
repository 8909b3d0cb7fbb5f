#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::random_vector;

TEST_CASE("unit vectors normalize and reject zero") {
  UnitVector u(Vector::Constant(4, 2.0));
  CHECK(u.vec().norm() == doctest::Approx(1.0));
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(UnitVector(Vector::Zero(3)), Error);
}

TEST_CASE("gnomonic lift of known points") {
  Vector origin = Vector::Zero(2);
  Vector top = gnomonic_lift(origin);
  CHECK(top[2] == doctest::Approx(1.0));
  Vector q(2);
  q << 1.0, 0.0;
  Vector p = gnomonic_lift(q);
  CHECK(p[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(p[2] == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("gnomonic projection rejects the equator") {
  Vector p(3);
  p << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(gnomonic_project(p), Error);
}

TEST_CASE("gnomonic round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Vector q = 5.0 * random_vector(rng, 3);
    CHECK((gnomonic_project(gnomonic_lift(q)) - q).norm() <= 1e-12 * (1.0 + q.norm()));
  }
}

TEST_CASE("hyperplane lift has normal (n, -c)") {
  OrientedHyperplane h{UnitVector(Vector::Unit(2, 0)), 1.0};
  UnitVector n = lift_hyperplane(h);
  CHECK(n[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(n[1] == doctest::Approx(0.0));
  CHECK(n[2] == doctest::Approx(-std::sqrt(0.5)));
  auto back = decode_hyperplane(n);
  REQUIRE(back.has_value());
  CHECK(back->offset == doctest::Approx(1.0));
  CHECK(back->normal[0] == doctest::Approx(1.0));
}

TEST_CASE("the equator decodes to nothing") {
  CHECK_FALSE(decode_hyperplane(UnitVector(Vector::Unit(3, 2))).has_value());
}

TEST_CASE("lifted side agrees with planar side") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    OrientedHyperplane h{UnitVector(random_vector(rng, 2)), normal_draw(rng)};
    UnitVector n = lift_hyperplane(h);
    Vector q = 3.0 * random_vector(rng, 2);
    const double planar = h.signed_distance(q);
    const double lifted = n.dot(gnomonic_lift(q));
    CHECK((planar > 0) == (lifted > 0));
  }
}

TEST_CASE("rotation_taking maps u to v and is special orthogonal") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 5; ++n) {
    UnitVector u(random_vector(rng, n)), v(random_vector(rng, n));
    Matrix r = rotation_taking(u, v);
    CHECK((r * u.vec() - v.vec()).norm() <= 1e-12);
    CHECK((r.transpose() * r - Matrix::Identity(n, n)).norm() <= 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0));
  }
  UnitVector e(Vector::Unit(3, 0));
  CHECK((rotation_taking(e, -e) * e.vec() + e.vec()).norm() <= 1e-12);
}

TEST_CASE("projective map from a hyperplane sends it to infinity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    OrientedHyperplane h{UnitVector(random_vector(rng, 2)), normal_draw(rng)};
    ProjectiveMap t = projective_from_hyperplane(h);
    CHECK(std::abs(t.matrix.determinant()) == doctest::Approx(1.0));
    Vector on = h.offset * h.normal.vec();
    CHECK(std::abs(t.homogeneous_image(on)[2]) <= 1e-12);
  }
}

TEST_CASE("hyperplane images follow mapped points") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    ProjectiveMap t = ProjectiveMap::from_matrix(Matrix::Identity(3, 3) + 0.3 * Matrix::Random(3, 3));
    OrientedHyperplane h{UnitVector(random_vector(rng, 2)), normal_draw(rng)};
    OrientedHyperplane img = apply_projective(t, h);
    for (int s = 0; s < 10; ++s) {
      Vector p = random_vector(rng, 2);
      if (t.homogeneous_image(p)[2] <= 1e-6) continue;
      Vector q = apply_projective(t, p);
      if (std::abs(h.signed_distance(p)) < 1e-9) continue;
      CHECK((h.signed_distance(p) > 0) == (img.signed_distance(q) > 0));
    }
  }
}

TEST_CASE("orthonormal complement and Gram-Schmidt") {
  std::mt19937_64 rng(7);
  Matrix cols(5, 2);
  cols.col(0) = random_vector(rng, 5);
  cols.col(1) = random_vector(rng, 5);
  Matrix q = orthonormalize(cols);
  CHECK((q.transpose() * q - Matrix::Identity(2, 2)).norm() <= 1e-12);
  Matrix c = orthonormal_complement(q);
  CHECK(c.cols() == 3);
  CHECK((q.transpose() * c).norm() <= 1e-12);
  cols.col(1) = 2.0 * cols.col(0);
  CHECK_THROWS_AS(orthonormalize(cols), Error);
}

TEST_CASE("angles") {
  Vector a = Vector::Unit(2, 0), b = Vector::Unit(2, 1);
  CHECK(angle_between(a, b) == doctest::Approx(kPi / 2));
  CHECK(angle_between(a, -a) == doctest::Approx(kPi));
  CHECK(angle_between(a, a) == doctest::Approx(0.0));
  CHECK(wrap_two_pi(-kPi / 2) == doctest::Approx(1.5 * kPi));
  CHECK(wrap_two_pi(5 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("frames rotate inside their plane") {
  Frame2 f = Frame2::standard(3);
  Frame2 g = f.rotated(kPi / 2);
  CHECK((g.x.vec() - f.y.vec()).norm() <= 1e-12);
  CHECK((g.y.vec() + f.x.vec()).norm() <= 1e-12);
  CHECK_THROWS_AS(Frame2::from_vectors(Vector::Unit(3, 0), 2.0 * Vector::Unit(3, 0)), Error);
}

TEST_CASE("flags flip their line only") {
  std::mt19937_64 rng(8);
  OrientedFlag f = mpart::test::random_flag(rng, 4, 3);
  OrientedFlag g = f.flipped();
  CHECK((g.line().vec() + f.line().vec()).norm() <= 1e-12);
  Matrix p1 = f.basis * f.basis.transpose(), p2 = g.basis * g.basis.transpose();
  CHECK((p1 - p2).norm() <= 1e-12);
}
