#include "doctest.h"
#include "support.hpp"

using namespace mpart;
using mpart::test::quick_config;

TEST_CASE("region documents round trip") {
  KFan fan{Frame2::standard(2), Vector::Zero(2), {0.1, 2.0, 4.0}};
  KFan f2 = fan_from_json(to_json(fan));
  CHECK(f2.cut_angles == fan.cut_angles);
  CHECK(f2.plane_frame.x.vec() == fan.plane_frame.x.vec());

  KCone cone{Matrix::Identity(3, 2), Vector::Ones(2), UnitVector(Vector::Unit(2, 1)), 0.7};
  KCone c2 = cone_from_json(to_json(cone));
  CHECK(c2.subspace_basis == cone.subspace_basis);
  CHECK(c2.half_angle == cone.half_angle);

  DoubleWedge dw{{UnitVector(Vector::Unit(2, 0)), 0.25}, {UnitVector(Vector::Unit(2, 1)), -1.0 / 3.0}};
  DoubleWedge d2 = double_wedge_from_json(to_json(dw));
  CHECK(d2.h2.offset == dw.h2.offset);

  SlabPartition s{UnitVector(Vector::Unit(2, 0)), {-0.3, 0.4}};
  CHECK(slabs_from_json(to_json(s)).offsets == s.offsets);

  ProjectiveMap t = ProjectiveMap::from_matrix(Matrix::Identity(3, 3) + 0.1 * Matrix::Ones(3, 3));
  CHECK(projective_from_json(to_json(t)).matrix == t.matrix);
}

TEST_CASE("non-finite residuals survive as null") {
  SolveReport r;
  r.status = Status::NotFound;
  Json j = to_json(r, "cone");
  CHECK(j["residual_smoothed"].is_null());
  CHECK(std::isinf(report_from_json(j).residual_smoothed));
  Vector v(2);
  v << 1.0, std::numeric_limits<double>::infinity();
  CHECK(to_json(v)[1].is_null());
  CHECK_THROWS_AS(vector_from_json(to_json(v)), Error);
}

TEST_CASE("solver reports round trip and re-verify") {
  Instance inst = random_instance(2, 3, 30, 11);
  SolveReport r = solve_cone(inst, 2, quick_config());
  REQUIRE(r.status == Status::Found);
  Json j = to_json(r, "cone");
  CHECK(j["kind"] == "cone");
  CHECK(j["status"] == "Found");
  CHECK_FALSE(j.contains("wall_clock"));
  SolveReport back = report_from_json(Json::parse(to_string(j)));
  CHECK(back.status == r.status);
  CHECK(verify_report(inst, back, 2e-6, inst.masses[0].smoothing_radius).pass);
  CHECK(to_string(to_json(back, "cone")) == to_string(j));
}

TEST_CASE("stripes and Ham-Sandwich documents round trip") {
  Instance inst = random_instance(2, 2, 30, 12);
  StripesResult s = stripes(inst, 3, quick_config());
  CHECK(to_string(to_json(stripes_from_json(to_json(s)))) == to_string(to_json(s)));
  Instance hs = make_planted_hs_instance(2, 4, 2);
  HsAfterTransformResult h = hs_after_transform(hs, quick_config());
  CHECK(to_string(to_json(hs_from_json(to_json(h)))) == to_string(to_json(h)));
}

TEST_CASE("SVG output is deterministic and planar only") {
  Instance inst = random_instance(2, 3, 30, 13);
  SolveReport r = solve_double_wedge(inst, quick_config());
  const std::string a = plot_report(inst, r), b = plot_report(inst, solve_double_wedge(inst, quick_config()));
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(plot_instance(inst).find("<circle") != std::string::npos);
  CHECK_THROWS_AS(plot_instance(random_instance(3, 2, 10, 1)), Error);
}
