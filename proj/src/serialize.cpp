#include "mpart/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace mpart {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Json matrix_rows(const std::vector<std::vector<double>>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    out.push_back(r);
  }
  return out;
}

std::vector<std::vector<double>> rows_from(const Json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    out.emplace_back();
    for (const auto& v : row) out.back().push_back(number_from(v));
  }
  return out;
}

Json columns(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(Vector(m.col(c))));
  return out;
}

Matrix columns_from(const Json& j) {
  require(j.is_array() && !j.empty(), "expected a non-empty list of columns");
  const Vector first = vector_from_json(j.front());
  Matrix m(first.size(), static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vector v = vector_from_json(j[c]);
    if (v.size() != first.size()) fail(ErrorCode::ParseError, "columns of different lengths");
    m.col(static_cast<Eigen::Index>(c)) = v;
  }
  return m;
}

std::vector<double> doubles(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number_from(v));
  return out;
}

Status status_from(const std::string& s) {
  for (Status st : {Status::Found, Status::NotFound, Status::Infeasible, Status::ExceedsDeskScale})
    if (to_string(st) == s) return st;
  fail(ErrorCode::ParseError, "unknown status '" + s + "'");
}

Json decoded_wedge(const DecodedWedge& w) {
  Json j;
  j["wedge"] = to_json(w.wedge);
  j["inside_sector"] = w.inside_sector;
  j["apex_at_infinity"] = w.apex_at_infinity;
  return j;
}

Json solution_json(const Solution& s) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, ConeSolution>) {
          j["type"] = "cone";
          j["lifted"] = v.lifted;
          j["cone"] = to_json(v.cone);
          j["decoded"] = v.decoded ? decoded_wedge(*v.decoded) : Json(nullptr);
        } else if constexpr (std::is_same_v<T, FanSolution>) {
          j["type"] = "fan";
          j["lifted"] = v.lifted;
          j["fan"] = to_json(v.fan);
          j["targets"] = v.targets;
          j["decoded"] = v.decoded ? to_json(*v.decoded) : Json(nullptr);
          j["apex_at_infinity"] = v.apex_at_infinity;
        } else if constexpr (std::is_same_v<T, DoubleWedgeSolution>) {
          j["type"] = "double_wedge";
          j["h1"] = to_json(v.h1.vec());
          j["h2"] = to_json(v.h2.vec());
          j["decoded"] = v.decoded ? to_json(*v.decoded) : Json(nullptr);
        } else if constexpr (std::is_same_v<T, SharedH1Solution>) {
          j["type"] = "shared_h1";
          j["lifted"] = v.lifted;
          j["h1"] = to_json(v.h1.vec());
          j["h2"] = Json::array();
          for (const auto& h : v.h2) j["h2"].push_back(to_json(h.vec()));
          j["family_residuals"] = Json::array();
          for (double r : v.family_residuals) j["family_residuals"].push_back(number(r));
        } else if constexpr (std::is_same_v<T, ApexLineSolution>) {
          j["type"] = "apex_on_line";
          j["t"] = v.t;
          j["apex"] = to_json(v.apex);
          j["cone"] = to_json(v.cone);
        } else {
          j = nullptr;
        }
        return j;
      },
      s);
}

Solution solution_from(const Json& j) {
  if (j.is_null()) return std::monostate{};
  const std::string type = j.at("type").get<std::string>();
  if (type == "cone") {
    ConeSolution s{cone_from_json(j.at("cone")), j.at("lifted").get<bool>(), std::nullopt};
    if (!j.at("decoded").is_null()) {
      const auto& d = j.at("decoded");
      s.decoded = DecodedWedge{fan_from_json(d.at("wedge")), d.at("inside_sector").get<int>(),
                               d.at("apex_at_infinity").get<bool>()};
    }
    return s;
  }
  if (type == "fan") {
    FanSolution s{fan_from_json(j.at("fan")), j.at("lifted").get<bool>(), doubles(j.at("targets")), std::nullopt,
                  j.at("apex_at_infinity").get<bool>()};
    if (!j.at("decoded").is_null()) s.decoded = fan_from_json(j.at("decoded"));
    return s;
  }
  if (type == "double_wedge") {
    DoubleWedgeSolution s{UnitVector(vector_from_json(j.at("h1"))), UnitVector(vector_from_json(j.at("h2"))),
                          std::nullopt};
    if (!j.at("decoded").is_null()) s.decoded = double_wedge_from_json(j.at("decoded"));
    return s;
  }
  if (type == "shared_h1") {
    SharedH1Solution s{UnitVector(vector_from_json(j.at("h1"))), {}, doubles(j.at("family_residuals")),
                       j.at("lifted").get<bool>()};
    for (const auto& h : j.at("h2")) s.h2.emplace_back(vector_from_json(h));
    return s;
  }
  if (type == "apex_on_line")
    return ApexLineSolution{j.at("t").get<double>(), vector_from_json(j.at("apex")), cone_from_json(j.at("cone"))};
  fail(ErrorCode::ParseError, "unknown solution type '" + type + "'");
}

template <typename F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

Json to_json(const OrientedHyperplane& h) {
  Json j;
  j["normal"] = to_json(h.normal.vec());
  j["offset"] = number(h.offset);
  return j;
}

Json to_json(const ProjectiveMap& t) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < t.matrix.rows(); ++r) out.push_back(to_json(Vector(t.matrix.row(r).transpose())));
  return out;
}

Json to_json(const KFan& fan) {
  Json j;
  j["plane"] = Json::array({to_json(fan.plane_frame.x.vec()), to_json(fan.plane_frame.y.vec())});
  j["apex"] = to_json(fan.apex_point);
  j["cut_angles"] = fan.cut_angles;
  return j;
}

Json to_json(const KCone& cone) {
  Json j;
  j["subspace_basis"] = columns(cone.subspace_basis);
  j["apex"] = to_json(cone.apex_point);
  j["axis"] = to_json(cone.axis.vec());
  j["half_angle"] = cone.half_angle;
  return j;
}

Json to_json(const DoubleWedge& dw) {
  Json j;
  j["h1"] = to_json(dw.h1);
  j["h2"] = to_json(dw.h2);
  return j;
}

Json to_json(const DwFan& fan) {
  Json j;
  j["plane"] = Json::array({to_json(fan.plane_frame.x.vec()), to_json(fan.plane_frame.y.vec())});
  j["apex"] = to_json(fan.apex_point);
  j["line_angles"] = fan.line_angles;
  return j;
}

Json to_json(const SlabPartition& slabs) {
  Json j;
  j["normal"] = to_json(slabs.normal.vec());
  j["offsets"] = slabs.offsets;
  j["hyperplanes"] = Json::array();
  for (double o : slabs.offsets) j["hyperplanes"].push_back(to_json(OrientedHyperplane{slabs.normal, o}));
  return j;
}

Json to_json(const PartitionReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["max_deviation"] = number(r.max_deviation);
  j["fractions"] = matrix_rows(r.fractions);
  return j;
}

Json to_json(const SolveReport& r, const std::string& kind) {
  Json j;
  j["kind"] = kind;
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["residual_smoothed"] = number(r.residual_smoothed);
  j["residual_raw"] = number(r.residual_raw);
  j["evaluations"] = r.evaluations;
  j["certificates"] = Json::array();
  for (const auto& c : r.certificates) {
    Json cj;
    cj["name"] = c.name;
    cj["value"] = number(c.value);
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    j["certificates"].push_back(cj);
  }
  j["fractions"] = matrix_rows(r.fractions);
  j["solution"] = solution_json(r.solution);
  return j;
}

Json to_json(const HsAfterTransformResult& r) {
  Json j;
  j["kind"] = "projective-hs";
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["transform"] = to_json(r.transform);
  j["cuts"] = Json::array();
  for (const auto& c : r.cuts) j["cuts"].push_back(to_json(c));
  j["per_family_residuals"] = Json::array();
  for (double v : r.per_family_residuals) j["per_family_residuals"].push_back(number(v));
  j["exact_flags"] = Json::array();
  for (bool b : r.exact_flags) j["exact_flags"].push_back(b);
  j["h1"] = r.h1.size() > 0 ? to_json(r.h1.vec()) : Json(nullptr);
  j["h2"] = Json::array();
  for (const auto& h : r.h2) j["h2"].push_back(to_json(h.vec()));
  j["solver_residual"] = number(r.solver_residual);
  j["evaluations"] = r.evaluations;
  return j;
}

Json to_json(const StripesResult& r) {
  Json j;
  j["kind"] = "stripes";
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["transform"] = to_json(r.transform);
  j["slabs"] = r.slabs.normal.size() > 0 ? to_json(r.slabs) : Json(nullptr);
  j["fractions"] = matrix_rows(r.fractions);
  j["raw_fractions"] = matrix_rows(r.raw_fractions);
  j["fan"] = r.fan.plane_frame.x.size() > 0 ? to_json(r.fan) : Json(nullptr);
  j["line_at_infinity"] = r.line_at_infinity;
  j["slab_of_pair"] = r.slab_of_pair;
  j["residual_smoothed"] = number(r.residual_smoothed);
  j["residual_raw"] = number(r.residual_raw);
  j["normal_deviation"] = number(r.normal_deviation);
  j["evaluations"] = r.evaluations;
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "expected a list of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorCode::ParseError, "expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

OrientedHyperplane hyperplane_from_json(const Json& j) {
  return parsing("hyperplane", [&] {
    return OrientedHyperplane{UnitVector(vector_from_json(j.at("normal"))), j.at("offset").get<double>()};
  });
}

ProjectiveMap projective_from_json(const Json& j) {
  return parsing("transform", [&] {
    const Matrix rows = columns_from(j).transpose();
    if (rows.rows() != rows.cols()) fail(ErrorCode::ParseError, "transform must be square");
    return ProjectiveMap{rows};
  });
}

KFan fan_from_json(const Json& j) {
  return parsing("fan", [&] {
    const auto& plane = j.at("plane");
    return KFan{Frame2{UnitVector(vector_from_json(plane.at(0))), UnitVector(vector_from_json(plane.at(1)))},
                vector_from_json(j.at("apex")), doubles(j.at("cut_angles"))};
  });
}

KCone cone_from_json(const Json& j) {
  return parsing("cone", [&] {
    return KCone{columns_from(j.at("subspace_basis")), vector_from_json(j.at("apex")),
                 UnitVector(vector_from_json(j.at("axis"))), j.at("half_angle").get<double>()};
  });
}

DoubleWedge double_wedge_from_json(const Json& j) {
  return DoubleWedge{hyperplane_from_json(j.at("h1")), hyperplane_from_json(j.at("h2"))};
}

DwFan dw_fan_from_json(const Json& j) {
  return parsing("double-wedge fan", [&] {
    const auto& plane = j.at("plane");
    return DwFan{Frame2{UnitVector(vector_from_json(plane.at(0))), UnitVector(vector_from_json(plane.at(1)))},
                 vector_from_json(j.at("apex")), doubles(j.at("line_angles"))};
  });
}

SlabPartition slabs_from_json(const Json& j) {
  return parsing("slabs", [&] {
    return SlabPartition{UnitVector(vector_from_json(j.at("normal"))), doubles(j.at("offsets"))};
  });
}

SolveReport report_from_json(const Json& j) {
  return parsing("report", [&] {
    SolveReport r;
    r.status = status_from(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
    r.residual_smoothed = number_from(j.at("residual_smoothed"));
    r.residual_raw = number_from(j.at("residual_raw"));
    r.evaluations = j.at("evaluations").get<long>();
    for (const auto& c : j.at("certificates"))
      r.certificates.push_back({c.at("name").get<std::string>(), number_from(c.at("value")), c.at("pass").get<bool>(),
                                c.at("detail").get<std::string>()});
    r.fractions = rows_from(j.at("fractions"));
    r.solution = solution_from(j.at("solution"));
    return r;
  });
}

HsAfterTransformResult hs_from_json(const Json& j) {
  return parsing("projective-hs result", [&] {
    HsAfterTransformResult r;
    r.status = status_from(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
    r.transform = projective_from_json(j.at("transform"));
    for (const auto& c : j.at("cuts")) r.cuts.push_back(hyperplane_from_json(c));
    r.per_family_residuals = doubles(j.at("per_family_residuals"));
    for (const auto& b : j.at("exact_flags")) r.exact_flags.push_back(b.get<bool>());
    if (!j.at("h1").is_null()) r.h1 = UnitVector(vector_from_json(j.at("h1")));
    for (const auto& h : j.at("h2")) r.h2.emplace_back(vector_from_json(h));
    r.solver_residual = number_from(j.at("solver_residual"));
    r.evaluations = j.at("evaluations").get<long>();
    return r;
  });
}

StripesResult stripes_from_json(const Json& j) {
  return parsing("stripes result", [&] {
    StripesResult r;
    r.status = status_from(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
    r.transform = projective_from_json(j.at("transform"));
    if (!j.at("slabs").is_null()) r.slabs = slabs_from_json(j.at("slabs"));
    r.fractions = rows_from(j.at("fractions"));
    r.raw_fractions = rows_from(j.at("raw_fractions"));
    if (!j.at("fan").is_null()) r.fan = dw_fan_from_json(j.at("fan"));
    r.line_at_infinity = j.at("line_at_infinity").get<int>();
    r.slab_of_pair = j.at("slab_of_pair").get<std::vector<int>>();
    r.residual_smoothed = number_from(j.at("residual_smoothed"));
    r.residual_raw = number_from(j.at("residual_raw"));
    r.normal_deviation = number_from(j.at("normal_deviation"));
    r.evaluations = j.at("evaluations").get<long>();
    return r;
  });
}

std::string to_string(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace mpart
