#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mpart/projective.hpp"
#include "mpart/region_types.hpp"
#include "mpart/solvers.hpp"

namespace mpart {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const OrientedHyperplane& h);
Json to_json(const ProjectiveMap& t);  // rows of the homogeneous matrix
Json to_json(const KFan& fan);
Json to_json(const KCone& cone);
Json to_json(const DoubleWedge& dw);
Json to_json(const DwFan& fan);
Json to_json(const SlabPartition& slabs);  // includes the (normal, offset) of every hyperplane
Json to_json(const PartitionReport& r);

/// Result documents. `kind` names the subcommand that produced the report.
Json to_json(const SolveReport& r, const std::string& kind);
Json to_json(const HsAfterTransformResult& r);
Json to_json(const StripesResult& r);

Vector vector_from_json(const Json& j);
OrientedHyperplane hyperplane_from_json(const Json& j);
ProjectiveMap projective_from_json(const Json& j);
KFan fan_from_json(const Json& j);
KCone cone_from_json(const Json& j);
DoubleWedge double_wedge_from_json(const Json& j);
DwFan dw_fan_from_json(const Json& j);
SlabPartition slabs_from_json(const Json& j);

SolveReport report_from_json(const Json& j);
HsAfterTransformResult hs_from_json(const Json& j);
StripesResult stripes_from_json(const Json& j);

std::string to_string(const Json& j);  // two-space indent, trailing newline
Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mpart
