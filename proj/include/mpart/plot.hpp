#pragma once

#include <string>

#include "mpart/masses.hpp"
#include "mpart/projective.hpp"
#include "mpart/solvers.hpp"

namespace mpart {

/// Planar (d = 2) SVG renderings on a fixed 1000x1000 canvas. Output depends only on the
/// inputs. Other dimensions raise UnsupportedDimension.
std::string plot_instance(const Instance& inst);
std::string plot_report(const Instance& inst, const SolveReport& report);
/// Drawn in the transformed plane.
std::string plot_hs(const Instance& inst, const HsAfterTransformResult& result);
std::string plot_stripes(const Instance& inst, const StripesResult& result);

}  // namespace mpart
