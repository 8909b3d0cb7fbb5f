#pragma once

#include <variant>
#include <vector>

#include "mpart/geometry.hpp"

namespace mpart {

/// k half-hyperplanes around the apex flat apex_point + plane^perp.
///
/// Sector j (0-based) is the set of points whose projection onto the plane, taken
/// relative to apex_point, has angle in [cut_angles[j], cut_angles[j+1]] measured
/// counterclockwise in the (x, y) orientation; the last sector closes at
/// cut_angles[0] + 2 pi. Angles are strictly increasing, cut_angles[0] lies in
/// [0, 2 pi) and the whole list spans less than one turn.
struct KFan {
  Frame2 plane_frame;
  Vector apex_point;
  std::vector<double> cut_angles;

  [[nodiscard]] int k() const { return static_cast<int>(cut_angles.size()); }
  [[nodiscard]] Eigen::Index dim() const { return plane_frame.dim(); }
};

/// Preimage under projection onto span(subspace_basis) of a spherical cone.
/// apex_point and axis are expressed in the coordinates of subspace_basis.
struct KCone {
  Matrix subspace_basis;  // dim x k, orthonormal columns
  Vector apex_point;      // k
  UnitVector axis;        // k
  double half_angle = kPi / 2;

  [[nodiscard]] Eigen::Index k() const { return subspace_basis.cols(); }
  [[nodiscard]] Eigen::Index dim() const { return subspace_basis.rows(); }
};

/// (h1+ n h2+) u (h1- n h2-).
struct DoubleWedge {
  OrientedHyperplane h1;
  OrientedHyperplane h2;
};

/// k full lines through the apex inside an oriented 2-plane. Sector j of the 2k planar
/// sectors is paired with sector j + k; pair j lies between line_angles[j] and
/// line_angles[j+1] (the last pair closes at line_angles[0] + pi).
struct DwFan {
  Frame2 plane_frame;
  Vector apex_point;
  std::vector<double> line_angles;

  [[nodiscard]] int k() const { return static_cast<int>(line_angles.size()); }
};

/// k slabs cut out by the parallel hyperplanes normal.p = offsets[j].
struct SlabPartition {
  UnitVector normal;
  std::vector<double> offsets;

  [[nodiscard]] int k() const { return static_cast<int>(offsets.size()) + 1; }
};

struct Halfspace {
  OrientedHyperplane h;
};
struct FanSector {
  KFan fan;
  int index = 0;
};
struct DwPair {
  DwFan fan;
  int index = 0;
};
struct Slab {
  SlabPartition partition;
  int index = 0;
};

using BaseRegion = std::variant<Halfspace, FanSector, KCone, DoubleWedge, DwPair, Slab>;

/// A region of R^{d+1} evaluated on the gnomonic lifts of points of R^d.
struct Lifted {
  BaseRegion region;
};

using Region = std::variant<Halfspace, FanSector, KCone, DoubleWedge, DwPair, Slab, Lifted>;

enum class BoundaryRule { Half, Strict };

}  // namespace mpart
