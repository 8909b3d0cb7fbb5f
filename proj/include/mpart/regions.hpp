#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mpart/masses.hpp"
#include "mpart/region_types.hpp"

namespace mpart {

enum class Side { Outside, Inside, Boundary };

/// 1-based sector index, or nullopt when p is on a cut ray or on the apex flat.
std::optional<int> fan_sector_index(const KFan& fan, const Vector& p);
Side cone_contains(const KCone& cone, const Vector& p);
Side double_wedge_contains(const DoubleWedge& dw, const Vector& p);

/// Fan whose sectors hold targets[j] of the (smoothed) reference mass. Cuts are the
/// plateau-midpoint quantiles of the circular cumulative distribution of projected
/// atom angles, anchored at start_angle and swept counterclockwise.
KFan build_equipartition_fan(const Frame2& plane, const Vector& apex_point,
                             const MassDistribution& reference, std::span<const double> targets,
                             double start_angle, std::optional<double> smoothing = {});

/// Cone with axis flag.line() inside span(flag.basis) bisecting `total`. The half angle
/// is the plateau-midpoint solution of mass(alpha) = total/2. Flipping the flag's line
/// returns exactly the complement cone.
KCone build_bisecting_cone(const OrientedFlag& flag, const Vector& apex_point,
                           const MassDistribution& total, std::optional<double> smoothing = {});

/// k lines through the apex whose k double wedges each hold 1/k of the reference mass.
DwFan build_dw_fan(const Frame2& plane, const Vector& apex_point, const MassDistribution& reference,
                   int k, double start_angle, std::optional<double> smoothing = {});

KCone complement(const KCone& cone);
DoubleWedge complement(const DoubleWedge& dw);
Halfspace complement(const Halfspace& h);
/// Supported for Halfspace, KCone, DoubleWedge and Lifted forms of those.
Region complement(const Region& region);

/// Fraction of an atom at p that lies in the region, in [0, 1]. eps is the angular
/// smoothing radius (0 = raw atoms with the half rule on boundaries).
double membership(const Region& region, const Vector& p, double eps, BoundaryRule rule);

void validate(const KFan& fan);
void validate(const KCone& cone);
void validate(const DwFan& fan);
void validate(const SlabPartition& slabs);

// Batched kernels shared by the measures and the test maps.

struct PlanarCoords {
  Eigen::ArrayXd angle;   // in [0, 2 pi)
  Eigen::ArrayXd radius;  // distance from the apex flat
};
PlanarCoords planar_coords(const Frame2& plane, const Vector& apex_point, const Matrix& atoms);

/// Angle between each atom's projection and the axis; NaN for atoms on the apex.
Eigen::ArrayXd cone_angles(const KCone& cone, const Matrix& atoms);

/// Smoothed/raw share of one atom in the sector [from, from + length] on a circle of
/// the given period (2 pi for fans, pi for double-wedge fans).
double sector_fraction(double theta, double radius, double from, double length, double period,
                       int sectors, double eps, BoundaryRule rule);

double cone_fraction(double phi, double radius, double half_angle, double eps, BoundaryRule rule);

/// Measures of every sector / double-wedge pair, in sector order.
std::vector<double> fan_sector_measures(const KFan& fan, const MassDistribution& mu, double eps,
                                        BoundaryRule rule = BoundaryRule::Half);
std::vector<double> dw_pair_measures(const DwFan& fan, const MassDistribution& mu, double eps,
                                     BoundaryRule rule = BoundaryRule::Half);

/// sum_i w_i (2 m_i - 1): mass inside minus mass outside the cone.
double cone_imbalance(const KCone& cone, const MassDistribution& mu, double eps,
                      BoundaryRule rule = BoundaryRule::Half);

}  // namespace mpart
