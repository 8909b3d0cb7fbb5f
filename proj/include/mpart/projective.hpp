#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpart/geometry.hpp"
#include "mpart/masses.hpp"
#include "mpart/region_types.hpp"
#include "mpart/solvers.hpp"

namespace mpart {

/// Ham-Sandwich cuts after a projective transformation. Each family of point sets is
/// bisected by its cut; exactness counts points (weights are ignored).
struct HsAfterTransformResult {
  Status status = Status::NotFound;
  std::string message;
  ProjectiveMap transform;
  std::vector<OrientedHyperplane> cuts;     // one per family, in the transformed space
  std::vector<double> per_family_residuals;  // 0 when exact, else the smoothed residual
  std::vector<bool> exact_flags;
  UnitVector h1;                             // lifted normals of the double wedges used
  std::vector<UnitVector> h2;
  double solver_residual = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

/// Shared-h1 double wedges on the lifted instance, h1 sent to infinity, per-family h2
/// images returned as cuts. A local search over planes through nearby points turns an
/// epsilon-bisection into an exact one when possible.
HsAfterTransformResult hs_after_transform(const Instance& inst, const SolverConfig& cfg = {});

/// d families of d + 1 point sets in general position; each set has points_per_set
/// points, half inside a hidden double wedge (h1, h2^i) and half outside.
Instance make_planted_hs_instance(int d, int points_per_set, std::uint64_t seed);
/// `families` families of `sets` uniform point sets in general position.
Instance make_random_hs_instance(int d, int families, int sets, int points_per_set, std::uint64_t seed);

struct StripesResult {
  Status status = Status::NotFound;
  std::string message;
  ProjectiveMap transform;
  SlabPartition slabs;
  std::vector<std::vector<double>> fractions;      // per mass, per slab (smoothed)
  std::vector<std::vector<double>> raw_fractions;  // per mass, per slab, transformed atoms
  DwFan fan;                                        // lifted fan of double wedges
  int line_at_infinity = 0;
  std::vector<int> slab_of_pair;
  double residual_smoothed = std::numeric_limits<double>::infinity();
  double residual_raw = std::numeric_limits<double>::infinity();
  double normal_deviation = 0.0;  // largest angle between output hyperplane normals
  long evaluations = 0;
};

/// k - 1 parallel hyperplanes cutting every mass into k equal parts after a projective
/// transformation, from a fan of k double wedges that sends one of its lines to infinity.
StripesResult stripes(const Instance& inst, int k, const SolverConfig& cfg = {});

struct PartitionReport {
  std::vector<std::vector<double>> fractions;  // per mass, per region
  double max_deviation = 0.0;
  bool pass = false;
};

PartitionReport verify_partition(std::span<const MassDistribution> masses, std::span<const Region> regions,
                                 std::span<const double> targets, double tol, const MeasureOptions& options = {});

struct SideCounts {
  int positive = 0;
  int negative = 0;
  int on = 0;

  [[nodiscard]] bool bisected() const { return on == 0 && positive == negative; }
};

/// Strict side counts of every point set against a cut (|distance| <= 1e-12 is "on").
std::vector<SideCounts> verify_cuts(std::span<const MassDistribution> sets, const OrientedHyperplane& cut);

/// One partition claim of a solver report: masses, regions and target fractions.
struct PartitionClaim {
  std::vector<int> masses;
  std::vector<Region> regions;
  std::vector<double> targets;
};

std::vector<PartitionClaim> partition_claims(const Instance& inst, const SolveReport& report);

/// Re-measures every claim of a report with the given smoothing.
PartitionReport verify_report(const Instance& inst, const SolveReport& report, double tol, double smoothing);

}  // namespace mpart
