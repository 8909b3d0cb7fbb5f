#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpart/geometry.hpp"
#include "mpart/region_types.hpp"

namespace mpart {

inline constexpr double kDefaultSmoothing = 1e-3;

/// Weighted atoms standing in for a mass distribution. The smoothing radius spreads each
/// atom over an arc of that many radians as seen from the apex of angular regions.
struct MassDistribution {
  std::string name;
  Matrix atoms;    // dim x n
  Vector weights;  // n, all > 0
  double smoothing_radius = kDefaultSmoothing;

  static MassDistribution make(std::string name, Matrix atoms, Vector weights,
                               double smoothing_radius = kDefaultSmoothing);
  static MassDistribution unit_weights(std::string name, Matrix atoms,
                                       double smoothing_radius = kDefaultSmoothing);

  [[nodiscard]] Eigen::Index dim() const { return atoms.rows(); }
  [[nodiscard]] Eigen::Index size() const { return atoms.cols(); }
  void validate() const;
};

struct Instance {
  int dimension = 0;
  std::vector<MassDistribution> masses;
  std::vector<std::vector<int>> families;  // empty when the instance has no family structure

  void validate() const;
  [[nodiscard]] int mass_count() const { return static_cast<int>(masses.size()); }
};

double total_mass(const MassDistribution& mu);

struct MeasureOptions {
  BoundaryRule rule = BoundaryRule::Half;
  std::optional<double> smoothing;  // overrides the distribution's radius (0 = raw atoms)
};

double region_measure(const MassDistribution& mu, const Region& region,
                      const MeasureOptions& options = {});

/// Concatenation of several masses (the "total mass"); the first radius is kept.
MassDistribution combine(std::span<const MassDistribution> masses, std::string name = "total");

/// Gnomonic lift of every atom to the upper hemisphere of S^d.
MassDistribution lift_mass(const MassDistribution& mu);
Instance lift_instance(const Instance& inst);

/// Radius of the smallest origin-centred ball containing every atom.
double instance_radius(const Instance& inst);

/// d + 1 point-like masses at the vertices of the standard simplex plus one at its
/// barycenter; no k-cone bisects all of them.
Instance make_simplex_counterexample(int d);

/// d + 1 families of d + 1 tight clusters of n points such that no hyperplane comes
/// within 1e-2 of d + 1 cluster centres.
Instance make_projective_tight_instance(int d, int n, std::uint64_t seed = 1);

/// m masses of atomsPerMass unit-weight atoms, uniform in the unit cube, in general position.
Instance random_instance(int d, int m, int atoms_per_mass, std::uint64_t seed);

/// True when no d + 1 of the points lie within `tol` of a common hyperplane.
bool in_general_position(const Matrix& points, double tol);

Instance load_instance(const std::filesystem::path& path);
std::string dump_instance(const Instance& inst);
void save_instance(const std::filesystem::path& path, const Instance& inst);

}  // namespace mpart
