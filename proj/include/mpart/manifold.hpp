#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mpart/geometry.hpp"

namespace mpart {

/// A factor SO(n)/H whose points are represented by a rotation Q; the chart at Q moves
/// Q by Givens rotations in the listed column pairs (one parameter each).
struct RotationFactor {
  int dim = 0;
  std::vector<std::pair<int, int>> generators;

  /// Unit sphere S^{n-1} (the point is column 0).
  static RotationFactor sphere(int n);
  /// Oriented orthonormal pairs (columns 0, 1).
  static RotationFactor stiefel_pair(int n);
  /// Oriented line (column 0) inside a k-subspace (columns 0..k-1).
  static RotationFactor flag(int n, int k);
};

struct ManifoldSpec {
  std::vector<RotationFactor> rotations;
  std::vector<std::pair<double, double>> scalar_ranges;

  [[nodiscard]] int dof() const;
};

struct ManifoldPoint {
  std::vector<Matrix> rotations;
  std::vector<double> scalars;
};

/// Point reached from `base` by the chart coordinates theta.
ManifoldPoint retract(const ManifoldSpec& spec, const ManifoldPoint& base, const Vector& theta);
/// Haar-random rotations and uniform scalars; platform-independent draws.
ManifoldPoint random_point(const ManifoldSpec& spec, std::mt19937_64& rng);

double uniform_draw(std::mt19937_64& rng);
double normal_draw(std::mt19937_64& rng);

/// Residual at a manifold point for a given smoothing radius; nullopt when the
/// construction is undefined there (treated as a large penalty).
using ResidualFn = std::function<std::optional<Vector>(const ManifoldPoint&, double eps)>;

struct SearchSettings {
  int multistarts = 64;
  int samples = 1024;  // random points scored before refinement
  int max_refine_iters = 500;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  double final_eps = 1e-3;
  std::vector<ManifoldPoint> starts;  // explicit starts replace random sampling when non-empty
};

struct SearchResult {
  ManifoldPoint point;
  Vector residual;
  double inf_norm = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  bool found = false;
  int start_index = -1;
};

/// Multistart zero search: score random samples at a coarse smoothing, then refine the
/// best starts through a decreasing smoothing schedule with Nelder-Mead and a
/// Gauss-Newton polish (minimum-norm steps). Deterministic for a fixed seed.
SearchResult search_zero(const ManifoldSpec& spec, const ResidualFn& fn, const SearchSettings& settings);

/// Nelder-Mead on f over R^n from x0 with initial simplex size `step`.
Vector nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, double step, int max_iters,
                   double ftol, long& evaluations);

}  // namespace mpart
