#pragma once

#include <random>

#include "mpart/mpart.hpp"

namespace mpart::test {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal_draw(rng);
  return v;
}

inline UnitVector random_unit(std::mt19937_64& rng, Eigen::Index n) { return UnitVector(random_vector(rng, n)); }

inline Frame2 random_frame(std::mt19937_64& rng, Eigen::Index n) {
  return Frame2::from_vectors(random_vector(rng, n), random_vector(rng, n));
}

inline OrientedFlag random_flag(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
  Matrix cols(n, k);
  for (Eigen::Index j = 0; j < k; ++j) cols.col(j) = random_vector(rng, n);
  return OrientedFlag::from_vectors(cols);
}

inline MassDistribution point_mass(const std::string& name, std::initializer_list<std::array<double, 2>> pts) {
  Matrix a(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index j = 0;
  for (const auto& p : pts) {
    a(0, j) = p[0];
    a(1, j) = p[1];
    ++j;
  }
  return MassDistribution::unit_weights(name, a, 0.0);
}

inline SolverConfig quick_config(std::uint64_t seed = 1) {
  SolverConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace mpart::test
