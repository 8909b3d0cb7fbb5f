#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

namespace mpart {

/// Number of turns of a closed loop of nonzero planar samples around the origin.
/// Needs at least 8 samples and consecutive angular steps below pi/2.
int winding_number(const std::vector<Eigen::Vector2d>& samples, bool closed = true);

struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;  // counterclockwise seen from outside
};

/// Subdivided icosahedron projected to the unit sphere; level 0 is the icosahedron.
Mesh icosphere(int level);

using SphereMap = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

struct DegreeResult {
  int degree = 0;
  double raw = 0.0;      // signed image area / 4 pi before rounding
  int refined_faces = 0;  // faces split beyond the base level
};

/// Degree of x -> f(x)/|f(x)| on S^2: signed spherical area of the image triangles over
/// 4 pi. Faces whose image spans more than pi/4 are split (up to max_extra_levels more).
/// Throws NearZero if |f| < 1e-9 at any evaluated vertex.
DegreeResult sphere_map_degree(const SphereMap& f, int level, int max_extra_levels = 6);

}  // namespace mpart
