#include "mpart/topology.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "mpart/error.hpp"

namespace mpart {
namespace {

using V3 = Eigen::Vector3d;

constexpr double kPiD = 3.14159265358979323846;

/// Signed solid angle of the spherical triangle (a, b, c) of unit vectors.
double solid_angle(const V3& a, const V3& b, const V3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

double chord_angle(const V3& a, const V3& b) { return 2.0 * std::asin(std::min(1.0, (a - b).norm() / 2.0)); }

struct Evaluator {
  const SphereMap& f;
  V3 operator()(const V3& x) const {
    const V3 y = f(x);
    const double n = y.norm();
    if (!(n >= 1e-9)) fail(ErrorCode::NearZero, "map is (nearly) zero on the mesh");
    return y / n;
  }
};

double face_area(const Evaluator& ev, const V3& a, const V3& b, const V3& c, const V3& fa, const V3& fb,
                 const V3& fc, int depth, int& refined) {
  const double spread = std::max({chord_angle(fa, fb), chord_angle(fb, fc), chord_angle(fc, fa)});
  if (spread <= kPiD / 4 || depth == 0) return solid_angle(fa, fb, fc);
  ++refined;
  const V3 ab = (a + b).normalized();
  const V3 bc = (b + c).normalized();
  const V3 ca = (c + a).normalized();
  const V3 fab = ev(ab);
  const V3 fbc = ev(bc);
  const V3 fca = ev(ca);
  return face_area(ev, a, ab, ca, fa, fab, fca, depth - 1, refined) +
         face_area(ev, ab, b, bc, fab, fb, fbc, depth - 1, refined) +
         face_area(ev, ca, bc, c, fca, fbc, fc, depth - 1, refined) +
         face_area(ev, ab, bc, ca, fab, fbc, fca, depth - 1, refined);
}

}  // namespace

int winding_number(const std::vector<Eigen::Vector2d>& samples, bool closed) {
  require(samples.size() >= 8, "winding_number needs at least 8 samples");
  for (const auto& s : samples)
    if (!(s.norm() >= 1e-12)) fail(ErrorCode::ZeroVector, "loop sample with norm below 1e-12");
  double total = 0.0;
  const std::size_t n = samples.size();
  const std::size_t steps = closed ? n : n - 1;
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& a = samples[i];
    const auto& b = samples[(i + 1) % n];
    const double step = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    if (std::abs(step) >= kPiD / 2)
      fail(ErrorCode::AliasingError, "angular step of " + std::to_string(step) + " rad between samples " +
                                         std::to_string(i) + " and " + std::to_string((i + 1) % n));
    total += step;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPiD)));
}

Mesh icosphere(int level) {
  require(level >= 0, "icosphere level must be >= 0");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int idx = static_cast<int>(m.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  return m;
}

DegreeResult sphere_map_degree(const SphereMap& f, int level, int max_extra_levels) {
  const Mesh mesh = icosphere(level);
  const Evaluator ev{f};
  std::vector<V3> images;
  images.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) images.push_back(ev(v));
  DegreeResult r;
  double area = 0.0;
  for (const auto& face : mesh.faces) {
    const auto& [a, b, c] = face;
    area += face_area(ev, mesh.vertices[a], mesh.vertices[b], mesh.vertices[c], images[a], images[b], images[c],
                      max_extra_levels, r.refined_faces);
  }
  r.raw = area / (4.0 * kPiD);
  r.degree = static_cast<int>(std::lround(r.raw));
  return r;
}

}  // namespace mpart
