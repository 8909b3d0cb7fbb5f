#include "mpart/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cumulative.hpp"

namespace mpart {
namespace {

double wrap_period(double a, double period) {
  double r = std::fmod(a, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

/// Distance from a planar point (polar theta, r) to the ray (or line, for period pi) at angle c.
bool near_ray(double theta, double r, double c, double period) {
  const double delta = std::remainder(theta - c, period);
  return std::abs(delta) < kPi / 2 && r * std::abs(std::sin(delta)) <= kBoundaryTol;
}

[[noreturn]] void on_boundary(const char* what) {
  fail(ErrorCode::AtomOnBoundary, std::string("atom on the boundary of ") + what);
}

double halfspace_fraction(const OrientedHyperplane& h, const Vector& p, BoundaryRule rule) {
  const double s = h.signed_distance(p);
  if (s > kBoundaryTol) return 1.0;
  if (s < -kBoundaryTol) return 0.0;
  if (rule == BoundaryRule::Strict) on_boundary("a halfspace");
  return 0.5;
}

/// Signed smoothed side of p with respect to h: +-1 away from h, linear ramp over the
/// angular eps band for hyperplanes through the origin.
double smoothed_sign(const OrientedHyperplane& h, const Vector& p, double eps, BoundaryRule rule) {
  const double s = h.signed_distance(p);
  const bool boundary = std::abs(s) <= kBoundaryTol;
  if (boundary && rule == BoundaryRule::Strict) on_boundary("a double wedge");
  if (eps > 0.0 && h.offset == 0.0) {
    const double n = p.norm();
    if (n == 0.0) return 0.0;
    const double beta = std::asin(std::clamp(s / n, -1.0, 1.0));
    return std::clamp(2.0 * beta / eps, -1.0, 1.0);
  }
  if (boundary) return 0.0;
  return s > 0.0 ? 1.0 : -1.0;
}

double double_wedge_fraction(const DoubleWedge& dw, const Vector& p, double eps, BoundaryRule rule) {
  const double t1 = smoothed_sign(dw.h1, p, eps, rule);
  const double t2 = smoothed_sign(dw.h2, p, eps, rule);
  return 0.5 * (1.0 + t1 * t2);
}

double slab_fraction(const Slab& slab, const Vector& p, BoundaryRule rule) {
  const auto& offsets = slab.partition.offsets;
  const double s = slab.partition.normal.dot(p);
  const int j = slab.index;
  const int k = slab.partition.k();
  double share = 0.0;
  const bool above_lower = j == 0 || s - offsets[j - 1] > kBoundaryTol;
  const bool below_upper = j == k - 1 || offsets[j] - s > kBoundaryTol;
  const bool on_lower = j > 0 && std::abs(s - offsets[j - 1]) <= kBoundaryTol;
  const bool on_upper = j < k - 1 && std::abs(offsets[j] - s) <= kBoundaryTol;
  if ((on_lower || on_upper) && rule == BoundaryRule::Strict) on_boundary("a slab");
  if (above_lower && below_upper) share = 1.0;
  else if ((on_lower && below_upper) || (on_upper && above_lower)) share = 0.5;
  return share;
}

double fan_sector_fraction(const FanSector& s, const Vector& p, double eps, BoundaryRule rule) {
  const KFan& fan = s.fan;
  const Vector v = p - fan.apex_point;
  const double a = fan.plane_frame.x.dot(v);
  const double b = fan.plane_frame.y.dot(v);
  const double theta = wrap_two_pi(std::atan2(b, a));
  const int k = fan.k();
  const double from = fan.cut_angles[s.index];
  const double to = s.index + 1 < k ? fan.cut_angles[s.index + 1] : fan.cut_angles[0] + kTwoPi;
  return sector_fraction(theta, std::hypot(a, b), from, to - from, kTwoPi, k, eps, rule);
}

double dw_pair_fraction(const DwPair& s, const Vector& p, double eps, BoundaryRule rule) {
  const DwFan& fan = s.fan;
  const Vector v = p - fan.apex_point;
  const double a = fan.plane_frame.x.dot(v);
  const double b = fan.plane_frame.y.dot(v);
  const double theta = wrap_period(std::atan2(b, a), kPi);
  const int k = fan.k();
  const double from = fan.line_angles[s.index];
  const double to = s.index + 1 < k ? fan.line_angles[s.index + 1] : fan.line_angles[0] + kPi;
  return sector_fraction(theta, std::hypot(a, b), from, to - from, kPi, k, eps, rule);
}

double cone_membership(const KCone& cone, const Vector& p, double eps, BoundaryRule rule) {
  Matrix one(p.size(), 1);
  one.col(0) = p;
  const double phi = cone_angles(cone, one)[0];
  const Vector c = cone.subspace_basis.transpose() * p - cone.apex_point;
  return cone_fraction(phi, c.norm(), cone.half_angle, eps, rule);
}

double base_membership(const BaseRegion& region, const Vector& p, double eps, BoundaryRule rule) {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Halfspace>) return halfspace_fraction(r.h, p, rule);
        else if constexpr (std::is_same_v<T, FanSector>) return fan_sector_fraction(r, p, eps, rule);
        else if constexpr (std::is_same_v<T, KCone>) return cone_membership(r, p, eps, rule);
        else if constexpr (std::is_same_v<T, DoubleWedge>) return double_wedge_fraction(r, p, eps, rule);
        else if constexpr (std::is_same_v<T, DwPair>) return dw_pair_fraction(r, p, eps, rule);
        else return slab_fraction(r, p, rule);
      },
      region);
}

/// Throws DegenerateProjection when `share` of the projected mass sits inside a 1e-9 arc.
void check_spread(std::vector<std::pair<double, double>> angle_weight, double period, double total,
                  double share) {
  if (angle_weight.empty()) fail(ErrorCode::DegenerateProjection, "all mass lies on the apex");
  std::sort(angle_weight.begin(), angle_weight.end());
  const std::size_t n = angle_weight.size();
  double window = 0.0;
  std::size_t j = 0;
  // Two passes over the doubled sequence cover windows that wrap around the period.
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) {
      j = i;
      window = 0.0;
    }
    while (j < i + n) {
      const auto& [aj, wj] = angle_weight[j % n];
      const double pos = aj + (j >= n ? period : 0.0);
      if (pos - angle_weight[i].first > 1e-9) break;
      window += wj;
      ++j;
    }
    if (window >= share * total - 1e-15 * total)
      fail(ErrorCode::DegenerateProjection, "projected mass concentrates within a 1e-9 arc");
    window -= angle_weight[i].second;
  }
}

void add_arc(std::vector<detail::Piece>& pieces, double center, double eps, double w, double period) {
  if (eps <= 0.0) {
    pieces.push_back({center, center, w});
    return;
  }
  const double lo = center - eps / 2;
  const double hi = center + eps / 2;
  if (lo < 0.0) {
    pieces.push_back({lo + period, period, w * (-lo) / eps});
    pieces.push_back({0.0, hi, w * hi / eps});
  } else if (hi > period) {
    pieces.push_back({lo, period, w * (period - lo) / eps});
    pieces.push_back({0.0, hi - period, w * (hi - period) / eps});
  } else {
    pieces.push_back({lo, hi, w});
  }
}

/// Plateau-midpoint circular quantiles at cumulative levels (level 0 first), relative to
/// the start angle, nondecreasing and spanning less than one period.
std::vector<double> circular_quantiles(const Eigen::ArrayXd& angles, const Eigen::ArrayXd& radius,
                                       const Vector& weights, double start, double eps,
                                       double period, const std::vector<double>& fractions,
                                       double& apex_weight) {
  std::vector<detail::Piece> pieces;
  std::vector<std::pair<double, double>> spread;
  pieces.reserve(2 * angles.size());
  apex_weight = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    total += weights[i];
    if (radius[i] <= kBoundaryTol) {
      apex_weight += weights[i];
      continue;
    }
    const double c = wrap_period(angles[i] - start, period);
    add_arc(pieces, c, eps, weights[i], period);
    spread.emplace_back(c, weights[i]);
  }
  const double min_fraction = *std::min_element(fractions.begin(), fractions.end());
  check_spread(spread, period, total, 1.0 - min_fraction);

  const detail::Cumulative cum(pieces, 0.0, period);
  const double projected = cum.total();
  const double tol = 1e-12 * total;
  const int k = static_cast<int>(fractions.size());
  std::vector<double> mids;
  mids.reserve(fractions.size());
  mids.push_back(0.5 * ((cum.first_reaching(projected - tol) - period) + cum.first_exceeding(tol)));
  double level = 0.0;
  for (int j = 0; j + 1 < k; ++j) {
    level += fractions[j] * total - apex_weight / k;
    mids.push_back(cum.plateau_midpoint(level, tol));
  }
  for (std::size_t j = 1; j < mids.size(); ++j) {
    if (!(mids[j] > mids[j - 1]))
      fail(ErrorCode::DegenerateProjection, "quantile cuts coincide");
  }
  if (!(mids.back() < mids.front() + period))
    fail(ErrorCode::DegenerateProjection, "quantile cuts wrap past a full period");
  return mids;
}

std::vector<double> normalized_angles(const std::vector<double>& mids, double start, double period) {
  std::vector<double> out(mids.size());
  const double first = start + mids.front();
  const double shift = wrap_period(first, period) - first;
  for (std::size_t j = 0; j < mids.size(); ++j) out[j] = start + mids[j] + shift;
  return out;
}

}  // namespace

PlanarCoords planar_coords(const Frame2& plane, const Vector& apex_point, const Matrix& atoms) {
  if (atoms.rows() != plane.dim() || apex_point.size() != plane.dim())
    fail(ErrorCode::DimensionMismatch, "planar_coords: dimension mismatch");
  const Vector ax = plane.x.vec();
  const Vector ay = plane.y.vec();
  const Eigen::ArrayXd a = (atoms.transpose() * ax).array() - ax.dot(apex_point);
  const Eigen::ArrayXd b = (atoms.transpose() * ay).array() - ay.dot(apex_point);
  PlanarCoords pc;
  pc.angle.resize(a.size());
  pc.radius.resize(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    pc.angle[i] = wrap_two_pi(std::atan2(b[i], a[i]));
    pc.radius[i] = std::hypot(a[i], b[i]);
  }
  return pc;
}

Eigen::ArrayXd cone_angles(const KCone& cone, const Matrix& atoms) {
  if (atoms.rows() != cone.dim()) fail(ErrorCode::DimensionMismatch, "cone_angles: dimension mismatch");
  const Matrix c = (cone.subspace_basis.transpose() * atoms).colwise() - cone.apex_point;
  const Vector& axis = cone.axis.vec();
  Eigen::ArrayXd phi(atoms.cols());
  for (Eigen::Index i = 0; i < atoms.cols(); ++i) {
    const double n = c.col(i).norm();
    if (n <= kBoundaryTol) {
      phi[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double along = c.col(i).dot(axis);
    const double across = (c.col(i) - along * axis).norm();
    phi[i] = std::atan2(across, along);
  }
  return phi;
}

double sector_fraction(double theta, double radius, double from, double length, double period,
                       int sectors, double eps, BoundaryRule rule) {
  if (radius <= kBoundaryTol) {
    if (rule == BoundaryRule::Strict) on_boundary("a fan (apex)");
    return 1.0 / sectors;
  }
  if (length >= period) return 1.0;
  const bool boundary = near_ray(theta, radius, from, period) ||
                        near_ray(theta, radius, from + length, period);
  if (boundary && rule == BoundaryRule::Strict) on_boundary("a fan sector");
  if (eps > 0.0) {
    const double s = wrap_period(theta - eps / 2 - from, period);
    const double overlap =
        interval_overlap(s, s + eps, 0.0, length) + interval_overlap(s, s + eps, period, period + length);
    return std::min(1.0, overlap / eps);
  }
  if (boundary) return 0.5;
  return wrap_period(theta - from, period) < length ? 1.0 : 0.0;
}

double cone_fraction(double phi, double radius, double half_angle, double eps, BoundaryRule rule) {
  if (std::isnan(phi)) {
    if (rule == BoundaryRule::Strict) on_boundary("a cone (apex)");
    return 0.5;
  }
  const double delta = phi - half_angle;
  const bool boundary = std::abs(delta) < kPi / 2 && radius * std::abs(std::sin(delta)) <= kBoundaryTol;
  if (boundary && rule == BoundaryRule::Strict) on_boundary("a cone");
  if (eps > 0.0) return std::clamp(-delta / eps + 0.5, 0.0, 1.0);
  if (boundary) return 0.5;
  return phi < half_angle ? 1.0 : 0.0;
}

std::optional<int> fan_sector_index(const KFan& fan, const Vector& p) {
  validate(fan);
  const Vector v = p - fan.apex_point;
  const double a = fan.plane_frame.x.dot(v);
  const double b = fan.plane_frame.y.dot(v);
  const double r = std::hypot(a, b);
  if (r <= kBoundaryTol) return std::nullopt;
  const double theta = wrap_two_pi(std::atan2(b, a));
  for (double c : fan.cut_angles)
    if (near_ray(theta, r, c, kTwoPi)) return std::nullopt;
  const int k = fan.k();
  for (int j = 0; j < k; ++j) {
    const double from = fan.cut_angles[j];
    const double to = j + 1 < k ? fan.cut_angles[j + 1] : fan.cut_angles[0] + kTwoPi;
    if (wrap_two_pi(theta - from) < to - from) return j + 1;
  }
  return std::nullopt;
}

Side cone_contains(const KCone& cone, const Vector& p) {
  const double f = cone_membership(cone, p, 0.0, BoundaryRule::Half);
  if (f == 0.5) return Side::Boundary;
  return f > 0.5 ? Side::Inside : Side::Outside;
}

Side double_wedge_contains(const DoubleWedge& dw, const Vector& p) {
  const double s1 = dw.h1.signed_distance(p);
  const double s2 = dw.h2.signed_distance(p);
  if (std::abs(s1) <= kBoundaryTol || std::abs(s2) <= kBoundaryTol) return Side::Boundary;
  return (s1 > 0) == (s2 > 0) ? Side::Inside : Side::Outside;
}

KFan build_equipartition_fan(const Frame2& plane, const Vector& apex_point,
                             const MassDistribution& reference, std::span<const double> targets,
                             double start_angle, std::optional<double> smoothing) {
  require(targets.size() >= 2, "a fan needs at least two sectors");
  double sum = 0.0;
  for (double t : targets) {
    require(t > 0.0, "fan targets must be positive");
    sum += t;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "fan targets must sum to 1");
  const double eps = smoothing.value_or(reference.smoothing_radius);
  const PlanarCoords pc = planar_coords(plane, apex_point, reference.atoms);
  double apex_weight = 0.0;
  const std::vector<double> fractions(targets.begin(), targets.end());
  const auto mids = circular_quantiles(pc.angle, pc.radius, reference.weights, start_angle, eps,
                                       kTwoPi, fractions, apex_weight);
  return KFan{plane, apex_point, normalized_angles(mids, start_angle, kTwoPi)};
}

DwFan build_dw_fan(const Frame2& plane, const Vector& apex_point, const MassDistribution& reference,
                   int k, double start_angle, std::optional<double> smoothing) {
  require(k >= 1, "a double-wedge fan needs k >= 1");
  const double eps = smoothing.value_or(reference.smoothing_radius);
  PlanarCoords pc = planar_coords(plane, apex_point, reference.atoms);
  for (Eigen::Index i = 0; i < pc.angle.size(); ++i) pc.angle[i] = wrap_period(pc.angle[i], kPi);
  double apex_weight = 0.0;
  const std::vector<double> fractions(static_cast<std::size_t>(k), 1.0 / k);
  const auto mids = circular_quantiles(pc.angle, pc.radius, reference.weights,
                                       wrap_period(start_angle, kPi), eps, kPi, fractions, apex_weight);
  return DwFan{plane, apex_point, normalized_angles(mids, wrap_period(start_angle, kPi), kPi)};
}

KCone build_bisecting_cone(const OrientedFlag& flag, const Vector& apex_point,
                           const MassDistribution& total, std::optional<double> smoothing) {
  if (flag.dim() != total.dim() || apex_point.size() != total.dim())
    fail(ErrorCode::DimensionMismatch, "build_bisecting_cone: dimension mismatch");
  // Solve for one orientation of the line only; the other is its exact complement.
  const Vector line = flag.basis.col(0);
  for (Eigen::Index i = 0; i < line.size(); ++i) {
    if (line[i] == 0.0) continue;
    if (line[i] < 0.0) return complement(build_bisecting_cone(flag.flipped(), apex_point, total, smoothing));
    break;
  }
  const double eps = smoothing.value_or(total.smoothing_radius);
  KCone cone{flag.basis, flag.basis.transpose() * apex_point, UnitVector::axis(flag.k(), 0), kPi / 2};
  const Eigen::ArrayXd phi = cone_angles(cone, total.atoms);
  std::vector<detail::Piece> pieces;
  pieces.reserve(phi.size());
  double apex_weight = 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double w = total.weights[i];
    sum += w;
    if (std::isnan(phi[i])) {
      apex_weight += w;
      continue;
    }
    pieces.push_back({phi[i] - eps / 2, phi[i] + eps / 2, w});
  }
  const detail::Cumulative cum(pieces, -1.0, kPi + 1.0);
  const double level = sum / 2 - apex_weight / 2;
  cone.half_angle = std::clamp(cum.plateau_midpoint(level, 1e-12 * sum), 0.0, kPi);
  const double inside = sum / 2 + 0.5 * cone_imbalance(cone, total, eps);
  if (std::abs(inside - sum / 2) > 1e-10 * sum)
    fail(ErrorCode::NoBisection, "no half angle bisects the total mass");
  return cone;
}

KCone complement(const KCone& cone) {
  return KCone{cone.subspace_basis, cone.apex_point, -cone.axis, kPi - cone.half_angle};
}

DoubleWedge complement(const DoubleWedge& dw) { return DoubleWedge{dw.h1, dw.h2.reoriented()}; }

Halfspace complement(const Halfspace& h) { return Halfspace{h.h.reoriented()}; }

Region complement(const Region& region) {
  auto base = [](const auto& r) -> BaseRegion {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, Halfspace> || std::is_same_v<T, KCone> ||
                  std::is_same_v<T, DoubleWedge>)
      return complement(r);
    else
      fail(ErrorCode::InvalidArgument, "complement is defined for halfspaces, cones and double wedges");
  };
  return std::visit(
      [&](const auto& r) -> Region {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Lifted>) return Lifted{std::visit(base, r.region)};
        else
          return std::visit([](const auto& b) -> Region { return b; }, base(r));
      },
      region);
}

double membership(const Region& region, const Vector& p, double eps, BoundaryRule rule) {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Lifted>) return base_membership(r.region, gnomonic_lift(p), eps, rule);
        else
          return base_membership(BaseRegion{r}, p, eps, rule);
      },
      region);
}

void validate(const KFan& fan) {
  const auto& c = fan.cut_angles;
  require(c.size() >= 2, "a k-fan needs k >= 2 cut angles");
  require(fan.apex_point.size() == fan.dim(), "fan apex dimension mismatch");
  require(c.front() >= 0.0 && c.front() < kTwoPi, "first cut angle must lie in [0, 2 pi)");
  for (std::size_t j = 1; j < c.size(); ++j) require(c[j] > c[j - 1], "cut angles must increase");
  require(c.back() < c.front() + kTwoPi, "cut angles must span less than one turn");
}

void validate(const KCone& cone) {
  require(cone.k() >= 1 && cone.k() <= cone.dim(), "cone subspace dimension out of range");
  const Matrix g = cone.subspace_basis.transpose() * cone.subspace_basis;
  require((g - Matrix::Identity(cone.k(), cone.k())).norm() <= 1e-12 * cone.k(),
          "cone subspace basis is not orthonormal");
  require(cone.apex_point.size() == cone.k() && cone.axis.size() == cone.k(),
          "cone apex/axis must be in subspace coordinates");
  require(cone.half_angle >= 0.0 && cone.half_angle <= kPi, "cone half angle must be in [0, pi]");
}

void validate(const DwFan& fan) {
  const auto& c = fan.line_angles;
  require(!c.empty(), "a double-wedge fan needs at least one line");
  require(c.front() >= 0.0 && c.front() < kPi, "first line angle must lie in [0, pi)");
  for (std::size_t j = 1; j < c.size(); ++j) require(c[j] > c[j - 1], "line angles must increase");
  require(c.back() < c.front() + kPi, "line angles must span less than a half turn");
}

void validate(const SlabPartition& slabs) {
  for (std::size_t j = 1; j < slabs.offsets.size(); ++j)
    require(slabs.offsets[j] > slabs.offsets[j - 1], "slab offsets must increase");
}

std::vector<double> fan_sector_measures(const KFan& fan, const MassDistribution& mu, double eps,
                                        BoundaryRule rule) {
  const PlanarCoords pc = planar_coords(fan.plane_frame, fan.apex_point, mu.atoms);
  const int k = fan.k();
  std::vector<double> out(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    const double from = fan.cut_angles[j];
    const double to = j + 1 < k ? fan.cut_angles[j + 1] : fan.cut_angles[0] + kTwoPi;
    double m = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      m += mu.weights[i] * sector_fraction(pc.angle[i], pc.radius[i], from, to - from, kTwoPi, k, eps, rule);
    out[j] = m;
  }
  return out;
}

std::vector<double> dw_pair_measures(const DwFan& fan, const MassDistribution& mu, double eps,
                                     BoundaryRule rule) {
  PlanarCoords pc = planar_coords(fan.plane_frame, fan.apex_point, mu.atoms);
  const int k = fan.k();
  std::vector<double> out(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    const double from = fan.line_angles[j];
    const double to = j + 1 < k ? fan.line_angles[j + 1] : fan.line_angles[0] + kPi;
    double m = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      m += mu.weights[i] *
           sector_fraction(wrap_period(pc.angle[i], kPi), pc.radius[i], from, to - from, kPi, k, eps, rule);
    out[j] = m;
  }
  return out;
}

double cone_imbalance(const KCone& cone, const MassDistribution& mu, double eps, BoundaryRule rule) {
  const Eigen::ArrayXd phi = cone_angles(cone, mu.atoms);
  const Matrix c = (cone.subspace_basis.transpose() * mu.atoms).colwise() - cone.apex_point;
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    s += mu.weights[i] * (2.0 * cone_fraction(phi[i], c.col(i).norm(), cone.half_angle, eps, rule) - 1.0);
  return s;
}

}  // namespace mpart
