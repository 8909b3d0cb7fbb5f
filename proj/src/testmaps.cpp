#include "mpart/testmaps.hpp"

#include <algorithm>
#include <cmath>

namespace mpart {
namespace {

bool line_is_canonical(const OrientedFlag& flag) {
  for (Eigen::Index i = 0; i < flag.basis.rows(); ++i) {
    const double v = flag.basis(i, 0);
    if (v != 0.0) return v > 0.0;
  }
  return true;
}

/// Smoothed sign of an atom against a hyperplane through the origin.
double side(const Vector& n, const Vector& p, double eps) {
  const double s = n.dot(p);
  if (eps > 0.0) {
    const double r = p.norm();
    if (r == 0.0) return 0.0;
    return std::clamp(2.0 * std::asin(std::clamp(s / r, -1.0, 1.0)) / eps, -1.0, 1.0);
  }
  if (std::abs(s) <= kBoundaryTol) return 0.0;
  return s > 0.0 ? 1.0 : -1.0;
}

std::string inequality(int lhs_coef, int lhs_sub, int d, int m, int f) {
  const int lhs = lhs_coef * d - lhs_sub;
  const int rhs = m * f;
  std::string s = std::to_string(lhs_coef) + "d";
  if (lhs_sub > 0) s += "-" + std::to_string(lhs_sub);
  return s + " = " + std::to_string(lhs) + (lhs >= rhs ? " >= " : " < ") + std::to_string(rhs) +
         " = m(k-1)";
}

}  // namespace

double ResidualVector::inf_norm() const {
  double r = 0.0;
  for (double c : components) r = std::max(r, std::abs(c));
  return r;
}

FanEvaluation fan_evaluate(const Instance& inst, const Frame2& cfg, std::span<const double> targets,
                           std::optional<int> ref_index, std::optional<double> smoothing,
                           double start_angle, const std::optional<Vector>& apex) {
  require(!inst.masses.empty(), "fan residual needs at least one mass");
  if (cfg.dim() != inst.dimension) fail(ErrorCode::DimensionMismatch, "fan frame dimension mismatch");
  const Vector apex_point = apex.value_or(Vector::Zero(inst.dimension));
  const int m = inst.mass_count();
  std::vector<int> tested;
  MassDistribution reference;
  if (ref_index) {
    require(*ref_index >= 0 && *ref_index < m, "reference index out of range");
    reference = inst.masses[*ref_index];
    for (int i = 0; i < m; ++i)
      if (i != *ref_index) tested.push_back(i);
  } else {
    reference = combine(inst.masses);
    for (int i = 0; i + 1 < m; ++i) tested.push_back(i);
  }
  FanEvaluation out{build_equipartition_fan(cfg, apex_point, reference, targets, start_angle, smoothing), {}};
  const int k = out.fan.k();
  for (int i : tested) {
    const auto& mu = inst.masses[i];
    const double total = total_mass(mu);
    const auto measures = fan_sector_measures(out.fan, mu, smoothing.value_or(mu.smoothing_radius));
    for (int j = 0; j < k; ++j) out.residual.components.push_back(measures[j] / total - targets[j]);
    out.residual.blocks.push_back(k);
  }
  return out;
}

ResidualVector fan_residual(const Instance& inst, const Frame2& cfg, std::span<const double> targets,
                            std::optional<int> ref_index, std::optional<double> smoothing) {
  return fan_evaluate(inst, cfg, targets, ref_index, smoothing).residual;
}

ConeEvaluation cone_evaluate(const Instance& inst, const OrientedFlag& flag, const Vector& apex_point,
                             std::optional<double> smoothing) {
  if (!line_is_canonical(flag)) {
    // Evaluated on the opposite line so that the map is exactly antipodal.
    ConeEvaluation e = cone_evaluate(inst, flag.flipped(), apex_point, smoothing);
    e.cone = complement(e.cone);
    for (double& c : e.residual.components) c = -c;
    return e;
  }
  const MassDistribution total = combine(inst.masses);
  ConeEvaluation out{build_bisecting_cone(flag, apex_point, total, smoothing), {}};
  for (int i = 0; i + 1 < inst.mass_count(); ++i) {
    const auto& mu = inst.masses[i];
    out.residual.components.push_back(
        cone_imbalance(out.cone, mu, smoothing.value_or(mu.smoothing_radius)) / total_mass(mu));
    out.residual.blocks.push_back(1);
  }
  return out;
}

ResidualVector cone_residual(const Instance& inst, const OrientedFlag& flag, const Vector& apex_point,
                             std::optional<double> smoothing) {
  return cone_evaluate(inst, flag, apex_point, smoothing).residual;
}

ResidualVector dw_residual(std::span<const MassDistribution> family, const UnitVector& h1,
                           const UnitVector& h2, std::optional<double> smoothing) {
  ResidualVector out;
  for (const auto& mu : family) {
    if (mu.dim() != h1.size() || mu.dim() != h2.size())
      fail(ErrorCode::DimensionMismatch, "dw_residual: hyperplane dimension differs from mass dimension");
    const double eps = smoothing.value_or(mu.smoothing_radius);
    double s = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const auto p = mu.atoms.col(i);
      s += mu.weights[i] * side(h1.vec(), p, eps) * side(h2.vec(), p, eps);
    }
    out.components.push_back(s / total_mass(mu));
    out.blocks.push_back(1);
  }
  return out;
}

ResidualVector zk_shift(const ResidualVector& v, int shift) {
  if (v.blocks.empty()) {
    if (!v.components.empty()) fail(ErrorCode::BlockMismatch, "residual has components but no blocks");
    return v;
  }
  const int k = v.blocks.front();
  std::size_t total = 0;
  for (int b : v.blocks) {
    if (b != k || b <= 0) fail(ErrorCode::BlockMismatch, "zk_shift needs blocks of equal size");
    total += static_cast<std::size_t>(b);
  }
  if (total != v.components.size()) fail(ErrorCode::BlockMismatch, "block sizes do not cover the residual");
  const int s = ((shift % k) + k) % k;
  ResidualVector out = v;
  for (std::size_t b = 0; b < v.blocks.size(); ++b) {
    const std::size_t base = b * static_cast<std::size_t>(k);
    for (int j = 0; j < k; ++j) out.components[base + j] = v.components[base + ((j - s + k) % k)];
  }
  return out;
}

KFan zk_shift(const KFan& fan, int shift) {
  const int k = fan.k();
  if (k < 2) fail(ErrorCode::BlockMismatch, "zk_shift needs a fan with k >= 2");
  const int s = ((shift % k) + k) % k;
  std::vector<double> cuts(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const int src = (j + s) % k;
    cuts[j] = fan.cut_angles[src] + (j + s >= k ? kTwoPi : 0.0);
  }
  const double offset = wrap_two_pi(cuts.front()) - cuts.front();
  for (double& c : cuts) c += offset;
  return KFan{fan.plane_frame, fan.apex_point, cuts};
}

EquivarianceReport check_equivariance(const Instance& inst, const Frame2& cfg, int k, double tol,
                                      std::optional<int> ref_index, std::optional<double> smoothing) {
  require(k >= 2, "equivariance check needs k >= 2");
  const std::vector<double> targets(static_cast<std::size_t>(k), 1.0 / k);
  const FanEvaluation base = fan_evaluate(inst, cfg, targets, ref_index, smoothing);
  const Frame2 moved = cfg.rotated(base.fan.cut_angles[1]);
  const ResidualVector shifted = fan_residual(inst, moved, targets, ref_index, smoothing);
  const ResidualVector expected = zk_shift(base.residual, k - 1);
  EquivarianceReport r;
  for (std::size_t i = 0; i < expected.size(); ++i)
    r.max_deviation = std::max(r.max_deviation, std::abs(shifted.components[i] - expected.components[i]));
  r.pass = r.max_deviation <= tol;
  return r;
}

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

bool is_product_of_distinct_odd_primes(int k) {
  if (k < 3 || k % 2 == 0) return false;
  for (int q = 3; q * q <= k; q += 2) {
    if (k % q != 0) continue;
    k /= q;
    if (k % q == 0) return false;
  }
  return true;
}

Feasibility feasibility(int d, int k, int m, Variant variant) {
  if (d < 1 || k < 1 || m < 1) return {false, "d, k and m must be positive"};
  switch (variant) {
    case Variant::FanOrigin:
    case Variant::FanGeneral:
    case Variant::Stripes: {
      if (!is_product_of_distinct_odd_primes(k))
        return {false, "k = " + std::to_string(k) + " is not a product of pairwise distinct odd primes"};
      const bool origin = variant == Variant::FanOrigin;
      const std::string ineq = origin ? inequality(2, 3, d, m, k - 1) : inequality(2, 1, d, m, k - 1);
      const bool ok = (origin ? 2 * d - 3 : 2 * d - 1) >= m * (k - 1);
      return {ok, ok ? "hypothesis holds: " + ineq : "hypothesis fails: " + ineq};
    }
    case Variant::Cone: {
      if (m > d) return {false, std::to_string(m + 1) + " masses exceed d + 1 = " + std::to_string(d + 1)};
      if (k > d) return {false, "k = " + std::to_string(k) + " exceeds d = " + std::to_string(d)};
      if (k == 1)
        return {false, "a 1-cone is a halfspace, which cannot bisect d + 1 masses in general; need 2 <= k <= d"};
      return {true, "hypothesis holds: " + std::to_string(m + 1) + " <= d + 1 masses and 2 <= k <= d"};
    }
    case Variant::DwShared: {
      // m families of k masses each.
      if (d % 2 == 1 && m <= d - 1 && k <= d)
        return {true, "hypothesis holds: d odd, at most d - 1 families of at most d masses"};
      if (d % 2 == 0 && m <= d && k <= d + 1)
        return {true, "hypothesis holds after lifting: d even, at most d families of at most d + 1 masses"};
      if (d % 2 == 1 && m <= d && k <= d + 1)
        return {true, "epsilon version only: d odd, at most d families of at most d + 1 masses"};
      return {false, std::to_string(m) + " families of " + std::to_string(k) +
                         " masses exceed the bound of d families of d + 1 masses"};
    }
  }
  return {false, "unknown variant"};
}

Feasibility qfan_feasibility(int d, int p, int q, int m, bool through_origin) {
  if (!is_odd_prime(p)) return {false, "p = " + std::to_string(p) + " is not an odd prime"};
  if (q < 2 || q >= p) return {false, "need 2 <= q < p"};
  const int lhs = through_origin ? 2 * d - 2 : 2 * d;
  const bool ok = lhs >= m * (p - 1);
  const std::string ineq = (through_origin ? "2d-2 = " : "2d = ") + std::to_string(lhs) +
                           (ok ? " >= " : " < ") + std::to_string(m * (p - 1)) + " = m(p-1)";
  return {ok, (ok ? "hypothesis holds: " : "hypothesis fails: ") + ineq};
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::FanOrigin: return "fan_origin";
    case Variant::FanGeneral: return "fan_general";
    case Variant::Cone: return "cone";
    case Variant::DwShared: return "dw_shared";
    case Variant::Stripes: return "stripes";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(const std::string& s) {
  for (Variant v : {Variant::FanOrigin, Variant::FanGeneral, Variant::Cone, Variant::DwShared, Variant::Stripes})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

}  // namespace mpart
