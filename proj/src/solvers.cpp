#include "mpart/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mpart/topology.hpp"

namespace mpart {
namespace {

constexpr int kDeskScaleDof = 6;
constexpr double kDegreeSmoothing = 0.05;
constexpr double kEndBracketScale = 100.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double final_smoothing(const Instance& inst, const SolverConfig& cfg) {
  return cfg.smoothing.value_or(inst.masses.front().smoothing_radius);
}

SearchSettings settings_for(const SolverConfig& cfg, double eps) {
  SearchSettings s;
  s.multistarts = cfg.multistarts;
  s.samples = std::max(16 * cfg.multistarts, 4 * cfg.grid_resolution * cfg.grid_resolution);
  s.max_refine_iters = cfg.max_refine_iters;
  s.tolerance = cfg.tolerance;
  s.seed = cfg.seed;
  s.final_eps = eps;
  return s;
}

Vector to_vector(const ResidualVector& r) {
  return Eigen::Map<const Vector>(r.components.data(), static_cast<Eigen::Index>(r.components.size()));
}

SolveReport refused(Status status, std::string message, Clock::time_point t0) {
  SolveReport r;
  r.status = status;
  r.message = std::move(message);
  r.wall_clock = seconds_since(t0);
  return r;
}

SolveReport exceeds_desk_scale(int dof, Clock::time_point t0) {
  return refused(Status::ExceedsDeskScale,
                 "search dimension " + std::to_string(dof) + " exceeds the desk-scale limit of " +
                     std::to_string(kDeskScaleDof),
                 t0);
}

Frame2 frame_of(const Matrix& q) { return Frame2{UnitVector(q.col(0)), UnitVector(q.col(1))}; }

/// Rotation whose first column is v.
Matrix basis_with_first(const Vector& v) {
  return rotation_taking(UnitVector::axis(v.size(), 0), UnitVector(v));
}

void finish(SolveReport& r, double tolerance) {
  if (r.status != Status::Infeasible && r.status != Status::ExceedsDeskScale)
    r.status = r.residual_smoothed <= tolerance ? Status::Found : Status::NotFound;
  if (r.status == Status::NotFound && r.message.empty())
    r.message = "no zero found within budget; best residual " + std::to_string(r.residual_smoothed);
}

/// Cuts of the wedge of a cone inside its own 2-plane, or nullopt for degenerate angles.
std::optional<KFan> cone_as_lifted_wedge(const KCone& cone) {
  if (cone.k() != 2) return std::nullopt;
  const double width = 2.0 * cone.half_angle;
  if (!(width > 1e-12 && width < kTwoPi - 1e-12)) return std::nullopt;
  const double beta = std::atan2(cone.axis[1], cone.axis[0]);
  const double c0 = wrap_two_pi(beta - cone.half_angle);
  Frame2 plane{UnitVector(cone.subspace_basis.col(0)), UnitVector(cone.subspace_basis.col(1))};
  return KFan{plane, cone.subspace_basis * cone.apex_point, {c0, c0 + width}};
}

std::vector<Vector> fibonacci_hemisphere(int n_sphere) {
  std::vector<Vector> out;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n_sphere; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n_sphere;
    if (z < 0.0) continue;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vector v(3);
    v << r * std::cos(golden * i), r * std::sin(golden * i), z;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> random_hemisphere(int dim, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  while (static_cast<int>(out.size()) < n) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal_draw(rng);
    if (v.norm() < 1e-9) continue;
    v.normalize();
    if (v[dim - 1] < 0.0) v = -v;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> hemisphere_grid(int dim, int n_sphere, std::uint64_t seed) {
  return dim == 3 ? fibonacci_hemisphere(n_sphere) : random_hemisphere(dim, n_sphere / 2, seed);
}

/// Smoothed signs of every atom of a family against a set of directions (rows).
Matrix side_table(const std::vector<Vector>& dirs, const Matrix& atoms, double eps) {
  Matrix t(static_cast<Eigen::Index>(dirs.size()), atoms.cols());
  const Eigen::RowVectorXd norms = atoms.colwise().norm();
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const Eigen::RowVectorXd s = dirs[a].transpose() * atoms;
    for (Eigen::Index i = 0; i < atoms.cols(); ++i) {
      const double x = std::clamp(s[i] / norms[i], -1.0, 1.0);
      t(static_cast<Eigen::Index>(a), i) = std::clamp(2.0 * std::asin(x) / eps, -1.0, 1.0);
    }
  }
  return t;
}

struct SharedLandscape {
  std::vector<Vector> outer;
  std::vector<Vector> inner;
  std::vector<double> surrogate;  // per outer h1: worst family of the best inner residual
  std::vector<std::vector<int>> best_inner;
  long evaluations = 0;
};

// For each h1 on a hemisphere grid, the best inner residual per family over a hemisphere
// grid of h2, at a coarse smoothing.
SharedLandscape shared_landscape(const std::vector<std::vector<MassDistribution>>& fam_masses, int dim,
                                 const SolverConfig& cfg) {
  const double coarse = 0.05;
  const int nf = static_cast<int>(fam_masses.size());
  const int per_dim = std::max(64, cfg.grid_resolution);
  SharedLandscape out;
  out.outer = hemisphere_grid(dim, std::min(8192, per_dim * per_dim), cfg.seed);
  out.inner = hemisphere_grid(dim, 256, cfg.seed + 1);
  std::vector<Matrix> inner_sides;
  std::vector<Matrix> weight_blocks;
  std::vector<Matrix> fam_atoms;
  for (const auto& fm : fam_masses) {
    const MassDistribution all = combine(fm);
    fam_atoms.push_back(all.atoms);
    inner_sides.push_back(side_table(out.inner, all.atoms, coarse));
    Matrix w = Matrix::Zero(all.size(), static_cast<Eigen::Index>(fm.size()));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < fm.size(); ++i) {
      const double total = total_mass(fm[i]);
      for (Eigen::Index a = 0; a < fm[i].size(); ++a) w(row++, static_cast<Eigen::Index>(i)) = fm[i].weights[a] / total;
    }
    weight_blocks.push_back(w);
  }
  out.surrogate.resize(out.outer.size());
  out.best_inner.assign(out.outer.size(), std::vector<int>(static_cast<std::size_t>(nf)));
  for (std::size_t o = 0; o < out.outer.size(); ++o) {
    double worst = 0.0;
    for (int f = 0; f < nf; ++f) {
      const Matrix t1 = side_table({out.outer[o]}, fam_atoms[f], coarse);
      const Matrix vals = inner_sides[f] * (t1.transpose().asDiagonal() * weight_blocks[f]);
      Eigen::Index arg = 0;
      const double best = vals.cwiseAbs().rowwise().maxCoeff().minCoeff(&arg);
      out.best_inner[o][static_cast<std::size_t>(f)] = static_cast<int>(arg);
      worst = std::max(worst, best);
      out.evaluations += static_cast<long>(out.inner.size());
    }
    out.surrogate[o] = worst;
  }
  return out;
}

std::vector<std::vector<int>> families_or_all(const Instance& inst) {
  std::vector<std::vector<int>> families = inst.families;
  if (families.empty()) {
    families.emplace_back(static_cast<std::size_t>(inst.mass_count()));
    std::iota(families.back().begin(), families.back().end(), 0);
  }
  return families;
}

}  // namespace

void SolverConfig::validate() const {
  require(tolerance > 0.0, "solver tolerance must be positive");
  require(grid_resolution >= 4, "grid resolution must be at least 4");
  require(multistarts >= 1, "multistarts must be at least 1");
  require(max_refine_iters >= 1, "maxRefineIters must be at least 1");
  if (smoothing) require(*smoothing >= 0.0, "smoothing must be nonnegative");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Found: return "Found";
    case Status::NotFound: return "NotFound";
    case Status::Infeasible: return "Infeasible";
    case Status::ExceedsDeskScale: return "ExceedsDeskScale";
  }
  return "Unknown";
}

std::optional<KFan> decode_lifted_fan(const KFan& lifted, bool& apex_at_infinity) {
  apex_at_infinity = false;
  const Eigen::Index dd = lifted.dim() - 1;
  if (dd < 2) return std::nullopt;
  const Vector& x = lifted.plane_frame.x.vec();
  const Vector& y = lifted.plane_frame.y.vec();
  Matrix mt(dd, 2);
  mt.col(0) = x.head(dd);
  mt.col(1) = y.head(dd);
  Eigen::Vector2d c(x[dd], y[dd]);
  Eigen::HouseholderQR<Matrix> qr(mt);
  Matrix q = qr.householderQ() * Matrix::Identity(dd, 2);
  Eigen::Matrix2d r = qr.matrixQR().topLeftCorner(2, 2).triangularView<Eigen::Upper>();
  if (std::abs(r(0, 0)) < 1e-12 || std::abs(r(1, 1)) < 1e-12) return std::nullopt;
  Eigen::Matrix2d b = r.transpose();
  const Vector apex = -q * b.inverse() * c;
  if (b.determinant() < 0.0) {
    q.col(1) = -q.col(1);
    b.col(1) = -b.col(1);
  }
  const Eigen::Matrix2d binv = b.inverse();
  std::vector<double> cuts;
  for (double theta : lifted.cut_angles) {
    const Eigen::Vector2d w = binv * Eigen::Vector2d(std::cos(theta), std::sin(theta));
    const double phi = wrap_two_pi(std::atan2(w[1], w[0]));
    if (cuts.empty()) cuts.push_back(phi);
    else cuts.push_back(cuts.back() + wrap_two_pi(phi - wrap_two_pi(cuts.back())));
  }
  apex_at_infinity = !(apex.norm() <= 1e6);
  KFan out{Frame2{UnitVector(q.col(0)), UnitVector(q.col(1))}, apex, cuts};
  for (std::size_t j = 1; j < cuts.size(); ++j)
    if (!(cuts[j] > cuts[j - 1])) return std::nullopt;
  if (!(cuts.back() < cuts.front() + kTwoPi)) return std::nullopt;
  return out;
}

SolveReport solve_cone(const Instance& inst, int k, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  const int m = inst.mass_count() - 1;
  // Extra masses are searched anyway (no guarantee); only the cone type is a hard limit.
  const Feasibility feas = feasibility(d, k, std::min(m, d), Variant::Cone);
  if (!feas.ok) return refused(Status::Infeasible, feas.explanation, t0);
  const int dim = d + 1;
  const ManifoldSpec spec{{RotationFactor::flag(dim, k)}, {}};
  if (spec.dof() > kDeskScaleDof) return exceeds_desk_scale(spec.dof(), t0);

  const Instance lifted = lift_instance(inst);
  const double eps = final_smoothing(inst, cfg);
  const Vector origin = Vector::Zero(dim);
  auto flag_of = [k](const ManifoldPoint& p) { return OrientedFlag{p.rotations[0].leftCols(k)}; };
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    return to_vector(cone_residual(lifted, flag_of(p), origin, e));
  };
  const SearchResult found = search_zero(spec, fn, settings_for(cfg, eps));

  SolveReport rep;
  rep.evaluations = found.evaluations;
  if (m > d) rep.message = std::to_string(m + 1) + " masses exceed d + 1; no existence guarantee";
  if (found.point.rotations.empty()) {
    rep.message = "every sampled configuration was degenerate";
    finish(rep, cfg.tolerance);
    rep.wall_clock = seconds_since(t0);
    return rep;
  }
  const OrientedFlag flag = flag_of(found.point);
  const ConeEvaluation ce = cone_evaluate(lifted, flag, origin, eps);
  rep.config = Flag{flag};
  rep.residual_smoothed = 0.0;
  rep.residual_raw = 0.0;
  for (const auto& mu : lifted.masses) {
    const double total = total_mass(mu);
    const double inside = region_measure(mu, ce.cone, {BoundaryRule::Half, eps}) / total;
    rep.fractions.push_back({inside, 1.0 - inside});
    rep.residual_smoothed = std::max(rep.residual_smoothed, std::abs(2.0 * inside - 1.0));
    rep.residual_raw = std::max(rep.residual_raw, std::abs(cone_imbalance(ce.cone, mu, 0.0) / total));
  }
  const ResidualVector flipped = cone_residual(lifted, flag.flipped(), origin, eps);
  double anti = 0.0;
  for (std::size_t i = 0; i < flipped.size(); ++i)
    anti = std::max(anti, std::abs(flipped.components[i] + ce.residual.components[i]));
  rep.certificates.push_back({"antipodality", anti, anti == 0.0, "|f(-l) + f(l)| over the tested masses"});

  ConeSolution sol{ce.cone, true, std::nullopt};
  if (auto wedge = cone_as_lifted_wedge(ce.cone)) {
    bool at_infinity = false;
    if (auto planar = decode_lifted_fan(*wedge, at_infinity)) sol.decoded = DecodedWedge{*planar, 0, at_infinity};
  }
  rep.solution = sol;
  finish(rep, cfg.tolerance);
  rep.wall_clock = seconds_since(t0);
  return rep;
}

ResidualVector apex_line_residual(const Instance& inst, const Line& g, double t, const UnitVector& direction,
                                  std::optional<double> smoothing) {
  const int d = inst.dimension;
  Matrix basis(d, d);
  basis.col(0) = direction.vec();
  basis.rightCols(d - 1) = orthonormal_complement(direction.vec());
  return cone_residual(inst, OrientedFlag{basis}, g.point + t * g.direction.vec(), smoothing);
}

namespace {

struct MassSpread {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double radius = 0.0;  // largest atom distance from the centroid
};

MassSpread mass_spread(const Instance& inst) {
  MassSpread out;
  double weight = 0.0;
  for (const auto& mu : inst.masses) {
    out.centroid += mu.atoms * mu.weights;
    weight += mu.weights.sum();
  }
  out.centroid /= weight;
  for (const auto& mu : inst.masses)
    out.radius = std::max(out.radius, (mu.atoms.colwise() - out.centroid).colwise().norm().maxCoeff());
  return out;
}

}  // namespace

double apex_line_end_parameter(const Instance& inst, const Line& g) {
  return kEndBracketScale * std::max(1.0, instance_radius(inst) + g.point.norm());
}

int apex_line_degree(const Instance& inst, const Line& g, double t, int level, std::optional<double> smoothing) {
  require(inst.dimension == 3, "apex-line degree is computed for d = 3");
  const Vector apex = g.point + t * g.direction.vec();
  const MassSpread spread = mass_spread(inst);
  Eigen::Vector3d axis = spread.centroid - Eigen::Vector3d(apex);
  const double dist = axis.norm();
  axis = dist < 1e-12 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d(axis / dist);
  // Angular radius of the masses seen from the apex; the map only varies within about this
  // angle of the two poles, so the smoothing and the mesh follow it.
  const double seen = dist > spread.radius ? std::asin(spread.radius / dist) : kPi / 2;
  const double eps = smoothing.value_or(std::min(kDegreeSmoothing, 0.25 * seen));
  const double scale = std::min(1.0, 2.0 * std::tan(std::min(seen, kPi / 4)));
  // Degree-1 reparametrization tan(phi') = scale tan(phi), fixing the equator and both poles.
  const auto magnify = [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const double c = std::clamp(x.dot(axis), -1.0, 1.0);
    const Eigen::Vector3d w = x - c * axis;
    const double wn = w.norm();
    if (wn < 1e-15) return x;
    const double phi = std::atan2(wn, c);
    const double moved = phi <= kPi / 2 ? std::atan(scale * std::tan(phi)) : kPi - std::atan(scale * std::tan(kPi - phi));
    return std::cos(moved) * axis + std::sin(moved) * (w / wn);
  };
  const SphereMap f = [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const ResidualVector r = apex_line_residual(inst, g, t, UnitVector(Vector(magnify(x))), eps);
    require(r.size() == 3, "apex-line degree needs exactly four masses");
    return Eigen::Vector3d(r.components[0], r.components[1], r.components[2]);
  };
  return sphere_map_degree(f, level).degree;
}

SolveReport solve_cone_apex_on_line(const Instance& inst, const Line& g, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  if (d % 2 == 0)
    return refused(Status::Infeasible, "InfeasibleDimension: the apex-on-line theorem needs odd d", t0);
  if (inst.mass_count() > d + 1)
    return refused(Status::Infeasible, "at most d + 1 masses can be bisected", t0);
  require(g.point.size() == d && g.direction.size() == d, "line dimension differs from the instance");
  const double bracket = 10.0 * std::max(1.0, instance_radius(inst) + g.point.norm());
  const ManifoldSpec spec{{RotationFactor::sphere(d)}, {{-bracket, bracket}}};
  if (spec.dof() > kDeskScaleDof) return exceeds_desk_scale(spec.dof(), t0);

  SolveReport rep;
  std::optional<int> lo;
  std::optional<int> hi;
  const double end = apex_line_end_parameter(inst, g);
  if (d == 3 && inst.mass_count() == 4) {
    for (double t : {-end, end}) {
      Certificate c{t < 0 ? "degree_at_minus_T" : "degree_at_plus_T", 0.0, false, ""};
      try {
        const int deg = apex_line_degree(inst, g, t, 2);
        c.value = deg;
        c.pass = deg % 2 != 0;
        c.detail = "T = " + std::to_string(end);
        (t < 0 ? lo : hi) = deg;
      } catch (const Error& e) {
        c.detail = e.what();
      }
      rep.certificates.push_back(c);
    }
    const bool flip = lo && hi && *lo == -*hi && *lo % 2 != 0;
    rep.certificates.push_back({"end_degree_flip", flip ? 1.0 : 0.0, flip, "deg(f_-T) = -deg(f_+T)"});
  }

  const double eps = final_smoothing(inst, cfg);
  auto basis_of = [](const ManifoldPoint& p) { return OrientedFlag{p.rotations[0]}; };
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    const Vector apex = g.point + p.scalars[0] * g.direction.vec();
    return to_vector(cone_residual(inst, basis_of(p), apex, e));
  };
  const SearchResult found = search_zero(spec, fn, settings_for(cfg, eps));
  rep.evaluations = found.evaluations;
  if (!found.point.rotations.empty()) {
    const double t = found.point.scalars[0];
    const Vector apex = g.point + t * g.direction.vec();
    const OrientedFlag flag = basis_of(found.point);
    const ConeEvaluation ce = cone_evaluate(inst, flag, apex, eps);
    rep.config = ApexParam{t, flag.line()};
    rep.residual_smoothed = 0.0;
    rep.residual_raw = 0.0;
    for (const auto& mu : inst.masses) {
      const double total = total_mass(mu);
      const double inside = region_measure(mu, ce.cone, {BoundaryRule::Half, eps}) / total;
      rep.fractions.push_back({inside, 1.0 - inside});
      rep.residual_smoothed = std::max(rep.residual_smoothed, std::abs(2.0 * inside - 1.0));
      rep.residual_raw = std::max(rep.residual_raw, std::abs(cone_imbalance(ce.cone, mu, 0.0) / total));
    }
    rep.solution = ApexLineSolution{t, apex, ce.cone};
  }
  finish(rep, cfg.tolerance);
  rep.wall_clock = seconds_since(t0);
  return rep;
}

SolveReport solve_fan(const Instance& inst, std::span<const double> targets, const SolverConfig& cfg, LiftMode lift) {
  const auto t0 = Clock::now();
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  const int m = inst.mass_count() - 1;
  const int k = static_cast<int>(targets.size());
  require(k >= 2, "a fan needs at least two targets");
  require(std::all_of(targets.begin(), targets.end(), [](double t) { return t > 0.0; }) &&
              std::abs(std::accumulate(targets.begin(), targets.end(), 0.0) - 1.0) <= 1e-9,
          "fan targets must be positive and sum to 1");
  const bool equal = std::all_of(targets.begin(), targets.end(), [k](double t) { return std::abs(t - 1.0 / k) <= 1e-12; });

  Feasibility origin;
  Feasibility general;
  if (equal) {
    origin = feasibility(d, k, m, Variant::FanOrigin);
    general = feasibility(d, k, m, Variant::FanGeneral);
  } else {
    int p = 0;
    for (int cand = 3; cand <= 199 && p == 0; cand += 2) {
      if (!is_odd_prime(cand)) continue;
      const bool fits = std::all_of(targets.begin(), targets.end(), [cand](double t) {
        const double a = t * cand;
        return std::abs(a - std::round(a)) <= 1e-9 && std::round(a) >= 1.0;
      });
      if (fits) p = cand;
    }
    if (p == 0) return refused(Status::Infeasible, "targets are not of the form a_i / p for an odd prime p", t0);
    origin = qfan_feasibility(d, p, k, m, true);
    general = qfan_feasibility(d, p, k, m, false);
  }
  bool use_lift = false;
  switch (lift) {
    case LiftMode::Never:
      if (!origin.ok) return refused(Status::Infeasible, origin.explanation, t0);
      break;
    case LiftMode::Always:
      if (!general.ok) return refused(Status::Infeasible, general.explanation, t0);
      use_lift = true;
      break;
    case LiftMode::Auto:
      if (!origin.ok && !general.ok) return refused(Status::Infeasible, general.explanation, t0);
      use_lift = !origin.ok;
      break;
  }
  const int dim = use_lift ? d + 1 : d;
  const ManifoldSpec spec{{RotationFactor::stiefel_pair(dim)}, {}};
  if (spec.dof() > kDeskScaleDof) return exceeds_desk_scale(spec.dof(), t0);
  const Instance work = use_lift ? lift_instance(inst) : inst;
  const double eps = final_smoothing(inst, cfg);
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    return to_vector(fan_residual(work, frame_of(p.rotations[0]), targets, std::nullopt, e));
  };
  const SearchResult found = search_zero(spec, fn, settings_for(cfg, eps));
  SolveReport rep;
  rep.evaluations = found.evaluations;
  if (!found.point.rotations.empty()) {
    const Frame2 frame = frame_of(found.point.rotations[0]);
    const FanEvaluation fe = fan_evaluate(work, frame, targets, std::nullopt, eps);
    rep.config = StiefelPair{frame};
    rep.residual_smoothed = 0.0;
    rep.residual_raw = 0.0;
    for (const auto& mu : work.masses) {
      const double total = total_mass(mu);
      const auto smooth = fan_sector_measures(fe.fan, mu, eps);
      const auto raw = fan_sector_measures(fe.fan, mu, 0.0);
      std::vector<double> row;
      for (int j = 0; j < k; ++j) {
        row.push_back(smooth[j] / total);
        rep.residual_smoothed = std::max(rep.residual_smoothed, std::abs(smooth[j] / total - targets[j]));
        rep.residual_raw = std::max(rep.residual_raw, std::abs(raw[j] / total - targets[j]));
      }
      rep.fractions.push_back(row);
    }
    if (equal) {
      const EquivarianceReport eq = check_equivariance(work, frame, k, 1e-8, std::nullopt, eps);
      rep.certificates.push_back({"zk_equivariance", eq.max_deviation, eq.pass, "max deviation, tol 1e-8"});
    }
    FanSolution sol{fe.fan, use_lift, std::vector<double>(targets.begin(), targets.end()), std::nullopt, false};
    if (use_lift) sol.decoded = decode_lifted_fan(fe.fan, sol.apex_at_infinity);
    rep.solution = sol;
  }
  finish(rep, cfg.tolerance);
  rep.wall_clock = seconds_since(t0);
  return rep;
}

SolveReport solve_double_wedge(const Instance& inst, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  const int dim = d + 1;
  const ManifoldSpec spec{{RotationFactor::sphere(dim), RotationFactor::sphere(dim)}, {}};
  if (spec.dof() > kDeskScaleDof) return exceeds_desk_scale(spec.dof(), t0);
  const Instance lifted = lift_instance(inst);
  const double eps = final_smoothing(inst, cfg);
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    return to_vector(dw_residual(lifted.masses, UnitVector(p.rotations[0].col(0)), UnitVector(p.rotations[1].col(0)), e));
  };
  const SearchResult found = search_zero(spec, fn, settings_for(cfg, eps));
  SolveReport rep;
  rep.evaluations = found.evaluations;
  if (inst.mass_count() > d + 1)
    rep.message = std::to_string(inst.mass_count()) + " masses exceed d + 1; no existence guarantee";
  if (!found.point.rotations.empty()) {
    const UnitVector h1(found.point.rotations[0].col(0));
    const UnitVector h2(found.point.rotations[1].col(0));
    const ResidualVector smooth = dw_residual(lifted.masses, h1, h2, eps);
    const ResidualVector raw = dw_residual(lifted.masses, h1, h2, 0.0);
    rep.config = HyperplanePair{h1, h2};
    rep.residual_smoothed = smooth.inf_norm();
    rep.residual_raw = raw.inf_norm();
    for (double c : smooth.components) rep.fractions.push_back({(1.0 + c) / 2.0, (1.0 - c) / 2.0});
    const ResidualVector anti = dw_residual(lifted.masses, -h1, h2, eps);
    double dev = 0.0;
    for (std::size_t i = 0; i < anti.size(); ++i) dev = std::max(dev, std::abs(anti.components[i] + smooth.components[i]));
    rep.certificates.push_back({"antipodality", dev, dev == 0.0, "|f(-h1, h2) + f(h1, h2)|"});
    DoubleWedgeSolution sol{h1, h2, std::nullopt};
    const auto a = decode_hyperplane(h1);
    const auto b = decode_hyperplane(h2);
    if (a && b) sol.decoded = DoubleWedge{*a, *b};
    rep.solution = sol;
  }
  const std::string note = rep.message;
  finish(rep, cfg.tolerance);
  if (!note.empty() && rep.status == Status::Found) rep.message = note;
  rep.wall_clock = seconds_since(t0);
  return rep;
}

SolveReport solve_shared_h1(const Instance& inst, const SolverConfig& cfg, double eps_target) {
  const auto t0 = Clock::now();
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  const auto families = families_or_all(inst);
  const int nf = static_cast<int>(families.size());
  int largest = 0;
  for (const auto& f : families) largest = std::max(largest, static_cast<int>(f.size()));
  const Feasibility feas = feasibility(d, largest, nf, Variant::DwShared);
  if (!feas.ok) return refused(Status::Infeasible, feas.explanation, t0);
  const bool lift = d % 2 == 0;
  const int dim = lift ? d + 1 : d;
  ManifoldSpec spec;
  for (int f = 0; f <= nf; ++f) spec.rotations.push_back(RotationFactor::sphere(dim));
  if (spec.dof() > kDeskScaleDof) return exceeds_desk_scale(spec.dof(), t0);

  const Instance work = lift ? lift_instance(inst) : inst;
  const double eps = final_smoothing(inst, cfg);
  const double tol = std::max(cfg.tolerance, eps_target);
  std::vector<std::vector<MassDistribution>> fam_masses;
  for (const auto& f : families) {
    fam_masses.emplace_back();
    for (int i : f) fam_masses.back().push_back(work.masses[i]);
  }

  const SharedLandscape land = shared_landscape(fam_masses, dim, cfg);
  const auto& outer = land.outer;
  const auto& inner = land.inner;
  const auto& surrogate = land.surrogate;
  const auto& best_inner = land.best_inner;
  const long evaluations = land.evaluations;
  std::vector<std::size_t> order(outer.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return surrogate[a] < surrogate[b]; });

  SearchSettings settings = settings_for(cfg, eps);
  settings.tolerance = cfg.tolerance;
  const int candidates = std::min<int>(static_cast<int>(order.size()), std::max(8, cfg.multistarts / 2));
  for (int c = 0; c < candidates; ++c) {
    const std::size_t o = order[static_cast<std::size_t>(c)];
    ManifoldPoint start;
    start.rotations.push_back(basis_with_first(outer[o]));
    for (int f = 0; f < nf; ++f) start.rotations.push_back(basis_with_first(inner[best_inner[o][f]]));
    settings.starts.push_back(start);
  }
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    const UnitVector h1(p.rotations[0].col(0));
    std::vector<double> all;
    for (int f = 0; f < nf; ++f) {
      const auto r = dw_residual(fam_masses[f], h1, UnitVector(p.rotations[f + 1].col(0)), e);
      all.insert(all.end(), r.components.begin(), r.components.end());
    }
    return Eigen::Map<const Vector>(all.data(), static_cast<Eigen::Index>(all.size()));
  };
  const SearchResult found = search_zero(spec, fn, settings);

  SolveReport rep;
  rep.evaluations = evaluations + found.evaluations;
  const UnitVector h1(found.point.rotations[0].col(0));
  SharedH1Solution sol{h1, {}, {}, lift};
  rep.residual_smoothed = 0.0;
  rep.residual_raw = 0.0;
  for (int f = 0; f < nf; ++f) {
    const UnitVector h2(found.point.rotations[f + 1].col(0));
    sol.h2.push_back(h2);
    const auto smooth = dw_residual(fam_masses[f], h1, h2, eps);
    const auto raw = dw_residual(fam_masses[f], h1, h2, 0.0);
    sol.family_residuals.push_back(smooth.inf_norm());
    rep.residual_smoothed = std::max(rep.residual_smoothed, smooth.inf_norm());
    rep.residual_raw = std::max(rep.residual_raw, raw.inf_norm());
    for (double v : smooth.components) rep.fractions.push_back({(1.0 + v) / 2.0, (1.0 - v) / 2.0});
  }
  rep.certificates.push_back({"outer_landscape_min", surrogate[order.front()], true,
                              "best coarse inner residual over the h1 grid (" + std::to_string(outer.size()) +
                                  " points)"});
  rep.config = HyperplanePair{h1, sol.h2.front()};
  rep.solution = sol;
  finish(rep, tol);
  rep.wall_clock = seconds_since(t0);
  return rep;
}

double shared_h1_landscape_min(const Instance& inst, const SolverConfig& cfg) {
  inst.validate();
  cfg.validate();
  const bool lift = inst.dimension % 2 == 0;
  const Instance work = lift ? lift_instance(inst) : inst;
  std::vector<std::vector<MassDistribution>> fam_masses;
  for (const auto& f : families_or_all(inst)) {
    fam_masses.emplace_back();
    for (int i : f) fam_masses.back().push_back(work.masses[i]);
  }
  const SharedLandscape land = shared_landscape(fam_masses, work.dimension, cfg);
  return *std::min_element(land.surrogate.begin(), land.surrogate.end());
}

}  // namespace mpart
