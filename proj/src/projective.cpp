#include "mpart/projective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mpart/manifold.hpp"
#include "mpart/regions.hpp"

namespace mpart {
namespace {

constexpr double kRepairClearance = 1e-9;

Vector homogeneous(const Vector& p) {
  Vector h(p.size() + 1);
  h.head(p.size()) = p;
  h[p.size()] = 1.0;
  return h.normalized();
}

Vector lifted_normal(const UnitVector& n, bool lifted) {
  if (lifted) return n.vec();
  Vector out = Vector::Zero(n.size() + 1);
  out.head(n.size()) = n.vec();
  return out;
}

/// Normalized homogeneous points of a family, with the index of the set of each point.
struct PointTable {
  Matrix points;  // (d+1) x n
  std::vector<int> set_of;
  int sets = 0;
};

PointTable table_of(const Instance& inst, const std::vector<int>& members) {
  PointTable t;
  Eigen::Index n = 0;
  for (int i : members) n += inst.masses[i].size();
  t.points.resize(inst.dimension + 1, n);
  Eigen::Index c = 0;
  for (std::size_t s = 0; s < members.size(); ++s) {
    const auto& mu = inst.masses[members[s]];
    for (Eigen::Index a = 0; a < mu.size(); ++a) {
      t.points.col(c++) = homogeneous(mu.atoms.col(a));
      t.set_of.push_back(static_cast<int>(s));
    }
  }
  t.sets = static_cast<int>(members.size());
  return t;
}

bool clear_of(const Vector& n, const Matrix& points) {
  return (n.transpose() * points).cwiseAbs().minCoeff() > kRepairClearance;
}

/// True when every set of the family has as many points inside the double wedge as outside.
bool bisects_exactly(const PointTable& t, const Vector& n1, const Vector& n2) {
  const Eigen::RowVectorXd s1 = n1.transpose() * t.points;
  const Eigen::RowVectorXd s2 = n2.transpose() * t.points;
  std::vector<int> balance(static_cast<std::size_t>(t.sets), 0);
  for (Eigen::Index i = 0; i < t.points.cols(); ++i) {
    if (std::abs(s1[i]) <= kRepairClearance || std::abs(s2[i]) <= kRepairClearance) return false;
    balance[static_cast<std::size_t>(t.set_of[i])] += s1[i] * s2[i] > 0.0 ? 1 : -1;
  }
  return std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; });
}

/// Normals near n: n itself, and for every set S of at most d of the four points closest
/// to n, the plane through S pushed off each point of S to a chosen side.
std::vector<Vector> nearby_normals(const Vector& n, const Matrix& points) {
  const Eigen::Index dim = n.size();
  const Eigen::Index pool_size = std::min<Eigen::Index>(4, points.cols());
  const Eigen::ArrayXd dist = (n.transpose() * points).cwiseAbs().transpose().array();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + pool_size, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return dist[a] < dist[b]; });
  std::vector<Vector> out{n};
  const int max_subset = static_cast<int>(dim) - 1;
  for (unsigned mask = 1; mask < (1u << pool_size); ++mask) {
    std::vector<Eigen::Index> chosen;
    for (Eigen::Index b = 0; b < pool_size; ++b)
      if (mask & (1u << b)) chosen.push_back(order[static_cast<std::size_t>(b)]);
    if (static_cast<int>(chosen.size()) > max_subset) continue;
    Matrix a(static_cast<Eigen::Index>(chosen.size()), dim);
    for (std::size_t r = 0; r < chosen.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = points.col(chosen[r]).transpose();
    const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    Vector base = n - cod.solve(a * n);
    if (base.norm() < 1e-9) continue;
    base.normalize();
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < points.cols(); ++c)
      if (std::find(chosen.begin(), chosen.end(), c) == chosen.end())
        margin = std::min(margin, std::abs(base.dot(points.col(c))));
    const double delta = std::min(1e-3, margin / 4.0);
    if (!(delta > 10.0 * kRepairClearance)) continue;
    const int patterns = 1 << chosen.size();
    for (int sigma = 0; sigma < patterns; ++sigma) {
      Vector rhs(static_cast<Eigen::Index>(chosen.size()));
      for (std::size_t r = 0; r < chosen.size(); ++r) rhs[static_cast<Eigen::Index>(r)] = (sigma >> r) & 1 ? delta : -delta;
      out.push_back((base + cod.solve(rhs)).normalized());
    }
  }
  return out;
}

/// Lifted normal of the image of the hyperplane with lifted normal n2 under the map that
/// sends n1 to infinity, oriented so its positive side is the image of the double wedge.
OrientedHyperplane image_cut(const ProjectiveMap& t, const Vector& n1, const Vector& n2) {
  const double s = n1[n1.size() - 1] < 0.0 ? -1.0 : 1.0;
  const auto cut = decode_hyperplane(UnitVector(t.matrix * (s * n2)));
  if (!cut) fail(ErrorCode::AtInfinity, "cut is mapped to the hyperplane at infinity");
  return *cut;
}

MassDistribution transformed(const ProjectiveMap& t, const MassDistribution& mu) {
  Matrix atoms(mu.dim(), mu.size());
  for (Eigen::Index a = 0; a < mu.size(); ++a) atoms.col(a) = apply_projective(t, Vector(mu.atoms.col(a)));
  return MassDistribution::make(mu.name, atoms, mu.weights, mu.smoothing_radius);
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform_draw(rng); }

}  // namespace

HsAfterTransformResult hs_after_transform(const Instance& inst, const SolverConfig& cfg) {
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  std::vector<std::vector<int>> families = inst.families;
  if (families.empty()) {
    families.emplace_back(static_cast<std::size_t>(inst.mass_count()));
    std::iota(families.back().begin(), families.back().end(), 0);
  }
  {
    Eigen::Index n = 0;
    for (const auto& mu : inst.masses) n += mu.size();
    Matrix all(d, n);
    n = 0;
    for (const auto& mu : inst.masses) {
      all.middleCols(n, mu.size()) = mu.atoms;
      n += mu.size();
    }
    if (!in_general_position(all, 1e-9))
      fail(ErrorCode::GeneralPositionViolation, "the union of the point sets is not in general position");
  }

  HsAfterTransformResult out;
  out.transform = ProjectiveMap::identity(d);
  const SolveReport rep = solve_shared_h1(inst, cfg);
  out.evaluations = rep.evaluations;
  out.solver_residual = rep.residual_smoothed;
  if (rep.status == Status::Infeasible) {
    const double floor = shared_h1_landscape_min(inst, cfg);
    out.status = Status::NotFound;
    out.message = rep.message + "; coarse landscape minimum " + std::to_string(floor);
    out.solver_residual = floor;
    return out;
  }
  if (rep.status == Status::ExceedsDeskScale) {
    out.status = rep.status;
    out.message = rep.message;
    return out;
  }
  const auto& sol = std::get<SharedH1Solution>(rep.solution);
  Vector n1 = lifted_normal(sol.h1, sol.lifted);
  std::vector<Vector> n2;
  for (const auto& h : sol.h2) n2.push_back(lifted_normal(h, sol.lifted));

  std::vector<PointTable> tables;
  for (const auto& f : families) tables.push_back(table_of(inst, f));
  Matrix all_points(d + 1, 0);
  for (const auto& t : tables) {
    Matrix grown(d + 1, all_points.cols() + t.points.cols());
    grown << all_points, t.points;
    all_points = grown;
  }

  // Exactness repair: h1 candidates first, then an h2 candidate per family.
  const int nf = static_cast<int>(families.size());
  int best_exact = -1;
  Vector best_n1 = n1;
  std::vector<Vector> best_n2 = n2;
  std::vector<bool> best_flags(static_cast<std::size_t>(nf), false);
  for (const Vector& c1 : nearby_normals(n1, all_points)) {
    if (!clear_of(c1, all_points)) continue;
    std::vector<Vector> chosen = n2;
    std::vector<bool> flags(static_cast<std::size_t>(nf), false);
    int exact = 0;
    for (int f = 0; f < nf; ++f) {
      for (const Vector& c2 : nearby_normals(n2[f], tables[f].points)) {
        if (bisects_exactly(tables[f], c1, c2)) {
          chosen[f] = c2;
          flags[f] = true;
          ++exact;
          break;
        }
      }
    }
    if (exact > best_exact) {
      best_exact = exact;
      best_n1 = c1;
      best_n2 = chosen;
      best_flags = flags;
    }
    if (exact == nf) break;
  }

  out.transform = projective_from_lifted(UnitVector(best_n1));
  out.h1 = UnitVector(best_n1);
  const double eps = cfg.smoothing.value_or(inst.masses.front().smoothing_radius);
  bool all_exact = true;
  for (int f = 0; f < nf; ++f) {
    out.h2.emplace_back(best_n2[f]);
    out.cuts.push_back(image_cut(out.transform, best_n1, best_n2[f]));
    std::vector<MassDistribution> images;
    bool mapped = true;
    try {
      for (int i : families[f]) images.push_back(transformed(out.transform, inst.masses[i]));
    } catch (const Error&) {
      mapped = false;
    }
    bool flag = mapped && best_flags[f];
    if (flag)
      for (const auto& c : verify_cuts(images, out.cuts.back())) flag = flag && c.bisected();
    out.exact_flags.push_back(flag);
    all_exact = all_exact && flag;
    if (flag) {
      out.per_family_residuals.push_back(0.0);
    } else {
      std::vector<MassDistribution> lifted;
      for (int i : families[f]) lifted.push_back(lift_mass(inst.masses[i]));
      out.per_family_residuals.push_back(
          dw_residual(lifted, UnitVector(best_n1), UnitVector(best_n2[f]), eps).inf_norm());
    }
  }
  out.status = all_exact || rep.status == Status::Found ? Status::Found : Status::NotFound;
  out.message = all_exact ? "exact bisection of every point set"
                          : std::to_string(best_exact) + " of " + std::to_string(nf) + " families repaired to exact";
  if (rep.status != Status::Found && !all_exact) out.message = rep.message;
  return out;
}

Instance make_planted_hs_instance(int d, int points_per_set, std::uint64_t seed) {
  require(d >= 2, "planted instances need d >= 2");
  require(points_per_set >= 2 && points_per_set % 2 == 0, "points per set must be even and positive");
  std::mt19937_64 rng(seed);
  auto random_hyperplane = [&]() {
    Vector n(d);
    for (int i = 0; i < d; ++i) n[i] = normal_draw(rng);
    Vector c(d);
    for (int i = 0; i < d; ++i) c[i] = uniform_in(rng, -0.5, 0.5);
    const UnitVector u(n);
    return lift_hyperplane(OrientedHyperplane{u, u.dot(c)}).vec();
  };
  const Vector h1 = random_hyperplane();
  const int sets = d + 1;
  Matrix all(d, d * sets * points_per_set);
  Eigen::Index filled = 0;
  Instance inst{d, {}, {}};
  for (int f = 0; f < d; ++f) {
    const Vector h2 = random_hyperplane();
    std::vector<int> fam;
    for (int j = 0; j < sets; ++j) {
      Matrix atoms(d, points_per_set);
      int inside = 0;
      int outside = 0;
      while (inside + outside < points_per_set) {
        Vector p(d);
        for (int i = 0; i < d; ++i) p[i] = uniform_in(rng, -1.0, 1.0);
        const Vector q = homogeneous(p);
        const double s1 = h1.dot(q);
        const double s2 = h2.dot(q);
        if (std::abs(s1) < 0.02 || std::abs(s2) < 0.02) continue;
        const bool in = s1 * s2 > 0.0;
        if ((in && inside == points_per_set / 2) || (!in && outside == points_per_set / 2)) continue;
        all.col(filled) = p;
        if (!in_general_position(all.leftCols(filled + 1), 1e-6)) continue;
        atoms.col(inside + outside) = p;
        ++filled;
        (in ? inside : outside) += 1;
      }
      fam.push_back(inst.mass_count());
      inst.masses.push_back(MassDistribution::unit_weights(
          "family" + std::to_string(f) + "_set" + std::to_string(j), atoms));
    }
    inst.families.push_back(fam);
  }
  return inst;
}

Instance make_random_hs_instance(int d, int families, int sets, int points_per_set, std::uint64_t seed) {
  require(families >= 1 && sets >= 1, "need at least one family and one set");
  Instance inst = random_instance(d, families * sets, points_per_set, seed);
  for (int f = 0; f < families; ++f) {
    std::vector<int> fam;
    for (int j = 0; j < sets; ++j) {
      const int i = f * sets + j;
      inst.masses[i].name = "family" + std::to_string(f) + "_set" + std::to_string(j);
      fam.push_back(i);
    }
    inst.families.push_back(fam);
  }
  return inst;
}

StripesResult stripes(const Instance& inst, int k, const SolverConfig& cfg) {
  inst.validate();
  cfg.validate();
  const int d = inst.dimension;
  const int m = inst.mass_count() - 1;
  StripesResult out;
  out.transform = ProjectiveMap::identity(d);
  const Feasibility feas = feasibility(d, k, std::max(m, 1), Variant::Stripes);
  if (m < 1) {
    out.status = Status::Infeasible;
    out.message = "stripes need at least two masses";
    return out;
  }
  if (!feas.ok) {
    out.status = Status::Infeasible;
    out.message = feas.explanation;
    return out;
  }
  const int dim = d + 1;
  const ManifoldSpec spec{{RotationFactor::stiefel_pair(dim)}, {}};
  if (spec.dof() > 6) {
    out.status = Status::ExceedsDeskScale;
    out.message = "search dimension " + std::to_string(spec.dof()) + " exceeds the desk-scale limit of 6";
    return out;
  }
  const Instance lifted = lift_instance(inst);
  const MassDistribution& reference = lifted.masses[m];
  const double eps = cfg.smoothing.value_or(inst.masses.front().smoothing_radius);
  const Vector origin = Vector::Zero(dim);
  const double share = 1.0 / k;
  auto frame_of = [](const ManifoldPoint& p) {
    return Frame2{UnitVector(p.rotations[0].col(0)), UnitVector(p.rotations[0].col(1))};
  };
  const ResidualFn fn = [&](const ManifoldPoint& p, double e) -> std::optional<Vector> {
    try {
      const DwFan fan = build_dw_fan(frame_of(p), origin, reference, k, 0.0, e);
      Vector r(m * k);
      for (int i = 0; i < m; ++i) {
        const auto& mu = lifted.masses[i];
        const auto pairs = dw_pair_measures(fan, mu, e);
        const double total = total_mass(mu);
        for (int j = 0; j < k; ++j) r[i * k + j] = pairs[j] / total - share;
      }
      return r;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  SearchSettings settings;
  settings.multistarts = cfg.multistarts;
  settings.samples = std::max(16 * cfg.multistarts, 4 * cfg.grid_resolution * cfg.grid_resolution);
  settings.max_refine_iters = cfg.max_refine_iters;
  settings.tolerance = cfg.tolerance;
  settings.seed = cfg.seed;
  settings.final_eps = eps;
  const SearchResult found = search_zero(spec, fn, settings);
  out.evaluations = found.evaluations;
  if (found.point.rotations.empty()) {
    out.message = "every sampled configuration was degenerate";
    return out;
  }
  out.fan = build_dw_fan(frame_of(found.point), origin, reference, k, 0.0, eps);
  const Vector& x = out.fan.plane_frame.x.vec();
  const Vector& y = out.fan.plane_frame.y.vec();
  auto line_normal = [&](double theta) -> Vector { return -std::sin(theta) * x + std::cos(theta) * y; };

  // The line with the largest clearance from every atom goes to infinity.
  Matrix points(dim, 0);
  for (const auto& mu : lifted.masses) {
    Matrix grown(dim, points.cols() + mu.size());
    grown << points, mu.atoms.colwise().normalized();
    points = grown;
  }
  double clearance = -1.0;
  for (int j = 0; j < k; ++j) {
    const double c = (line_normal(out.fan.line_angles[j]).transpose() * points).cwiseAbs().minCoeff();
    if (c > clearance) {
      clearance = c;
      out.line_at_infinity = j;
    }
  }
  if (!(clearance > kBoundaryTol)) {
    out.message = "every fan line carries an atom; no line can be sent to infinity";
    return out;
  }
  const Vector n_inf = line_normal(out.fan.line_angles[out.line_at_infinity]);
  out.transform = projective_from_lifted(UnitVector(n_inf));

  std::vector<OrientedHyperplane> images;
  for (int j = 0; j < k; ++j)
    if (j != out.line_at_infinity) images.push_back(image_cut(out.transform, n_inf, line_normal(out.fan.line_angles[j])));
  const UnitVector normal = images.front().normal;
  std::vector<double> offsets;
  for (auto& h : images) {
    if (h.normal.dot(normal.vec()) < 0.0) h = h.reoriented();
    out.normal_deviation = std::max(out.normal_deviation, angle_between(h.normal.vec(), normal.vec()));
    offsets.push_back(h.offset);
  }
  std::sort(offsets.begin(), offsets.end());
  out.slabs = SlabPartition{normal, offsets};

  for (int j = 0; j < k; ++j) {
    const double from = out.fan.line_angles[j];
    const double to = j + 1 < k ? out.fan.line_angles[j + 1] : out.fan.line_angles[0] + kPi;
    const double mid = 0.5 * (from + to);
    const Vector h = out.transform.matrix * (std::cos(mid) * x + std::sin(mid) * y);
    const double s = normal.dot(Vector(h.head(d) / h[d]));
    out.slab_of_pair.push_back(
        static_cast<int>(std::count_if(offsets.begin(), offsets.end(), [s](double o) { return o < s; })));
  }
  {
    std::vector<int> sorted = out.slab_of_pair;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < k; ++j)
      if (sorted[j] != j) {
        out.message = "double-wedge pairs do not map one-to-one onto slabs";
        return out;
      }
  }

  out.residual_smoothed = 0.0;
  out.residual_raw = 0.0;
  for (int i = 0; i <= m; ++i) {
    const auto& mu = lifted.masses[i];
    const double total = total_mass(mu);
    const auto pairs = dw_pair_measures(out.fan, mu, eps);
    std::vector<double> row(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) row[out.slab_of_pair[j]] = pairs[j] / total;
    const MassDistribution image = transformed(out.transform, inst.masses[i]);
    std::vector<double> raw(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) {
      raw[s] = region_measure(image, Slab{out.slabs, s}, {BoundaryRule::Half, 0.0}) / total;
      out.residual_smoothed = std::max(out.residual_smoothed, std::abs(row[s] - share));
      out.residual_raw = std::max(out.residual_raw, std::abs(raw[s] - share));
    }
    out.fractions.push_back(row);
    out.raw_fractions.push_back(raw);
  }
  if (out.normal_deviation > 1e-9) {
    out.status = Status::NotFound;
    out.message = "output hyperplanes are not parallel within 1e-9";
  } else if (out.residual_smoothed <= cfg.tolerance) {
    out.status = Status::Found;
  } else {
    out.status = Status::NotFound;
    out.message = "no zero found within budget; best residual " + std::to_string(out.residual_smoothed);
  }
  return out;
}

PartitionReport verify_partition(std::span<const MassDistribution> masses, std::span<const Region> regions,
                                 std::span<const double> targets, double tol, const MeasureOptions& options) {
  require(regions.size() == targets.size(), "verify_partition needs one target per region");
  PartitionReport r;
  for (const auto& mu : masses) {
    const double total = total_mass(mu);
    std::vector<double> row;
    for (std::size_t j = 0; j < regions.size(); ++j) {
      row.push_back(region_measure(mu, regions[j], options) / total);
      r.max_deviation = std::max(r.max_deviation, std::abs(row.back() - targets[j]));
    }
    r.fractions.push_back(row);
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

std::vector<SideCounts> verify_cuts(std::span<const MassDistribution> sets, const OrientedHyperplane& cut) {
  std::vector<SideCounts> out;
  for (const auto& mu : sets) {
    if (mu.dim() != cut.dim()) fail(ErrorCode::DimensionMismatch, "cut dimension differs from the point set");
    SideCounts c;
    for (Eigen::Index a = 0; a < mu.size(); ++a) {
      const double s = cut.signed_distance(mu.atoms.col(a));
      if (std::abs(s) <= kBoundaryTol) ++c.on;
      else if (s > 0.0) ++c.positive;
      else ++c.negative;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<PartitionClaim> partition_claims(const Instance& inst, const SolveReport& report) {
  std::vector<int> everyone(static_cast<std::size_t>(inst.mass_count()));
  std::iota(everyone.begin(), everyone.end(), 0);
  auto bisection = [](std::vector<int> masses, Region inside, Region outside) {
    return PartitionClaim{std::move(masses), {std::move(inside), std::move(outside)}, {0.5, 0.5}};
  };
  auto through_origin = [](const UnitVector& n) { return OrientedHyperplane{n, 0.0}; };
  return std::visit(
      [&](const auto& s) -> std::vector<PartitionClaim> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConeSolution>) {
          return {bisection(everyone, Lifted{s.cone}, Lifted{complement(s.cone)})};
        } else if constexpr (std::is_same_v<T, ApexLineSolution>) {
          return {bisection(everyone, s.cone, complement(s.cone))};
        } else if constexpr (std::is_same_v<T, FanSolution>) {
          PartitionClaim c{everyone, {}, s.targets};
          for (int j = 0; j < s.fan.k(); ++j) {
            const FanSector sector{s.fan, j};
            c.regions.push_back(s.lifted ? Region{Lifted{sector}} : Region{sector});
          }
          return {c};
        } else if constexpr (std::is_same_v<T, DoubleWedgeSolution>) {
          const DoubleWedge dw{through_origin(s.h1), through_origin(s.h2)};
          return {bisection(everyone, Lifted{dw}, Lifted{complement(dw)})};
        } else if constexpr (std::is_same_v<T, SharedH1Solution>) {
          std::vector<std::vector<int>> families = inst.families;
          if (families.empty()) families.push_back(everyone);
          std::vector<PartitionClaim> out;
          for (std::size_t f = 0; f < families.size(); ++f) {
            const DoubleWedge dw{through_origin(s.h1), through_origin(s.h2[f])};
            if (s.lifted) out.push_back(bisection(families[f], Lifted{dw}, Lifted{complement(dw)}));
            else out.push_back(bisection(families[f], dw, complement(dw)));
          }
          return out;
        } else {
          return {};
        }
      },
      report.solution);
}

PartitionReport verify_report(const Instance& inst, const SolveReport& report, double tol, double smoothing) {
  PartitionReport total;
  total.pass = true;
  for (const auto& claim : partition_claims(inst, report)) {
    std::vector<MassDistribution> masses;
    for (int i : claim.masses) masses.push_back(inst.masses[i]);
    const PartitionReport r =
        verify_partition(masses, claim.regions, claim.targets, tol, {BoundaryRule::Half, smoothing});
    total.fractions.insert(total.fractions.end(), r.fractions.begin(), r.fractions.end());
    total.max_deviation = std::max(total.max_deviation, r.max_deviation);
  }
  total.pass = total.max_deviation <= tol;
  return total;
}

}  // namespace mpart
