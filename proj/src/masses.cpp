#include "mpart/masses.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mpart/regions.hpp"

namespace mpart {
namespace {

using nlohmann::json;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Smallest distance from a vertex of the simplex `pts` (d x (d+1)) to the affine hull
/// of the remaining vertices.
double min_altitude(const Matrix& pts) {
  const Eigen::Index d = pts.rows();
  const Eigen::Index n = pts.cols();
  if (d == 2 && n == 3) {
    const Eigen::Vector2d a = pts.col(1) - pts.col(0);
    const Eigen::Vector2d b = pts.col(2) - pts.col(0);
    const Eigen::Vector2d c = pts.col(2) - pts.col(1);
    const double twice_area = std::abs(a.x() * b.y() - a.y() * b.x());
    const double longest = std::max({a.norm(), b.norm(), c.norm()});
    return longest == 0.0 ? 0.0 : twice_area / longest;
  }
  if (d == 3 && n == 4) {
    const Eigen::Vector3d p0 = pts.col(0), p1 = pts.col(1), p2 = pts.col(2), p3 = pts.col(3);
    const double six_vol = std::abs((p1 - p0).dot((p2 - p0).cross(p3 - p0)));
    const double largest = std::max({(p2 - p1).cross(p3 - p1).norm(), (p2 - p0).cross(p3 - p0).norm(),
                                     (p1 - p0).cross(p3 - p0).norm(), (p1 - p0).cross(p2 - p0).norm()});
    return largest == 0.0 ? 0.0 : six_vol / largest;
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index base = i == 0 ? 1 : 0;
    Matrix diffs(d, n - 2);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || j == base) continue;
      diffs.col(c++) = pts.col(j) - pts.col(base);
    }
    Vector r = pts.col(i) - pts.col(base);
    if (diffs.cols() > 0) {
      Eigen::HouseholderQR<Matrix> qr(diffs);
      const Matrix q = qr.householderQ() * Matrix::Identity(d, diffs.cols());
      r -= q * (q.transpose() * r);
    }
    best = std::min(best, r.norm());
  }
  return best;
}

/// Calls f on every size-r subset of {0..n-1} that contains `must` (or all, if must < 0).
/// Stops early when f returns false; returns false in that case.
bool for_each_subset(int n, int r, int must, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> idx;
  std::function<bool(int)> rec = [&](int start) -> bool {
    if (static_cast<int>(idx.size()) == r) {
      if (must >= 0 && std::find(idx.begin(), idx.end(), must) == idx.end()) return true;
      return f(idx);
    }
    for (int i = start; i <= n - (r - static_cast<int>(idx.size())); ++i) {
      idx.push_back(i);
      const bool go = rec(i + 1);
      idx.pop_back();
      if (!go) return false;
    }
    return true;
  };
  return rec(0);
}

bool subset_degenerate(const Matrix& points, const std::vector<int>& idx, double tol) {
  Matrix s(points.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) s.col(static_cast<Eigen::Index>(j)) = points.col(idx[j]);
  return min_altitude(s) <= tol;
}

/// True when adding column `last` of points keeps general position (checks only
/// subsets that contain it).
bool still_general(const Matrix& points, int last, double tol) {
  const int d = static_cast<int>(points.rows());
  if (d == 1) {
    for (int j = 0; j < last; ++j)
      if (std::abs(points(0, j) - points(0, last)) <= tol) return false;
    return true;
  }
  if (last + 1 < d + 1) return true;
  return for_each_subset(last, d, -1, [&](const std::vector<int>& idx) {
    std::vector<int> full = idx;
    full.push_back(last);
    return !subset_degenerate(points, full, tol);
  });
}

Vector random_offset(std::mt19937_64& rng, int d, double radius) {
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = 2.0 * uniform01(rng) - 1.0;
  } while (v.norm() > 1.0 || v.norm() < 0.1);
  return radius * v;
}

std::string context(const std::string& where, const std::string& what) { return where + ": " + what; }

}  // namespace

MassDistribution MassDistribution::make(std::string name, Matrix atoms, Vector weights,
                                        double smoothing_radius) {
  MassDistribution mu{std::move(name), std::move(atoms), std::move(weights), smoothing_radius};
  mu.validate();
  return mu;
}

MassDistribution MassDistribution::unit_weights(std::string name, Matrix atoms, double smoothing_radius) {
  Vector w = Vector::Ones(atoms.cols());
  return make(std::move(name), std::move(atoms), std::move(w), smoothing_radius);
}

void MassDistribution::validate() const {
  require(atoms.cols() >= 1, "mass '" + name + "' needs at least one atom");
  require(atoms.rows() >= 1, "mass '" + name + "' has zero-dimensional atoms");
  if (weights.size() != atoms.cols())
    fail(ErrorCode::DimensionMismatch, "mass '" + name + "': weight count differs from atom count");
  require(atoms.allFinite(), "mass '" + name + "' has non-finite coordinates");
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    require(std::isfinite(weights[i]) && weights[i] > 0.0, "mass '" + name + "' has a non-positive weight");
  require(smoothing_radius >= 0.0 && std::isfinite(smoothing_radius), "smoothing radius must be >= 0");
}

void Instance::validate() const {
  require(dimension >= 1, "instance dimension must be >= 1");
  require(!masses.empty(), "instance has no masses");
  for (const auto& mu : masses) {
    if (mu.dim() != dimension)
      fail(ErrorCode::DimensionMismatch,
           "mass '" + mu.name + "' has dimension " + std::to_string(mu.dim()) + ", expected " +
               std::to_string(dimension));
    mu.validate();
  }
  if (families.empty()) return;
  std::vector<int> seen(masses.size(), 0);
  for (const auto& fam : families) {
    for (int i : fam) {
      require(i >= 0 && i < mass_count(), "family index out of range");
      require(seen[i]++ == 0, "mass " + std::to_string(i) + " appears in two families");
    }
  }
  for (int s : seen) require(s == 1, "families must cover every mass");
}

double total_mass(const MassDistribution& mu) { return mu.weights.sum(); }

double region_measure(const MassDistribution& mu, const Region& region, const MeasureOptions& options) {
  const double eps = options.smoothing.value_or(mu.smoothing_radius);
  double m = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    m += mu.weights[i] * membership(region, mu.atoms.col(i), eps, options.rule);
  return m;
}

MassDistribution combine(std::span<const MassDistribution> masses, std::string name) {
  require(!masses.empty(), "combine needs at least one mass");
  Eigen::Index n = 0;
  for (const auto& mu : masses) {
    if (mu.dim() != masses[0].dim()) fail(ErrorCode::DimensionMismatch, "combine: dimension mismatch");
    n += mu.size();
  }
  Matrix atoms(masses[0].dim(), n);
  Vector w(n);
  Eigen::Index c = 0;
  for (const auto& mu : masses) {
    atoms.middleCols(c, mu.size()) = mu.atoms;
    w.segment(c, mu.size()) = mu.weights;
    c += mu.size();
  }
  return MassDistribution{std::move(name), std::move(atoms), std::move(w), masses[0].smoothing_radius};
}

MassDistribution lift_mass(const MassDistribution& mu) {
  Matrix lifted(mu.dim() + 1, mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) lifted.col(i) = gnomonic_lift(mu.atoms.col(i));
  return MassDistribution{mu.name, std::move(lifted), mu.weights, mu.smoothing_radius};
}

Instance lift_instance(const Instance& inst) {
  Instance out{inst.dimension + 1, {}, inst.families};
  out.masses.reserve(inst.masses.size());
  for (const auto& mu : inst.masses) out.masses.push_back(lift_mass(mu));
  return out;
}

double instance_radius(const Instance& inst) {
  double r = 0.0;
  for (const auto& mu : inst.masses) r = std::max(r, mu.atoms.colwise().norm().maxCoeff());
  return r;
}

Instance make_simplex_counterexample(int d) {
  require(d >= 1, "make_simplex_counterexample needs d >= 1");
  std::mt19937_64 rng(0x51A9'13E5ULL + static_cast<std::uint64_t>(d));
  Instance inst{d, {}, {}};
  auto cluster = [&](const std::string& name, const Vector& center) {
    Matrix atoms(d, 3);
    for (int j = 0; j < 3; ++j) atoms.col(j) = center + random_offset(rng, d, 1e-3);
    inst.masses.push_back(MassDistribution::make(name, atoms, Vector::Constant(3, 1.0 / 3.0)));
  };
  cluster("vertex0", Vector::Zero(d));
  for (int i = 0; i < d; ++i) cluster("vertex" + std::to_string(i + 1), Vector::Unit(d, i));
  cluster("barycenter", Vector::Constant(d, 1.0 / (d + 1)));
  return inst;
}

Instance make_projective_tight_instance(int d, int n, std::uint64_t seed) {
  require(d >= 1 && n >= 2, "make_projective_tight_instance needs d >= 1, n >= 2");
  std::mt19937_64 rng(seed);
  const int clusters = (d + 1) * (d + 1);
  Matrix centers(d, clusters);
  for (int c = 0; c < clusters; ++c) {
    // Rejection: no d + 1 centers may lie within 1e-2 of a common hyperplane. A simplex
    // whose smallest altitude exceeds 2e-2 cannot have all vertices within 1e-2 of one.
    for (;;) {
      for (int i = 0; i < d; ++i) centers(i, c) = 2.0 * uniform01(rng) - 1.0;
      bool ok = true;
      if (d == 1) {
        for (int j = 0; j < c && ok; ++j) ok = std::abs(centers(0, j) - centers(0, c)) > 2e-2;
      } else if (c >= d) {
        ok = for_each_subset(c, d, -1, [&](const std::vector<int>& idx) {
          std::vector<int> full = idx;
          full.push_back(c);
          return !subset_degenerate(centers, full, 2e-2);
        });
      }
      if (ok) break;
    }
  }
  Instance inst{d, {}, {}};
  Matrix all(d, clusters * n);
  int filled = 0;
  for (int c = 0; c < clusters; ++c) {
    Matrix atoms(d, n);
    for (int j = 0; j < n; ++j) {
      do {
        all.col(filled) = centers.col(c) + random_offset(rng, d, 1e-3);
      } while (!still_general(all.leftCols(filled + 1), filled, 1e-9));
      atoms.col(j) = all.col(filled++);
    }
    inst.masses.push_back(MassDistribution::unit_weights(
        "family" + std::to_string(c / (d + 1)) + "_set" + std::to_string(c % (d + 1)), atoms));
  }
  for (int f = 0; f <= d; ++f) {
    std::vector<int> fam;
    for (int j = 0; j <= d; ++j) fam.push_back(f * (d + 1) + j);
    inst.families.push_back(fam);
  }
  return inst;
}

Instance random_instance(int d, int m, int atoms_per_mass, std::uint64_t seed) {
  require(d >= 1 && m >= 1 && atoms_per_mass >= 1, "random_instance arguments must be positive");
  std::mt19937_64 rng(seed);
  Matrix all(d, m * atoms_per_mass);
  for (int c = 0; c < all.cols(); ++c) {
    do {
      for (int i = 0; i < d; ++i) all(i, c) = uniform01(rng);
    } while (!still_general(all.leftCols(c + 1), c, 1e-9));
  }
  Instance inst{d, {}, {}};
  for (int i = 0; i < m; ++i)
    inst.masses.push_back(MassDistribution::unit_weights(
        "mu" + std::to_string(i + 1), all.middleCols(i * atoms_per_mass, atoms_per_mass)));
  return inst;
}

bool in_general_position(const Matrix& points, double tol) {
  const int n = static_cast<int>(points.cols());
  for (int c = 0; c < n; ++c)
    if (!still_general(points.leftCols(c + 1), c, tol)) return false;
  return true;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  const std::string where = path.string();
  try {
    Instance inst;
    if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("masses"))
      fail(ErrorCode::ParseError, context(where, "expected an object with 'dimension' and 'masses'"));
    inst.dimension = doc.at("dimension").get<int>();
    const auto& masses = doc.at("masses");
    if (!masses.is_array()) fail(ErrorCode::ParseError, context(where, "'masses' must be an array"));
    for (std::size_t mi = 0; mi < masses.size(); ++mi) {
      const auto& m = masses[mi];
      const std::string field = "masses[" + std::to_string(mi) + "]";
      if (!m.contains("atoms")) fail(ErrorCode::ParseError, context(where, field + ".atoms is missing"));
      const auto& atoms = m.at("atoms");
      Matrix a(inst.dimension, static_cast<Eigen::Index>(atoms.size()));
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (!atoms[j].is_array() || static_cast<int>(atoms[j].size()) != inst.dimension)
          fail(ErrorCode::DimensionMismatch,
               context(where, field + ".atoms[" + std::to_string(j) + "] does not have " +
                                  std::to_string(inst.dimension) + " coordinates"));
        for (int i = 0; i < inst.dimension; ++i) a(i, static_cast<Eigen::Index>(j)) = atoms[j][i].get<double>();
      }
      Vector w = Vector::Ones(a.cols());
      if (m.contains("weights")) {
        const auto& ws = m.at("weights");
        if (ws.size() != atoms.size())
          fail(ErrorCode::DimensionMismatch, context(where, field + ".weights length differs from atoms"));
        for (std::size_t j = 0; j < ws.size(); ++j) w[static_cast<Eigen::Index>(j)] = ws[j].get<double>();
      }
      const std::string name = m.value("name", "mu" + std::to_string(mi + 1));
      const double eps = m.value("smoothing", kDefaultSmoothing);
      inst.masses.push_back(MassDistribution{name, std::move(a), std::move(w), eps});
    }
    if (doc.contains("families") && !doc.at("families").is_null())
      inst.families = doc.at("families").get<std::vector<std::vector<int>>>();
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, context(where, e.what()));
  }
}

std::string dump_instance(const Instance& inst) {
  inst.validate();
  json doc;
  doc["dimension"] = inst.dimension;
  doc["masses"] = json::array();
  for (const auto& mu : inst.masses) {
    json m;
    m["name"] = mu.name;
    json atoms = json::array();
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      json a = json::array();
      for (Eigen::Index i = 0; i < mu.dim(); ++i) a.push_back(mu.atoms(i, j));
      atoms.push_back(a);
    }
    m["atoms"] = atoms;
    m["weights"] = std::vector<double>(mu.weights.data(), mu.weights.data() + mu.weights.size());
    if (mu.smoothing_radius != kDefaultSmoothing) m["smoothing"] = mu.smoothing_radius;
    doc["masses"].push_back(m);
  }
  if (!inst.families.empty()) doc["families"] = inst.families;
  return doc.dump(2) + "\n";
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  const std::string text = dump_instance(inst);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace mpart
