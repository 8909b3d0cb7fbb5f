#include "mpart/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpart {
namespace {

constexpr double kPenalty = 1e3;

void givens(Matrix& q, int i, int j, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vector ci = q.col(i);
  const Vector cj = q.col(j);
  q.col(i) = c * ci + s * cj;
  q.col(j) = -s * ci + c * cj;
}

/// Re-orthonormalizes a nearly orthogonal matrix while keeping every column's direction.
Matrix clean_rotation(const Matrix& q) {
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix out = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i)
    if (r(i, i) < 0.0) out.col(i) = -out.col(i);
  return out;
}

double objective(const std::optional<Vector>& r) { return r ? r->squaredNorm() : kPenalty; }

double inf_norm(const std::optional<Vector>& r) {
  return r ? (r->size() ? r->cwiseAbs().maxCoeff() : 0.0) : std::numeric_limits<double>::infinity();
}

struct Evaluator {
  const ManifoldSpec& spec;
  const ResidualFn& fn;
  long evaluations = 0;

  std::optional<Vector> operator()(const ManifoldPoint& p, double eps) {
    ++evaluations;
    try {
      auto r = fn(p, eps);
      if (r && !r->allFinite()) return std::nullopt;
      return r;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

/// Gauss-Newton with minimum-norm steps and backtracking on the residual norm.
ManifoldPoint polish(Evaluator& ev, const ManifoldPoint& start, double eps, int max_iters, double target) {
  const ManifoldSpec& spec = ev.spec;
  const int n = spec.dof();
  ManifoldPoint p = start;
  auto r = ev(p, eps);
  for (int it = 0; it < max_iters && r && inf_norm(r) > target; ++it) {
    Matrix jac(r->size(), n);
    Vector h = Vector::Constant(n, 1e-7);
    const int rot_dof = n - static_cast<int>(spec.scalar_ranges.size());
    for (std::size_t s = 0; s < spec.scalar_ranges.size(); ++s) {
      const auto [lo, hi] = spec.scalar_ranges[s];
      h[rot_dof + static_cast<int>(s)] = 1e-7 * std::max(1.0, hi - lo);
    }
    bool ok = true;
    for (int l = 0; l < n && ok; ++l) {
      Vector theta = Vector::Zero(n);
      theta[l] = h[l];
      const auto rl = ev(retract(spec, p, theta), eps);
      if (!rl) ok = false;
      else jac.col(l) = (*rl - *r) / h[l];
    }
    if (!ok) break;
    Vector delta = -jac.completeOrthogonalDecomposition().solve(*r);
    if (!delta.allFinite()) break;
    const double cap = 0.5;
    if (delta.norm() > cap) delta *= cap / delta.norm();
    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
      const ManifoldPoint cand = retract(spec, p, alpha * delta);
      const auto rc = ev(cand, eps);
      if (rc && rc->norm() < r->norm()) {
        p = cand;
        r = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return p;
}

ManifoldPoint simplex_refine(Evaluator& ev, const ManifoldPoint& start, double eps, double step, int iters) {
  const int n = ev.spec.dof();
  long evals = 0;
  auto f = [&](const Vector& theta) { return objective(ev(retract(ev.spec, start, theta), eps)); };
  const Vector best = nelder_mead(f, Vector::Zero(n), step, iters, 1e-26, evals);
  return retract(ev.spec, start, best);
}

std::vector<double> eps_schedule(double final_eps) {
  std::vector<double> stages;
  for (double e : {0.2, 0.05, 0.0125, 0.003})
    if (e > 1.5 * final_eps) stages.push_back(e);
  stages.push_back(final_eps);
  return stages;
}

}  // namespace

RotationFactor RotationFactor::sphere(int n) {
  RotationFactor f{n, {}};
  for (int j = 1; j < n; ++j) f.generators.emplace_back(0, j);
  return f;
}

RotationFactor RotationFactor::stiefel_pair(int n) {
  RotationFactor f{n, {}};
  for (int j = 1; j < n; ++j) f.generators.emplace_back(0, j);
  for (int j = 2; j < n; ++j) f.generators.emplace_back(1, j);
  return f;
}

RotationFactor RotationFactor::flag(int n, int k) {
  RotationFactor f{n, {}};
  for (int j = 1; j < n; ++j) f.generators.emplace_back(0, j);
  for (int i = 1; i < k; ++i)
    for (int j = k; j < n; ++j) f.generators.emplace_back(i, j);
  return f;
}

int ManifoldSpec::dof() const {
  int n = static_cast<int>(scalar_ranges.size());
  for (const auto& r : rotations) n += static_cast<int>(r.generators.size());
  return n;
}

ManifoldPoint retract(const ManifoldSpec& spec, const ManifoldPoint& base, const Vector& theta) {
  require(theta.size() == spec.dof(), "retract: chart coordinate count mismatch");
  ManifoldPoint out = base;
  Eigen::Index l = 0;
  for (std::size_t f = 0; f < spec.rotations.size(); ++f) {
    Matrix& q = out.rotations[f];
    bool moved = false;
    for (const auto& [i, j] : spec.rotations[f].generators) {
      const double a = theta[l++];
      if (a != 0.0) {
        givens(q, i, j, a);
        moved = true;
      }
    }
    if (moved) q = clean_rotation(q);
  }
  for (std::size_t s = 0; s < spec.scalar_ranges.size(); ++s) {
    const auto [lo, hi] = spec.scalar_ranges[s];
    out.scalars[s] = std::clamp(out.scalars[s] + theta[l++], lo, hi);
  }
  return out;
}

double uniform_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal_draw(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform_draw(rng);
  const double u2 = uniform_draw(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

ManifoldPoint random_point(const ManifoldSpec& spec, std::mt19937_64& rng) {
  ManifoldPoint p;
  for (const auto& f : spec.rotations) {
    Matrix g(f.dim, f.dim);
    for (int j = 0; j < f.dim; ++j)
      for (int i = 0; i < f.dim; ++i) g(i, j) = normal_draw(rng);
    Matrix q = clean_rotation(g);
    if (q.determinant() < 0.0) q.col(f.dim - 1) = -q.col(f.dim - 1);
    p.rotations.push_back(q);
  }
  for (const auto& [lo, hi] : spec.scalar_ranges) p.scalars.push_back(lo + (hi - lo) * uniform_draw(rng));
  return p;
}

Vector nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, double step, int max_iters,
                   double ftol, long& evaluations) {
  const Eigen::Index n = x0.size();
  std::vector<Vector> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)][i] += step;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) vals[i] = f(pts[i]);
  evaluations += n + 1;
  std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));
  for (int it = 0; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (vals[worst] - vals[best] <= ftol) break;
    double size = 0.0;
    for (const auto& p : pts) size = std::max(size, (p - pts[best]).cwiseAbs().maxCoeff());
    if (size < 1e-13) break;
    Vector centroid = Vector::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);
    const Vector xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    ++evaluations;
    if (fr < vals[best]) {
      const Vector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      ++evaluations;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                                : Vector(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(xc);
      ++evaluations;
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
          ++evaluations;
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  return pts[static_cast<std::size_t>(it - vals.begin())];
}

SearchResult search_zero(const ManifoldSpec& spec, const ResidualFn& fn, const SearchSettings& settings) {
  Evaluator ev{spec, fn};
  const std::vector<double> stages = eps_schedule(settings.final_eps);
  std::vector<ManifoldPoint> starts = settings.starts;
  if (starts.empty()) {
    std::mt19937_64 rng(settings.seed);
    std::vector<ManifoldPoint> pool;
    std::vector<double> score;
    const int samples = std::max(settings.samples, settings.multistarts);
    pool.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
      pool.push_back(random_point(spec, rng));
      score.push_back(objective(ev(pool.back(), stages.front())));
    }
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    for (int i = 0; i < settings.multistarts && i < samples; ++i) starts.push_back(pool[order[i]]);
  }

  SearchResult best;
  const double target = settings.tolerance * 1e-2;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    ManifoldPoint p = starts[s];
    for (std::size_t st = 0; st < stages.size(); ++st) {
      const double eps = stages[st];
      const bool last = st + 1 == stages.size();
      const double step = st == 0 ? 0.3 : std::max(0.02, 3.0 * eps);
      const int iters = last ? settings.max_refine_iters : std::max(40, settings.max_refine_iters / 5);
      if (inf_norm(ev(p, eps)) > target) p = simplex_refine(ev, p, eps, step, iters);
      p = polish(ev, p, eps, last ? 40 : 10, target);
    }
    const auto r = ev(p, settings.final_eps);
    const double norm = inf_norm(r);
    if (r && norm < best.inf_norm) {
      best.point = p;
      best.residual = *r;
      best.inf_norm = norm;
      best.start_index = static_cast<int>(s);
    }
    if (best.inf_norm <= settings.tolerance) break;
  }
  best.found = best.inf_norm <= settings.tolerance;
  best.evaluations = ev.evaluations;
  if (best.point.rotations.empty() && !starts.empty()) best.point = starts.front();
  return best;
}

}  // namespace mpart
