// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mpart/mpart.hpp"

using namespace mpart;

namespace {

constexpr int kInstances = 100;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[v.size() / 2];
}

Vector gaussian(std::mt19937_64& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal_draw(rng);
  return v;
}

bool found_and_verified(const Instance& inst, const SolveReport& r) {
  if (r.status != Status::Found || r.residual_smoothed > 1e-6) return false;
  return verify_report(inst, r, 2e-6, inst.masses.front().smoothing_radius).pass;
}

Outcome wedge_bisection() {
  int found = 0;
  std::vector<double> times;
  for (int s = 1; s <= kInstances; ++s) {
    const Instance inst = random_instance(2, 3, 50, s);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport r = solve_cone(inst, 2);
    times.push_back(seconds_since(t0));
    found += found_and_verified(inst, r);
  }
  const double med = median(times);
  return {found >= 95 && med <= 5.0, fmt("%d/100 found and re-verified at 2e-6, median %.2f s", found, med)};
}

Outcome fan_equipartition() {
  int equal = 0;
  int fractional = 0;
  const std::vector<double> thirds(3, 1.0 / 3.0);
  const std::vector<double> q{1.0 / 3.0, 2.0 / 3.0};
  for (int s = 1; s <= kInstances; ++s) {
    const Instance inst = random_instance(2, 2, 50, s);
    equal += found_and_verified(inst, solve_fan(inst, thirds));
    fractional += found_and_verified(inst, solve_fan(inst, q));
  }
  return {equal >= 90 && fractional >= 90, fmt("3-fan %d/100, (1/3, 2/3) q-fan %d/100", equal, fractional)};
}

Outcome double_wedge() {
  int found = 0;
  for (int s = 1; s <= kInstances; ++s) {
    const Instance inst = random_instance(2, 3, 50, s);
    found += found_and_verified(inst, solve_double_wedge(inst));
  }
  return {found >= 95, fmt("%d/100 found", found)};
}

Outcome projective_ham_sandwich() {
  int exact[2] = {0, 0};
  int fallback_ok = 0;
  int fallback = 0;
  for (int kind = 0; kind < 2; ++kind) {
    for (int s = 1; s <= 50; ++s) {
      const Instance inst = kind == 0 ? make_planted_hs_instance(2, 4, s) : make_random_hs_instance(2, 2, 3, 4, s);
      const HsAfterTransformResult r = hs_after_transform(inst);
      bool all = r.status == Status::Found && !r.exact_flags.empty();
      for (bool b : r.exact_flags) all = all && b;
      if (all) {
        for (std::size_t f = 0; f < r.cuts.size(); ++f) {
          std::vector<MassDistribution> sets;
          for (int i : inst.families[f]) {
            MassDistribution img = inst.masses[i];
            for (Eigen::Index j = 0; j < img.size(); ++j)
              img.atoms.col(j) = apply_projective(r.transform, Vector(img.atoms.col(j)));
            sets.push_back(img);
          }
          for (const auto& c : verify_cuts(sets, r.cuts[f])) all = all && c.bisected();
        }
      }
      if (all) {
        ++exact[kind];
        continue;
      }
      ++fallback;
      const double worst = r.per_family_residuals.empty()
                               ? 1.0
                               : *std::max_element(r.per_family_residuals.begin(), r.per_family_residuals.end());
      fallback_ok += worst <= 1e-4;
    }
  }
  const bool pass = exact[0] >= 45 && exact[1] >= 38 && fallback_ok == fallback;
  return {pass, fmt("exact planted %d/50, random %d/50, remaining %d/%d within 1e-4", exact[0], exact[1],
                    fallback_ok, fallback)};
}

Outcome stripes_criterion() {
  int good = 0;
  double worst_normal = 0.0;
  for (int s = 1; s <= kInstances; ++s) {
    const Instance inst = random_instance(2, 2, 50, s);
    const StripesResult r = stripes(inst, 3);
    if (r.status != Status::Found) continue;
    bool ok = r.fractions.size() == 2;
    for (const auto& row : r.fractions)
      for (double f : row) ok = ok && std::abs(f - 1.0 / 3.0) <= 1e-5;
    ok = ok && r.normal_deviation <= 1e-9;
    worst_normal = std::max(worst_normal, r.normal_deviation);
    good += ok;
  }
  return {good >= 90, fmt("%d/100 with all six fractions within 1e-5, normal spread %.1e", good, worst_normal)};
}

// Dense grid over lifted 2-cone flags: plane normals on a Fibonacci sphere times line angles.
double simplex_grid_min(const Instance& inst, long& configs) {
  const Instance up = lift_instance(inst);
  constexpr int kNormals = 20000;
  constexpr int kAngles = 50;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  double best = std::numeric_limits<double>::infinity();
  configs = 0;
  for (int i = 0; i < kNormals; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kNormals;
    const double r = std::sqrt(1.0 - z * z);
    Vector n(3);
    n << r * std::cos(golden * i), r * std::sin(golden * i), z;
    const Matrix plane = orthonormal_complement(n);
    for (int a = 0; a < kAngles; ++a) {
      const double t = kTwoPi * a / kAngles;
      Matrix cols(3, 2);
      cols.col(0) = std::cos(t) * plane.col(0) + std::sin(t) * plane.col(1);
      cols.col(1) = -std::sin(t) * plane.col(0) + std::cos(t) * plane.col(1);
      best = std::min(best, cone_residual(up, OrientedFlag::from_vectors(cols), Vector::Zero(3)).inf_norm());
      ++configs;
    }
  }
  return best;
}

Outcome tightness() {
  const Instance simplex = make_simplex_counterexample(2);
  long configs = 0;
  const double grid_min = simplex_grid_min(simplex, configs);
  const SolveReport r = solve_cone(simplex, 2);
  const HsAfterTransformResult tight = hs_after_transform(make_projective_tight_instance(2, 4, 1));
  const bool pass = configs >= 1000000 && grid_min >= 0.1 && r.status == Status::NotFound &&
                    tight.status == Status::NotFound;
  return {pass, fmt("grid min %.3f over %ld flags, simplex %s, tight projective %s", grid_min, configs,
                    to_string(r.status).c_str(), to_string(tight.status).c_str())};
}

Outcome invariants() {
  std::mt19937_64 rng(2024);
  const Instance inst = random_instance(2, 3, 41, 77);
  const Instance up = lift_instance(inst);
  bool antipodal = true;
  double block_sum = 0.0, equivariance = 0.0, additivity = 0.0, round_trip = 0.0;
  const std::vector<double> thirds(3, 1.0 / 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    Matrix cols(3, 2);
    cols.col(0) = gaussian(rng, 3);
    cols.col(1) = gaussian(rng, 3);
    const OrientedFlag flag = OrientedFlag::from_vectors(cols);
    const ResidualVector a = cone_residual(up, flag, Vector::Zero(3), 0.0);
    const ResidualVector b = cone_residual(up, flag.flipped(), Vector::Zero(3), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) antipodal = antipodal && a.components[i] == -b.components[i];

    const UnitVector h1(gaussian(rng, 3)), h2(gaussian(rng, 3));
    const ResidualVector d = dw_residual(up.masses, h1, h2, 0.0);
    const ResidualVector e = dw_residual(up.masses, -h1, h2, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) antipodal = antipodal && d.components[i] == -e.components[i];

    const Frame2 frame = Frame2::from_vectors(gaussian(rng, 3), gaussian(rng, 3));
    const ResidualVector f = fan_residual(up, frame, thirds);
    std::size_t at = 0;
    for (int len : f.blocks) {
      double s = 0.0;
      for (int j = 0; j < len; ++j) s += f.components[at + j];
      block_sum = std::max(block_sum, std::abs(s));
      at += len;
    }
    equivariance = std::max(equivariance, check_equivariance(up, frame, 3, 1e-8).max_deviation);

    const Halfspace h{{UnitVector(gaussian(rng, 2)), 0.3 * normal_draw(rng)}};
    const KCone cone{Matrix::Identity(2, 2), 0.2 * gaussian(rng, 2), UnitVector(gaussian(rng, 2)),
                     uniform_draw(rng) * kPi};
    const DoubleWedge dw{{UnitVector(gaussian(rng, 2)), 0.2 * normal_draw(rng)},
                         {UnitVector(gaussian(rng, 2)), 0.2 * normal_draw(rng)}};
    for (const auto& mu : inst.masses) {
      const double total = total_mass(mu);
      for (const Region& r : {Region{h}, Region{cone}, Region{dw}})
        additivity = std::max(additivity, std::abs(region_measure(mu, r) + region_measure(mu, complement(r)) - total));
    }

    const Vector q = 4.0 * gaussian(rng, 2);
    round_trip = std::max(round_trip, (gnomonic_project(gnomonic_lift(q)) - q).norm());
  }
  const bool pass = antipodal && block_sum <= 1e-12 && equivariance <= 1e-8 && additivity <= 1e-12 &&
                    round_trip <= 1e-12;
  return {pass, fmt("antipodal %s, block sum %.1e, equivariance %.1e, additivity %.1e, round trip %.1e",
                    antipodal ? "exact" : "broken", block_sum, equivariance, additivity, round_trip)};
}

std::vector<Eigen::Vector2d> antipodal_loop(std::mt19937_64& rng) {
  // Odd harmonics only, so f(t + pi) = -f(t).
  for (;;) {
    double c[3][4];
    for (auto& row : c)
      for (double& v : row) v = normal_draw(rng);
    std::vector<Eigen::Vector2d> pts;
    double low = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 720; ++i) {
      const double t = kTwoPi * i / 720;
      Eigen::Vector2d p = Eigen::Vector2d::Zero();
      for (int h = 0; h < 3; ++h) {
        const int n = 2 * h + 1;
        p += Eigen::Vector2d(c[h][0] * std::cos(n * t) + c[h][1] * std::sin(n * t),
                             c[h][2] * std::cos(n * t) + c[h][3] * std::sin(n * t));
      }
      low = std::min(low, p.norm());
      pts.push_back(p);
    }
    if (low > 0.05) return pts;
  }
}

Outcome topology() {
  std::vector<Eigen::Vector2d> circle;
  for (int i = 0; i < 64; ++i) circle.emplace_back(std::cos(kTwoPi * i / 64), std::sin(kTwoPi * i / 64));
  const int w = winding_number(circle);

  std::mt19937_64 rng(99);
  int odd = 0;
  for (int i = 0; i < 20; ++i) odd += std::abs(winding_number(antipodal_loop(rng))) % 2 == 1;

  const int id = sphere_map_degree([](const Eigen::Vector3d& x) { return x; }, 4).degree;
  const int anti = sphere_map_degree([](const Eigen::Vector3d& x) { return Eigen::Vector3d(-x); }, 4).degree;
  const int sq = sphere_map_degree(
                     [](const Eigen::Vector3d& x) {
                       if (x[2] < -1.0 + 1e-12) return Eigen::Vector3d(0, 0, -1);
                       const double u = x[0] / (1 + x[2]), v = x[1] / (1 + x[2]);
                       const double a = u * u - v * v, b = 2 * u * v, r = a * a + b * b;
                       return Eigen::Vector3d(2 * a / (1 + r), 2 * b / (1 + r), (1 - r) / (1 + r));
                     },
                     4)
                     .degree;

  int flips = 0;
  for (int s = 1; s <= 20; ++s) {
    Instance inst = random_instance(3, 4, 31, s);
    std::mt19937_64 wr(7 * s + 3);
    for (auto& mu : inst.masses)
      for (double& x : mu.weights) x = 0.5 + uniform_draw(wr);
    std::mt19937_64 lr(s + 1000);
    const Vector p = 0.3 * gaussian(lr, 3);
    const Line g{p, UnitVector(gaussian(lr, 3))};
    const double t = apex_line_end_parameter(inst, g);
    try {
      const int lo = apex_line_degree(inst, g, -t, 2), hi = apex_line_degree(inst, g, t, 2);
      flips += lo == -hi && lo % 2 != 0;
    } catch (const Error&) {
    }
  }
  const bool pass = w == 1 && odd == 20 && id == 1 && anti == -1 && sq == 2 && flips == 20;
  return {pass, fmt("circle %d, antipodal loops odd %d/20, degrees %d %d %d, end-degree flips %d/20", w, odd, id,
                    anti, sq, flips)};
}

Outcome determinism() {
  bool same = true;
  const Instance inst = random_instance(2, 3, 40, 5);
  auto cone_doc = [&] { return to_string(to_json(solve_cone(inst, 2), "cone")); };
  auto cone_svg = [&] { return plot_report(inst, solve_cone(inst, 2)); };
  same = same && cone_doc() == cone_doc() && cone_svg() == cone_svg();

  const Instance two = random_instance(2, 2, 40, 6);
  const std::vector<double> thirds(3, 1.0 / 3.0);
  same = same && to_string(to_json(solve_fan(two, thirds), "fan")) == to_string(to_json(solve_fan(two, thirds), "fan"));
  same = same && plot_stripes(two, stripes(two, 3)) == plot_stripes(two, stripes(two, 3));

  const Instance hs = make_planted_hs_instance(2, 4, 8);
  same = same && to_string(to_json(hs_after_transform(hs))) == to_string(to_json(hs_after_transform(hs)));
  same = same && plot_hs(hs, hs_after_transform(hs)) == plot_hs(hs, hs_after_transform(hs));
  same = same && dump_instance(random_instance(2, 3, 40, 5)) == dump_instance(inst);
  return {same, same ? "result JSON and SVG byte-identical across repeated runs" : "outputs differ between runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"wedge bisection", wedge_bisection},
      {"fan equipartition", fan_equipartition},
      {"double wedge", double_wedge},
      {"projective Ham-Sandwich", projective_ham_sandwich},
      {"stripes", stripes_criterion},
      {"tightness", tightness},
      {"invariants", invariants},
      {"topology certificates", topology},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu %-24s %s  %s (%.1f s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures;
}
