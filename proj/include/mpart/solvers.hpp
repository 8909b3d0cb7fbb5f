#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mpart/manifold.hpp"
#include "mpart/masses.hpp"
#include "mpart/testmaps.hpp"

namespace mpart {

struct SolverConfig {
  int grid_resolution = 16;
  int multistarts = 64;
  int max_refine_iters = 500;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  std::optional<double> smoothing;  // defaults to the first mass's radius

  void validate() const;
};

enum class Status { Found, NotFound, Infeasible, ExceedsDeskScale };
std::string to_string(Status s);

struct Certificate {
  std::string name;
  double value = 0.0;
  bool pass = false;
  std::string detail;
};

/// A 2-cone (wedge) of R^d read back from the lifted solution: the cone is sector
/// `inside_sector` (0-based) of the 2-fan `wedge`.
struct DecodedWedge {
  KFan wedge;
  int inside_sector = 0;
  bool apex_at_infinity = false;
};

struct ConeSolution {
  KCone cone;            // in the lifted space R^{d+1}
  bool lifted = true;
  std::optional<DecodedWedge> decoded;  // k = 2 only
};

struct FanSolution {
  KFan fan;              // in R^d, or in R^{d+1} through the origin when lifted
  bool lifted = false;
  std::vector<double> targets;
  std::optional<KFan> decoded;  // planar fan in R^d when lifted
  bool apex_at_infinity = false;
};

struct DoubleWedgeSolution {
  UnitVector h1;  // lifted normals in R^{d+1}
  UnitVector h2;
  std::optional<DoubleWedge> decoded;
};

struct SharedH1Solution {
  UnitVector h1;
  std::vector<UnitVector> h2;
  std::vector<double> family_residuals;
  bool lifted = false;
};

struct ApexLineSolution {
  double t = 0.0;
  Vector apex;
  KCone cone;
};

using Solution =
    std::variant<std::monostate, ConeSolution, FanSolution, DoubleWedgeSolution, SharedH1Solution, ApexLineSolution>;

struct SolveReport {
  Status status = Status::NotFound;
  std::string message;
  Solution solution;
  double residual_smoothed = std::numeric_limits<double>::infinity();
  double residual_raw = std::numeric_limits<double>::infinity();
  std::optional<ConfigPoint> config;
  std::vector<Certificate> certificates;
  std::vector<std::vector<double>> fractions;  // per mass, per region, re-measured with smoothing
  long evaluations = 0;
  double wall_clock = 0.0;  // seconds; not serialized
};

/// k-cone simultaneously bisecting d + 1 masses of R^d (searched on the lifted sphere).
SolveReport solve_cone(const Instance& inst, int k, const SolverConfig& cfg = {});

struct Line {
  Vector point;
  UnitVector direction;
};

/// d-cone with apex on g bisecting d + 1 masses (d odd), with end-degree certificates.
SolveReport solve_cone_apex_on_line(const Instance& inst, const Line& g, const SolverConfig& cfg = {});

enum class LiftMode { Auto, Always, Never };

/// k-fan (targets of length k) equipartitioning m + 1 masses.
SolveReport solve_fan(const Instance& inst, std::span<const double> targets, const SolverConfig& cfg = {},
                      LiftMode lift = LiftMode::Auto);

/// Double wedge simultaneously bisecting the masses of R^d.
SolveReport solve_double_wedge(const Instance& inst, const SolverConfig& cfg = {});

/// Double wedges sharing h1 that bisect every mass of their family. Families are taken
/// from inst.families. Planar (even d) instances are lifted.
SolveReport solve_shared_h1(const Instance& inst, const SolverConfig& cfg = {}, double eps_target = 0.0);

/// Smallest coarse (0.05 rad) shared-h1 residual over hemisphere grids of h1 and h2,
/// for any number of families; a lower bound witness when no search is attempted.
double shared_h1_landscape_min(const Instance& inst, const SolverConfig& cfg = {});

/// Residual of the d-cone with apex a(t) and axis `direction` (all masses but the last).
ResidualVector apex_line_residual(const Instance& inst, const Line& g, double t, const UnitVector& direction,
                                  std::optional<double> smoothing = {});

/// Degree of the normalized direction map of the apex-line residual at parameter t (d = 3).
/// Unless given, the smoothing is a quarter of the angular radius of the masses seen from the
/// apex (at most 0.05 rad); the degree is unchanged while the map stays zero-free.
int apex_line_degree(const Instance& inst, const Line& g, double t, int level = 4,
                     std::optional<double> smoothing = {});

/// Parameter T at which the end-degree certificates are taken: 100 max(1, radius + |g.point|).
double apex_line_end_parameter(const Instance& inst, const Line& g);

/// Reads a planar 2-fan through the apex flat off a lifted 2-plane frame in R^{d+1}.
std::optional<KFan> decode_lifted_fan(const KFan& lifted, bool& apex_at_infinity);

}  // namespace mpart
