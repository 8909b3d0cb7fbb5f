#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mpart/masses.hpp"
#include "mpart/regions.hpp"

namespace mpart {

/// Value of a test map: one block per tested mass, normalized by that mass's total.
struct ResidualVector {
  std::vector<double> components;
  std::vector<int> blocks;

  [[nodiscard]] double inf_norm() const;
  [[nodiscard]] std::size_t size() const { return components.size(); }
};

struct Angle {
  double value = 0.0;
};
struct Direction {
  UnitVector v;
};
struct StiefelPair {
  Frame2 frame;
};
struct Flag {
  OrientedFlag flag;
};
struct HyperplanePair {
  UnitVector h1;
  UnitVector h2;
};
struct ApexParam {
  double t = 0.0;
  UnitVector direction;
};
using ConfigPoint = std::variant<Angle, Direction, StiefelPair, Flag, HyperplanePair, ApexParam>;

struct FanEvaluation {
  KFan fan;
  ResidualVector residual;
};

/// Fan through `apex` (origin by default) built on the reference mass, with per-mass blocks
/// mu_i(W_j)/total_i - targets[j]. Without a reference index the reference is the sum of
/// all masses and the last mass is left out (it is determined by the others).
FanEvaluation fan_evaluate(const Instance& inst, const Frame2& cfg, std::span<const double> targets,
                           std::optional<int> ref_index = {}, std::optional<double> smoothing = {},
                           double start_angle = 0.0, const std::optional<Vector>& apex = {});
ResidualVector fan_residual(const Instance& inst, const Frame2& cfg, std::span<const double> targets,
                            std::optional<int> ref_index = {}, std::optional<double> smoothing = {});

struct ConeEvaluation {
  KCone cone;
  ResidualVector residual;
};

/// Cone bisecting the total mass for the flag, with (mu_i(C) - mu_i(C'))/total_i for every
/// mass but the last.
ConeEvaluation cone_evaluate(const Instance& inst, const OrientedFlag& flag, const Vector& apex_point,
                             std::optional<double> smoothing = {});
ResidualVector cone_residual(const Instance& inst, const OrientedFlag& flag, const Vector& apex_point,
                             std::optional<double> smoothing = {});

/// (mu(D) - mu(D'))/total per mass, for the double wedge of two hyperplanes through the origin.
ResidualVector dw_residual(std::span<const MassDistribution> family, const UnitVector& h1,
                           const UnitVector& h2, std::optional<double> smoothing = {});

/// Cyclic shift of every block: shift 1 maps (a, b, c) to (c, a, b).
ResidualVector zk_shift(const ResidualVector& v, int shift);
/// Fan with the same sectors relabelled so that new sector j is old sector j + shift.
KFan zk_shift(const KFan& fan, int shift);

struct EquivarianceReport {
  double max_deviation = 0.0;
  bool pass = false;
};

/// Compares the residual at the configuration rotated to the fan's second cut with the
/// shifted residual at cfg (equal targets 1/k).
EquivarianceReport check_equivariance(const Instance& inst, const Frame2& cfg, int k, double tol,
                                      std::optional<int> ref_index = {},
                                      std::optional<double> smoothing = {});

enum class Variant { FanOrigin, FanGeneral, Cone, DwShared, Stripes };

struct Feasibility {
  bool ok = false;
  std::string explanation;
};

bool is_product_of_distinct_odd_primes(int k);
bool is_odd_prime(int p);

/// Theorem hypotheses. Fans and stripes: m + 1 masses, k sectors. Cone: m + 1 masses,
/// k-cone. DwShared: m families of k masses each.
Feasibility feasibility(int d, int k, int m, Variant variant);
/// (a_1/p, ..., a_q/p)-partitions by q-fans with m + 1 masses.
Feasibility qfan_feasibility(int d, int p, int q, int m, bool through_origin);

std::string to_string(Variant v);
std::optional<Variant> parse_variant(const std::string& s);

}  // namespace mpart
