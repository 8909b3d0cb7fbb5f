#pragma once

#include <algorithm>
#include <optional>
#include <vector>

namespace mpart::detail {

/// Mass w spread uniformly over [lo, hi]; lo == hi is a point mass.
struct Piece {
  double lo;
  double hi;
  double w;
};

/// Piecewise-linear cumulative distribution G(u) = mass of all pieces below u, with
/// jumps at point masses (a point mass at x is counted in G(x)).
class Cumulative {
 public:
  Cumulative(const std::vector<Piece>& pieces, double domain_lo, double domain_hi)
      : lo_(domain_lo), hi_(domain_hi) {
    events_.reserve(2 * pieces.size());
    for (const Piece& p : pieces) {
      if (p.w <= 0.0) continue;
      if (p.hi > p.lo) {
        const double s = p.w / (p.hi - p.lo);
        events_.push_back({p.lo, s, 0.0, +1});
        events_.push_back({p.hi, -s, 0.0, -1});
      } else {
        events_.push_back({p.lo, 0.0, p.w, 0});
      }
      total_ += p.w;
    }
    std::sort(events_.begin(), events_.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });
  }

  [[nodiscard]] double total() const { return total_; }

  /// inf{u : G(u) >= level}; domain_hi when never reached.
  [[nodiscard]] double first_reaching(double level) const { return query(level, false); }
  /// inf{u : G(u) > level}; domain_hi when never exceeded.
  [[nodiscard]] double first_exceeding(double level) const { return query(level, true); }

  /// Midpoint of the level set {u : G(u) = level}, widened by +-tol.
  [[nodiscard]] double plateau_midpoint(double level, double tol) const {
    return 0.5 * (first_reaching(level - tol) + first_exceeding(level + tol));
  }

  [[nodiscard]] double value(double u) const {
    double g = 0.0;
    double slope = 0.0;
    double pos = lo_;
    int active = 0;
    for (const Event& e : events_) {
      if (e.pos > u) break;
      g += slope * (e.pos - pos);
      pos = e.pos;
      g += e.jump;
      slope += e.dslope;
      active += e.active;
      if (active == 0) slope = 0.0;
    }
    return g + slope * (u - pos);
  }

 private:
  struct Event {
    double pos;
    double dslope;
    double jump;
    int active;
  };

  [[nodiscard]] double query(double level, bool strict) const {
    auto meets = [&](double g) { return strict ? g > level : g >= level; };
    double g = 0.0;
    double slope = 0.0;
    double pos = lo_;
    int active = 0;
    if (meets(g)) return lo_;
    // Linear piece from pos to end: returns where it first meets the level, if it does.
    auto ramp = [&](double end) -> std::optional<double> {
      if (slope > 0.0 && meets(g + slope * (end - pos)))
        return std::clamp(pos + (level - g) / slope, pos, end);
      return std::nullopt;
    };
    for (const Event& e : events_) {
      const double at = std::max(e.pos, pos);
      if (auto u = ramp(at)) return *u;
      g += slope * (at - pos);
      pos = at;
      if (meets(g + e.jump)) return pos;
      g += e.jump;
      slope += e.dslope;
      active += e.active;
      if (active == 0) slope = 0.0;
    }
    if (hi_ > pos) {
      if (auto u = ramp(hi_)) return *u;
    }
    return hi_;
  }

  double lo_;
  double hi_;
  double total_ = 0.0;
  std::vector<Event> events_;
};

}  // namespace mpart::detail
