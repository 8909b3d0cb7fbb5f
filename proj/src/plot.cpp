#include "mpart/plot.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "mpart/regions.hpp"

namespace mpart {
namespace {

using P2 = Eigen::Vector2d;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr double kCanvas = 1000.0;
constexpr const char* kStroke = "#222222";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

struct PlotMass {
  Matrix atoms;  // 2 x n
  Vector weights;
};

/// Square world window around the points, padded by 10% on every side.
struct View {
  double x0 = 0.0;
  double y0 = 0.0;
  double extent = 1.0;

  static View around(const std::vector<PlotMass>& masses) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& m : masses)
      for (Eigen::Index a = 0; a < m.atoms.cols(); ++a) {
        xmin = std::min(xmin, m.atoms(0, a));
        xmax = std::max(xmax, m.atoms(0, a));
        ymin = std::min(ymin, m.atoms(1, a));
        ymax = std::max(ymax, m.atoms(1, a));
      }
    if (!(xmin <= xmax)) xmin = xmax = ymin = ymax = 0.0;
    double side = std::max(xmax - xmin, ymax - ymin);
    if (side < 1e-12) side = 1.0;
    View v;
    v.extent = 1.2 * side;
    v.x0 = 0.5 * (xmin + xmax) - 0.5 * v.extent;
    v.y0 = 0.5 * (ymin + ymax) - 0.5 * v.extent;
    return v;
  }

  [[nodiscard]] P2 to_canvas(const P2& p) const {
    return {(p.x() - x0) / extent * kCanvas, kCanvas - (p.y() - y0) / extent * kCanvas};
  }
  [[nodiscard]] std::vector<P2> corners() const {
    return {{x0, y0}, {x0 + extent, y0}, {x0 + extent, y0 + extent}, {x0, y0 + extent}};
  }
};

/// Part of {p + t v : t in [lo, hi]} inside the view window.
std::optional<std::pair<P2, P2>> clip(const View& view, const P2& p, const P2& v, double lo, double hi) {
  const double bounds[4][2] = {{-v.x(), p.x() - view.x0},
                               {v.x(), view.x0 + view.extent - p.x()},
                               {-v.y(), p.y() - view.y0},
                               {v.y(), view.y0 + view.extent - p.y()}};
  for (const auto& b : bounds) {
    if (std::abs(b[0]) < 1e-300) {
      if (b[1] < 0.0) return std::nullopt;
      continue;
    }
    const double t = b[1] / b[0];
    if (b[0] < 0.0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  }
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(P2(p + lo * v), P2(p + hi * v));
}

/// Polygon clipped to a . q + b >= 0.
std::vector<P2> clip_polygon(const std::vector<P2>& poly, const P2& a, double b) {
  std::vector<P2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P2& p = poly[i];
    const P2& q = poly[(i + 1) % poly.size()];
    const double fp = a.dot(p) + b;
    const double fq = a.dot(q) + b;
    if (fp >= 0.0) out.push_back(p);
    if ((fp >= 0.0) != (fq >= 0.0)) out.push_back(p + fp / (fp - fq) * (q - p));
  }
  return out;
}

class Canvas {
 public:
  explicit Canvas(const View& view) : view_(view) {}

  void polygon(const std::vector<P2>& pts, const char* fill, double opacity) {
    if (pts.size() < 3) return;
    body_ << "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const P2 c = view_.to_canvas(pts[i]);
      body_ << (i ? " " : "") << fmt(c.x()) << "," << fmt(c.y());
    }
    body_ << "\" fill=\"" << fill << "\" fill-opacity=\"" << fmt(opacity) << "\" stroke=\"none\"/>\n";
  }

  void segment(const std::optional<std::pair<P2, P2>>& s, const char* stroke = kStroke) {
    if (!s) return;
    const P2 a = view_.to_canvas(s->first);
    const P2 b = view_.to_canvas(s->second);
    body_ << "<line x1=\"" << fmt(a.x()) << "\" y1=\"" << fmt(a.y()) << "\" x2=\"" << fmt(b.x()) << "\" y2=\""
          << fmt(b.y()) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
  }

  void ray(const P2& from, const P2& dir, const char* stroke = kStroke) {
    if (dir.norm() < 1e-15) return;
    segment(clip(view_, from, dir.normalized(), 0.0, 1e300), stroke);
  }

  /// The line a . q + b = 0.
  void line(const P2& a, double b, const char* stroke = kStroke) {
    const double n2 = a.squaredNorm();
    if (n2 < 1e-30) return;
    segment(clip(view_, P2(-b * a / n2), P2(-a.y(), a.x()).normalized(), -1e300, 1e300), stroke);
  }

  void dot(const P2& p, double radius, const char* fill) {
    const P2 c = view_.to_canvas(p);
    body_ << "<circle cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y()) << "\" r=\"" << fmt(radius) << "\" fill=\""
          << fill << "\" fill-opacity=\"0.85\"/>\n";
  }

  void label(const P2& p, int index) {
    const P2 c = view_.to_canvas(p);
    body_ << "<text x=\"" << fmt(c.x()) << "\" y=\"" << fmt(c.y())
          << "\" font-family=\"sans-serif\" font-size=\"24\" text-anchor=\"middle\" fill=\"#000000\">W<tspan "
             "baseline-shift=\"sub\" font-size=\"16\">"
          << index << "</tspan></text>\n";
  }

  void text(const P2& canvas_pos, const std::string& s, const char* fill) {
    body_ << "<text x=\"" << fmt(canvas_pos.x()) << "\" y=\"" << fmt(canvas_pos.y())
          << "\" font-family=\"sans-serif\" font-size=\"16\" fill=\"" << fill << "\">" << s << "</text>\n";
  }

  [[nodiscard]] const View& view() const { return view_; }

  [[nodiscard]] std::string finish() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
           "viewBox=\"0 0 1000 1000\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  View view_;
  std::ostringstream body_;
};

void require_planar(const Instance& inst) {
  if (inst.dimension != 2) fail(ErrorCode::UnsupportedDimension, "plots are drawn for d = 2 only");
}

std::vector<PlotMass> plain(const Instance& inst) {
  std::vector<PlotMass> out;
  for (const auto& mu : inst.masses) out.push_back({mu.atoms, mu.weights});
  return out;
}

std::vector<PlotMass> mapped(const Instance& inst, const ProjectiveMap& t) {
  std::vector<PlotMass> out;
  for (const auto& mu : inst.masses) {
    std::vector<Vector> pts;
    std::vector<double> w;
    for (Eigen::Index a = 0; a < mu.size(); ++a) {
      try {
        pts.push_back(apply_projective(t, Vector(mu.atoms.col(a))));
        w.push_back(mu.weights[a]);
      } catch (const Error&) {
      }
    }
    PlotMass m{Matrix(2, static_cast<Eigen::Index>(pts.size())), Vector(static_cast<Eigen::Index>(w.size()))};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      m.atoms.col(static_cast<Eigen::Index>(i)) = pts[i];
      m.weights[static_cast<Eigen::Index>(i)] = w[i];
    }
    out.push_back(m);
  }
  return out;
}

void draw_atoms(Canvas& canvas, const std::vector<PlotMass>& masses, const Instance& inst) {
  double wmax = 0.0;
  for (const auto& m : masses)
    if (m.weights.size() > 0) wmax = std::max(wmax, m.weights.maxCoeff());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    for (Eigen::Index a = 0; a < masses[i].atoms.cols(); ++a)
      canvas.dot(masses[i].atoms.col(a), 3.0 + 3.0 * std::sqrt(masses[i].weights[a] / wmax), color);
    canvas.text(P2(20.0, 30.0 + 22.0 * static_cast<double>(i)), inst.masses[i].name, color);
  }
}

/// Labels every region at the weighted centroid of the atoms it holds.
void draw_labels(Canvas& canvas, const std::vector<PlotMass>& masses, const std::vector<Region>& regions) {
  for (std::size_t r = 0; r < regions.size(); ++r) {
    P2 sum = P2::Zero();
    double weight = 0.0;
    for (const auto& m : masses)
      for (Eigen::Index a = 0; a < m.atoms.cols(); ++a) {
        const Vector p = m.atoms.col(a);
        if (membership(regions[r], p, 0.0, BoundaryRule::Half) > 0.5) {
          sum += m.weights[a] * P2(p);
          weight += m.weights[a];
        }
      }
    if (weight > 0.0) canvas.label(sum / weight, static_cast<int>(r) + 1);
  }
}

/// Trace on the plane z = 1 of the half-plane of a lifted fan at angle theta.
void draw_lifted_cut(Canvas& canvas, const Frame2& frame, const Vector& apex, double theta) {
  const Eigen::Vector3d x = frame.x.vec();
  const Eigen::Vector3d y = frame.y.vec();
  const Eigen::Vector3d n0 = x.cross(y);
  const Eigen::Vector3d u = std::cos(theta) * x + std::sin(theta) * y;
  const Eigen::Vector3d a(apex[0], apex[1], apex[2]);
  if (std::abs(n0.z()) > 1e-12) {
    const Eigen::Vector3d start = a + ((1.0 - a.z()) / n0.z()) * n0;
    const Eigen::Vector3d dir = u - (u.z() / n0.z()) * n0;
    canvas.ray(start.head<2>(), dir.head<2>());
    return;
  }
  if (std::abs(u.z()) < 1e-12) return;
  const double s = (1.0 - a.z()) / u.z();
  if (s < 0.0) return;
  const Eigen::Vector3d p = a + s * u;
  const P2 along = n0.head<2>();
  if (along.norm() < 1e-15) return;
  canvas.segment(clip(canvas.view(), p.head<2>(), along.normalized(), -1e300, 1e300));
}

void draw_fan(Canvas& canvas, const KFan& fan, bool lifted) {
  for (double theta : fan.cut_angles) {
    if (lifted) {
      draw_lifted_cut(canvas, fan.plane_frame, fan.apex_point, theta);
    } else {
      const Vector dir = std::cos(theta) * fan.plane_frame.x.vec() + std::sin(theta) * fan.plane_frame.y.vec();
      canvas.ray(fan.apex_point, dir);
    }
  }
}

/// Shades {(a1.q + b1)(a2.q + b2) > 0} for lifted normals n1, n2.
void shade_double_wedge(Canvas& canvas, const Vector& n1, const Vector& n2, const char* fill) {
  const P2 a1(n1[0], n1[1]);
  const P2 a2(n2[0], n2[1]);
  for (double s : {1.0, -1.0}) {
    auto poly = clip_polygon(canvas.view().corners(), s * a1, s * n1[2]);
    poly = clip_polygon(poly, s * a2, s * n2[2]);
    canvas.polygon(poly, fill, 0.2);
  }
}

void draw_lifted_line(Canvas& canvas, const Vector& n, const char* stroke = kStroke) {
  canvas.line(P2(n[0], n[1]), n[2], stroke);
}

}  // namespace

std::string plot_instance(const Instance& inst) {
  require_planar(inst);
  const auto masses = plain(inst);
  Canvas canvas(View::around(masses));
  draw_atoms(canvas, masses, inst);
  return canvas.finish();
}

std::string plot_report(const Instance& inst, const SolveReport& report) {
  require_planar(inst);
  const auto masses = plain(inst);
  Canvas canvas(View::around(masses));
  std::vector<Region> labelled;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FanSolution>) {
          draw_fan(canvas, s.fan, s.lifted);
          for (int j = 0; j < s.fan.k(); ++j) {
            const FanSector sector{s.fan, j};
            labelled.push_back(s.lifted ? Region{Lifted{sector}} : Region{sector});
          }
        } else if constexpr (std::is_same_v<T, ConeSolution>) {
          const KCone& c = s.cone;
          if (c.k() == 2) {
            const Frame2 frame{UnitVector(c.subspace_basis.col(0)), UnitVector(c.subspace_basis.col(1))};
            const Vector apex = c.subspace_basis * c.apex_point;
            const double beta = std::atan2(c.axis[1], c.axis[0]);
            draw_lifted_cut(canvas, frame, apex, beta - c.half_angle);
            draw_lifted_cut(canvas, frame, apex, beta + c.half_angle);
          }
          labelled = {Lifted{c}, Lifted{complement(c)}};
        } else if constexpr (std::is_same_v<T, DoubleWedgeSolution>) {
          shade_double_wedge(canvas, s.h1.vec(), s.h2.vec(), "#555555");
          draw_lifted_line(canvas, s.h1.vec());
          draw_lifted_line(canvas, s.h2.vec());
          const DoubleWedge dw{{s.h1, 0.0}, {s.h2, 0.0}};
          labelled = {Lifted{dw}, Lifted{complement(dw)}};
        } else if constexpr (std::is_same_v<T, SharedH1Solution>) {
          if (s.lifted) {
            for (std::size_t f = 0; f < s.h2.size(); ++f)
              shade_double_wedge(canvas, s.h1.vec(), s.h2[f].vec(), kPalette[f % kPalette.size()]);
            draw_lifted_line(canvas, s.h1.vec());
            for (const auto& h : s.h2) draw_lifted_line(canvas, h.vec());
          }
        }
      },
      report.solution);
  draw_atoms(canvas, masses, inst);
  draw_labels(canvas, masses, labelled);
  return canvas.finish();
}

std::string plot_hs(const Instance& inst, const HsAfterTransformResult& result) {
  require_planar(inst);
  const auto masses = mapped(inst, result.transform);
  Canvas canvas(View::around(masses));
  for (std::size_t f = 0; f < result.cuts.size(); ++f) {
    const auto& c = result.cuts[f];
    canvas.line(P2(c.normal[0], c.normal[1]), -c.offset, kPalette[f % kPalette.size()]);
  }
  draw_atoms(canvas, masses, inst);
  return canvas.finish();
}

std::string plot_stripes(const Instance& inst, const StripesResult& result) {
  require_planar(inst);
  const auto masses = mapped(inst, result.transform);
  Canvas canvas(View::around(masses));
  std::vector<Region> labelled;
  if (result.slabs.normal.size() == 2) {
    const P2 n(result.slabs.normal[0], result.slabs.normal[1]);
    for (double o : result.slabs.offsets) canvas.line(n, -o);
    for (int j = 0; j < result.slabs.k(); ++j) labelled.push_back(Slab{result.slabs, j});
  }
  draw_atoms(canvas, masses, inst);
  draw_labels(canvas, masses, labelled);
  return canvas.finish();
}

}  // namespace mpart
