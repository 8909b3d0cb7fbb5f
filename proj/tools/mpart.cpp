#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpart/mpart.hpp"

namespace {

using namespace mpart;

enum Exit { kOk = 0, kUsage = 1, kNotFound = 2, kInfeasible = 3 };

int exit_code(Status s) {
  switch (s) {
    case Status::Found: return kOk;
    case Status::NotFound: return kNotFound;
    case Status::ExceedsDeskScale: return kNotFound;
    case Status::Infeasible: return kInfeasible;
  }
  return kUsage;
}

struct SolverFlags {
  std::string instance;
  std::string out;
  std::string svg;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  int multistarts = 64;
  int grid = 16;
  int max_iters = 500;
  std::optional<double> smoothing;

  void attach(CLI::App* app, bool with_svg = true) {
    app->add_option("-i,--instance", instance, "instance JSON")->required()->check(CLI::ExistingFile);
    app->add_option("-o,--out", out, "result JSON (default: standard output)");
    if (with_svg) app->add_option("--svg", svg, "write an SVG plot (d = 2)");
    app->add_option("--tolerance", tolerance, "residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "random seed");
    app->add_option("--multistarts", multistarts, "refined starts")->check(CLI::PositiveNumber);
    app->add_option("--grid", grid, "sampling resolution")->check(CLI::Range(4, 4096));
    app->add_option("--max-iters", max_iters, "iterations per refinement")->check(CLI::PositiveNumber);
    app->add_option("--smoothing", smoothing, "angular smoothing radius in radians")->check(CLI::NonNegativeNumber);
  }

  [[nodiscard]] SolverConfig config() const {
    SolverConfig c;
    c.tolerance = tolerance;
    c.seed = seed;
    c.multistarts = multistarts;
    c.grid_resolution = grid;
    c.max_refine_iters = max_iters;
    c.smoothing = smoothing;
    return c;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text(path, text);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto slash = item.find('/');
    try {
      if (slash == std::string::npos) out.push_back(std::stod(item));
      else out.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("list", "cannot parse '" + item + "' as a number or fraction");
    }
  }
  return out;
}

int report(const SolveReport& r, const std::string& kind, const Instance& inst, const SolverFlags& f) {
  emit(f.out, to_string(to_json(r, kind)));
  if (!f.svg.empty()) write_text(f.svg, plot_report(inst, r));
  std::cerr << to_string(r.status) << ": residual " << r.residual_smoothed;
  if (!r.message.empty()) std::cerr << " (" << r.message << ")";
  std::cerr << "\n";
  return exit_code(r.status);
}

Vector vector_flag(const std::string& s) {
  const auto v = parse_list(s);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int run_verify(const std::string& instance_path, const std::string& result_path, double tol,
               std::optional<double> smoothing, const std::string& out) {
  const Instance inst = load_instance(instance_path);
  const Json doc = read_json(result_path);
  const std::string kind = doc.value("kind", "");
  const double eps = smoothing.value_or(inst.masses.front().smoothing_radius);
  Json result;
  bool pass = false;
  if (kind == "projective-hs") {
    const auto r = hs_from_json(doc);
    result["families"] = Json::array();
    pass = !r.cuts.empty();
    std::vector<std::vector<int>> families = inst.families;
    if (families.empty()) {
      families.emplace_back();
      for (int i = 0; i < inst.mass_count(); ++i) families.back().push_back(i);
    }
    for (std::size_t f = 0; f < r.cuts.size() && f < families.size(); ++f) {
      std::vector<MassDistribution> images;
      for (int i : families[f]) {
        Matrix atoms(inst.dimension, inst.masses[i].size());
        for (Eigen::Index a = 0; a < atoms.cols(); ++a)
          atoms.col(a) = apply_projective(r.transform, Vector(inst.masses[i].atoms.col(a)));
        images.push_back(MassDistribution::make(inst.masses[i].name, atoms, inst.masses[i].weights));
      }
      Json fam = Json::array();
      bool exact = true;
      for (const auto& c : verify_cuts(images, r.cuts[f])) {
        fam.push_back({{"positive", c.positive}, {"negative", c.negative}, {"on", c.on}});
        exact = exact && c.bisected();
      }
      const bool ok = exact || (f < r.per_family_residuals.size() && r.per_family_residuals[f] <= tol);
      pass = pass && ok;
      result["families"].push_back({{"side_counts", fam}, {"exact", exact}, {"pass", ok}});
    }
  } else if (kind == "stripes") {
    const auto r = stripes_from_json(doc);
    const Instance lifted = lift_instance(inst);
    PartitionReport p;
    const int k = r.fan.k();
    pass = k >= 2 && static_cast<int>(r.slab_of_pair.size()) == k;
    for (const auto& mu : lifted.masses) {
      if (!pass) break;
      const auto pairs = dw_pair_measures(r.fan, mu, eps);
      std::vector<double> row(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) {
        row[r.slab_of_pair[j]] = pairs[j] / total_mass(mu);
        p.max_deviation = std::max(p.max_deviation, std::abs(pairs[j] / total_mass(mu) - 1.0 / k));
      }
      p.fractions.push_back(row);
    }
    p.pass = pass && p.max_deviation <= tol && r.normal_deviation <= 1e-9;
    pass = p.pass;
    result = to_json(p);
    result["normal_deviation"] = r.normal_deviation;
  } else if (!kind.empty()) {
    const auto r = report_from_json(doc);
    const PartitionReport p = verify_report(inst, r, tol, eps);
    pass = p.pass && !std::holds_alternative<std::monostate>(r.solution);
    result = to_json(p);
  } else {
    fail(ErrorCode::ParseError, result_path + ": result has no 'kind'");
  }
  result["pass"] = pass;
  emit(out, to_string(result));
  std::cerr << (pass ? "pass" : "fail") << "\n";
  return pass ? kOk : kNotFound;
}

std::vector<Eigen::Vector2d> read_loop(const std::string& path) {
  const Json doc = read_json(path);
  const Json& pts = doc.is_object() ? doc.at("points") : doc;
  std::vector<Eigen::Vector2d> out;
  for (const auto& p : pts) {
    const Vector v = vector_from_json(p);
    if (v.size() != 2) fail(ErrorCode::ParseError, path + ": loop points must have two coordinates");
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

int run_degree(const std::string& model, int level) {
  using V = Eigen::Vector3d;
  SphereMap f;
  if (model == "identity") {
    f = [](const V& x) -> V { return x; };
  } else if (model == "antipodal") {
    f = [](const V& x) -> V { return -x; };
  } else if (model == "square") {
    f = [](const V& x) -> V {
      const double h = x.z();
      return V(x.x() * x.x() - x.y() * x.y(), 2.0 * x.x() * x.y(), 2.0 * h) / (1.0 + h * h);
    };
  } else {
    throw CLI::ValidationError("--degree", "model must be identity, antipodal or square");
  }
  std::cout << sphere_map_degree(f, level).degree << "\n";
  return kOk;
}

int run_equivariance(const std::string& instance_path, int k, int samples, std::uint64_t seed, double tol) {
  const Instance inst = load_instance(instance_path);
  const Instance lifted = lift_instance(inst);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x(lifted.dimension), y(lifted.dimension);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = normal_draw(rng);
      y[i] = normal_draw(rng);
    }
    worst = std::max(worst, check_equivariance(lifted, Frame2::from_vectors(x, y), k, tol).max_deviation);
  }
  std::cout << worst << "\n";
  return worst <= tol ? kOk : kNotFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass partitions by fans, cones, double wedges and projective cuts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  int gen_d = 2, gen_m = 3, gen_atoms = 50, gen_families = 2, gen_sets = 3;
  std::uint64_t gen_seed = 1;
  std::string gen_kind = "random", gen_out;
  gen->add_option("--d", gen_d, "dimension")->check(CLI::Range(1, 16));
  gen->add_option("--m", gen_m, "number of masses")->check(CLI::PositiveNumber);
  gen->add_option("--atoms", gen_atoms, "atoms per mass (points per set)")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--kind", gen_kind, "random | simplex | tight | planted-hs | random-hs")
      ->check(CLI::IsMember({"random", "simplex", "tight", "planted-hs", "random-hs"}));
  gen->add_option("--families", gen_families, "families (random-hs)")->check(CLI::PositiveNumber);
  gen->add_option("--sets", gen_sets, "point sets per family (random-hs)")->check(CLI::PositiveNumber);
  gen->add_option("-o,--out", gen_out, "instance JSON (default: standard output)");

  // solvers
  SolverFlags fan_flags, cone_flags, line_flags, dw_flags, shared_flags, hs_flags, stripes_flags;
  auto* fan = app.add_subcommand("fan", "k-fan equipartition (or a_i/p targets)");
  fan_flags.attach(fan);
  int fan_k = 3;
  std::string fan_targets;
  bool fan_lift = false, fan_always = false;
  fan->add_option("--k", fan_k, "number of sectors")->check(CLI::Range(2, 64));
  fan->add_option("--targets", fan_targets, "comma-separated sector fractions, e.g. 1/3,2/3");
  fan->add_flag("--lift", fan_lift, "allow the lifted (general apex) variant when the origin variant fails");
  fan->add_flag("--always-lift", fan_always, "always search the lifted variant");

  auto* cone = app.add_subcommand("cone", "k-cone bisecting d + 1 masses");
  cone_flags.attach(cone);
  int cone_k = 2;
  cone->add_option("--k", cone_k, "cone type")->check(CLI::Range(1, 64));

  auto* line = app.add_subcommand("cone-on-line", "d-cone with apex on a line (d odd)");
  line_flags.attach(line, false);
  std::string line_point, line_dir;
  line->add_option("--point", line_point, "a point of the line, comma-separated")->required();
  line->add_option("--direction", line_dir, "direction of the line, comma-separated")->required();

  auto* dw = app.add_subcommand("double-wedge", "double wedge bisecting the masses");
  dw_flags.attach(dw);

  auto* shared = app.add_subcommand("shared-h1", "double wedges sharing h1, one per family");
  shared_flags.attach(shared);
  double shared_eps = 0.0;
  shared->add_option("--eps-target", shared_eps, "accepted epsilon-bisection level")->check(CLI::NonNegativeNumber);

  auto* hs = app.add_subcommand("projective-hs", "Ham-Sandwich cuts after a projective transformation");
  hs_flags.attach(hs);

  auto* st = app.add_subcommand("stripes", "parallel hyperplanes after a projective transformation");
  stripes_flags.attach(st);
  int stripes_k = 3;
  st->add_option("--k", stripes_k, "number of slabs")->check(CLI::Range(2, 64));

  // verify
  auto* verify = app.add_subcommand("verify", "re-measure a result against its instance");
  std::string v_instance, v_result, v_out;
  double v_tol = 2e-6;
  std::optional<double> v_smoothing;
  verify->add_option("-i,--instance", v_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("-r,--result", v_result, "result JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--tolerance", v_tol, "largest accepted deviation")->check(CLI::PositiveNumber);
  verify->add_option("--smoothing", v_smoothing, "smoothing radius")->check(CLI::NonNegativeNumber);
  verify->add_option("-o,--out", v_out, "verification JSON (default: standard output)");

  // certify
  auto* certify = app.add_subcommand("certify", "topological certificates");
  std::string c_winding, c_degree, c_instance;
  int c_level = 4, c_k = 3, c_samples = 100;
  std::uint64_t c_seed = 1;
  double c_tol = 1e-8;
  auto* w_opt = certify->add_option("--winding", c_winding, "closed loop JSON: winding number about the origin")
                    ->check(CLI::ExistingFile);
  auto* d_opt = certify->add_option("--degree", c_degree, "sphere map model: identity | antipodal | square");
  auto* e_opt = certify->add_option("--equivariance", c_instance, "instance JSON: Z_k check of the lifted fan map")
                    ->check(CLI::ExistingFile);
  w_opt->excludes(d_opt)->excludes(e_opt);
  d_opt->excludes(e_opt);
  certify->add_option("--level", c_level, "icosphere subdivision level")->check(CLI::Range(0, 7));
  certify->add_option("--k", c_k, "fan size for --equivariance")->check(CLI::Range(2, 64));
  certify->add_option("--samples", c_samples, "random configurations for --equivariance")->check(CLI::PositiveNumber);
  certify->add_option("--seed", c_seed, "random seed");
  certify->add_option("--tolerance", c_tol, "equivariance tolerance")->check(CLI::PositiveNumber);

  // plot
  auto* plot = app.add_subcommand("plot", "SVG of an instance and optionally a result (d = 2)");
  std::string p_instance, p_result, p_out;
  plot->add_option("-i,--instance", p_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  plot->add_option("-r,--result", p_result, "result JSON")->check(CLI::ExistingFile);
  plot->add_option("-o,--out", p_out, "SVG file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      Instance inst;
      if (gen_kind == "random") inst = random_instance(gen_d, gen_m, gen_atoms, gen_seed);
      else if (gen_kind == "simplex") inst = make_simplex_counterexample(gen_d);
      else if (gen_kind == "tight") inst = make_projective_tight_instance(gen_d, gen_atoms, gen_seed);
      else if (gen_kind == "planted-hs") inst = make_planted_hs_instance(gen_d, gen_atoms, gen_seed);
      else inst = make_random_hs_instance(gen_d, gen_families, gen_sets, gen_atoms, gen_seed);
      emit(gen_out, dump_instance(inst));
      return kOk;
    }
    if (*fan) {
      const Instance inst = load_instance(fan_flags.instance);
      std::vector<double> targets = fan_targets.empty() ? std::vector<double>(static_cast<std::size_t>(fan_k), 1.0 / fan_k)
                                                        : parse_list(fan_targets);
      const LiftMode mode = fan_always ? LiftMode::Always : fan_lift ? LiftMode::Auto : LiftMode::Never;
      return report(solve_fan(inst, targets, fan_flags.config(), mode), "fan", inst, fan_flags);
    }
    if (*cone) {
      const Instance inst = load_instance(cone_flags.instance);
      return report(solve_cone(inst, cone_k, cone_flags.config()), "cone", inst, cone_flags);
    }
    if (*line) {
      const Instance inst = load_instance(line_flags.instance);
      const Line g{vector_flag(line_point), UnitVector(vector_flag(line_dir))};
      return report(solve_cone_apex_on_line(inst, g, line_flags.config()), "cone-on-line", inst, line_flags);
    }
    if (*dw) {
      const Instance inst = load_instance(dw_flags.instance);
      return report(solve_double_wedge(inst, dw_flags.config()), "double-wedge", inst, dw_flags);
    }
    if (*shared) {
      const Instance inst = load_instance(shared_flags.instance);
      return report(solve_shared_h1(inst, shared_flags.config(), shared_eps), "shared-h1", inst, shared_flags);
    }
    if (*hs) {
      const Instance inst = load_instance(hs_flags.instance);
      const auto r = hs_after_transform(inst, hs_flags.config());
      emit(hs_flags.out, to_string(to_json(r)));
      if (!hs_flags.svg.empty()) write_text(hs_flags.svg, plot_hs(inst, r));
      std::cerr << to_string(r.status) << ": " << r.message << "\n";
      return exit_code(r.status);
    }
    if (*st) {
      const Instance inst = load_instance(stripes_flags.instance);
      const auto r = stripes(inst, stripes_k, stripes_flags.config());
      emit(stripes_flags.out, to_string(to_json(r)));
      if (!stripes_flags.svg.empty()) write_text(stripes_flags.svg, plot_stripes(inst, r));
      std::cerr << to_string(r.status) << ": residual " << r.residual_smoothed;
      if (!r.message.empty()) std::cerr << " (" << r.message << ")";
      std::cerr << "\n";
      return exit_code(r.status);
    }
    if (*verify) return run_verify(v_instance, v_result, v_tol, v_smoothing, v_out);
    if (*certify) {
      if (!c_winding.empty()) {
        std::cout << winding_number(read_loop(c_winding)) << "\n";
        return kOk;
      }
      if (!c_degree.empty()) return run_degree(c_degree, c_level);
      if (!c_instance.empty()) return run_equivariance(c_instance, c_k, c_samples, c_seed, c_tol);
      std::cerr << "certify needs one of --winding, --degree, --equivariance\n";
      return kUsage;
    }
    if (*plot) {
      const Instance inst = load_instance(p_instance);
      std::string svg;
      if (p_result.empty()) {
        svg = plot_instance(inst);
      } else {
        const Json doc = read_json(p_result);
        const std::string kind = doc.value("kind", "");
        if (kind == "projective-hs") svg = plot_hs(inst, hs_from_json(doc));
        else if (kind == "stripes") svg = plot_stripes(inst, stripes_from_json(doc));
        else svg = plot_report(inst, report_from_json(doc));
      }
      emit(p_out, svg);
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::GeneralPositionViolation:
      case ErrorCode::InfeasibleDimension: return kInfeasible;
      default: return kUsage;
    }
  }
  return kUsage;
}
