#include "hamzoo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamzoo/dynamics.hpp"
#include "hamzoo/error.hpp"
#include "hamzoo/export.hpp"
#include "hamzoo/legendre.hpp"
#include "hamzoo/series.hpp"
#include "hamzoo/spec_json.hpp"
#include "hamzoo/verify.hpp"
#include "hamzoo/zoo.hpp"

namespace hamzoo {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or a path to a file holding it.
nlohmann::json load_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    return parse_json_text(text);
  }
  if (!std::filesystem::exists(text)) {
    throw InvalidSpec("spec is neither JSON nor an existing file: " + text);
  }
  return parse_json_text(read_file(text));
}

struct SpecArgs {
  std::string spec = R"({"family": "standard"})";
  std::string potential = "0.5*x^2";
  double m = 1.0;
  CLI::Option* m_opt = nullptr;
};

void add_spec_options(CLI::App* cmd, SpecArgs& a) {
  cmd->add_option("--spec", a.spec, "HamiltonianSpec as JSON text or file path")
      ->capture_default_str();
  cmd->add_option("--potential", a.potential, "V(x) expression")
      ->capture_default_str();
  a.m_opt = cmd->add_option("--m", a.m, "mass (overrides the spec's m)");
}

struct Loaded {
  HamiltonianSpec spec;
  SystemParams params;
  Potential pot;
};

Loaded load(const SpecArgs& a) {
  const nlohmann::json j = load_json(a.spec);
  Loaded l;
  l.spec = spec_from_json(j);
  l.params = params_from_json(j);
  if (a.m_opt->count() > 0) l.params.m = a.m;
  validate(l.spec, l.params);
  l.pot = parse_potential(a.potential);
  return l;
}

// Writes through `fn` to a file, or to `out` when path is "-".
template <typename Fn>
void write_output(const std::string& path, std::ostream& out, Fn&& fn,
                  bool binary = false) {
  if (path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path, binary ? std::ios::binary : std::ios::out);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  fn(file);
  if (!file) throw ConfigError("write to '" + path + "' failed");
}

// --- eval ---------------------------------------------------------------------

struct EvalArgs {
  SpecArgs spec;
  double x = 0.0;
  double p = 0.0;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Loaded l = load(a.spec);
  const PhasePoint pt{a.x, a.p};
  const HDerivs d = eval_derivs(l.spec, l.params, l.pot, pt);
  const double c =
      chain_factor(l.spec, l.params, standard_energy(l.params, l.pot, pt));
  const std::pair<const char*, double> rows[] = {
      {"H", d.h},     {"hx", d.hx},   {"hp", d.hp},
      {"hpp", d.hpp}, {"hpx", d.hpx}, {"chain_factor", c}};
  out << "spec: " << l.spec.describe() << "  V(x) = " << l.pot.source
      << "  m = " << l.params.m << "  (x, p) = (" << a.x << ", " << a.p
      << ")\n";
  for (const auto& [name, value] : rows) {
    out << std::left << std::setw(14) << name << fmt17(value) << '\n';
  }
  return kExitOk;
}

// --- integrate ----------------------------------------------------------------

struct IntegrateArgs {
  SpecArgs spec;
  double x0 = 1.0;
  double p0 = 0.0;
  double t_end = 10.0;
  std::string method = "rk4";
  double step = 1e-3;
  double tol = 1e-10;
  std::string out = "-";
  std::string svg;
  std::string compare;
};

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  const Loaded l = load(a.spec);
  IntegratorOptions opt;
  try {
    opt.method = method_from_string(a.method);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  opt.step = a.step;
  opt.tol = a.tol;
  const PhasePoint start{a.x0, a.p0};
  const Trajectory traj = integrate(l.spec, l.params, l.pot, start, a.t_end, opt);

  std::optional<Trajectory> other;
  std::optional<RescaleReport> rescale;
  if (!a.compare.empty()) {
    const nlohmann::json j = load_json(a.compare);
    const HamiltonianSpec spec_b = spec_from_json(j);
    validate(spec_b, l.params);
    other = integrate(spec_b, l.params, l.pot, start, a.t_end, opt);
    rescale = compare_flows(l.spec, spec_b, l.params, l.pot, start, a.t_end, opt);
  }

  write_output(a.out, out,
               [&](std::ostream& s) { write_trajectory_csv(traj, l.pot, s); });
  if (!a.svg.empty()) {
    std::vector<PhaseCurve> curves{phase_curve(traj, l.spec.describe())};
    if (other) curves.push_back(phase_curve(*other, other->spec.describe()));
    const std::string svg =
        phase_portrait_svg(curves, "phase portrait, V(x) = " + l.pot.source);
    write_output(a.svg, out, [&](std::ostream& s) { s << svg; });
  }
  if (rescale && a.out != "-") {
    out << "rescale factor " << fmt17(rescale->factor) << "\nmax deviation "
        << fmt17(rescale->max_deviation) << "\nperiod ratio measured "
        << fmt17(rescale->measured_period_ratio) << " predicted "
        << fmt17(rescale->predicted_period_ratio) << '\n';
  }
  return kExitOk;
}

// --- verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  std::string out = "report.json";
  std::uint64_t seed = 42;
  CLI::Option* seed_opt = nullptr;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  SuiteConfig config = default_suite_config();
  if (!a.config.empty()) {
    nlohmann::json j;
    try {
      j = parse_json_text(read_file(a.config));
    } catch (const InvalidSpec& e) {
      throw ConfigError(e.what());
    }
    config = suite_config_from_json(j);
  }
  if (a.seed_opt->count() > 0) config.seed = a.seed;
  const Report report = run_suite(config);
  const std::string text = report_to_json(report).dump(2) + "\n";
  write_output(a.out, out, [&](std::ostream& s) { s << text; });
  if (a.out != "-") print_summary(report, out);
  return report.all_pass() ? kExitOk : kExitCheckFailed;
}

// --- legendre -----------------------------------------------------------------

struct LegendreArgs {
  std::vector<double> lambdas;
  std::string potential = "0.5*x^2";
  double m = 1.0;
  int grid = 10;
  double extent = 1.5;
  std::string out = "-";
};

int cmd_legendre(const LegendreArgs& a, std::ostream& out) {
  LagrangianSpec spec;
  spec.lambdas = a.lambdas;
  spec.params.m = a.m;
  spec.pot = parse_potential(a.potential);
  validate(spec);
  if (a.grid < 1) throw ConfigError("--grid must be >= 1");
  std::vector<double> axis;
  for (int i = 0; i < a.grid; ++i) {
    axis.push_back(a.grid == 1 ? 0.0 : -a.extent + 2.0 * a.extent * i / (a.grid - 1));
  }
  const auto rows = legendre_grid(spec, axis, axis);
  write_output(a.out, out, [&](std::ostream& s) { write_legendre_csv(rows, s); });
  if (a.out != "-") {
    double worst = 0.0;
    for (const auto& r : rows) {
      worst = std::max(worst, std::fabs(r.residual) /
                                  std::max(1.0, std::fabs(r.lagrangian)));
    }
    out << "j = " << spec.level() << ", " << rows.size()
        << " grid points, max relative legendre residual " << fmt17(worst)
        << '\n';
  }
  return kExitOk;
}

// --- pascal -------------------------------------------------------------------

struct PascalArgs {
  int rows = 5;
  bool mask = false;
  std::string out = "-";
};

int cmd_pascal(const PascalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.rows < 1) {
    err << "error: --rows must be >= 1\n";
    return kExitUsage;
  }
  if (a.mask) {
    const auto mask = sierpinski_mask(a.rows);
    write_output(a.out, out, [&](std::ostream& s) { write_mask_pgm(mask, s); },
                 true);
    return kExitOk;
  }
  if (a.rows - 1 > kMaxExactPascalRow) {
    err << "error: rows beyond " << kMaxExactPascalRow
        << " overflow 64-bit integers; use --mask for the parity image\n";
    return kExitUsage;
  }
  write_output(a.out, out, [&](std::ostream& s) {
    for (int k = 0; k < a.rows; ++k) {
      const auto row = pascal_row(k);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) s << ' ';
        s << row[i];
      }
      s << '\n';
    }
  });
  return kExitOk;
}

// --- sweep --------------------------------------------------------------------

struct SweepArgs {
  SpecArgs spec;
  double x = 1.0;
  double p = 1.0;
  std::vector<double> lambdas{10, 20, 40, 80};
  int random = 0;
  double box = 2.0;
  std::uint64_t seed = 42;
  std::string out = "-";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const Loaded l = load(a.spec);
  if (a.random < 0) throw ConfigError("--random must be >= 0");
  std::vector<PhasePoint> points{{a.x, a.p}};
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> box(-a.box, a.box);
  for (int i = 0; i < a.random; ++i) {
    const double x = box(rng);
    points.push_back({x, box(rng)});
  }
  std::vector<std::future<Report>> jobs;
  for (const PhasePoint& pt : points) {
    jobs.push_back(std::async(std::launch::async, [&l, &a, pt] {
      return limit_ladder(l.spec, l.params, l.pot, pt, a.lambdas);
    }));
  }
  std::ostringstream csv;
  csv << "point,x,p,lambda,residual,slope\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Report r = jobs[i].get();
    const double slope =
        r.slopes.empty() ? std::nan("") : r.slopes.begin()->second;
    std::size_t k = 0;
    for (const auto& rec : r.records) {
      if (rec.check != "limit_ladder") continue;
      csv << i << ',' << fmt17(points[i].x) << ',' << fmt17(points[i].p) << ','
          << fmt17(a.lambdas[k++]) << ',' << fmt17(rec.residual) << ','
          << fmt17(slope) << '\n';
    }
  }
  write_output(a.out, out, [&](std::ostream& s) { s << csv.str(); });
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Newton-equivalent Hamiltonian and Lagrangian zoo"};
  app.name("hamzoo");
  app.require_subcommand(1);
  std::uint64_t seed = 42;

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate H and its partials at a point");
  add_spec_options(eval, eval_args.spec);
  eval->add_option("--x", eval_args.x, "position")->required();
  eval->add_option("--p", eval_args.p, "momentum")->required();
  eval->add_option("--seed", seed, "random seed (unused)");

  IntegrateArgs int_args;
  auto* integ = app.add_subcommand("integrate", "integrate the flow, write CSV");
  add_spec_options(integ, int_args.spec);
  integ->add_option("--x0", int_args.x0)->capture_default_str();
  integ->add_option("--p0", int_args.p0)->capture_default_str();
  integ->add_option("--t-end", int_args.t_end)->capture_default_str();
  integ->add_option("--method", int_args.method, "rk4 | rk45 | implicit_midpoint")
      ->capture_default_str();
  integ->add_option("--step", int_args.step, "fixed step")->capture_default_str();
  integ->add_option("--tol", int_args.tol, "rk45 tolerance")->capture_default_str();
  integ->add_option("--out", int_args.out, "CSV path, - for stdout")
      ->capture_default_str();
  integ->add_option("--svg", int_args.svg, "phase portrait SVG path");
  integ->add_option("--compare", int_args.compare,
                    "second spec to overlay and compare by time rescaling");
  integ->add_option("--seed", seed, "random seed (unused)");

  VerifyArgs ver_args;
  auto* ver = app.add_subcommand("verify", "run the identity suite");
  ver->add_option("--config", ver_args.config, "suite config JSON file");
  ver->add_option("--out", ver_args.out, "report JSON path, - for stdout")
      ->capture_default_str();
  ver_args.seed_opt =
      ver->add_option("--seed", ver_args.seed, "seed for random points");

  LegendreArgs leg_args;
  auto* leg = app.add_subcommand("legendre", "Lagrangian grid with residuals");
  leg->add_option("--lambdas", leg_args.lambdas, "l_1 .. l_j (none for j = 0)")
      ->delimiter(',');
  leg->add_option("--potential", leg_args.potential)->capture_default_str();
  leg->add_option("--m", leg_args.m)->capture_default_str();
  leg->add_option("--grid", leg_args.grid, "points per axis")->capture_default_str();
  leg->add_option("--extent", leg_args.extent, "grid covers |x|, |v| <= extent")
      ->capture_default_str();
  leg->add_option("--out", leg_args.out, "CSV path, - for stdout")
      ->capture_default_str();
  leg->add_option("--seed", seed, "random seed (unused)");

  PascalArgs pas_args;
  auto* pas = app.add_subcommand("pascal", "Pascal rows or the parity image");
  pas->add_option("--rows", pas_args.rows, "number of rows")->required();
  pas->add_flag("--mask", pas_args.mask, "write a PGM parity mask");
  pas->add_option("--out", pas_args.out, "output path, - for stdout")
      ->capture_default_str();
  pas->add_option("--seed", seed, "random seed (unused)");

  SweepArgs sw_args;
  auto* sw = app.add_subcommand("sweep", "limit ladder over lambda at many points");
  add_spec_options(sw, sw_args.spec);
  sw->add_option("--x", sw_args.x)->capture_default_str();
  sw->add_option("--p", sw_args.p)->capture_default_str();
  sw->add_option("--lambdas", sw_args.lambdas, "outermost lambda grid")
      ->delimiter(',');
  sw->add_option("--random", sw_args.random, "extra random points")
      ->capture_default_str();
  sw->add_option("--box", sw_args.box, "random points in |x|, |p| <= box")
      ->capture_default_str();
  sw->add_option("--seed", sw_args.seed)->capture_default_str();
  sw->add_option("--out", sw_args.out, "CSV path, - for stdout")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_args, out);
    if (integ->parsed()) return cmd_integrate(int_args, out);
    if (ver->parsed()) return cmd_verify(ver_args, out);
    if (leg->parsed()) return cmd_legendre(leg_args, out);
    if (pas->parsed()) return cmd_pascal(pas_args, out, err);
    if (sw->parsed()) return cmd_sweep(sw_args, out);
  } catch (const OverflowRisk& e) {
    err << "overflow risk: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const StepFailure& e) {
    err << "integration failed: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const QuadratureFailure& e) {
    err << "quadrature failed: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hamzoo
