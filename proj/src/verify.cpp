#include "hamzoo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hamzoo/error.hpp"
#include "hamzoo/spec_json.hpp"

namespace hamzoo {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kOk:
      return "ok";
    case CheckStatus::kFailed:
      return "failed";
    case CheckStatus::kOverflow:
      return "overflow";
    case CheckStatus::kSkipped:
      return "skipped";
    case CheckStatus::kError:
      return "error";
  }
  return "unknown";
}

void Report::add(CheckRecord record) {
  record.pass = record.residual <= record.tolerance;
  if (record.status == CheckStatus::kOk && !record.pass) {
    record.status = CheckStatus::kFailed;
  }
  records.push_back(std::move(record));
}

bool Report::all_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord& r) { return r.pass; });
}

double Report::max_residual() const {
  double worst = 0.0;
  for (const auto& r : records) {
    if (r.status == CheckStatus::kSkipped) continue;
    if (std::isnan(r.residual)) return r.residual;
    worst = std::max(worst, r.residual);
  }
  return worst;
}

std::size_t Report::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [s](const CheckRecord& r) { return r.status == s; }));
}

void Report::sort_records() {
  std::stable_sort(records.begin(), records.end(),
                   [](const CheckRecord& a, const CheckRecord& b) {
                     return a.key < b.key;
                   });
}

namespace {

// JSON has no inf/nan; they become null
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json report_to_json(const Report& report) {
  using nlohmann::json;
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"key", r.key},
                       {"check", r.check},
                       {"spec", r.spec},
                       {"potential", r.potential},
                       {"where", r.where},
                       {"residual", finite_or_null(r.residual)},
                       {"tolerance", finite_or_null(r.tolerance)},
                       {"pass", r.pass},
                       {"status", to_string(r.status)},
                       {"message", r.message}});
  }
  json slopes = json::object();
  for (const auto& [k, v] : report.slopes) slopes[k] = finite_or_null(v);
  return {{"suite", report.suite},
          {"description", report.description},
          {"seed", report.seed},
          {"records", records},
          {"summary",
           {{"total", report.records.size()},
            {"passed", std::count_if(report.records.begin(),
                                     report.records.end(),
                                     [](const CheckRecord& r) { return r.pass; })},
            {"failed", report.count(CheckStatus::kFailed)},
            {"overflow", report.count(CheckStatus::kOverflow)},
            {"skipped", report.count(CheckStatus::kSkipped)},
            {"errors", report.count(CheckStatus::kError)},
            {"max_residual", finite_or_null(report.max_residual())},
            {"all_pass", report.all_pass()},
            {"slopes", slopes}}}};
}

void print_summary(const Report& report, std::ostream& out) {
  struct Row {
    std::size_t total = 0, passed = 0, failed = 0, overflow = 0, skipped = 0;
    double worst = 0.0;
  };
  std::map<std::string, Row> rows;
  for (const auto& r : report.records) {
    Row& row = rows[r.check];
    ++row.total;
    if (r.pass) ++row.passed;
    if (r.status == CheckStatus::kOverflow) {
      ++row.overflow;
    } else if (r.status == CheckStatus::kSkipped) {
      ++row.skipped;
    } else if (!r.pass) {
      ++row.failed;
    }
    if (r.status != CheckStatus::kSkipped && std::isfinite(r.residual)) {
      row.worst = std::max(row.worst, r.residual);
    }
  }
  out << "suite: " << report.suite << "  seed: " << report.seed << '\n';
  out << std::left << std::setw(22) << "check" << std::right << std::setw(8)
      << "total" << std::setw(8) << "pass" << std::setw(8) << "fail"
      << std::setw(10) << "overflow" << std::setw(9) << "skipped"
      << std::setw(14) << "max residual" << '\n';
  for (const auto& [name, row] : rows) {
    char worst[32];
    std::snprintf(worst, sizeof worst, "%.3e", row.worst);
    out << std::left << std::setw(22) << name << std::right << std::setw(8)
        << row.total << std::setw(8) << row.passed << std::setw(8)
        << row.failed << std::setw(10) << row.overflow << std::setw(9)
        << row.skipped << std::setw(14) << worst << '\n';
  }
  for (const auto& [name, slope] : report.slopes) {
    out << "slope " << name << " = " << slope << '\n';
  }
  out << (report.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << '\n';
}

// --- residuals ----------------------------------------------------------------

namespace {

struct PdeTerms {
  double raw = 0.0;
  double scale = 1.0;
};

PdeTerms pde_terms(const HamiltonianSpec& spec, const SystemParams& params,
                   const Potential& pot, const PhasePoint& pt) {
  const HDerivs d = eval_derivs(spec, params, pot, pt);
  const double m = params.m;
  const double pdot = -pot.slope(pt.x);
  const double a = d.hx / m;
  const double b = pdot * d.hpp;
  const double c = (pt.p / m) * d.hpx;
  return {a + b + c, std::max({1.0, std::fabs(a), std::fabs(b), std::fabs(c)})};
}

PdeTerms nh2_terms(const HamiltonianSpec& spec, const SystemParams& params,
                   const Potential& pot, const PhasePoint& pt) {
  const HDerivs d = eval_derivs(spec, params, pot, pt);
  const double pdot = -pot.slope(pt.x);
  const double a = pdot * d.hp;
  const double b = (pt.p / params.m) * d.hx;
  return {a + b, std::max({1.0, std::fabs(a), std::fabs(b)})};
}

}  // namespace

double pde_residual(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt) {
  const PdeTerms t = pde_terms(spec, params, pot, pt);
  return std::fabs(t.raw) / t.scale;
}

double nh2_residual(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt) {
  const PdeTerms t = nh2_terms(spec, params, pot, pt);
  return std::fabs(t.raw) / t.scale;
}

double nh3_from_nh2_check(const HamiltonianSpec& spec, const SystemParams& params,
                          const Potential& pot, const PhasePoint& pt) {
  constexpr double kStep = 1e-4;
  const double up = nh2_terms(spec, params, pot, {pt.x, pt.p + kStep}).raw;
  const double down = nh2_terms(spec, params, pot, {pt.x, pt.p - kStep}).raw;
  const PdeTerms direct = pde_terms(spec, params, pot, pt);
  return std::fabs((up - down) / (2.0 * kStep) - direct.raw) / direct.scale;
}

double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("slope fit needs >= 2 paired values");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 4) throw ConfigError("lambda grid needs >= 4 values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ConfigError("lambda grid must be positive and increasing");
    }
  }
}

// Adds the slope record; vanishing residuals make the slope meaningless.
void add_slope(Report& report, const std::string& key, const std::string& spec,
               const std::string& potential, const std::vector<double>& grid,
               const std::vector<double>& residuals, double tolerance) {
  CheckRecord r;
  r.key = key + "/slope";
  r.check = "limit_slope";
  r.spec = spec;
  r.potential = potential;
  r.where = "lambda grid";
  r.tolerance = tolerance;
  const bool vanishing = std::all_of(residuals.begin(), residuals.end(),
                                     [](double e) { return e == 0.0; });
  if (vanishing) {
    r.residual = 0.0;
    r.status = CheckStatus::kSkipped;
    r.message = "residuals vanish identically";
    report.add(std::move(r));
    return;
  }
  const double slope = fit_loglog_slope(grid, residuals);
  report.slopes[key] = slope;
  r.residual = std::isnan(slope) ? std::numeric_limits<double>::infinity()
                                 : std::fabs(slope + 2.0);
  r.message = "slope " + number(slope);
  report.add(std::move(r));
}

}  // namespace

Report limit_ladder(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt,
                    const std::vector<double>& lambda_grid,
                    double slope_tolerance) {
  if (spec.family != Family::kCabbatonian || spec.level < 1) {
    throw InvalidSpec("limit ladder needs a Cabbatonian spec with j >= 1");
  }
  validate(spec, params);
  check_grid(lambda_grid);
  Report report;
  report.suite = "limit_ladder";
  report.description = spec.describe();
  const double energy0 = standard_energy(params, pot, pt);
  const double inner =
      energy_jet(parent_level(spec), params, energy0).value;  // H_{j-1}
  const std::string base = "ladder/" + spec.describe() + "/" + pot.source;
  std::vector<double> residuals;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    HamiltonianSpec s = spec;
    s.lambdas.back() = lambda_grid[i];
    const double omega = params.m * lambda_grid[i] * lambda_grid[i];
    const double h = energy_jet(s, params, energy0).value;
    const double err = std::fabs(h - spec.sign * omega - inner);
    residuals.push_back(err);
    // Taylor remainder of the outer exponential plus cancellation round-off
    const double u = std::fabs(inner) / omega;
    const double bound = 0.5 * inner * inner / omega * std::exp(u) +
                         1e-13 * std::max(1.0, omega);
    CheckRecord r;
    char idx[8];
    std::snprintf(idx, sizeof idx, "%02zu", i);
    r.key = base + "/" + idx;
    r.check = "limit_ladder";
    r.spec = spec.describe();
    r.potential = pot.source;
    r.where = "lambda_j=" + number(lambda_grid[i]);
    r.residual = err;
    r.tolerance = bound;
    report.add(std::move(r));
  }
  add_slope(report, base, spec.describe(), pot.source, lambda_grid, residuals,
            slope_tolerance);
  return report;
}

Report lagrangian_limit_ladder(const LagrangianSpec& spec,
                               const VelocityPoint& pt,
                               const std::vector<double>& lambda_grid,
                               double slope_tolerance) {
  if (spec.level() < 1) {
    throw InvalidSpec("lagrangian ladder needs j >= 1");
  }
  validate(spec);
  check_grid(lambda_grid);
  Report report;
  report.suite = "lagrangian_limit_ladder";
  report.description = "lagrangian " + spec.hamiltonian().describe();
  LagrangianSpec parent = spec;
  parent.lambdas.pop_back();
  const double inner = lagrangian(parent, pt);
  const std::string base =
      "ladder/lagrangian " + spec.hamiltonian().describe() + "/" + spec.pot.source;
  std::vector<double> residuals;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    LagrangianSpec s = spec;
    s.lambdas.back() = lambda_grid[i];
    const double omega = s.params.m * lambda_grid[i] * lambda_grid[i];
    const double err = std::fabs(lagrangian(s, pt) - omega - inner);
    residuals.push_back(err);
    CheckRecord r;
    char idx[8];
    std::snprintf(idx, sizeof idx, "%02zu", i);
    r.key = base + "/" + idx;
    r.check = "limit_ladder";
    r.spec = report.description;
    r.potential = spec.pot.source;
    r.where = "lambda_j=" + number(lambda_grid[i]);
    r.residual = err;
    // each later entry must shrink at least as fast as the leading 1/l^2 term
    const double ratio = lambda_grid.front() / lambda_grid[i];
    r.tolerance = i == 0 ? std::numeric_limits<double>::infinity()
                         : 1.5 * residuals.front() * ratio * ratio +
                               1e-12 * std::max(1.0, omega);
    report.add(std::move(r));
  }
  add_slope(report, base, report.description, spec.pot.source, lambda_grid,
            residuals, slope_tolerance);
  return report;
}

// --- suite --------------------------------------------------------------------

SuiteConfig default_suite_config() {
  SuiteConfig c;
  c.potentials = {"0.5*x^2"};
  c.specs = {
      HamiltonianSpec::standard(),
      HamiltonianSpec::cabbatonian({2.0}),
      HamiltonianSpec::cabbatonian({2.0, 3.0}),
      HamiltonianSpec::cabbatonian({2.0, 3.0, 4.0}),
      HamiltonianSpec::sigma_family({}, 5.0),
      HamiltonianSpec::sigma_family({2.0}, 5.0),
      HamiltonianSpec::truncated_series({2.0}, 8),
      HamiltonianSpec::power_base(1),
      HamiltonianSpec::power_base(2),
      HamiltonianSpec::power_base(3),
      HamiltonianSpec::power_base(4),
  };
  return c;
}

namespace {

template <typename T>
T read_field(const nlohmann::json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + name + "': " + e.what());
  }
}

PhasePoint read_point(const nlohmann::json& j, const char* name,
                      PhasePoint fallback) {
  if (!j.contains(name)) return fallback;
  const auto v = read_field<std::vector<double>>(j, name, {});
  if (v.size() != 2) {
    throw ConfigError(std::string("config field '") + name +
                      "' must be [x, p]");
  }
  return {v[0], v[1]};
}

}  // namespace

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SuiteConfig c = default_suite_config();
  c.potentials = read_field(j, "potentials", c.potentials);
  if (j.contains("potential")) {
    c.potentials = {read_field<std::string>(j, "potential", "")};
  }
  c.params.m = read_field(j, "m", c.params.m);
  if (j.contains("specs")) {
    if (!j.at("specs").is_array()) throw ConfigError("'specs' must be an array");
    c.specs.clear();
    for (const auto& s : j.at("specs")) {
      try {
        c.specs.push_back(spec_from_json(s));
        if (!j.contains("m")) c.params = params_from_json(s, c.params);
      } catch (const InvalidSpec& e) {
        throw ConfigError(std::string("bad spec: ") + e.what());
      }
    }
  }
  c.points = read_field(j, "points", c.points);
  c.seed = read_field(j, "seed", c.seed);
  c.box = read_field(j, "box", c.box);
  c.lambda_grid = read_field(j, "lambda_grid", c.lambda_grid);
  c.orbit_start = read_point(j, "orbit_start", c.orbit_start);
  c.ladder_point = read_point(j, "ladder_point", c.ladder_point);
  c.periods = read_field(j, "periods", c.periods);
  c.rk45_tol = read_field(j, "rk45_tol", c.rk45_tol);
  c.legendre_grid = read_field(j, "legendre_grid", c.legendre_grid);
  c.legendre_extent = read_field(j, "legendre_extent", c.legendre_extent);
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
    SuiteTolerances& tol = c.tolerances;
    tol.pde = read_field(t, "pde", tol.pde);
    tol.nh2 = read_field(t, "nh2", tol.nh2);
    tol.nh3 = read_field(t, "nh3", tol.nh3);
    tol.conservation = read_field(t, "conservation", tol.conservation);
    tol.flow_deviation = read_field(t, "flow_deviation", tol.flow_deviation);
    tol.period_ratio = read_field(t, "period_ratio", tol.period_ratio);
    tol.legendre = read_field(t, "legendre", tol.legendre);
    tol.slope = read_field(t, "slope", tol.slope);
  }
  if (c.points < 0) throw ConfigError("'points' must be >= 0");
  if (!(c.box > 0.0)) throw ConfigError("'box' must be > 0");
  if (!(c.periods > 0.0)) throw ConfigError("'periods' must be > 0");
  if (!(c.rk45_tol > 0.0)) throw ConfigError("'rk45_tol' must be > 0");
  if (c.legendre_grid < 1) throw ConfigError("'legendre_grid' must be >= 1");
  check_grid(c.lambda_grid);
  return c;
}

namespace {

struct Group {
  std::size_t spec_index = 0;
  std::size_t pot_index = 0;
  HamiltonianSpec spec;
  Potential pot;
};

struct GroupResult {
  std::vector<CheckRecord> records;
  std::map<std::string, double> slopes;
};

std::string index_tag(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

class GroupRunner {
 public:
  GroupRunner(const SuiteConfig& config, const Group& group,
              const std::vector<PhasePoint>& points)
      : config_(config), group_(group), points_(points) {
    prefix_ = "s" + index_tag(group.spec_index) + "/p" +
              index_tag(group.pot_index) + "/";
  }

  GroupResult run() {
    point_checks();
    conservation_and_flow();
    legendre_checks();
    ladder_checks();
    return std::move(result_);
  }

 private:
  CheckRecord record(const std::string& check, const std::string& key,
                     const std::string& where, double tolerance) const {
    CheckRecord r;
    r.key = prefix_ + check + "/" + key;
    r.check = check;
    r.spec = group_.spec.describe();
    r.potential = group_.pot.source;
    r.where = where;
    r.tolerance = tolerance;
    return r;
  }

  void push(CheckRecord r) {
    r.pass = r.residual <= r.tolerance;
    if (r.status == CheckStatus::kOk && !r.pass) r.status = CheckStatus::kFailed;
    result_.records.push_back(std::move(r));
  }

  // Runs fn() into the record, converting expected failures into statuses.
  template <typename Fn>
  void guarded(CheckRecord r, Fn&& fn) {
    try {
      r.residual = fn(r);
    } catch (const OverflowRisk& e) {
      r.residual = std::numeric_limits<double>::infinity();
      r.status = CheckStatus::kOverflow;
      r.message = e.what();
    } catch (const std::exception& e) {
      r.residual = std::numeric_limits<double>::infinity();
      r.status = CheckStatus::kError;
      r.message = e.what();
    }
    push(std::move(r));
  }

  bool sigma_singular(const PhasePoint& pt) const {
    const HamiltonianSpec& s = group_.spec;
    if (s.family != Family::kSigma) return false;
    HamiltonianSpec base = s.lambdas.empty()
                               ? HamiltonianSpec::standard()
                               : HamiltonianSpec::cabbatonian(s.lambdas, s.sign);
    const double f =
        eval_h(base, config_.params, group_.pot, pt);  // may throw OverflowRisk
    const double a = -1.0 / (config_.params.m * *s.sigma * *s.sigma);
    return std::fabs(1.0 + a * f) < 1e-6;
  }

  void point_checks() {
    const auto& tol = config_.tolerances;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const PhasePoint pt = points_[i];
      const std::string where = "(" + number(pt.x) + ", " + number(pt.p) + ")";
      bool skip = false;
      try {
        skip = sigma_singular(pt);
      } catch (const OverflowRisk&) {
        // reported by the checks themselves
      }
      struct Item {
        const char* name;
        double tolerance;
        double (*fn)(const HamiltonianSpec&, const SystemParams&,
                     const Potential&, const PhasePoint&);
      };
      const Item items[] = {{"pde", tol.pde, &pde_residual},
                            {"nh2", tol.nh2, &nh2_residual},
                            {"nh3", tol.nh3, &nh3_from_nh2_check}};
      for (const Item& item : items) {
        CheckRecord r = record(item.name, index_tag(i), where, item.tolerance);
        if (skip) {
          r.status = CheckStatus::kSkipped;
          r.message = "|1 + aF| < 1e-6";
          push(std::move(r));
          continue;
        }
        guarded(std::move(r), [&](CheckRecord&) {
          return item.fn(group_.spec, config_.params, group_.pot, pt);
        });
      }
    }
  }

  // Period of the standard flow from the orbit start; NaN for open orbits.
  double standard_period() const {
    IntegratorOptions opt;
    opt.method = Method::kRk45;
    opt.tol = 1e-10;
    const Trajectory t =
        integrate(HamiltonianSpec::standard(), config_.params, group_.pot,
                  config_.orbit_start, 60.0, opt);
    return measure_period(t);
  }

  void conservation_and_flow() {
    if (config_.specs.empty()) return;
    const auto& tol = config_.tolerances;
    const std::string where = "start (" + number(config_.orbit_start.x) +
                              ", " + number(config_.orbit_start.p) + ")";
    double period0 = std::numeric_limits<double>::quiet_NaN();
    try {
      period0 = standard_period();
    } catch (const std::exception&) {
      // open or failing standard orbit: fall back to a fixed horizon below
    }
    const double base_period = std::isfinite(period0) ? period0 : 2.0 * std::numbers::pi;

    IntegratorOptions opt;
    opt.method = Method::kRk45;
    opt.tol = config_.rk45_tol;

    guarded(record("conservation", "own_flow", where, tol.conservation),
            [&](CheckRecord& r) {
              const double e0 = standard_energy(config_.params, group_.pot,
                                                config_.orbit_start);
              const double c =
                  std::fabs(chain_factor(group_.spec, config_.params, e0));
              if (!(c > 0.0)) {
                throw std::domain_error("flow is stationary at this energy");
              }
              const double t_end = config_.periods * base_period / c;
              const Trajectory traj =
                  integrate(group_.spec, config_.params, group_.pot,
                            config_.orbit_start, t_end, opt);
              r.message = std::to_string(traj.samples.size()) + " samples";
              return max_relative_drift(traj, group_.pot);
            });

    if (group_.spec.family == Family::kStandard) return;

    RescaleReport rescale;
    bool have_rescale = false;
    auto flow = record("flow_rescale", "deviation", where, tol.flow_deviation);
    guarded(std::move(flow), [&](CheckRecord& r) {
      const double e0 =
          standard_energy(config_.params, group_.pot, config_.orbit_start);
      const double c = chain_factor(group_.spec, config_.params, e0);
      if (!(c > 0.0)) {
        r.status = CheckStatus::kSkipped;
        r.message = "chain factor not positive; no forward rescaling";
        return 0.0;
      }
      const double t_end = 3.0 * base_period;
      rescale = compare_flows(HamiltonianSpec::standard(), group_.spec,
                              config_.params, group_.pot, config_.orbit_start,
                              t_end, opt);
      have_rescale = true;
      r.message = "factor " + number(rescale.factor) + ", " +
                  std::to_string(rescale.compared_samples) + " samples";
      return rescale.max_deviation;
    });
    if (!have_rescale) return;
    CheckRecord ratio = record("period_ratio", "ratio", where, tol.period_ratio);
    if (std::isnan(rescale.measured_period_ratio)) {
      ratio.status = CheckStatus::kSkipped;
      ratio.message = "open orbit";
    } else {
      ratio.residual = std::fabs(rescale.measured_period_ratio -
                                 rescale.predicted_period_ratio);
      ratio.message = "measured " + number(rescale.measured_period_ratio) +
                      ", predicted " + number(rescale.predicted_period_ratio);
    }
    push(std::move(ratio));
  }

  bool has_lagrangian() const {
    const HamiltonianSpec& s = group_.spec;
    return s.family == Family::kStandard ||
           (s.family == Family::kCabbatonian && s.sign == -1);
  }

  LagrangianSpec lagrangian_spec() const {
    LagrangianSpec l;
    l.lambdas = group_.spec.lambdas;
    l.params = config_.params;
    l.pot = group_.pot;
    return l;
  }

  void legendre_checks() {
    if (!has_lagrangian()) return;
    const int n = config_.legendre_grid;
    const double ext = config_.legendre_extent;
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      axis[static_cast<std::size_t>(i)] =
          n == 1 ? 0.0 : -ext + 2.0 * ext * i / (n - 1);
    }
    const std::string where =
        std::to_string(n) + "x" + std::to_string(n) + " grid, |x|,|v| <= " +
        number(ext);
    const LagrangianSpec spec = lagrangian_spec();
    guarded(record("legendre", "grid", where, config_.tolerances.legendre),
            [&](CheckRecord&) {
              double worst = 0.0;
              for (const auto& row : legendre_grid(spec, axis, axis)) {
                worst = std::max(worst, std::fabs(row.residual) /
                                            std::max(1.0, std::fabs(row.lagrangian)));
              }
              return worst;
            });
    guarded(record("legendre_momentum", "grid", where, 1e-6),
            [&](CheckRecord&) {
              constexpr double kStep = 1e-5;
              double worst = 0.0;
              for (double x : axis) {
                for (double v : axis) {
                  const double dl = (lagrangian(spec, {x, v + kStep}) -
                                     lagrangian(spec, {x, v - kStep})) /
                                    (2.0 * kStep);
                  const double p = momentum(spec, {x, v});
                  worst = std::max(worst,
                                   std::fabs(dl - p) / std::max(1.0, std::fabs(p)));
                }
              }
              return worst;
            });
  }

  void merge(const Report& r) {
    for (const auto& rec : r.records) {
      CheckRecord copy = rec;
      copy.key = prefix_ + rec.key;
      result_.records.push_back(std::move(copy));
    }
    for (const auto& [k, v] : r.slopes) result_.slopes[prefix_ + k] = v;
  }

  void ladder_checks() {
    const HamiltonianSpec& s = group_.spec;
    if (s.family != Family::kCabbatonian) return;
    const double slope_tol = config_.tolerances.slope;
    const std::string where = "point (" + number(config_.ladder_point.x) + ", " +
                              number(config_.ladder_point.p) + ")";
    try {
      merge(limit_ladder(s, config_.params, group_.pot, config_.ladder_point,
                         config_.lambda_grid, slope_tol));
    } catch (const OverflowRisk& e) {
      CheckRecord r = record("limit_slope", "hamiltonian", where, slope_tol);
      r.residual = std::numeric_limits<double>::infinity();
      r.status = CheckStatus::kOverflow;
      r.message = e.what();
      push(std::move(r));
    }
    if (s.level != 1 || s.sign != -1) return;
    const VelocityPoint vp{config_.ladder_point.x,
                           config_.ladder_point.p / config_.params.m};
    try {
      merge(lagrangian_limit_ladder(lagrangian_spec(), vp, config_.lambda_grid,
                                    slope_tol));
    } catch (const std::exception& e) {
      CheckRecord r = record("limit_slope", "lagrangian", where, slope_tol);
      r.residual = std::numeric_limits<double>::infinity();
      r.status = dynamic_cast<const OverflowRisk*>(&e) ? CheckStatus::kOverflow
                                                       : CheckStatus::kError;
      r.message = e.what();
      push(std::move(r));
    }
  }

  const SuiteConfig& config_;
  const Group& group_;
  const std::vector<PhasePoint>& points_;
  std::string prefix_;
  GroupResult result_;
};

}  // namespace

Report run_suite(const SuiteConfig& config) {
  Report report;
  report.suite = "zoo";
  report.seed = config.seed;
  std::string description;
  for (const auto& s : config.specs) {
    if (!description.empty()) description += "; ";
    description += s.describe();
  }
  report.description = description;

  std::vector<Potential> pots;
  for (const auto& src : config.potentials) {
    try {
      pots.push_back(parse_potential(src));
    } catch (const Error& e) {
      throw ConfigError("bad potential '" + src + "': " + e.what());
    }
  }
  for (const auto& s : config.specs) {
    try {
      validate(s, config.params);
    } catch (const InvalidSpec& e) {
      throw ConfigError(std::string("bad spec: ") + e.what());
    }
  }
  check_grid(config.lambda_grid);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> box(-config.box, config.box);
  std::vector<PhasePoint> points(static_cast<std::size_t>(config.points));
  for (auto& pt : points) {
    pt.x = box(rng);
    pt.p = box(rng);
  }

  std::vector<Group> groups;
  for (std::size_t si = 0; si < config.specs.size(); ++si) {
    for (std::size_t pi = 0; pi < pots.size(); ++pi) {
      groups.push_back({si, pi, config.specs[si], pots[pi]});
    }
  }
  std::vector<std::future<GroupResult>> futures;
  futures.reserve(groups.size());
  for (const Group& g : groups) {
    futures.push_back(std::async(std::launch::async, [&config, &g, &points] {
      return GroupRunner(config, g, points).run();
    }));
  }
  for (auto& f : futures) {
    GroupResult r = f.get();
    for (auto& rec : r.records) report.records.push_back(std::move(rec));
    report.slopes.merge(r.slopes);
  }
  report.sort_records();
  return report;
}

}  // namespace hamzoo
