#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "hamzoo/dynamics.hpp"
#include "hamzoo/expr.hpp"
#include "hamzoo/legendre.hpp"
#include "hamzoo/zoo.hpp"

namespace hamzoo {

enum class CheckStatus { kOk, kFailed, kOverflow, kSkipped, kError };

std::string to_string(CheckStatus s);

struct CheckRecord {
  std::string key;  // unique; records are ordered by it
  std::string check;
  std::string spec;
  std::string potential;
  std::string where;  // point, grid or lambda sequence
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // residual <= tolerance
  CheckStatus status = CheckStatus::kOk;
  std::string message;
};

struct Report {
  std::string suite;
  std::string description;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;
  std::map<std::string, double> slopes;

  /// Appends a record with pass/status derived from residual vs tolerance.
  void add(CheckRecord record);

  bool all_pass() const;
  double max_residual() const;
  std::size_t count(CheckStatus s) const;
  void sort_records();
};

nlohmann::json report_to_json(const Report& report);

/// Fixed-width summary table, one row per check kind.
void print_summary(const Report& report, std::ostream& out);

// --- residuals of the defining identities ------------------------------------

/// (1/m) hx + pdot hpp + (p/m) hpx with pdot = -V'(x), divided by
/// max(1, |hx|/m, |pdot hpp|, |(p/m) hpx|).
double pde_residual(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt);

/// pdot hp + (p/m) hx with pdot = -V'(x), divided by
/// max(1, |pdot hp|, |(p/m) hx|).
double nh2_residual(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt);

/// |d/dp (raw nh2) by central differences - raw pde|, on the pde scale.
double nh3_from_nh2_check(const HamiltonianSpec& spec, const SystemParams& params,
                          const Potential& pot, const PhasePoint& pt);

/// Least-squares slope of log(ys) against log(xs).
double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys);

/// Cabbatonian level j -> j-1: |H_j - s m l_j^2 - H_{j-1}| at `pt` with the
/// outermost lambda swept over `lambda_grid` (others fixed). Records one
/// entry per lambda and the fitted slope under slopes["limit_ladder"].
Report limit_ladder(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt,
                    const std::vector<double>& lambda_grid,
                    double slope_tolerance = 0.05);

/// Lagrangian analogue: |L_j - m l_j^2 - L_{j-1}| swept over l_j.
Report lagrangian_limit_ladder(const LagrangianSpec& spec,
                               const VelocityPoint& pt,
                               const std::vector<double>& lambda_grid,
                               double slope_tolerance = 0.05);

// --- suite --------------------------------------------------------------------

struct SuiteTolerances {
  double pde = 1e-8;
  double nh2 = 1e-8;
  double nh3 = 1e-6;
  double conservation = 1e-8;
  double flow_deviation = 1e-5;
  double period_ratio = 1e-4;
  double legendre = 1e-8;
  double slope = 0.05;
};

struct SuiteConfig {
  std::vector<std::string> potentials{"0.5*x^2"};
  SystemParams params;
  std::vector<HamiltonianSpec> specs;
  int points = 100;
  std::uint64_t seed = 42;
  double box = 2.0;  // random points in |x|, |p| <= box
  SuiteTolerances tolerances;
  std::vector<double> lambda_grid{10, 20, 40, 80};
  PhasePoint orbit_start{1.0, 0.0};
  PhasePoint ladder_point{1.0, 1.0};
  double rk45_tol = 1e-10;
  double periods = 10.0;
  int legendre_grid = 10;
  double legendre_extent = 1.5;
};

/// The all-family harmonic oscillator suite.
SuiteConfig default_suite_config();

/// Reads the JSON config format; throws ConfigError on bad input.
SuiteConfig suite_config_from_json(const nlohmann::json& j);

/// Runs every check for every (spec x potential) pair. Per-check failures
/// (including OverflowRisk) become records; only config errors throw.
Report run_suite(const SuiteConfig& config);

}  // namespace hamzoo
