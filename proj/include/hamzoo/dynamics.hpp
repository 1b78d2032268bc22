#pragma once

#include <string>
#include <vector>

#include "hamzoo/expr.hpp"
#include "hamzoo/zoo.hpp"

namespace hamzoo {

enum class Method { kRk4, kRk45, kImplicitMidpoint };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct IntegratorOptions {
  Method method = Method::kRk4;
  double step = 1e-3;  // fixed-step methods; adjusted so tEnd is hit exactly
  double tol = 1e-10;  // rk45 local error target
  // implicit midpoint fixed-point iteration
  double newton_tol = 1e-12;
  int max_iterations = 50;
};

/// One time-stamped state with the flow velocity at that state.
struct Sample {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
  double xdot = 0.0;  // dH/dp
  double pdot = 0.0;  // -dH/dx
};

struct Trajectory {
  std::vector<Sample> samples;
  HamiltonianSpec spec;
  SystemParams params;
  Method method = Method::kRk4;
  double step = 0.0;  // actual fixed step, or last accepted rk45 step
  double tol = 0.0;

  PhasePoint start() const { return {samples.front().x, samples.front().p}; }
};

/// Integrates x' = dH/dp, p' = -dH/dx from `start` to `t_end` (>= 0).
/// Throws OverflowRisk (with `time` set) when the guard fires mid-flight and
/// StepFailure when the adaptive step underflows or the implicit solve stalls.
Trajectory integrate(const HamiltonianSpec& spec, const SystemParams& params,
                     const Potential& pot, const PhasePoint& start, double t_end,
                     const IntegratorOptions& options = {});

/// Cubic Hermite interpolation of (x, p) at time t using the stored flow
/// velocities. t outside the sampled range clamps to the end samples.
PhasePoint interpolate(const Trajectory& traj, double t);

/// Times where p(t) changes sign (exact zeros at samples included).
std::vector<double> momentum_zero_crossings(const Trajectory& traj);

/// Mean full period from every other zero crossing of p; NaN when fewer
/// than three crossings were seen.
double measure_period(const Trajectory& traj);

/// max over samples of |H(sample) - H(start)| / max(1, |H(start)|).
double max_relative_drift(const Trajectory& traj, const Potential& pot);

/// Same drift measure for the standard energy H0 along the trajectory.
double max_relative_h0_drift(const Trajectory& traj, const Potential& pot);

/// Max over interior samples of |x''(central diff) - c^2 * (-V'(x)/m)|, with c
/// the chain factor at the conserved H0. Needs >= 5 uniformly spaced samples.
double newton_residual(const Trajectory& traj, const SystemParams& params,
                       const Potential& pot);

struct RescaleReport {
  double factor = 0.0;  // c_B / c_A
  double predicted_period_ratio = 0.0;  // T_B / T_A = c_A / c_B
  double measured_period_ratio = 0.0;   // NaN for open orbits
  double max_deviation = 0.0;           // max |(x,p)_B(t) - (x,p)_A(t*factor)|
  std::size_t compared_samples = 0;
};

/// Integrates A from `start` to t_end and B over the same stretch of orbit
/// (to t_end * c_A/c_B), then compares B, with its clock rescaled by c_B/c_A,
/// against A.
RescaleReport compare_flows(const HamiltonianSpec& spec_a,
                            const HamiltonianSpec& spec_b,
                            const SystemParams& params, const Potential& pot,
                            const PhasePoint& start, double t_end,
                            const IntegratorOptions& options = {Method::kRk45});

/// d/dt_k = E^(k-1) / ((k-1)! (m l^2)^(k-1)) d/dt_0 for the k-th flow of the
/// harmonic-oscillator series decomposition.
double dt_k_factor(int k, double energy, double m, double lambda);

}  // namespace hamzoo
