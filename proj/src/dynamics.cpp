#include "hamzoo/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hamzoo/error.hpp"

namespace hamzoo {

std::string to_string(Method m) {
  switch (m) {
    case Method::kRk4:
      return "rk4";
    case Method::kRk45:
      return "rk45";
    case Method::kImplicitMidpoint:
      return "implicit_midpoint";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "rk4") return Method::kRk4;
  if (name == "rk45") return Method::kRk45;
  if (name == "implicit_midpoint") return Method::kImplicitMidpoint;
  throw std::invalid_argument("unknown integration method '" + name + "'");
}

namespace {

using State = std::array<double, 2>;

State operator+(const State& a, const State& b) { return {a[0] + b[0], a[1] + b[1]}; }
State operator*(double s, const State& a) { return {s * a[0], s * a[1]}; }

class Flow {
 public:
  Flow(const HamiltonianSpec& spec, const SystemParams& params,
       const Potential& pot)
      : spec_(spec), params_(params), pot_(pot) {}

  State operator()(const State& y) const {
    const HDerivs d = eval_derivs(spec_, params_, pot_, {y[0], y[1]});
    return {d.hp, -d.hx};
  }

 private:
  const HamiltonianSpec& spec_;
  const SystemParams& params_;
  const Potential& pot_;
};

Sample make_sample(double t, const State& y, const State& f) {
  return {t, y[0], y[1], f[0], f[1]};
}

void check_finite(double t, const State& y) {
  if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
    throw StepFailure(t, "state became non-finite");
  }
}

// Fixed step count so the grid ends exactly at t_end.
int fixed_steps(double t_end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  return std::max(1, static_cast<int>(std::lround(t_end / step)));
}

// i-th of n uniform grid times; the last one is t_end exactly.
double grid_time(int i, int n, double t_end) {
  return i == n ? t_end : t_end * i / n;
}

void run_rk4(const Flow& flow, double t_end, const IntegratorOptions& opt,
             Trajectory& traj) {
  const int n = fixed_steps(t_end, opt.step);
  const double h = t_end / n;
  traj.step = h;
  State y{traj.samples.back().x, traj.samples.back().p};
  State k1{traj.samples.back().xdot, traj.samples.back().pdot};
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const State k2 = flow(y + (0.5 * h) * k1);
    const State k3 = flow(y + (0.5 * h) * k2);
    const State k4 = flow(y + h * k3);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(t + h, y);
    k1 = flow(y);
    traj.samples.push_back(make_sample(grid_time(i + 1, n, t_end), y, k1));
  }
}

void run_implicit_midpoint(const Flow& flow, double t_end,
                           const IntegratorOptions& opt, Trajectory& traj) {
  const int n = fixed_steps(t_end, opt.step);
  const double h = t_end / n;
  traj.step = h;
  State y{traj.samples.back().x, traj.samples.back().p};
  State f{traj.samples.back().xdot, traj.samples.back().pdot};
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    // solve z = y + h F((y + z)/2) by fixed-point iteration from an Euler guess
    State z = y + h * f;
    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const State next = y + h * flow(0.5 * (y + z));
      const double change = std::max(std::fabs(next[0] - z[0]),
                                     std::fabs(next[1] - z[1]));
      z = next;
      const double scale = std::max({1.0, std::fabs(z[0]), std::fabs(z[1])});
      if (change <= opt.newton_tol * scale) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw StepFailure(t, "implicit midpoint iteration did not converge");
    }
    y = z;
    check_finite(t + h, y);
    f = flow(y);
    traj.samples.push_back(make_sample(grid_time(i + 1, n, t_end), y, f));
  }
}

// Dormand-Prince 5(4) with FSAL.
void run_rk45(const Flow& flow, double t_end, const IntegratorOptions& opt,
              Trajectory& traj) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  double t = 0.0;
  State y{traj.samples.back().x, traj.samples.back().p};
  State k1{traj.samples.back().xdot, traj.samples.back().pdot};

  // initial guess from the velocity scale, refined by the controller
  const double speed = std::max(std::hypot(k1[0], k1[1]), 1e-12);
  const double size = std::max(1.0, std::hypot(y[0], y[1]));
  double h = std::min(t_end, 0.01 * size / speed);
  h = std::max(h, 1e-6 * t_end);

  while (t < t_end) {
    const bool last = t + h >= t_end * (1.0 - 1e-14);
    if (last) h = t_end - t;
    const State k2 = flow(y + (h * a21) * k1);
    const State k3 = flow(y + h * (a31 * k1 + a32 * k2));
    const State k4 = flow(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 = flow(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 =
        flow(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = flow(y5);
    const State err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double ratio = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double scale =
          opt.tol * std::max(1.0, std::max(std::fabs(y[i]), std::fabs(y5[i])));
      ratio = std::max(ratio, std::fabs(err[i]) / scale);
    }
    if (!std::isfinite(ratio)) ratio = 1e10;

    if (ratio <= 1.0) {
      t = last ? t_end : t + h;
      y = y5;
      k1 = k7;
      check_finite(t, y);
      traj.samples.push_back(make_sample(t, y, k1));
      traj.step = h;
    }
    const double grow =
        ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    h *= ratio <= 1.0 ? grow : std::min(grow, 1.0);
    if (t < t_end && h < 1e-14 * std::max(1.0, std::fabs(t))) {
      throw StepFailure(t, "adaptive step size underflow");
    }
  }
}

}  // namespace

Trajectory integrate(const HamiltonianSpec& spec, const SystemParams& params,
                     const Potential& pot, const PhasePoint& start, double t_end,
                     const IntegratorOptions& options) {
  validate(spec, params);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("t_end must be finite and >= 0");
  }
  if (!std::isfinite(start.x) || !std::isfinite(start.p)) {
    throw std::invalid_argument("start point must be finite");
  }
  Trajectory traj;
  traj.spec = spec;
  traj.params = params;
  traj.method = options.method;
  traj.tol = options.method == Method::kRk45 ? options.tol : 0.0;
  traj.step = options.method == Method::kRk45 ? 0.0 : options.step;

  const Flow flow(traj.spec, traj.params, pot);
  try {
    const State y0{start.x, start.p};
    traj.samples.push_back(make_sample(0.0, y0, flow(y0)));
    if (t_end == 0.0) return traj;
    switch (options.method) {
      case Method::kRk4:
        run_rk4(flow, t_end, options, traj);
        break;
      case Method::kRk45:
        run_rk45(flow, t_end, options, traj);
        break;
      case Method::kImplicitMidpoint:
        run_implicit_midpoint(flow, t_end, options, traj);
        break;
    }
  } catch (OverflowRisk& e) {
    e.time = traj.samples.empty() ? 0.0 : traj.samples.back().t;
    throw;
  }
  return traj;
}

namespace {

struct Hermite {
  double h, y0, y1, d0, d1;

  double operator()(double s) const {  // s in [0, 1]
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
  }
};

std::size_t bracket(const std::vector<Sample>& s, double t) {
  const auto it = std::upper_bound(
      s.begin(), s.end(), t, [](double v, const Sample& a) { return v < a.t; });
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  if (i == 0) return 0;
  return std::min(i - 1, s.size() - 2);
}

}  // namespace

PhasePoint interpolate(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  if (s.empty()) throw std::invalid_argument("empty trajectory");
  if (s.size() == 1 || t <= s.front().t) return {s.front().x, s.front().p};
  if (t >= s.back().t) return {s.back().x, s.back().p};
  const std::size_t i = bracket(s, t);
  const Sample& a = s[i];
  const Sample& b = s[i + 1];
  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  return {Hermite{h, a.x, b.x, a.xdot, b.xdot}(u),
          Hermite{h, a.p, b.p, a.pdot, b.pdot}(u)};
}

std::vector<double> momentum_zero_crossings(const Trajectory& traj) {
  const auto& s = traj.samples;
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].p == 0.0) {
      out.push_back(s[i].t);
      continue;
    }
    if (i + 1 == s.size() || !(s[i].p * s[i + 1].p < 0.0)) continue;
    const Sample& a = s[i];
    const Sample& b = s[i + 1];
    const Hermite cubic{b.t - a.t, a.p, b.p, a.pdot, b.pdot};
    double lo = 0.0, hi = 1.0;
    const bool rising = a.p < 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((cubic(mid) < 0.0) == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(a.t + 0.5 * (lo + hi) * (b.t - a.t));
  }
  return out;
}

double measure_period(const Trajectory& traj) {
  const std::vector<double> z = momentum_zero_crossings(traj);
  if (z.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  // (z[last] - z[first]) over the number of full periods spanned
  const std::size_t pairs = (z.size() - 1) / 2;
  return (z[2 * pairs] - z[0]) / static_cast<double>(pairs);
}

double max_relative_drift(const Trajectory& traj, const Potential& pot) {
  const double h_start = eval_h(traj.spec, traj.params, pot, traj.start());
  const double scale = std::max(1.0, std::fabs(h_start));
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    const double h = eval_h(traj.spec, traj.params, pot, {s.x, s.p});
    worst = std::max(worst, std::fabs(h - h_start) / scale);
  }
  return worst;
}

double max_relative_h0_drift(const Trajectory& traj, const Potential& pot) {
  const double e_start = standard_energy(traj.params, pot, traj.start());
  const double scale = std::max(1.0, std::fabs(e_start));
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    const double e = standard_energy(traj.params, pot, {s.x, s.p});
    worst = std::max(worst, std::fabs(e - e_start) / scale);
  }
  return worst;
}

double newton_residual(const Trajectory& traj, const SystemParams& params,
                       const Potential& pot) {
  const auto& s = traj.samples;
  if (s.size() < 5) {
    throw std::invalid_argument("newton residual needs at least 5 samples");
  }
  const double h = s[1].t - s[0].t;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (std::fabs((s[i + 1].t - s[i].t) - h) > 1e-9 * h) {
      throw std::invalid_argument("newton residual needs uniform steps");
    }
  }
  const double e0 = standard_energy(params, pot, traj.start());
  const double c = chain_factor(traj.spec, params, e0);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double accel = (s[i + 1].x - 2.0 * s[i].x + s[i - 1].x) / (h * h);
    const double newton = -c * c * pot.slope(s[i].x) / params.m;
    worst = std::max(worst, std::fabs(accel - newton));
  }
  return worst;
}

RescaleReport compare_flows(const HamiltonianSpec& spec_a,
                            const HamiltonianSpec& spec_b,
                            const SystemParams& params, const Potential& pot,
                            const PhasePoint& start, double t_end,
                            const IntegratorOptions& options) {
  const double e0 = standard_energy(params, pot, start);
  const double c_a = chain_factor(spec_a, params, e0);
  const double c_b = chain_factor(spec_b, params, e0);
  if (!(c_a != 0.0) || !(c_b / c_a > 0.0)) {
    throw std::invalid_argument(
        "flows are not related by a forward time rescaling at this energy");
  }
  const Trajectory a = integrate(spec_a, params, pot, start, t_end, options);
  // B covers the same stretch of the orbit as A
  const Trajectory b =
      integrate(spec_b, params, pot, start, t_end * c_a / c_b, options);

  RescaleReport r;
  r.factor = c_b / c_a;
  r.predicted_period_ratio = c_a / c_b;
  const double t_a_max = a.samples.back().t;
  for (const Sample& s : b.samples) {
    const double t_a = s.t * r.factor;
    if (t_a > t_a_max * (1.0 + 1e-14)) continue;
    const PhasePoint q = interpolate(a, t_a);
    r.max_deviation = std::max(
        {r.max_deviation, std::fabs(q.x - s.x), std::fabs(q.p - s.p)});
    ++r.compared_samples;
  }
  const double period_a = measure_period(a);
  const double period_b = measure_period(b);
  r.measured_period_ratio = period_b / period_a;
  return r;
}

double dt_k_factor(int k, double energy, double m, double lambda) {
  if (k < 1) throw std::invalid_argument("dt_k_factor needs k >= 1");
  const double ratio = energy / (m * lambda * lambda);
  double factor = 1.0;
  for (int i = 1; i < k; ++i) factor *= ratio / i;
  return factor;
}

}  // namespace hamzoo
