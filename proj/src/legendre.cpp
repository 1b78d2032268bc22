#include "hamzoo/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hamzoo/error.hpp"

namespace hamzoo {

HamiltonianSpec LagrangianSpec::hamiltonian() const {
  if (lambdas.empty()) return HamiltonianSpec::standard();
  return HamiltonianSpec::cabbatonian(lambdas, -1);
}

void validate(const LagrangianSpec& spec) {
  validate(spec.hamiltonian(), spec.params);
}

double velocity_energy(const LagrangianSpec& spec, double x, double q) {
  return 0.5 * spec.params.m * q * q + spec.pot.value(x);
}

namespace {

// Walks the kernels from the base energy, calling visit(i, E_i).
template <typename Visit>
void walk_kernels(const LagrangianSpec& spec, double energy, int depth,
                  Visit&& visit) {
  double h = energy;  // H_{i-1} on the sign -1 branch
  for (int i = 1; i <= depth; ++i) {
    const double l = spec.lambdas[static_cast<std::size_t>(i - 1)];
    const double omega = spec.params.m * l * l;
    const double arg = -h / omega;
    if (!(std::fabs(arg) <= kMaxExponentArgument)) {
      throw OverflowRisk(i, arg, "lagrangian kernel exponent out of range");
    }
    const double e = std::exp(arg);
    visit(i, e);
    h = -omega * e;
  }
}

}  // namespace

double energy_kernel(const LagrangianSpec& spec, int i, double x, double q) {
  if (i < 1 || i > spec.level()) {
    throw std::out_of_range("kernel index outside 1..j");
  }
  double out = 0.0;
  walk_kernels(spec, velocity_energy(spec, x, q), i,
               [&](int level, double e) {
                 if (level == i) out = e;
               });
  return out;
}

double kernel_product(const LagrangianSpec& spec, double x, double q) {
  double prod = 1.0;
  walk_kernels(spec, velocity_energy(spec, x, q), spec.level(),
               [&](int, double e) { prod *= e; });
  return prod;
}

namespace {

double kernel_integral(const LagrangianSpec& spec, const VelocityPoint& pt) {
  if (spec.level() == 0) return pt.v;
  const double v_x = spec.pot.value(pt.x);
  const double m = spec.params.m;
  // x is fixed along the integral; evaluate V once
  auto integrand = [&](double q) {
    double prod = 1.0;
    walk_kernels(spec, 0.5 * m * q * q + v_x, spec.level(),
                 [&](int, double e) { prod *= e; });
    return prod;
  };
  return adaptive_simpson(integrand, 0.0, pt.v, spec.quadrature).value;
}

}  // namespace

double momentum(const LagrangianSpec& spec, const VelocityPoint& pt) {
  validate(spec);
  return spec.params.m * kernel_integral(spec, pt);
}

double lagrangian(const LagrangianSpec& spec, const VelocityPoint& pt) {
  validate(spec);
  const double m = spec.params.m;
  if (spec.level() == 0) {
    return 0.5 * m * pt.v * pt.v - spec.pot.value(pt.x);
  }
  const double l = spec.lambdas.back();
  const double outer =
      energy_kernel(spec, spec.level(), pt.x, pt.v);  // E_j(v, x)
  return m * l * l * (outer + pt.v / (l * l) * kernel_integral(spec, pt));
}

double legendre_residual(const LagrangianSpec& spec, const VelocityPoint& pt) {
  const double l = lagrangian(spec, pt);
  const double p = momentum(spec, pt);
  const double energy = velocity_energy(spec, pt.x, pt.v);
  const double h = energy_jet(spec.hamiltonian(), spec.params, energy).value;
  return l - (p * pt.v - h);
}

double euler_lagrange_residual(const LagrangianSpec& spec,
                               const Trajectory& traj) {
  validate(spec);
  const auto& s = traj.samples;
  if (s.size() < 3) {
    throw std::invalid_argument("euler-lagrange residual needs >= 3 samples");
  }
  const double h = s[1].t - s[0].t;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (std::fabs((s[i + 1].t - s[i].t) - h) > 1e-9 * h) {
      throw std::invalid_argument("euler-lagrange residual needs uniform steps");
    }
  }
  const double e0 = standard_energy(traj.params, spec.pot, traj.start());
  const double c = chain_factor(traj.spec, traj.params, e0);
  if (!(c > 0.0)) {
    throw std::invalid_argument("trajectory clock cannot be mapped forward");
  }
  const double dt0 = c * h;
  constexpr double kStep = 1e-5;

  auto dl_dv = [&](double x, double v) {
    return (lagrangian(spec, {x, v + kStep}) - lagrangian(spec, {x, v - kStep})) /
           (2.0 * kStep);
  };
  auto dl_dx = [&](double x, double v) {
    return (lagrangian(spec, {x + kStep, v}) - lagrangian(spec, {x - kStep, v})) /
           (2.0 * kStep);
  };

  std::vector<double> momenta(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    momenta[i] = dl_dv(s[i].x, s[i].xdot / c);
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double dp_dt = (momenta[i + 1] - momenta[i - 1]) / (2.0 * dt0);
    const double force = dl_dx(s[i].x, s[i].xdot / c);
    worst = std::max(worst, std::fabs(force - dp_dt));
  }
  return worst;
}

double sho_series_lagrangian(int k, double m, double spring_k,
                             const VelocityPoint& pt) {
  if (k < 1) throw std::invalid_argument("series Lagrangian needs k >= 1");
  const double t = 0.5 * m * pt.v * pt.v;
  const double v = 0.5 * spring_k * pt.x * pt.x;
  double sum = 0.0;
  double binom = 1.0;  // C(k, i)
  for (int i = 0; i <= k; ++i) {
    sum += binom * std::pow(t, k - i) * std::pow(v, i) / (2 * k - (2 * i + 1));
    binom = binom * (k - i) / (i + 1);
  }
  return sum;
}

std::vector<LegendreGridRow> legendre_grid(const LagrangianSpec& spec,
                                           const std::vector<double>& xs,
                                           const std::vector<double>& vs) {
  std::vector<LegendreGridRow> rows;
  rows.reserve(xs.size() * vs.size());
  for (double x : xs) {
    for (double v : vs) {
      LegendreGridRow r;
      r.x = x;
      r.v = v;
      r.lagrangian = lagrangian(spec, {x, v});
      r.momentum = momentum(spec, {x, v});
      r.residual = legendre_residual(spec, {x, v});
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace hamzoo
