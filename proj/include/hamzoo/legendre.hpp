#pragma once

#include <vector>

#include "hamzoo/dynamics.hpp"
#include "hamzoo/expr.hpp"
#include "hamzoo/quadrature.hpp"
#include "hamzoo/zoo.hpp"

namespace hamzoo {

/// Level-j member of the Lagrangian hierarchy dual to the Cabbatonian H_j on
/// the e^{-E/(m l^2)} branch. j = lambdas.size(); j = 0 is T - V.
struct LagrangianSpec {
  std::vector<double> lambdas;
  SystemParams params;
  Potential pot;
  QuadratureOptions quadrature;

  int level() const { return static_cast<int>(lambdas.size()); }
  /// The Hamiltonian this Lagrangian is the Legendre dual of (sign -1).
  HamiltonianSpec hamiltonian() const;
};

/// Throws InvalidSpec for non-positive lambdas or mass.
void validate(const LagrangianSpec& spec);

struct VelocityPoint {
  double x = 0.0;
  double v = 0.0;
};

/// E(q, x) = m q^2 / 2 + V(x).
double velocity_energy(const LagrangianSpec& spec, double x, double q);

/// Kernel E_i(q, x), 1 <= i <= j: E_1 = exp(-E/(m l_1^2)) and
/// E_i = exp(-H_{i-1}/(m l_i^2)) with H_i = -m l_i^2 E_i. Throws OverflowRisk.
double energy_kernel(const LagrangianSpec& spec, int i, double x, double q);

/// prod_{i=1..j} E_i(q, x), which equals dH_j/dH0 at H0 = E(q, x).
double kernel_product(const LagrangianSpec& spec, double x, double q);

/// p_j = m * int_0^v prod E_i(q, x) dq. Throws QuadratureFailure.
double momentum(const LagrangianSpec& spec, const VelocityPoint& pt);

/// L_0 = m v^2/2 - V(x);
/// L_j = m l_j^2 [E_j(v, x) + (v / l_j^2) int_0^v prod E_i(q, x) dq].
double lagrangian(const LagrangianSpec& spec, const VelocityPoint& pt);

/// L_j - (p_j v - H_j) with H_j taken at H0 = E(v, x), the energy value of
/// the configuration. Round-off small whenever the hierarchy is consistent.
double legendre_residual(const LagrangianSpec& spec, const VelocityPoint& pt);

/// Max |dL/dx - d/dt0 (dL/dv)| over interior samples, all derivatives by
/// central differences (step 1e-5 in x and v). The trajectory clock is mapped
/// to standard time t0 = c t with c the chain factor of `traj.spec` at the
/// conserved H0, and v = dx/dt0. Needs >= 3 uniformly spaced samples.
double euler_lagrange_residual(const LagrangianSpec& spec,
                               const Trajectory& traj);

/// sum_{i=0..k} k! T^(k-i) V^i / ((k-i)! i! (2k - (2i+1))) for the
/// oscillator, T = m v^2 / 2, V = spring_k x^2 / 2.
double sho_series_lagrangian(int k, double m, double spring_k,
                             const VelocityPoint& pt);

struct LegendreGridRow {
  double x = 0.0;
  double v = 0.0;
  double lagrangian = 0.0;
  double momentum = 0.0;
  double residual = 0.0;
};

std::vector<LegendreGridRow> legendre_grid(const LagrangianSpec& spec,
                                           const std::vector<double>& xs,
                                           const std::vector<double>& vs);

}  // namespace hamzoo
