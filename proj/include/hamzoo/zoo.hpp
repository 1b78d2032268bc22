#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamzoo/expr.hpp"

namespace hamzoo {

/// Largest |argument| any nested exponential may see before OverflowRisk.
inline constexpr double kMaxExponentArgument = 50.0;

struct SystemParams {
  double m = 1.0;  // mass, > 0
};

enum class Family { kStandard, kCabbatonian, kSigma, kTruncatedSeries, kPowerBase };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// One member of the zoo. Every member is a function H = f(H0) of the
/// standard Hamiltonian H0 = p^2/2m + V(x):
///
///   Standard         H0
///   Cabbatonian j    H_j = s*m*l_j^2 * exp(s*H_{j-1} / (m*l_j^2)), H_0 = H0
///   Sigma j          H_j * exp(-H_j / (m*sigma^2))
///   TruncatedSeries  sum_{k<=K} a_j^k H0^k  (Taylor coefficients of H_j)
///   PowerBase k      H0^k
///
/// `sign` (s) selects the branch of every exponential level at once.
struct HamiltonianSpec {
  Family family = Family::kStandard;
  int level = 0;
  std::vector<double> lambdas;
  std::optional<double> sigma;
  int sign = -1;
  int order = 0;     // TruncatedSeries only
  int exponent = 0;  // PowerBase only

  static HamiltonianSpec standard();
  static HamiltonianSpec cabbatonian(std::vector<double> lambdas, int sign = -1);
  static HamiltonianSpec sigma_family(std::vector<double> lambdas, double sigma,
                                      int sign = -1);
  static HamiltonianSpec truncated_series(std::vector<double> lambdas, int order,
                                          int sign = -1);
  static HamiltonianSpec power_base(int exponent);

  /// Short human-readable tag, e.g. "cabbatonian(j=2, l=[2,3], s=-1)".
  std::string describe() const;
};

/// Throws InvalidSpec when the spec or params break their invariants.
void validate(const HamiltonianSpec& spec, const SystemParams& params);

/// The Cabbatonian one level down (lambdas[0..j-1)). Only for Cabbatonian
/// specs with level >= 1; level 1 yields Standard.
HamiltonianSpec parent_level(const HamiltonianSpec& spec);

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

struct HDerivs {
  double h = 0.0;
  double hx = 0.0;   // dH/dx
  double hp = 0.0;   // dH/dp
  double hpp = 0.0;  // d2H/dp2
  double hpx = 0.0;  // d2H/dp dx
};

/// f(E), f'(E), f''(E) for the composition H = f(H0).
struct EnergyJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// One step of the iterated exponential map H -> omega * exp(H / omega).
double iterated_map(double h, double omega);

double standard_energy(const SystemParams& params, const Potential& pot,
                       const PhasePoint& pt);

/// Throws OverflowRisk (naming the level) when a nested exponent argument
/// exceeds kMaxExponentArgument in magnitude.
EnergyJet energy_jet(const HamiltonianSpec& spec, const SystemParams& params,
                     double energy0);

double eval_h(const HamiltonianSpec& spec, const SystemParams& params,
              const Potential& pot, const PhasePoint& pt);

HDerivs eval_derivs(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt);

/// dH/dH0 at H0 = energy0; the constant time-rescaling factor of the flow.
double chain_factor(const HamiltonianSpec& spec, const SystemParams& params,
                    double energy0);

}  // namespace hamzoo
