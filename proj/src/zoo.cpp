#include "hamzoo/zoo.hpp"

#include <cmath>
#include <cstdio>

#include "hamzoo/error.hpp"
#include "hamzoo/series.hpp"

namespace hamzoo {

std::string to_string(Family f) {
  switch (f) {
    case Family::kStandard:
      return "standard";
    case Family::kCabbatonian:
      return "cabbatonian";
    case Family::kSigma:
      return "sigma";
    case Family::kTruncatedSeries:
      return "truncated_series";
    case Family::kPowerBase:
      return "power_base";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "standard") return Family::kStandard;
  if (name == "cabbatonian") return Family::kCabbatonian;
  if (name == "sigma") return Family::kSigma;
  if (name == "truncated_series") return Family::kTruncatedSeries;
  if (name == "power_base") return Family::kPowerBase;
  throw InvalidSpec("unknown family '" + name + "'");
}

HamiltonianSpec HamiltonianSpec::standard() { return {}; }

HamiltonianSpec HamiltonianSpec::cabbatonian(std::vector<double> lambdas,
                                             int sign) {
  HamiltonianSpec s;
  s.family = Family::kCabbatonian;
  s.level = static_cast<int>(lambdas.size());
  s.lambdas = std::move(lambdas);
  s.sign = sign;
  return s;
}

HamiltonianSpec HamiltonianSpec::sigma_family(std::vector<double> lambdas,
                                              double sigma, int sign) {
  HamiltonianSpec s = cabbatonian(std::move(lambdas), sign);
  s.family = Family::kSigma;
  s.sigma = sigma;
  return s;
}

HamiltonianSpec HamiltonianSpec::truncated_series(std::vector<double> lambdas,
                                                  int order, int sign) {
  HamiltonianSpec s = cabbatonian(std::move(lambdas), sign);
  s.family = Family::kTruncatedSeries;
  s.order = order;
  return s;
}

HamiltonianSpec HamiltonianSpec::power_base(int exponent) {
  HamiltonianSpec s;
  s.family = Family::kPowerBase;
  s.exponent = exponent;
  return s;
}

std::string HamiltonianSpec::describe() const {
  std::string out = to_string(family) + "(";
  auto number = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  switch (family) {
    case Family::kStandard:
      break;
    case Family::kPowerBase:
      out += "k=" + std::to_string(exponent);
      break;
    default: {
      out += "j=" + std::to_string(level) + ", l=[";
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (i) out += ",";
        out += number(lambdas[i]);
      }
      out += "], s=" + std::to_string(sign);
      if (family == Family::kSigma && sigma) out += ", sigma=" + number(*sigma);
      if (family == Family::kTruncatedSeries) {
        out += ", K=" + std::to_string(order);
      }
    }
  }
  return out + ")";
}

void validate(const HamiltonianSpec& spec, const SystemParams& params) {
  if (!(params.m > 0.0) || !std::isfinite(params.m)) {
    throw InvalidSpec("mass must be positive and finite");
  }
  if (spec.sign != 1 && spec.sign != -1) {
    throw InvalidSpec("sign must be +1 or -1");
  }
  if (spec.level < 0) throw InvalidSpec("level must be >= 0");
  for (double l : spec.lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw InvalidSpec("every lambda must be positive and finite");
    }
  }
  const bool lambdas_match =
      spec.lambdas.size() == static_cast<std::size_t>(spec.level);
  switch (spec.family) {
    case Family::kStandard:
      if (spec.level != 0 || !spec.lambdas.empty()) {
        throw InvalidSpec("standard Hamiltonian takes no lambdas (j = 0)");
      }
      break;
    case Family::kCabbatonian:
      if (!lambdas_match) throw InvalidSpec("cabbatonian needs exactly j lambdas");
      break;
    case Family::kSigma:
      if (!lambdas_match) throw InvalidSpec("sigma family needs exactly j lambdas");
      if (!spec.sigma || !(*spec.sigma > 0.0) || !std::isfinite(*spec.sigma)) {
        throw InvalidSpec("sigma family needs a positive sigma");
      }
      break;
    case Family::kTruncatedSeries:
      if (spec.level < 1 || !lambdas_match) {
        throw InvalidSpec("truncated series needs j >= 1 and exactly j lambdas");
      }
      if (spec.order < 0) throw InvalidSpec("series order must be >= 0");
      break;
    case Family::kPowerBase:
      if (spec.level != 0 || !spec.lambdas.empty()) {
        throw InvalidSpec("power base takes no lambdas");
      }
      if (spec.exponent < 0) throw InvalidSpec("exponent must be >= 0");
      break;
  }
}

HamiltonianSpec parent_level(const HamiltonianSpec& spec) {
  if (spec.family != Family::kCabbatonian || spec.level < 1) {
    throw InvalidSpec("parent level exists for cabbatonian j >= 1 only");
  }
  if (spec.level == 1) return HamiltonianSpec::standard();
  std::vector<double> lambdas(spec.lambdas.begin(), spec.lambdas.end() - 1);
  return HamiltonianSpec::cabbatonian(std::move(lambdas), spec.sign);
}

double iterated_map(double h, double omega) { return omega * std::exp(h / omega); }

double standard_energy(const SystemParams& params, const Potential& pot,
                       const PhasePoint& pt) {
  return pt.p * pt.p / (2.0 * params.m) + pot.value(pt.x);
}

namespace {

void guard(int level, double argument, const char* what) {
  if (!(std::fabs(argument) <= kMaxExponentArgument)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s exponent argument %.6g", what, argument);
    throw OverflowRisk(level, argument, buf);
  }
}

// Applies the Cabbatonian levels to a jet, chaining first and second
// derivatives level by level.
EnergyJet apply_levels(const std::vector<double>& lambdas, double m, int sign,
                       EnergyJet f) {
  int level = 0;
  for (double lambda : lambdas) {
    ++level;
    const double omega = sign * m * lambda * lambda;
    const double arg = f.value / omega;
    guard(level, arg, "cabbatonian");
    const double e = std::exp(arg);
    // g = omega*e, g' = e, g'' = e/omega
    const double g1 = e;
    const double g2 = e / omega;
    f = {omega * e, g1 * f.d1, g2 * f.d1 * f.d1 + g1 * f.d2};
  }
  return f;
}

}  // namespace

EnergyJet energy_jet(const HamiltonianSpec& spec, const SystemParams& params,
                     double energy0) {
  const double m = params.m;
  const EnergyJet base{energy0, 1.0, 0.0};
  switch (spec.family) {
    case Family::kStandard:
      return base;
    case Family::kCabbatonian:
      return apply_levels(spec.lambdas, m, spec.sign, base);
    case Family::kSigma: {
      const EnergyJet f = apply_levels(spec.lambdas, m, spec.sign, base);
      const double a = -1.0 / (m * *spec.sigma * *spec.sigma);
      const double arg = a * f.value;
      guard(spec.level + 1, arg, "sigma");
      const double e = std::exp(arg);
      // g = F e^{aF}, g' = (1 + aF) e^{aF}, g'' = a (2 + aF) e^{aF}
      const double g1 = (1.0 + arg) * e;
      const double g2 = a * (2.0 + arg) * e;
      return {f.value * e, g1 * f.d1, g2 * f.d1 * f.d1 + g1 * f.d2};
    }
    case Family::kTruncatedSeries: {
      const CoeffTable table =
          cabbatonian_series(spec.lambdas, m, spec.sign, spec.order);
      const SeriesValue s = eval_series(table, energy0);
      return {s.value, s.d1, s.d2};
    }
    case Family::kPowerBase: {
      const int k = spec.exponent;
      if (k == 0) return {1.0, 0.0, 0.0};
      if (k == 1) return base;
      double pk2 = 1.0;  // E^(k-2)
      for (int i = 0; i < k - 2; ++i) pk2 *= energy0;
      const double pk1 = pk2 * energy0;
      return {pk1 * energy0, k * pk1, static_cast<double>(k) * (k - 1) * pk2};
    }
  }
  return base;
}

double eval_h(const HamiltonianSpec& spec, const SystemParams& params,
              const Potential& pot, const PhasePoint& pt) {
  validate(spec, params);
  return energy_jet(spec, params, standard_energy(params, pot, pt)).value;
}

HDerivs eval_derivs(const HamiltonianSpec& spec, const SystemParams& params,
                    const Potential& pot, const PhasePoint& pt) {
  validate(spec, params);
  const double m = params.m;
  const double vx = pot.slope(pt.x);
  const double e0 = standard_energy(params, pot, pt);
  const double velocity = pt.p / m;  // dH0/dp
  const EnergyJet f = energy_jet(spec, params, e0);
  HDerivs d;
  d.h = f.value;
  d.hx = f.d1 * vx;
  d.hp = f.d1 * velocity;
  d.hpp = f.d2 * velocity * velocity + f.d1 / m;
  d.hpx = f.d2 * velocity * vx;
  return d;
}

double chain_factor(const HamiltonianSpec& spec, const SystemParams& params,
                    double energy0) {
  validate(spec, params);
  return energy_jet(spec, params, energy0).d1;
}

}  // namespace hamzoo
