#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hamzoo/error.hpp"
#include "hamzoo/spec_json.hpp"
#include "hamzoo/zoo.hpp"

using namespace hamzoo;

namespace {

const SystemParams kUnitMass{1.0};

std::vector<HamiltonianSpec> all_families() {
  return {HamiltonianSpec::standard(),
          HamiltonianSpec::cabbatonian({2.0}),
          HamiltonianSpec::cabbatonian({2.0, 3.0}),
          HamiltonianSpec::cabbatonian({2.0, 3.0, 4.0}),
          HamiltonianSpec::cabbatonian({2.0, 3.0}, +1),
          HamiltonianSpec::sigma_family({}, 5.0),
          HamiltonianSpec::sigma_family({2.0}, 5.0),
          HamiltonianSpec::truncated_series({2.0}, 8),
          HamiltonianSpec::truncated_series({2.0, 3.0}, 6),
          HamiltonianSpec::power_base(0),
          HamiltonianSpec::power_base(1),
          HamiltonianSpec::power_base(2),
          HamiltonianSpec::power_base(3),
          HamiltonianSpec::power_base(4)};
}

// Brute-force oracle: evaluate each family straight from its definition.
double direct_h(const HamiltonianSpec& s, double m, double e) {
  auto nest = [&](double h) {
    for (double l : s.lambdas) {
      const double omega = m * l * l;
      h = s.sign * omega * std::exp(s.sign * h / omega);
    }
    return h;
  };
  switch (s.family) {
    case Family::kStandard:
      return e;
    case Family::kCabbatonian:
      return nest(e);
    case Family::kSigma: {
      const double f = nest(e);
      return f * std::exp(-f / (m * *s.sigma * *s.sigma));
    }
    case Family::kTruncatedSeries:
      return std::nan("");
    case Family::kPowerBase:
      return std::pow(e, s.exponent);
  }
  return std::nan("");
}

}  // namespace

TEST(EvalH, SpecExamples) {
  const Potential v = parse_potential("0.5*x^2");
  EXPECT_DOUBLE_EQ(eval_h(HamiltonianSpec::standard(), kUnitMass, v, {1, 1}), 1.0);
  const double h1 = eval_h(HamiltonianSpec::cabbatonian({2.0}), kUnitMass, v, {1, 1});
  EXPECT_NEAR(h1, -4.0 * std::exp(-0.25), 1e-15);
  EXPECT_NEAR(h1, -3.11520, 1e-5);
  const double h10 =
      eval_h(HamiltonianSpec::cabbatonian({10.0}), kUnitMass, v, {1, 1});
  EXPECT_NEAR(h10 + 100.0, 100.0 * (1.0 - std::exp(-0.01)), 1e-12);
  EXPECT_NEAR(h10 + 100.0, 0.995017, 1e-6);
}

TEST(EvalH, MatchesDirectDefinition) {
  const Potential v = parse_potential("0.25*x^4 - 0.5*x^2");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& spec : all_families()) {
    if (spec.family == Family::kTruncatedSeries) continue;
    for (int i = 0; i < 20; ++i) {
      const PhasePoint pt{u(rng), u(rng)};
      const double e = standard_energy(kUnitMass, v, pt);
      const double want = direct_h(spec, 1.0, e);
      EXPECT_NEAR(eval_h(spec, kUnitMass, v, pt), want, 1e-13 * (1 + std::fabs(want)))
          << spec.describe();
    }
  }
}

TEST(EvalH, MassEntersKineticTermAndScales) {
  const Potential v = parse_potential("0.5*x^2");
  const SystemParams heavy{2.5};
  EXPECT_DOUBLE_EQ(eval_h(HamiltonianSpec::standard(), heavy, v, {1, 2}),
                   4.0 / 5.0 + 0.5);
  const double e = 0.8 + 0.5;
  EXPECT_NEAR(eval_h(HamiltonianSpec::cabbatonian({2.0}), heavy, v, {1, 2}),
              -10.0 * std::exp(-e / 10.0), 1e-14);
}

TEST(EvalH, IteratedMapProperty) {
  const Potential v = parse_potential("-cos(x)");
  const PhasePoint pt{0.4, -1.3};
  for (int sign : {-1, +1}) {
    const std::vector<double> ls{2.0, 3.0, 4.0};
    for (std::size_t j = 1; j <= ls.size(); ++j) {
      const auto spec = HamiltonianSpec::cabbatonian({ls.begin(), ls.begin() + j}, sign);
      const double below = eval_h(parent_level(spec), kUnitMass, v, pt);
      const double omega = sign * ls[j - 1] * ls[j - 1];
      EXPECT_DOUBLE_EQ(eval_h(spec, kUnitMass, v, pt), iterated_map(below, omega));
    }
  }
}

TEST(EvalDerivs, SpecExamples) {
  const Potential v = parse_potential("0.5*x^2");
  const HDerivs d0 = eval_derivs(HamiltonianSpec::standard(), kUnitMass, v, {1, 1});
  EXPECT_DOUBLE_EQ(d0.hp, 1.0);
  EXPECT_DOUBLE_EQ(d0.hpp, 1.0);
  EXPECT_DOUBLE_EQ(d0.hpx, 0.0);
  EXPECT_DOUBLE_EQ(d0.hx, 1.0);
  const HDerivs d1 =
      eval_derivs(HamiltonianSpec::cabbatonian({2.0}), kUnitMass, v, {1, 1});
  EXPECT_NEAR(d1.hp, std::exp(-0.25), 1e-15);
  EXPECT_NEAR(d1.hp, 0.778801, 1e-6);
  const HDerivs d2 = eval_derivs(HamiltonianSpec::power_base(2), kUnitMass, v, {1, 1});
  EXPECT_DOUBLE_EQ(d2.hp, 2.0);
}

TEST(EvalDerivs, AgreeWithFiniteDifferencesForEveryFamily) {
  const char* pots[] = {"0.5*x^2", "0.25*x^4", "-cos(x)"};
  constexpr double h = 1e-5;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const char* src : pots) {
    const Potential v = parse_potential(src);
    for (const auto& spec : all_families()) {
      for (int i = 0; i < 25; ++i) {
        const PhasePoint pt{u(rng), u(rng)};
        auto H = [&](double x, double p) { return eval_h(spec, kUnitMass, v, {x, p}); };
        const HDerivs d = eval_derivs(spec, kUnitMass, v, pt);
        const double fx = (H(pt.x + h, pt.p) - H(pt.x - h, pt.p)) / (2 * h);
        const double fp = (H(pt.x, pt.p + h) - H(pt.x, pt.p - h)) / (2 * h);
        const double fpp =
            (H(pt.x, pt.p + h) - 2 * H(pt.x, pt.p) + H(pt.x, pt.p - h)) / (h * h);
        const double fpx = (H(pt.x + h, pt.p + h) - H(pt.x + h, pt.p - h) -
                            H(pt.x - h, pt.p + h) + H(pt.x - h, pt.p - h)) /
                           (4 * h * h);
        // second differences lose digits to cancellation; scale by |H|
        const double scale = std::max(1.0, std::fabs(d.h));
        EXPECT_NEAR(d.hx, fx, 1e-6 * std::max(1.0, std::fabs(d.hx))) << spec.describe();
        EXPECT_NEAR(d.hp, fp, 1e-6 * std::max(1.0, std::fabs(d.hp))) << spec.describe();
        EXPECT_NEAR(d.hpp, fpp, 1e-6 * std::max(1.0, std::fabs(d.hpp)) + 1e-5 * scale)
            << spec.describe();
        EXPECT_NEAR(d.hpx, fpx, 1e-6 * std::max(1.0, std::fabs(d.hpx)) + 1e-5 * scale)
            << spec.describe();
        EXPECT_EQ(d.h, H(pt.x, pt.p));
      }
    }
  }
}

TEST(ChainFactor, SpecExamples) {
  EXPECT_EQ(chain_factor(HamiltonianSpec::standard(), kUnitMass, 3.7), 1.0);
  EXPECT_NEAR(chain_factor(HamiltonianSpec::cabbatonian({2.0}), kUnitMass, 1.0),
              std::exp(-0.25), 1e-15);
  const double c2 =
      chain_factor(HamiltonianSpec::cabbatonian({2.0, 3.0}), kUnitMass, 1.0);
  EXPECT_NEAR(c2, std::exp(-0.25) * std::exp((4.0 / 9.0) * std::exp(-0.25)), 1e-15);
}

TEST(ChainFactor, IsDerivativeInEnergy) {
  for (const auto& spec : all_families()) {
    for (double e : {-0.7, 0.0, 0.5, 1.9}) {
      const double h = 1e-5;
      const double fd = (energy_jet(spec, kUnitMass, e + h).value -
                         energy_jet(spec, kUnitMass, e - h).value) /
                        (2 * h);
      const double c = chain_factor(spec, kUnitMass, e);
      EXPECT_NEAR(c, fd, 1e-7 * std::max(1.0, std::fabs(c))) << spec.describe();
    }
  }
}

TEST(LimitRecovery, SlopeMinusTwoForEachLevel) {
  const Potential v = parse_potential("0.5*x^2");
  const PhasePoint pt{1.0, 1.0};
  const std::vector<double> grid{10, 20, 40, 80};
  for (std::vector<double> inner : {std::vector<double>{}, {2.0}, {2.0, 3.0}}) {
    const double below = inner.empty()
                             ? standard_energy(kUnitMass, v, pt)
                             : eval_h(HamiltonianSpec::cabbatonian(inner), kUnitMass, v, pt);
    std::vector<double> lx, ly;
    for (double l : grid) {
      auto ls = inner;
      ls.push_back(l);
      const double err =
          std::fabs(eval_h(HamiltonianSpec::cabbatonian(ls), kUnitMass, v, pt) + l * l - below);
      lx.push_back(std::log(l));
      ly.push_back(std::log(err));
    }
    const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
    EXPECT_NEAR(slope, -2.0, 0.05) << "level " << inner.size() + 1;
  }
}

TEST(SigmaFamily, ApproachesCabbatonianAsSigmaGrows) {
  const Potential v = parse_potential("0.5*x^2");
  const PhasePoint pt{0.8, -0.6};
  const double base = eval_h(HamiltonianSpec::cabbatonian({2.0}), kUnitMass, v, pt);
  double prev = INFINITY;
  for (double sigma : {10.0, 20.0, 40.0, 80.0}) {
    const double err = std::fabs(
        eval_h(HamiltonianSpec::sigma_family({2.0}, sigma), kUnitMass, v, pt) - base);
    // O(sigma^-2): doubling sigma cuts the error about fourfold
    if (std::isfinite(prev)) EXPECT_NEAR(prev / err, 4.0, 0.1);
    prev = err;
  }
}

TEST(Validate, RejectsBrokenSpecs) {
  auto bad = HamiltonianSpec::cabbatonian({2.0, 3.0});
  bad.level = 3;
  EXPECT_THROW(validate(bad, kUnitMass), InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::cabbatonian({-1.0}), kUnitMass), InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::cabbatonian({2.0}, 0), kUnitMass), InvalidSpec);
  auto no_sigma = HamiltonianSpec::sigma_family({2.0}, 5.0);
  no_sigma.sigma.reset();
  EXPECT_THROW(validate(no_sigma, kUnitMass), InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::sigma_family({2.0}, 0.0), kUnitMass),
               InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::power_base(-1), kUnitMass), InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::truncated_series({2.0}, -1), kUnitMass),
               InvalidSpec);
  EXPECT_THROW(validate(HamiltonianSpec::standard(), SystemParams{0.0}), InvalidSpec);
  auto std_with_lambda = HamiltonianSpec::standard();
  std_with_lambda.lambdas = {2.0};
  EXPECT_THROW(validate(std_with_lambda, kUnitMass), InvalidSpec);
}

TEST(Overflow, GuardNamesTheLevel) {
  const Potential v = parse_potential("0.5*x^2");
  try {
    eval_h(HamiltonianSpec::cabbatonian({0.1}, +1), kUnitMass, v, {1, 1});
    FAIL() << "expected OverflowRisk";
  } catch (const OverflowRisk& e) {
    EXPECT_EQ(e.level(), 1);
    EXPECT_NEAR(e.argument(), 100.0, 1e-9);
  }
  // level 1 fine (arg 1/4), level 2 explodes (4 e^{1/4} / 0.01 > 50)
  try {
    eval_h(HamiltonianSpec::cabbatonian({2.0, 0.1}, +1), kUnitMass, v, {1, 1});
    FAIL() << "expected OverflowRisk";
  } catch (const OverflowRisk& e) {
    EXPECT_EQ(e.level(), 2);
  }
  try {
    eval_derivs(HamiltonianSpec::sigma_family({2.0}, 0.2), kUnitMass, v, {1, 1});
    FAIL() << "expected OverflowRisk";
  } catch (const OverflowRisk& e) {
    EXPECT_EQ(e.level(), 2);
  }
}

TEST(Describe, IsReadable) {
  EXPECT_EQ(HamiltonianSpec::cabbatonian({2.0, 3.0}).describe(),
            "cabbatonian(j=2, l=[2,3], s=-1)");
  EXPECT_EQ(HamiltonianSpec::standard().describe(), "standard()");
}

TEST(FamilyNames, RoundTrip) {
  for (Family f : {Family::kStandard, Family::kCabbatonian, Family::kSigma,
                   Family::kTruncatedSeries, Family::kPowerBase}) {
    EXPECT_EQ(family_from_string(to_string(f)), f);
  }
  EXPECT_THROW(family_from_string("lagrangian"), InvalidSpec);
}

TEST(SpecJson, RoundTripsEveryFamily) {
  const SystemParams params{1.5};
  for (const auto& spec : all_families()) {
    const auto j = spec_to_json(spec, params);
    const HamiltonianSpec back = spec_from_json(j);
    EXPECT_EQ(back.family, spec.family);
    EXPECT_EQ(back.level, spec.level);
    EXPECT_EQ(back.lambdas, spec.lambdas);
    EXPECT_EQ(back.sigma, spec.sigma);
    EXPECT_EQ(back.sign, spec.sign);
    EXPECT_EQ(back.order, spec.order);
    EXPECT_EQ(back.exponent, spec.exponent);
    EXPECT_EQ(params_from_json(j).m, 1.5);
  }
}

TEST(SpecJson, DocumentedShape) {
  const auto j = parse_json_text(
      R"({"family": "cabbatonian", "j": 2, "lambdas": [2.0, 3.0], "sign": -1, "m": 1.0})");
  const HamiltonianSpec s = spec_from_json(j);
  EXPECT_EQ(s.family, Family::kCabbatonian);
  EXPECT_EQ(s.level, 2);
  const auto out = spec_to_json(s, kUnitMass);
  EXPECT_FALSE(out.contains("sigma"));
  EXPECT_FALSE(out.contains("order"));
  EXPECT_FALSE(out.contains("exponent"));
}

TEST(SpecJson, RejectsBadInput) {
  EXPECT_THROW(parse_json_text("{\"family\": "), InvalidSpec);
  EXPECT_THROW(spec_from_json(parse_json_text(R"({"family": "nope"})")), InvalidSpec);
  EXPECT_THROW(spec_from_json(parse_json_text(
                   R"({"family": "cabbatonian", "j": 2, "lambdas": [2.0]})")),
               InvalidSpec);
  EXPECT_THROW(spec_from_json(parse_json_text(
                   R"({"family": "cabbatonian", "j": 1, "lambdas": "two"})")),
               InvalidSpec);
  EXPECT_THROW(spec_from_json(parse_json_text("[1, 2]")), InvalidSpec);
}
