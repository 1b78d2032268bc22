#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "hamzoo/error.hpp"
#include "hamzoo/spec_json.hpp"
#include "hamzoo/verify.hpp"

using namespace hamzoo;

namespace {

const char* const kPotentials[] = {"0.5*x^2", "0.25*x^4", "-cos(x)"};

std::vector<HamiltonianSpec> all_families() {
  return {
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
}

std::vector<PhasePoint> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<PhasePoint> out;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    out.push_back({x, u(rng)});
  }
  return out;
}

CheckRecord record(const std::string& key, double residual, double tolerance) {
  CheckRecord r;
  r.key = key;
  r.check = "pde";
  r.residual = residual;
  r.tolerance = tolerance;
  return r;
}

SuiteConfig small_config() {
  SuiteConfig c = default_suite_config();
  c.points = 10;
  return c;
}

}  // namespace

TEST(PdeResidual, StandardVanishes) {
  const Potential pot = parse_potential("-cos(x)");
  for (const auto& pt : random_points(20, 7)) {
    EXPECT_LE(pde_residual(HamiltonianSpec::standard(), {}, pot, pt), 1e-15);
  }
}

TEST(PdeResidual, CabbatonianAndSigmaExamples) {
  const Potential quartic = parse_potential("0.25*x^4");
  EXPECT_LE(pde_residual(HamiltonianSpec::cabbatonian({2.0, 3.0}), {}, quartic, {0.7, -1.1}),
            1e-10);
  EXPECT_LE(pde_residual(HamiltonianSpec::sigma_family({2.0}, 5.0), {}, quartic, {0.7, -1.1}),
            1e-10);
}

TEST(PdeResidual, AllFamiliesAllPotentialsRandomPoints) {
  for (const char* src : kPotentials) {
    const Potential pot = parse_potential(src);
    for (const auto& spec : all_families()) {
      for (const auto& pt : random_points(100, 42)) {
        EXPECT_LE(pde_residual(spec, {}, pot, pt), 1e-8) << spec.describe() << " " << src;
        EXPECT_LE(nh2_residual(spec, {}, pot, pt), 1e-8) << spec.describe() << " " << src;
      }
    }
  }
}

TEST(Nh2Residual, ZeroMomentumAndThirdLevel) {
  const Potential pot = parse_potential("0.25*x^4");
  const auto cab3 = HamiltonianSpec::cabbatonian({2.0, 3.0, 4.0});
  for (double x : {-1.3, 0.2, 1.9}) EXPECT_EQ(nh2_residual(cab3, {}, pot, {x, 0.0}), 0.0);
  for (const auto& pt : random_points(50, 3)) {
    EXPECT_LE(nh2_residual(cab3, {}, pot, pt), 1e-10);
  }
}

TEST(Nh3Check, FiniteDifferenceIdentity) {
  const Potential pot = parse_potential("0.5*x^2");
  const PhasePoint pt{0.8, -0.6};
  EXPECT_LE(nh3_from_nh2_check(HamiltonianSpec::standard(), {}, pot, pt), 1e-10);
  EXPECT_LE(nh3_from_nh2_check(HamiltonianSpec::cabbatonian({2.0}), {}, pot, pt), 1e-6);
  EXPECT_LE(nh3_from_nh2_check(HamiltonianSpec::power_base(3), {}, pot, pt), 1e-6);
  for (const char* src : kPotentials) {
    const Potential p = parse_potential(src);
    for (const auto& spec : all_families()) {
      for (const auto& q : random_points(20, 42)) {
        EXPECT_LE(nh3_from_nh2_check(spec, {}, p, q), 1e-6) << spec.describe() << " " << src;
      }
    }
  }
}

TEST(LogLogSlope, PowerLaws) {
  const std::vector<double> xs{10, 20, 40, 80};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 / (x * x));
  EXPECT_NEAR(fit_loglog_slope(xs, ys), -2.0, 1e-12);
  ys = {1.0, 0.5, 0.25, 0.125};
  EXPECT_NEAR(fit_loglog_slope(xs, ys), -1.0, 1e-12);
  ys[2] = 0.0;
  EXPECT_TRUE(std::isnan(fit_loglog_slope(xs, ys)));
}

TEST(LimitLadder, FirstLevelAgainstExpm1Oracle) {
  const Potential pot = parse_potential("0.5*x^2");
  const std::vector<double> grid{10, 20, 40, 80};
  const Report r =
      limit_ladder(HamiltonianSpec::cabbatonian({2.0}), {}, pot, {1.0, 1.0}, grid);
  ASSERT_EQ(r.records.size(), grid.size() + 1);
  const double h0 = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // -W e^{-h/W} + W - h = -W expm1(-h/W) - h, free of cancellation
    const double w = grid[i] * grid[i];
    const double want = std::fabs(-w * std::expm1(-h0 / w) - h0);
    EXPECT_NEAR(r.records[i].residual, want, 1e-9 * want + 1e-12) << grid[i];
    EXPECT_TRUE(r.records[i].pass);
  }
  ASSERT_EQ(r.slopes.size(), 1U);
  EXPECT_NEAR(r.slopes.begin()->second, -2.0, 0.05);
  EXPECT_TRUE(r.all_pass());
}

TEST(LimitLadder, SlopeMinusTwoForLevelsOneToThree) {
  const std::vector<double> grid{10, 20, 40, 80};
  for (const char* src : kPotentials) {
    const Potential pot = parse_potential(src);
    for (std::vector<double> ls :
         {std::vector<double>{2.0}, {2.0, 3.0}, {2.0, 3.0, 4.0}}) {
      const Report r =
          limit_ladder(HamiltonianSpec::cabbatonian(ls), {}, pot, {1.0, 1.0}, grid);
      ASSERT_EQ(r.slopes.size(), 1U);
      EXPECT_NEAR(r.slopes.begin()->second, -2.0, 0.05) << ls.size() << " " << src;
      EXPECT_TRUE(r.all_pass()) << ls.size() << " " << src;
    }
  }
}

TEST(LimitLadder, InnerLimitReproducesFirstLevel) {
  // sweeping lambda_2 drives H_2 - s W_2 toward H_1 at fixed lambda_1, with
  // gap H_1^2 / (2 W_2) to leading order
  const auto spec = HamiltonianSpec::cabbatonian({10.0, 1.0});
  const double h1 = energy_jet(HamiltonianSpec::cabbatonian({10.0}), {}, 1.0).value;
  for (double l : {100.0, 1000.0, 10000.0}) {
    HamiltonianSpec s = spec;
    s.lambdas.back() = l;
    const double err = std::fabs(energy_jet(s, {}, 1.0).value + l * l - h1);
    const double lead = 0.5 * h1 * h1 / (l * l);
    const double roundoff = 8.0 * std::numeric_limits<double>::epsilon() * l * l / lead;
    EXPECT_NEAR(err / lead, 1.0, 2.0 * std::fabs(h1) / (l * l) + roundoff) << l;
  }
}

TEST(LimitLadder, ZeroEnergyIsExact) {
  const Report r = limit_ladder(HamiltonianSpec::cabbatonian({2.0}), {},
                                parse_potential("0.5*x^2"), {0.0, 0.0}, {10, 20, 40, 80});
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.residual, 0.0);
    EXPECT_TRUE(rec.pass);
  }
  EXPECT_EQ(r.count(CheckStatus::kSkipped), 1U);
  EXPECT_TRUE(r.slopes.empty());
}

TEST(LimitLadder, RejectsBadInput) {
  const Potential pot = parse_potential("0.5*x^2");
  EXPECT_THROW(limit_ladder(HamiltonianSpec::standard(), {}, pot, {1, 1}, {10, 20, 40, 80}),
               InvalidSpec);
  EXPECT_THROW(limit_ladder(HamiltonianSpec::cabbatonian({2.0}), {}, pot, {1, 1}, {10, 20, 40}),
               ConfigError);
  EXPECT_THROW(
      limit_ladder(HamiltonianSpec::cabbatonian({2.0}), {}, pot, {1, 1}, {10, 40, 20, 80}),
      ConfigError);
}

TEST(LagrangianLadder, SlopeMinusTwo) {
  LagrangianSpec spec;
  spec.lambdas = {2.0};
  spec.pot = parse_potential("0.5*x^2");
  const Report r = lagrangian_limit_ladder(spec, {1.0, 1.0}, {10, 20, 40, 80});
  ASSERT_EQ(r.slopes.size(), 1U);
  EXPECT_NEAR(r.slopes.begin()->second, -2.0, 0.05);
  EXPECT_TRUE(r.all_pass());
}

TEST(ReportRecords, PassIffResidualWithinTolerance) {
  Report r;
  r.add(record("a", 1e-9, 1e-8));
  r.add(record("b", 1e-8, 1e-8));
  r.add(record("c", 2e-8, 1e-8));
  r.add(record("d", std::numeric_limits<double>::quiet_NaN(), 1e-8));
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.pass, rec.residual <= rec.tolerance) << rec.key;
  }
  EXPECT_EQ(r.records[2].status, CheckStatus::kFailed);
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.count(CheckStatus::kOk), 2U);
}

TEST(ReportRecords, OverflowSerializesAsNull) {
  Report r;
  r.suite = "unit";
  r.seed = 42;
  CheckRecord o = record("z", std::numeric_limits<double>::infinity(), 1e-8);
  o.status = CheckStatus::kOverflow;
  o.message = "overflow at level 2";
  r.add(o);
  r.add(record("a", 0.0, 1e-8));
  r.sort_records();
  EXPECT_EQ(r.records.front().key, "a");
  EXPECT_EQ(r.count(CheckStatus::kOverflow), 1U);
  EXPECT_FALSE(r.all_pass());

  const nlohmann::json j = report_to_json(r);
  EXPECT_EQ(j.at("seed"), 42);
  ASSERT_EQ(j.at("records").size(), 2U);
  EXPECT_TRUE(j.at("records")[1].at("residual").is_null());
  EXPECT_EQ(j.at("records")[1].at("status"), "overflow");
  EXPECT_EQ(j.at("summary").at("all_pass"), false);
  // the text survives a dump/parse round trip
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(Suite, DefaultConfigAllPass) {
  const Report r = run_suite(default_suite_config());
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.seed, 42U);
  std::set<std::string> kinds, keys;
  for (const auto& rec : r.records) {
    kinds.insert(rec.check);
    EXPECT_TRUE(keys.insert(rec.key).second) << "duplicate key " << rec.key;
    if (!rec.pass) ADD_FAILURE() << rec.key << " " << rec.residual << " " << rec.message;
  }
  for (const char* k : {"pde", "nh2", "nh3", "conservation", "flow_rescale",
                        "period_ratio", "legendre", "legendre_momentum",
                        "limit_ladder", "limit_slope"}) {
    EXPECT_TRUE(kinds.count(k)) << k;
  }
  EXPECT_TRUE(std::is_sorted(r.records.begin(), r.records.end(),
                             [](const auto& a, const auto& b) { return a.key < b.key; }));
  std::ostringstream table;
  print_summary(r, table);
  EXPECT_NE(table.str().find("pde"), std::string::npos);
}

TEST(Suite, ThreePotentialsAllPass) {
  SuiteConfig c = default_suite_config();
  c.potentials = {kPotentials[0], kPotentials[1], kPotentials[2]};
  const Report r = run_suite(c);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.pass) << rec.key << " " << rec.residual << " " << rec.message;
  }
  for (const auto& [key, slope] : r.slopes) EXPECT_NEAR(slope, -2.0, 0.05) << key;
}

TEST(Suite, DeterministicAcrossRuns) {
  const SuiteConfig c = small_config();
  EXPECT_EQ(report_to_json(run_suite(c)).dump(), report_to_json(run_suite(c)).dump());
  SuiteConfig other = c;
  other.seed = 7;
  EXPECT_NE(report_to_json(run_suite(c)).dump(), report_to_json(run_suite(other)).dump());
}

TEST(Suite, OverflowBecomesRecords) {
  SuiteConfig c = small_config();
  c.specs = {HamiltonianSpec::cabbatonian({0.2}, +1)};
  const Report r = run_suite(c);
  EXPECT_GT(r.count(CheckStatus::kOverflow), 0U);
  EXPECT_FALSE(r.all_pass());
  for (const auto& rec : r.records) {
    if (rec.status == CheckStatus::kOverflow) {
      EXPECT_FALSE(rec.pass);
      EXPECT_TRUE(std::isinf(rec.residual));
    }
  }
}

TEST(Suite, EmptySpecListIsEmptySuccess) {
  SuiteConfig c = default_suite_config();
  c.specs.clear();
  const Report r = run_suite(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.all_pass());
}

TEST(SuiteConfigJson, ReadsFieldsAndDefaults) {
  const auto j = nlohmann::json::parse(R"({
    "potentials": ["0.25*x^4"],
    "specs": [{"family": "cabbatonian", "j": 1, "lambdas": [3.0], "sign": -1, "m": 1.5}],
    "points": 5, "seed": 9, "lambda_grid": [5, 10, 20, 40, 80],
    "tolerances": {"pde": 1e-9}
  })");
  const SuiteConfig c = suite_config_from_json(j);
  EXPECT_EQ(c.potentials, std::vector<std::string>{"0.25*x^4"});
  ASSERT_EQ(c.specs.size(), 1U);
  EXPECT_EQ(c.specs[0].lambdas, std::vector<double>{3.0});
  EXPECT_DOUBLE_EQ(c.params.m, 1.5);
  EXPECT_EQ(c.points, 5);
  EXPECT_EQ(c.seed, 9U);
  EXPECT_EQ(c.lambda_grid.size(), 5U);
  EXPECT_DOUBLE_EQ(c.tolerances.pde, 1e-9);
  EXPECT_DOUBLE_EQ(c.tolerances.nh3, 1e-6);
  EXPECT_EQ(suite_config_from_json(nlohmann::json::object()).specs.size(),
            default_suite_config().specs.size());
}

TEST(SuiteConfigJson, RejectsBadConfig) {
  for (const char* text : {
           R"([1, 2])",
           R"({"specs": {"family": "standard"}})",
           R"({"specs": [{"family": "nope"}]})",
           R"({"points": "many"})",
           R"({"points": -1})",
           R"({"lambda_grid": [10, 20]})",
           R"({"orbit_start": [1]})",
           R"({"tolerances": 3})",
       }) {
    EXPECT_THROW(suite_config_from_json(nlohmann::json::parse(text)), ConfigError) << text;
  }
}
