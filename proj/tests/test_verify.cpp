// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mbm/errors.hpp"
#include "mbm/hurst.hpp"
#include "mbm/verify.hpp"

using namespace mbm;

namespace {
const HurstFunction& ramp() {
  static const HurstFunction h = smoothstep_hurst(0.3, 0.7, 0.5, 1.5);
  return h;
}
}  // namespace

TEST(Report, PoliciesAndJson) {
  const VerificationReport a = make_report("a", 1.0 + 1e-9, 1.0, 1e-8);
  EXPECT_TRUE(a.passed);
  EXPECT_NEAR(a.abs_err, 1e-9, 1e-15);
  EXPECT_EQ(a.meta["policy"], "abs");
  const VerificationReport b = make_report("b", 1000.5, 1000.0, 1e-3, PassPolicy::AbsoluteOrRelative);
  EXPECT_TRUE(b.passed);
  EXPECT_FALSE(make_report("b", 1000.5, 1000.0, 1e-3).passed);
  const VerificationReport z = make_report("z", 1e-3, 0.0, 1e-4);
  EXPECT_TRUE(std::isinf(z.rel_err));
  EXPECT_FALSE(z.passed);
  EXPECT_TRUE(make_report("p", 0.3, 0.0, 0.0, PassPolicy::LhsPositive).passed);
  EXPECT_FALSE(make_report("p", -0.3, 0.0, 0.0, PassPolicy::LhsPositive).passed);
  EXPECT_FALSE(make_report("n", std::nan(""), 0.0, 1.0).passed);
  const nlohmann::json j = to_json(z);
  EXPECT_TRUE(j["rel_err"].is_null());
  for (const char* key : {"name", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "passed", "meta"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Ito, Square) {
  const VerificationReport r = ito_expectation_check(ItoIntegrand::monomial(2), ramp(), 2.0);
  EXPECT_TRUE(r.passed) << r.abs_err;
  EXPECT_LT(r.abs_err, 1e-8);
}

TEST(Ito, Cube) {
  EXPECT_LT(ito_expectation_check(ItoIntegrand::monomial(3), ramp(), 2.0).abs_err, 1e-8);
}

TEST(Ito, CosineOnSmoothstep) {
  const VerificationReport r = ito_expectation_check(ItoIntegrand::cosine(), ramp(), 2.0, 1e-6);
  EXPECT_TRUE(r.passed) << r.abs_err;
  const double v = std::pow(2.0, 2 * ramp()(2.0));
  EXPECT_NEAR(r.meta["E_f_T"].get<double>(), std::exp(-v / 2), 1e-12);
}

TEST(Ito, RandomPolynomialsDegreeFour) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<HurstFunction> hs{ramp(), constant_hurst(0.25), family_hc(0.0).restricted(0.0, 1.0)};
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<std::vector<double>> c(3, std::vector<double>(5));
    for (auto& row : c) {
      for (double& v : row) v = u(gen);
    }
    const HurstFunction& h = hs[static_cast<std::size_t>(trial) % hs.size()];
    const double T = h.spec().rfind("hc", 0) == 0 ? 0.9 : 1.5;
    const VerificationReport r = ito_expectation_check(ItoIntegrand::polynomial(c), h, T);
    EXPECT_LT(r.abs_err, 1e-8) << h.spec() << " trial " << trial;
  }
}

TEST(Ito, GrowthConditionViolation) {
  ItoIntegrand g{"exp(x^2)", [](double, double x) { return std::exp(x * x); },
                 [](double, double) { return 0.0; },
                 [](double, double x) { return (2 + 4 * x * x) * std::exp(x * x); }};
  EXPECT_THROW((void)ito_expectation_check(g, constant_hurst(0.5), 1.0), PreconditionError);
  ItoIntegrand mild{"exp(x^2/20)", [](double, double x) { return std::exp(x * x / 20); },
                    [](double, double) { return 0.0; },
                    [](double, double x) { return (0.1 + x * x / 100) * std::exp(x * x / 20); }};
  EXPECT_NO_THROW((void)ito_expectation_check(mild, constant_hurst(0.5), 1.0, 1e-6));
}

TEST(Tanaka, BrownianAtZero) {
  const VerificationReport r = tanaka_check(0.0, constant_hurst(0.5), 1.0);
  EXPECT_NEAR(r.lhs, std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(r.rhs, std::sqrt(2.0 / std::numbers::pi), 1e-6);
  EXPECT_NEAR(r.lhs, 0.797885, 1e-6);
  EXPECT_TRUE(r.passed);
}

TEST(Tanaka, ZeroLevelGeneralH) {
  const double T = 1.8;
  const VerificationReport r = tanaka_check(0.0, ramp(), T);
  EXPECT_NEAR(r.lhs, std::pow(T, ramp()(T)) * std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_TRUE(r.passed) << r.abs_err;
}

TEST(Tanaka, ClassicalLevelOne) {
  const VerificationReport r = tanaka_check(1.0, family_hc(0.0), 0.8);
  const double s = std::sqrt(0.8);
  const double classical = s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 / 0.8) + std::erf(1.0 / (s * std::sqrt(2.0)));
  EXPECT_NEAR(r.lhs, classical, 1e-12);
  EXPECT_TRUE(r.passed) << r.abs_err;
}

TEST(Tanaka, Grid) {
  for (double a : {-0.7, 0.3, 1.5}) {
    for (double T : {0.5, 2.0}) {
      for (const HurstFunction& h : {constant_hurst(0.1), constant_hurst(0.8), ramp()}) {
        const VerificationReport r = tanaka_check(a, h, T);
        EXPECT_TRUE(r.passed) << r.name << " " << r.abs_err;
      }
    }
  }
}

TEST(WickSquare, MeanAndVariance) {
  const VerificationReport m = wick_square_check(constant_hurst(0.7), 1.0, 1000000, 42);
  EXPECT_TRUE(m.passed) << m.abs_err << " vs " << m.tolerance;
  const VerificationReport v = wick_square_variance_check(ramp(), 1.0, 1000000, 42);
  EXPECT_NEAR(v.rhs, 0.5, 1e-15);
  EXPECT_TRUE(v.passed) << v.abs_err << " vs " << v.tolerance;
}

TEST(WickSquare, Deterministic) {
  const VerificationReport a = wick_square_check(ramp(), 1.3, 10000, 5);
  const VerificationReport b = wick_square_check(ramp(), 1.3, 10000, 5);
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_NE(a.lhs, wick_square_check(ramp(), 1.3, 10000, 6).lhs);
}

TEST(WienerZeroMean, Passes) {
  const VerificationReport r = wiener_zero_mean_check([](double s) { return s; }, ramp(), 1.0, 16, 200000, 42);
  EXPECT_TRUE(r.passed) << r.abs_err << " vs " << r.tolerance;
}

TEST(Geometric, DeterministicWithoutNoise) {
  const VerificationReport r = geometric_mbm_check(2.0, 0.3, 0.0, ramp(), 1.2, 1000, 1);
  EXPECT_NEAR(r.lhs, 2.0 * std::exp(0.36), 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(Geometric, LognormalMean) {
  const VerificationReport r = geometric_mbm_check(1.0, 0.0, 1.0, constant_hurst(0.6), 1.0, 1000000, 42);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_TRUE(r.passed) << r.abs_err << " vs " << r.tolerance;
}

TEST(Geometric, TimeVaryingCoefficients) {
  const VerificationReport r = geometric_mbm_varying_check(1.5, 0.1, 0.2, 0.5, -0.2, ramp(), 1.0, 32, 200000, 42);
  EXPECT_NEAR(r.rhs, 1.5 * std::exp(0.1 + 0.1), 1e-12);
  EXPECT_TRUE(r.passed) << r.abs_err << " vs " << r.tolerance;
}

TEST(SFactorization, Examples) {
  const VerificationReport zero = s_factorization_check(ramp(), 1.0, TestFunction({0.0}));
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  EXPECT_TRUE(zero.passed);
  const VerificationReport e0 = s_factorization_check(constant_hurst(0.5), 1.0, TestFunction::basis(0));
  const double pi = std::numbers::pi;
  const double integral = std::pow(pi, -0.25) * std::sqrt(pi / 2) * std::erf(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(e0.rhs, 0.5 * integral * integral, 1e-10);
  EXPECT_TRUE(e0.passed) << e0.abs_err;
  const VerificationReport mix = s_factorization_check(ramp(), 1.7, TestFunction({1.0, 1.0}));
  EXPECT_TRUE(mix.passed) << mix.abs_err;
}

TEST(SFactorization, WickProductOfMbm) {
  const VerificationReport r = wick_factorization_check(ramp(), 0.8, 1.6, TestFunction({0.5, -0.3, 0.2}), 32);
  EXPECT_TRUE(r.passed) << r.abs_err;
}

TEST(Isometry, IndicatorPairs) {
  for (double H : {0.2, 0.8}) {
    const VerificationReport r = isometry_check(H, 1.0, 2.0);
    EXPECT_TRUE(r.passed) << H << " " << r.abs_err;
    EXPECT_DOUBLE_EQ(r.rhs, r_fbm(H, 1.0, 2.0));
  }
  EXPECT_TRUE(delta_isometry_check(TestFunction::basis(2), 0.4).passed);
}

TEST(GramCheck, PositiveDefinite) {
  EXPECT_TRUE(gram_check(ramp(), {0.3, 1.0, 1.2, 4.0}).passed);
  const auto suite = gram_random_suite(5, 12, 0.1, 10.0, 42);
  ASSERT_EQ(suite.size(), 5u);
  for (const auto& r : suite) EXPECT_TRUE(r.passed) << r.name;
}

TEST(Suites, NamesAndUnknown) {
  const auto& names = suite_names();
  for (const char* n : {"ito", "tanaka", "wick", "geometric", "sfact", "isometry", "gram", "all"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
  EXPECT_THROW((void)run_suite("bogus"), InputError);
}

TEST(Suites, ReportsAreDeterministic) {
  SuiteOptions opts;
  opts.mc_draws = 20000;
  const auto a = run_suite("wick", opts);
  const auto b = run_suite("wick", opts);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].lhs, b[i].lhs);
    EXPECT_EQ(a[i].rhs, b[i].rhs);
  }
}
