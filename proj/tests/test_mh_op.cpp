// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fourier_oracle.hpp"
#include "mbm/errors.hpp"
#include "mbm/hurst.hpp"
#include "mbm/mh_op.hpp"
#include "mbm/quadrature.hpp"
#include "mbm/specfun.hpp"

using namespace mbm;

namespace {
double l2_pairing(const std::function<double(double)>& f, const std::function<double(double)>& g, double R) {
  QuadOptions opts;
  opts.abs_tol = 1e-11;
  return integrate([&](double x) { return f(x) * g(x); }, -R, R, opts).value;
}
}  // namespace

TEST(TestFunction, ParsevalAndReconstruction) {
  const TestFunction f({0.3, -1.2, 0.0, 0.7, 2.0});
  EXPECT_NEAR(f.l2_norm(), std::sqrt(0.09 + 1.44 + 0.49 + 4.0), 1e-15);
  const double R = f.support_radius();
  EXPECT_NEAR(std::sqrt(l2_pairing(f, f, R)), f.l2_norm(), 1e-10);
  for (int k = 0; k < 5; ++k) {
    const double ck = l2_pairing(f, [k](double x) { return hermite_fn(k, x); }, R);
    EXPECT_NEAR(ck, f.coeffs()[static_cast<std::size_t>(k)], 1e-8) << k;
  }
  EXPECT_TRUE(TestFunction({0.0, 0.0}).is_zero());
  EXPECT_FALSE(f.is_zero());
}

TEST(TestFunction, DerivativeIsExact) {
  const TestFunction f({0.5, 1.0, -0.25, 0.125});
  const TestFunction d = f.derivative();
  EXPECT_EQ(d.size(), f.size() + 1);
  for (double x : {-2.0, 0.0, 0.9, 3.5}) {
    EXPECT_NEAR(d(x), f.derivative_at(x), 1e-14);
    EXPECT_NEAR(d(x), (f(x + 1e-6) - f(x - 1e-6)) / 2e-6, 1e-8);
  }
}

TEST(TestFunction, FourierConventionPinned) {
  for (int k = 0; k <= 6; ++k) {
    const TestFunction e = TestFunction::basis(k);
    for (double y : {-2.5, -0.4, 0.0, 1.3, 3.0}) {
      const auto ref = oracle::fourier_trapezoid([k](double x) { return hermite_fn(k, x); }, y);
      const auto got = e.fourier(y);
      EXPECT_NEAR(got.real(), ref.real(), 1e-12) << k << " " << y;
      EXPECT_NEAR(got.imag(), ref.imag(), 1e-12) << k << " " << y;
    }
  }
}

TEST(SignedIndicator, Orientation) {
  const SignedIndicator up{0.0, 2.0}, down{0.0, -2.0};
  EXPECT_EQ(up(1.0), 1.0);
  EXPECT_EQ(up(3.0), 0.0);
  EXPECT_EQ(down(-1.0), -1.0);
  EXPECT_EQ(down(1.0), 0.0);
  for (double y : {-1.0, 0.5, 2.0}) {
    EXPECT_NEAR(std::abs(up.fourier(y) + SignedIndicator{2.0, 0.0}.fourier(y)), 0.0, 1e-15);
  }
}

TEST(MhIndicator, BrownianCase) {
  EXPECT_NEAR(mh_indicator(0.5, 0.0, 1.0, 0.3), 1.0, 1e-15);
  EXPECT_NEAR(mh_indicator(0.5, 0.0, 1.0, 1.7), 0.0, 1e-15);
  EXPECT_NEAR(mh_indicator(0.5, 0.0, 1.0, -0.2), 0.0, 1e-15);
  EXPECT_NEAR(mh_indicator(0.5, 0.0, -1.0, -0.5), -1.0, 1e-15);
}

TEST(MhIndicator, SingularEndpoints) {
  EXPECT_THROW((void)mh_indicator(0.7, 0.0, 1.0, 0.0), SingularityError);
  EXPECT_THROW((void)mh_indicator(0.7, 0.0, 1.0, 1.0), SingularityError);
  EXPECT_THROW((void)mh_indicator(1.0, 0.0, 1.0, 0.5), DomainError);
}

TEST(MhIndicator, TailValueAndDecay) {
  const double v = mh_indicator(0.7, 0.0, 1.0, 2.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(v, oracle::mh_indicator(0.7, 0.0, 1.0, 2.0), 1e-8);
  EXPECT_LT(mh_indicator(0.3, 0.0, 1.0, 2.0), 0.0);
  const double r = mh_indicator(0.7, 0.0, 1.0, 2000.0) / mh_indicator(0.7, 0.0, 1.0, 1000.0);
  EXPECT_NEAR(r, std::pow(2.0, 0.7 - 1.5), 1e-3);
}

TEST(MhIndicator, MatchesFourierOracle) {
  for (double H : {0.25, 0.5, 0.75}) {
    for (double x : {-1.5, 0.2, 0.9, 1.3, 4.0}) {
      if (H == 0.5) continue;
      EXPECT_NEAR(mh_indicator(H, 0.0, 1.0, x), oracle::mh_indicator(H, 0.0, 1.0, x), 1e-8) << H << " " << x;
    }
  }
}

TEST(MhSchwartz, IdentityAtHalf) {
  const TestFunction f({0.2, -0.4, 1.1, 0.0, 0.3});
  for (double x : {-3.0, -0.5, 0.0, 0.8, 2.4}) EXPECT_NEAR(mh_schwartz(0.5, f, x), f(x), 1e-8);
}

TEST(MhSchwartz, MatchesFourierOracle) {
  const std::vector<double> xs{-2.0, 0.0, 0.7, 3.0};
  for (int k : {0, 3}) {
    for (double H : {0.25, 0.75}) {
      const std::vector<double> ref = oracle::mh_hermite(k, H, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_NEAR(mh_schwartz(H, TestFunction::basis(k), xs[i]), ref[i], 1e-6) << k << " " << H << " " << xs[i];
      }
    }
  }
}

TEST(MhSchwartz, AlternativeRepresentations) {
  const TestFunction f({0.6, 0.0, -0.3, 0.9});
  for (double x : {-1.0, 0.0, 1.4}) {
    for (double H : {0.2, 0.35}) EXPECT_NEAR(mh_schwartz_fractional(H, f, x), mh_schwartz(H, f, x), 1e-8);
    for (double H : {0.65, 0.8}) EXPECT_NEAR(mh_schwartz_riesz(H, f, x), mh_schwartz(H, f, x), 1e-8);
  }
  EXPECT_THROW((void)mh_schwartz_fractional(0.7, f, 0.0), DomainError);
  EXPECT_THROW((void)mh_schwartz_riesz(0.3, f, 0.0), DomainError);
}

TEST(MhSchwartz, Linearity) {
  const TestFunction a({1.0, 0.0, 0.5}), b({0.0, -2.0, 0.0, 0.25});
  const TestFunction combo = 2.0 * a + (-3.0) * b;
  for (double H : {0.3, 0.8}) {
    for (double x : {-0.7, 1.9}) {
      const double lhs = mh_schwartz(H, combo, x);
      const double rhs = 2.0 * mh_schwartz(H, a, x) - 3.0 * mh_schwartz(H, b, x);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(MhSchwartz, BasisAgreesWithScalar) {
  const std::vector<double> m = mh_basis(0.3, 6, 0.8);
  const std::vector<double> d = dmh_dH_basis(0.3, 6, 0.8);
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(m[static_cast<std::size_t>(k)], mh_schwartz(0.3, TestFunction::basis(k), 0.8), 1e-10);
    EXPECT_NEAR(d[static_cast<std::size_t>(k)], dmh_dH(0.3, TestFunction::basis(k), 0.8), 1e-9);
  }
}

TEST(MhSchwartz, OddEvenSymmetry) {
  for (int k = 0; k < 4; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    EXPECT_NEAR(mh_schwartz(0.7, TestFunction::basis(k), -1.3), sign * mh_schwartz(0.7, TestFunction::basis(k), 1.3),
                1e-11);
  }
}

TEST(MhSchwartz, SupBoundWithSingleConstant) {
  // M_H(e_k) has the parity of e_k, so x ≥ 0 suffices.
  constexpr int K = 65;
  const double R = hermite_support_radius(K);
  double fitted = 0.0;
  std::vector<double> worst(K, 0.0);
  for (int i = 1; i <= 9; ++i) {
    const double H = 0.1 * i;
    std::vector<double> sup(K, 0.0);
    for (int j = 0; j <= 40; ++j) {
      const double x = R * (j + 0.31) / 40.0;
      const std::vector<double> v = mh_basis(H, K, x);
      for (int k = 0; k < K; ++k) sup[static_cast<std::size_t>(k)] = std::max(sup[static_cast<std::size_t>(k)], std::abs(v[static_cast<std::size_t>(k)]));
    }
    for (int k = 0; k < K; ++k) {
      const double D = c_const(H) * sup[static_cast<std::size_t>(k)] / std::pow(k + 1.0, 2.0 / 3.0);
      worst[static_cast<std::size_t>(k)] = std::max(worst[static_cast<std::size_t>(k)], D);
      if (k <= 8) fitted = std::max(fitted, D);
    }
  }
  for (int k = 0; k < K; ++k) EXPECT_LE(worst[static_cast<std::size_t>(k)], fitted) << "k=" << k;
}

TEST(DmhDH, MatchesFiniteDifference) {
  constexpr double eps = 1e-5;
  for (int k : {0, 2}) {
    const TestFunction f = TestFunction::basis(k);
    for (double H : {0.3, 0.6}) {
      for (double x : {0.0, 1.0}) {
        const double fd = (mh_schwartz(H + eps, f, x) - mh_schwartz(H - eps, f, x)) / (2 * eps);
        EXPECT_NEAR(dmh_dH(H, f, x), fd, 1e-4) << k << " " << H << " " << x;
      }
    }
  }
}

TEST(DmhDH, SupBoundWithSingleConstant) {
  constexpr int K = 65;
  const double R = hermite_support_radius(K);
  double fitted = 0.0;
  std::vector<double> worst(K, 0.0);
  for (double H : {0.2, 0.5, 0.8}) {
    std::vector<double> sup(K, 0.0);
    for (int j = 0; j <= 40; ++j) {
      const double x = R * (j + 0.31) / 40.0;
      const std::vector<double> v = dmh_dH_basis(H, K, x);
      for (int k = 0; k < K; ++k) sup[static_cast<std::size_t>(k)] = std::max(sup[static_cast<std::size_t>(k)], std::abs(v[static_cast<std::size_t>(k)]));
    }
    for (int k = 1; k < K; ++k) {
      const double rho = sup[static_cast<std::size_t>(k)] / (std::pow(k + 1.0, 2.0 / 3.0) * std::log(k + 1.0));
      worst[static_cast<std::size_t>(k)] = std::max(worst[static_cast<std::size_t>(k)], rho);
      if (k <= 8) fitted = std::max(fitted, rho);
    }
  }
  for (int k = 1; k < K; ++k) EXPECT_LE(worst[static_cast<std::size_t>(k)], fitted) << "k=" << k;
}

TEST(DmhDH, DeltaIsometry) {
  for (int k : {0, 1, 3}) {
    for (double H : {0.3, 0.7}) {
      const TestFunction f = TestFunction::basis(k);
      const double fourier_side = delta_h_norm_sq(f, H);
      EXPECT_NEAR(dmh_dH_l2_norm_sq(H, f), fourier_side, 1e-5) << k << " " << H;
      EXPECT_NEAR(fourier_side, oracle::delta_norm_sq_hermite(k, H, beta_const(H)), 1e-8) << k << " " << H;
    }
  }
}

TEST(InnerProduct, IndicatorsGiveFbmCovariance) {
  for (double H : {0.3, 0.7}) {
    for (auto [t, s] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}, std::pair{-1.0, 2.0}}) {
      const Operand u = SignedIndicator{0.0, t}, v = SignedIndicator{0.0, s};
      EXPECT_NEAR(inner_h_frac(u, v, H), r_fbm(H, t, s), 1e-6) << H << " " << t << " " << s;
      EXPECT_NEAR(mh_l2_inner(H, u, v), r_fbm(H, t, s), 1e-6) << H << " " << t << " " << s;
    }
  }
}

TEST(InnerProduct, IsometryOnHermitePairs) {
  for (double H : {0.25, 0.8}) {
    for (auto [j, k] : {std::pair{0, 0}, std::pair{0, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
      const Operand u = TestFunction::basis(j), v = TestFunction::basis(k);
      EXPECT_NEAR(mh_l2_inner(H, u, v), inner_h_frac(u, v, H), 1e-6) << H << " " << j << " " << k;
    }
    const Operand mixed = SignedIndicator{0.0, 1.5};
    const Operand e1 = TestFunction::basis(1);
    EXPECT_NEAR(mh_l2_inner(H, mixed, e1), inner_h_frac(mixed, e1, H), 1e-6);
  }
}

TEST(InnerProduct, Positive) {
  for (double H : {0.1, 0.5, 0.9}) {
    EXPECT_GT(inner_h_frac(Operand{TestFunction({0.0, 0.0, 1e-3})}, Operand{TestFunction({0.0, 0.0, 1e-3})}, H), 0.0);
    EXPECT_GT(inner_h_frac(Operand{SignedIndicator{2.0, 2.001}}, Operand{SignedIndicator{2.0, 2.001}}, H), 0.0);
  }
}

TEST(InnerProduct, AdjointIdentity) {
  const TestFunction f({0.4, 0.0, 0.3}), g({0.0, 1.0, 0.0, -0.5});
  for (double H : {0.3, 0.75}) {
    const double R = 12.0;
    const double lhs = l2_pairing(f, [&](double x) { return mh_schwartz(H, g, x); }, R);
    const double rhs = l2_pairing([&](double x) { return mh_schwartz(H, f, x); }, g, R);
    EXPECT_NEAR(lhs, rhs, 1e-6) << H;
  }
}

TEST(GPrimitive, BasicValues) {
  const TestFunction f({0.7, -0.2, 0.4});
  EXPECT_EQ(g_primitive(f, 0.0, 0.3), 0.0);
  for (double t : {-1.2, 0.5, 2.0}) {
    const double direct = integrate([&](double x) { return f(x); }, 0.0, t).value;
    EXPECT_NEAR(g_primitive(f, t, 0.5), direct, 1e-9) << t;
  }
}

TEST(GPrimitive, TimeDerivativeIsMh) {
  const TestFunction f({0.7, -0.2, 0.4});
  for (double H : {0.25, 0.7}) {
    for (double t : {0.4, 1.5}) {
      const double step = 1e-5;
      const double fd = (g_primitive(f, t + step, H) - g_primitive(f, t - step, H)) / (2 * step);
      EXPECT_NEAR(fd, mh_schwartz(H, f, t), 1e-5) << H << " " << t;
    }
  }
}

TEST(GPrimitive, HurstDerivative) {
  const TestFunction f({0.7, -0.2, 0.4});
  for (double H : {0.3, 0.65}) {
    const double eps = 1e-5;
    const double fd = (g_primitive(f, 1.3, H + eps) - g_primitive(f, 1.3, H - eps)) / (2 * eps);
    EXPECT_NEAR(dg_dH(f, 1.3, H), fd, 1e-6) << H;
  }
}

TEST(GPrimitive, BasisAgreesWithScalar) {
  const HurstFunction h = smoothstep_hurst(0.3, 0.7, 0.5, 1.5);
  const std::vector<double> g = g_primitive_basis(4, 1.1, 0.4);
  const std::vector<double> dg = dg_dH_basis(4, 1.1, 0.4);
  const std::vector<double> along = dg_along_h_basis(4, h, 1.1);
  for (int k = 0; k < 4; ++k) {
    const TestFunction e = TestFunction::basis(k);
    EXPECT_NEAR(g[static_cast<std::size_t>(k)], g_primitive(e, 1.1, 0.4), 1e-11);
    EXPECT_NEAR(dg[static_cast<std::size_t>(k)], dg_dH(e, 1.1, 0.4), 1e-10);
    EXPECT_NEAR(along[static_cast<std::size_t>(k)], dg_along_h(e, h, 1.1), 1e-10);
  }
}

TEST(DgAlongH, ConstantHurstReducesToMh) {
  const TestFunction f({0.2, 0.5});
  const HurstFunction h = constant_hurst(0.35);
  for (double t : {0.3, 2.0}) EXPECT_NEAR(dg_along_h(f, h, t), mh_schwartz(0.35, f, t), 1e-10);
}

TEST(DgAlongH, ChainRuleFiniteDifference) {
  const HurstFunction h = smoothstep_hurst(0.3, 0.7, 0.5, 1.5);
  for (int k : {0, 1, 2}) {
    const TestFunction f = TestFunction::basis(k);
    for (double t : {0.8, 1.0, 1.3}) {
      const double step = 1e-5;
      auto g = [&](double s) { return g_primitive(f, s, h(s)); };
      const double fd = (g(t + step) - g(t - step)) / (2 * step);
      EXPECT_NEAR(dg_along_h(f, h, t), fd, 1e-4) << k << " " << t;
    }
  }
}

TEST(DgAlongH, ContinuousAcrossSmoothstep) {
  const HurstFunction h = smoothstep_hurst(0.3, 0.7, 0.5, 1.5);
  const TestFunction e0 = TestFunction::basis(0);
  double prev = dg_along_h(e0, h, 0.3);
  for (double t = 0.32; t <= 1.8; t += 0.02) {
    const double m = mh_schwartz(h(t), e0, t);
    const double drift = h.derivative(t) * dg_dH(e0, t, h(t));
    ASSERT_TRUE(std::isfinite(m));
    ASSERT_TRUE(std::isfinite(drift));
    const double cur = dg_along_h(e0, h, t);
    EXPECT_LT(std::abs(cur - prev), 0.1) << t;
    prev = cur;
  }
}
