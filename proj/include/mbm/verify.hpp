// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbm/hurst.hpp"
#include "mbm/mh_op.hpp"

namespace mbm {

/// How `passed` is decided; the name is stored in meta["policy"].
enum class PassPolicy {
  Absolute,             // abs_err ≤ tolerance
  AbsoluteOrRelative,   // abs_err ≤ tolerance or rel_err ≤ tolerance
  LhsPositive,          // lhs > 0 (rhs is the threshold 0)
};

struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err/|rhs|, +inf when rhs = 0 and abs_err > 0
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json meta = nlohmann::json::object();
};

[[nodiscard]] VerificationReport make_report(std::string name, double lhs, double rhs, double tolerance,
                                             PassPolicy policy = PassPolicy::Absolute,
                                             nlohmann::json meta = nlohmann::json::object());
[[nodiscard]] nlohmann::json to_json(const VerificationReport& r);
[[nodiscard]] nlohmann::json to_json(const std::vector<VerificationReport>& rs);

/// f(t,x) with ∂f/∂t and ∂²f/∂x².
struct ItoIntegrand {
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double, double)> f_t;
  std::function<double(double, double)> f_xx;

  /// Σ c[i][j] tⁱ xʲ.
  [[nodiscard]] static ItoIntegrand polynomial(std::vector<std::vector<double>> c, std::string name = {});
  [[nodiscard]] static ItoIntegrand monomial(int degree);
  [[nodiscard]] static ItoIntegrand cosine();
};

inline constexpr int kGaussHermiteNodes = 96;
inline constexpr std::uint64_t kDefaultVerifySeed = 42;

/// Residual E f(T,Z_T) − f(0,0) − ∫₀ᵀ E ∂_t f(t,Z_t) dt − ½∫₀ᵀ qv_rate(t) E ∂²_x f(t,Z_t) dt against 0,
/// with Z_t ~ N(0, t^{2h(t)}). PreconditionError if f appears to grow like e^{λx²} with λ ≥ 1/(4 max t^{2h(t)}).
[[nodiscard]] VerificationReport ito_expectation_check(const ItoIntegrand& f, const HurstFunction& h, double T,
                                                       double tolerance = 1e-8);

/// E|Z_T − a| against |a| + ∫₀ᵀ qv_rate(t) p_{t^{2h(t)}}(a) dt.
[[nodiscard]] VerificationReport tanaka_check(double a, const HurstFunction& h, double T, double tolerance = 1e-6);

/// Mean of ½(Z² − T^{2h(T)}) against 0 (the zero mean of ∫₀ᵀ B dB), 4 standard errors.
[[nodiscard]] VerificationReport wick_square_check(const HurstFunction& h, double T, int n_draws,
                                                   std::uint64_t seed);
/// Variance of ½(Z² − T^{2h(T)}) against ½T^{4h(T)}, 4 standard errors.
[[nodiscard]] VerificationReport wick_square_variance_check(const HurstFunction& h, double T, int n_draws,
                                                            std::uint64_t seed);

/// Mean of ∫₀ᵀ f dB simulated from its first-chaos coefficients, against 0 at 4 standard errors.
[[nodiscard]] VerificationReport wiener_zero_mean_check(const std::function<double(double)>& f,
                                                        const HurstFunction& h, double T, int K, int n_draws,
                                                        std::uint64_t seed);

/// Mean of x·exp(βB(t) + αt − ½β²t^{2h(t)}) against x e^{αt}, 4 lognormal standard errors.
[[nodiscard]] VerificationReport geometric_mbm_check(double x, double alpha, double beta, const HurstFunction& h,
                                                     double t, int n_draws, std::uint64_t seed);

/// Affine α(s) = α0 + α1 s and β(s) = β0 + β1 s; Var ∫₀ᵗ β dB from wiener_coeffs at truncation K.
[[nodiscard]] VerificationReport geometric_mbm_varying_check(double x, double alpha0, double alpha1, double beta0,
                                                             double beta1, const HurstFunction& h, double t,
                                                             int K, int n_draws, std::uint64_t seed);

/// ∫₀ᵀ g_η(t,h(t)) d/dt[g_η(t,h(t))] dt against ½ g_η(T,h(T))².
[[nodiscard]] VerificationReport s_factorization_check(const HurstFunction& h, double T, const TestFunction& eta,
                                                       double tolerance = 1e-6);

/// S(B(t)⋄B(s))(η) against S(B(t))(η)·S(B(s))(η) on the truncated first chaos.
[[nodiscard]] VerificationReport wick_factorization_check(const HurstFunction& h, double t, double s,
                                                          const TestFunction& eta, int K,
                                                          double tolerance = 1e-10);

/// ⟨M_H 1_{[0,t]}, M_H 1_{[0,s]}⟩_{L²} against R_H(t,s).
[[nodiscard]] VerificationReport isometry_check(double H, double t, double s, double tolerance = 1e-6);

/// ‖∂M_H/∂H f‖²_{L²} against ‖f‖²_{δ_H}.
[[nodiscard]] VerificationReport delta_isometry_check(const TestFunction& f, double H, double tolerance = 1e-5);

/// Minimum eigenvalue of gram(h, times) against 0.
[[nodiscard]] VerificationReport gram_check(const HurstFunction& h, const std::vector<double>& times);

/// `count` random Hurst functions (constant or smoothstep), `n_times` distinct times in [lo, hi] each.
[[nodiscard]] std::vector<VerificationReport> gram_random_suite(int count, int n_times, double lo, double hi,
                                                               std::uint64_t seed);

struct SuiteOptions {
  std::uint64_t seed = kDefaultVerifySeed;
  int mc_draws = 1'000'000;
};

/// Suites: ito, tanaka, wick, geometric, sfact, isometry, gram, all.
[[nodiscard]] const std::vector<std::string>& suite_names();
[[nodiscard]] std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& opts = {});

}  // namespace mbm
