// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mbm/hurst.hpp"
#include "mbm/mh_op.hpp"

namespace mbm {

inline constexpr int kDefaultTruncation = 128;

/// First-chaos variable Σ a_k ⟨·,e_k⟩ truncated at K = coeffs.size().
struct ChaosVector {
  std::vector<double> coeffs;
  /// Estimate of Σ_{k≥K} a_k² left out by the truncation (+inf when the series diverges).
  double tail_estimate = 0.0;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(coeffs.size()); }
  [[nodiscard]] double variance() const;
  /// Σ a_k ξ_k for a realization ξ of the coordinates (shorter side zero-padded).
  [[nodiscard]] double evaluate(std::span<const double> xi) const;
};

/// a_k = ∫₀ᵗ M_{h(t)}(e_k)(s) ds; tail is the exact Parseval deficit |t|^{2h(t)} − Σ a_k².
[[nodiscard]] ChaosVector mbm_coeffs(const HurstFunction& h, double t, int K = kDefaultTruncation);

/// a_k = d/dt[g_{e_k}(t, h(t))].
[[nodiscard]] ChaosVector white_noise_coeffs(const HurstFunction& h, double t, int K = kDefaultTruncation);

/// a_k = ∫₀ᵗ f(s) d/ds[g_{e_k}(s, h(s))] ds.
[[nodiscard]] ChaosVector wiener_coeffs(const std::function<double(double)>& f, const HurstFunction& h,
                                        double t, int K = kDefaultTruncation);

/// Power-law extrapolation of Σ_{k≥K} a_k² from the second half of the coefficients.
[[nodiscard]] double extrapolated_tail(const std::vector<double>& coeffs);

/// S(Φ)(η) = Σ a_k ⟨η, e_k⟩.
[[nodiscard]] double s_transform(const ChaosVector& a, const TestFunction& eta);

/// X⋄Y for X = x0 + Σ x_k⟨·,e_k⟩, Y = y0 + Σ y_k⟨·,e_k⟩: the product minus E[(X−x0)(Y−y0)].
class WickProduct {
 public:
  WickProduct(ChaosVector x, ChaosVector y, double x_constant = 0.0, double y_constant = 0.0);

  [[nodiscard]] double covariance() const noexcept { return covariance_; }
  [[nodiscard]] double evaluate(std::span<const double> xi) const;
  [[nodiscard]] double mean() const noexcept { return x0_ * y0_; }
  [[nodiscard]] double variance() const;
  /// E[(X⋄Y)(ω + η)], the shifted expectation.
  [[nodiscard]] double s_transform(const TestFunction& eta) const;

 private:
  ChaosVector x_;
  ChaosVector y_;
  double x0_;
  double y0_;
  double covariance_;
};

[[nodiscard]] WickProduct wick_product_first_chaos(const ChaosVector& X, const ChaosVector& Y);
/// Deterministic left factor: c⋄Y = c·Y.
[[nodiscard]] WickProduct wick_product_first_chaos(double c, const ChaosVector& Y);

/// ξ_{t,H,k}(x) = 2^{−k/2} t^{kH} h_k(x/(√2 t^H)) exp(−x²/(2t^{2H})).
[[nodiscard]] double xi_kernel(double t, double H, int k, double x);

struct FunctionalExpansion {
  std::vector<double> coeffs;  // coefficient of I_k(M^{⊗k}) for k < K
  double sigma = 0.0;          // t^{h(t)}
  /// Σ c_k² k! σ^{2k}, which tends to E[f(Z)²].
  [[nodiscard]] double second_moment() const;
};

/// Chaos coefficients of f(B^{(h)}(t)): c_k = (√(2π) σ)^{−1} (k!)^{−1} σ^{−2k} ⟨f, ξ_{t,h(t),k}⟩, σ = t^{h(t)}.
[[nodiscard]] FunctionalExpansion functional_coeffs(const std::function<double(double)>& f,
                                                   const HurstFunction& h, double t, int K);

}  // namespace mbm
