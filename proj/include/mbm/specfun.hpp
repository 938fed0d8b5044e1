// SPDX-License-Identifier: MIT
#pragma once

#include <span>

namespace mbm {

inline constexpr int kDefaultMaxOrder = 512;

/// Hermite polynomials h_n and Hermite functions e_n up to a fixed order.
/// Nothing is tabulated; each call runs the recurrence.
class HermiteTable {
 public:
  explicit HermiteTable(int max_order = kDefaultMaxOrder);

  [[nodiscard]] int max_order() const noexcept { return max_order_; }

  /// Physicists' polynomial h_n(x). May overflow to ±inf for large n·|x|.
  [[nodiscard]] double poly(int n, double x) const;

  /// Orthonormal Hermite function e_n(x).
  [[nodiscard]] double function(int n, double x) const;

  /// Fills out[k] = e_k(x) for k < out.size().
  void functions(double x, std::span<double> out) const;

 private:
  void check_order(int n) const;
  int max_order_;
};

[[nodiscard]] double hermite_poly(int n, double x);
[[nodiscard]] double hermite_fn(int n, double x);

/// e_0..e_{out.size()-1} at x, overflow-safe (rescaled recurrence).
void hermite_fns(double x, std::span<double> out);

/// e'_0..e'_{out.size()-1} at x, from e'_k = √(k/2) e_{k-1} − √((k+1)/2) e_{k+1}.
void hermite_fn_derivs(double x, std::span<double> out);

/// Probabilists' He_0..He_{n-1} at x.
void hermite_prob_polys(double x, std::span<double> out);

/// ln|Γ(x)| (Lanczos, reflection for x < 1/2).
[[nodiscard]] double log_gamma(double x);

/// Γ(x) with sign, x not a non-positive integer.
[[nodiscard]] double gamma_fn(double x);

/// ψ(x) = Γ'(x)/Γ(x).
[[nodiscard]] double digamma(double x);

/// c_H = (2π / (Γ(2H+1) sin πH))^{1/2}.
[[nodiscard]] double c_const(double H);

/// The same constant from (2 cos(πH) Γ(2−2H) / (H(1−2H)))^{1/2}; undefined at H = 1/2.
[[nodiscard]] double c_const_cos_form(double H);

/// Constant of the Riesz-type representations; H ≠ 1/2.
[[nodiscard]] double gamma_const(double H);

/// α_H = −γ_H/(H − 1/2), continuous through H = 1/2 where it equals −1/2.
[[nodiscard]] double alpha_const(double H);

/// β_H = c'_H / c_H.
[[nodiscard]] double beta_const(double H);

/// dα_H/dH.
[[nodiscard]] double alpha_const_derivative(double H);

/// Gaussian density with variance t at x; 0 when t = 0.
[[nodiscard]] double heat_kernel(double t, double x);

}  // namespace mbm
