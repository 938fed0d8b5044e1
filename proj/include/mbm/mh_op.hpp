// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "mbm/hurst.hpp"

namespace mbm {

/// Finite Hermite expansion Σ c_k e_k.
class TestFunction {
 public:
  TestFunction() = default;
  explicit TestFunction(std::vector<double> hermite_coeffs);
  [[nodiscard]] static TestFunction basis(int k);

  [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(coeffs_.size()); }
  [[nodiscard]] bool is_zero() const noexcept;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double derivative_at(double x) const;
  /// Exact derivative, one order longer.
  [[nodiscard]] TestFunction derivative() const;
  /// ∫ e^{−ixy} f(x) dx, using ê_k = (−i)^k √(2π) e_k.
  [[nodiscard]] std::complex<double> fourier(double y) const;
  [[nodiscard]] double l2_norm() const;
  /// Beyond this |x| every e_k in the expansion (and e'_k) is below ~1e−30.
  [[nodiscard]] double support_radius() const;

  friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
  friend TestFunction operator*(double s, const TestFunction& a);

 private:
  std::vector<double> coeffs_;
};

/// Oriented indicator 1_{[a,b]}; equals −1_{[b,a]} when b < a.
struct SignedIndicator {
  double a = 0.0;
  double b = 0.0;
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] std::complex<double> fourier(double y) const;
};

using Operand = std::variant<TestFunction, SignedIndicator>;

/// Radius beyond which Hermite functions of order < K are negligible.
[[nodiscard]] double hermite_support_radius(int K);

/// Closed form −α_H[(b−x)|b−x|^{H−3/2} − (a−x)|a−x|^{H−3/2}]; SingularityError at x ∈ {a,b}.
[[nodiscard]] double mh_indicator(double H, double a, double b, double x);

/// M_H(f)(x) = α_H ∫ sgn(y−x)|y−x|^{H−½} f'(y) dy.
[[nodiscard]] double mh_schwartz(double H, const TestFunction& f, double x);

/// γ_H ∫ (f(x−u) − f(x))/|u|^{3/2−H} du, H < ½ only.
[[nodiscard]] double mh_schwartz_fractional(double H, const TestFunction& f, double x);

/// γ_H ∫ f(y)/|y−x|^{3/2−H} dy, H > ½ only.
[[nodiscard]] double mh_schwartz_riesz(double H, const TestFunction& f, double x);

/// ∂/∂H of M_H(f)(x): α'_H ∫ sgn|y−x|^{H−½} f' + α_H ∫ sgn|y−x|^{H−½} ln|y−x| f'.
[[nodiscard]] double dmh_dH(double H, const TestFunction& f, double x);

/// M_H of an operand at x (closed form for indicators).
[[nodiscard]] double mh_apply(double H, const Operand& u, double x);

/// ⟨u,v⟩_H = c_H^{−2} ∫ |ξ|^{1−2H} û(ξ) conj(v̂(ξ)) dξ.
[[nodiscard]] double inner_h_frac(const Operand& u, const Operand& v, double H);

/// ‖f‖²_{δ_H} = c_H^{−2} ∫ (β_H + ln|ξ|)² |ξ|^{1−2H} |f̂(ξ)|² dξ.
[[nodiscard]] double delta_h_norm_sq(const TestFunction& f, double H);

/// ∫ M_H(u)(x) M_H(v)(x) dx by quadrature on the real line.
[[nodiscard]] double mh_l2_inner(double H, const Operand& u, const Operand& v);

/// ∫ (∂M_H/∂H(f)(x))² dx by quadrature on the real line.
[[nodiscard]] double dmh_dH_l2_norm_sq(double H, const TestFunction& f);

/// g_f(t,H) = ∫₀ᵗ M_H(f)(x) dx.
[[nodiscard]] double g_primitive(const TestFunction& f, double t, double H);

/// ∂g_f/∂H (t,H) = ∫₀ᵗ ∂M_H/∂H(f)(x) dx.
[[nodiscard]] double dg_dH(const TestFunction& f, double t, double H);

/// d/dt[g_f(t, h(t))] = M_{h(t)}(f)(t) + h'(t)·∂g_f/∂H(t, h(t)).
[[nodiscard]] double dg_along_h(const TestFunction& f, const HurstFunction& h, double t);

// The same quantities for e_0..e_{K−1} at once (one shared quadrature).
[[nodiscard]] std::vector<double> mh_basis(double H, int K, double x);
[[nodiscard]] std::vector<double> dmh_dH_basis(double H, int K, double x);
[[nodiscard]] std::vector<double> g_primitive_basis(int K, double t, double H);
[[nodiscard]] std::vector<double> dg_dH_basis(int K, double t, double H);
[[nodiscard]] std::vector<double> dg_along_h_basis(int K, const HurstFunction& h, double t);

}  // namespace mbm
