// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mbm {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  bool throw_on_failure = true;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  bool converged = true;
};

struct QuadVecResult {
  std::vector<double> value;
  double error = 0.0;  // sum over panels of the largest component error
  int subdivisions = 0;
  int evaluations = 0;
  bool converged = true;
};

using ScalarIntegrand = std::function<double(double)>;
/// Writes dim values at x into out.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

/// Adaptive Gauss–Kronrod 10/21 on [a,b] (b < a allowed).
[[nodiscard]] QuadResult integrate(const ScalarIntegrand& f, double a, double b,
                                   const QuadOptions& opts = {});

/// All components share one subdivision tree; error is measured in the max norm.
[[nodiscard]] QuadVecResult integrate_vec(const VectorIntegrand& f, std::size_t dim, double a,
                                          double b, const QuadOptions& opts = {});

struct Breakpoint {
  double x;
  bool singular;
};

/// Integrates over consecutive breakpoints. Ends flagged singular get x = end + (other − end)·s^m;
/// a panel singular at both ends is split at its midpoint.
[[nodiscard]] QuadVecResult integrate_vec_piecewise(const VectorIntegrand& f, std::size_t dim,
                                                    std::span<const Breakpoint> points, double m,
                                                    const QuadOptions& opts = {});

/// f(anchor, offset, out) evaluates at x = anchor + offset, where anchor is the panel's singular
/// breakpoint (or its left end), so distances to a singular point reach f without rounding.
using AnchoredIntegrand = std::function<void(double, double, std::span<double>)>;

[[nodiscard]] QuadVecResult integrate_vec_piecewise_anchored(const AnchoredIntegrand& f, std::size_t dim,
                                                             std::span<const Breakpoint> points, double m,
                                                             const QuadOptions& opts = {});

[[nodiscard]] QuadResult integrate_piecewise_anchored(const std::function<double(double, double)>& f,
                                                      std::span<const Breakpoint> points, double m,
                                                      const QuadOptions& opts = {});

[[nodiscard]] QuadResult integrate_piecewise(const ScalarIntegrand& f,
                                             std::span<const Breakpoint> points, double m,
                                             const QuadOptions& opts = {});

/// ∫_lower^∞ y^{−ν} e^{iωy} dy for lower > 0, ν > 0, ω ≠ 0: quadrature up to |ω|y ≈ 60,
/// then the integration-by-parts asymptotic series.
[[nodiscard]] std::complex<double> power_exp_tail(double omega, double nu, double lower,
                                                  const QuadOptions& opts = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre on [−1,1] (Golub–Welsch).
[[nodiscard]] GaussRule gauss_legendre(int n);

/// Gauss–Hermite for the standard normal density: Σ w_i g(x_i) ≈ E[g(Z)].
[[nodiscard]] GaussRule gauss_hermite_normal(int n);

}  // namespace mbm
