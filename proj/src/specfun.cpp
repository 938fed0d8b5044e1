// SPDX-License-Identifier: MIT
#include "mbm/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mbm/errors.hpp"

namespace mbm {
namespace {

constexpr double kPi = std::numbers::pi;
const double kPiMinusQuarter = std::pow(kPi, -0.25);

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

void check_hurst(double H, const char* what) {
  if (!(H > 0.0 && H < 1.0)) {
    throw DomainError(std::string(what) + ": H must lie in (0,1), got " + std::to_string(H));
  }
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double scaled_value(double v, double log_scale) {
  if (v == 0.0) return 0.0;
  if (log_scale > -700.0) return v * std::exp(log_scale);
  return std::copysign(std::exp(log_scale + std::log(std::abs(v))), v);
}

const HermiteTable& default_table() {
  static const HermiteTable table;
  return table;
}

}  // namespace

HermiteTable::HermiteTable(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw InputError("HermiteTable: max_order must be >= 1");
}

void HermiteTable::check_order(int n) const {
  if (n < 0 || n > max_order_) {
    throw DomainError("Hermite order " + std::to_string(n) + " outside [0, " +
                      std::to_string(max_order_) + "]");
  }
}

double HermiteTable::poly(int n, double x) const {
  check_order(n);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double HermiteTable::function(int n, double x) const {
  check_order(n);
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  hermite_fns(x, buf);
  return buf.back();
}

void HermiteTable::functions(double x, std::span<double> out) const {
  if (!out.empty()) check_order(static_cast<int>(out.size()) - 1);
  hermite_fns(x, out);
}

double hermite_poly(int n, double x) { return default_table().poly(n, x); }

double hermite_fn(int n, double x) { return default_table().function(n, x); }

void hermite_fns(double x, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  // Run the normalized recurrence on e_k·exp(x²/2); pull out powers of 1e150 as they build up.
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double log_scale = -0.5 * x * x;
  double prev = 0.0;
  double cur = kPiMinusQuarter;
  out[0] = scaled_value(cur, log_scale);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double kp1 = static_cast<double>(k + 1);
    const double next = x * std::sqrt(2.0 / kp1) * cur - std::sqrt(static_cast<double>(k) / kp1) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += log_rescale;
    }
    out[k + 1] = scaled_value(cur, log_scale);
  }
}

void hermite_fn_derivs(double x, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  std::vector<double> e(n + 1);
  hermite_fns(x, e);
  for (std::size_t k = 0; k < n; ++k) {
    const double down = k > 0 ? std::sqrt(0.5 * static_cast<double>(k)) * e[k - 1] : 0.0;
    out[k] = down - std::sqrt(0.5 * static_cast<double>(k + 1)) * e[k + 1];
  }
}

void hermite_prob_polys(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = x * out[k] - static_cast<double>(k) * out[k - 1];
  }
}

double log_gamma(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("log_gamma: pole at " + std::to_string(x));
  if (x < 0.5) return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("gamma_fn: pole at " + std::to_string(x));
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  return std::exp(log_gamma(x));
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("digamma: pole at " + std::to_string(x));
  if (x < 0.5) return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r2 = 1.0 / (x * x);
  // Bernoulli tail: B_{2n}/(2n x^{2n}), n = 1..7.
  const double series =
      r2 * (1.0 / 12 -
            r2 * (1.0 / 120 -
                  r2 * (1.0 / 252 -
                        r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 / 12.0))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double c_const(double H) {
  check_hurst(H, "c_const");
  return std::sqrt(2.0 * kPi / (std::exp(log_gamma(2.0 * H + 1.0)) * std::sin(kPi * H)));
}

double c_const_cos_form(double H) {
  check_hurst(H, "c_const_cos_form");
  if (H == 0.5) throw DomainError("c_const_cos_form: 0/0 at H = 1/2");
  return std::sqrt(2.0 * std::cos(kPi * H) * gamma_fn(2.0 - 2.0 * H) / (H * (1.0 - 2.0 * H)));
}

double gamma_const(double H) {
  check_hurst(H, "gamma_const");
  if (H == 0.5) throw DomainError("gamma_const: undefined at H = 1/2");
  return std::sqrt(2.0 * kPi) /
         (2.0 * c_const(H) * gamma_fn(H - 0.5) * std::cos(0.5 * kPi * (H - 0.5)));
}

double alpha_const(double H) {
  check_hurst(H, "alpha_const");
  return -std::sqrt(2.0 * kPi) /
         (2.0 * c_const(H) * gamma_fn(H + 0.5) * std::cos(0.5 * kPi * (H - 0.5)));
}

double beta_const(double H) {
  check_hurst(H, "beta_const");
  return -0.5 * (2.0 * digamma(2.0 * H + 1.0) + kPi / std::tan(kPi * H));
}

double alpha_const_derivative(double H) {
  check_hurst(H, "alpha_const_derivative");
  return alpha_const(H) *
         (-beta_const(H) - digamma(H + 0.5) + 0.5 * kPi * std::tan(0.5 * kPi * (H - 0.5)));
}

double heat_kernel(double t, double x) {
  if (t < 0.0) throw DomainError("heat_kernel: negative variance");
  if (t == 0.0) return 0.0;
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

}  // namespace mbm
