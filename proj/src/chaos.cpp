// SPDX-License-Identifier: MIT
#include "mbm/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mbm/errors.hpp"
#include "mbm/quadrature.hpp"
#include "mbm/specfun.hpp"

namespace mbm {
namespace {

void check_truncation(int K) {
  if (K < 0 || K > kDefaultMaxOrder) {
    throw DomainError("chaos truncation K = " + std::to_string(K) + " outside [0, " +
                      std::to_string(kDefaultMaxOrder) + "]");
  }
}

double sum_squares(const std::vector<double>& v) { return std::inner_product(v.begin(), v.end(), v.begin(), 0.0); }

}  // namespace

double ChaosVector::variance() const { return sum_squares(coeffs); }

double ChaosVector::evaluate(std::span<const double> xi) const {
  const std::size_t n = std::min(coeffs.size(), xi.size());
  return std::inner_product(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n), xi.begin(), 0.0);
}

ChaosVector mbm_coeffs(const HurstFunction& h, double t, int K) {
  check_truncation(K);
  if (t == 0.0) return {std::vector<double>(static_cast<std::size_t>(K), 0.0), 0.0};
  const double H = h(t);
  ChaosVector out{g_primitive_basis(K, t, H), 0.0};
  out.tail_estimate = std::max(0.0, std::pow(std::abs(t), 2.0 * H) - out.variance());
  return out;
}

ChaosVector white_noise_coeffs(const HurstFunction& h, double t, int K) {
  check_truncation(K);
  return {dg_along_h_basis(K, h, t), std::numeric_limits<double>::infinity()};
}

ChaosVector wiener_coeffs(const std::function<double(double)>& f, const HurstFunction& h, double t, int K) {
  check_truncation(K);
  if (t == 0.0 || K == 0) return {std::vector<double>(static_cast<std::size_t>(K), 0.0), 0.0};
  const VectorIntegrand g = [&](double s, std::span<double> out) {
    const double fs = f(s);
    if (fs == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const auto d = dg_along_h_basis(K, h, s);
    for (std::size_t k = 0; k < d.size(); ++k) out[k] = fs * d[k];
  };
  QuadOptions opts;
  opts.abs_tol = 1e-11;
  opts.rel_tol = 1e-9;
  ChaosVector out{integrate_vec(g, static_cast<std::size_t>(K), 0.0, t, opts).value, 0.0};
  out.tail_estimate = extrapolated_tail(out.coeffs);
  return out;
}

double extrapolated_tail(const std::vector<double>& coeffs) {
  // Average a_k² over blocks of 8 in the upper half, fit log energy ~ −p log k.
  const std::size_t K = coeffs.size();
  constexpr std::size_t kBlock = 8;
  if (K < 4 * kBlock) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t start = K / 2; start + kBlock <= K; start += kBlock) {
    double e = 0.0;
    for (std::size_t k = start; k < start + kBlock; ++k) e += coeffs[k] * coeffs[k];
    if (e <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(start) + 0.5 * kBlock));
    ly.push_back(std::log(e / kBlock));
  }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double p = -sxy / sxx;
  if (!(p > 1.0)) return std::numeric_limits<double>::infinity();
  const double C = std::exp(my + p * mx);
  return C * std::pow(static_cast<double>(K), 1.0 - p) / (p - 1.0);
}

double s_transform(const ChaosVector& a, const TestFunction& eta) {
  const auto& c = eta.coeffs();
  const std::size_t n = std::min(a.coeffs.size(), c.size());
  return std::inner_product(a.coeffs.begin(), a.coeffs.begin() + static_cast<std::ptrdiff_t>(n), c.begin(), 0.0);
}

WickProduct::WickProduct(ChaosVector x, ChaosVector y, double x_constant, double y_constant)
    : x_(std::move(x)), y_(std::move(y)), x0_(x_constant), y0_(y_constant) {
  const std::size_t n = std::min(x_.coeffs.size(), y_.coeffs.size());
  covariance_ = std::inner_product(x_.coeffs.begin(), x_.coeffs.begin() + static_cast<std::ptrdiff_t>(n),
                                   y_.coeffs.begin(), 0.0);
}

double WickProduct::evaluate(std::span<const double> xi) const {
  return (x0_ + x_.evaluate(xi)) * (y0_ + y_.evaluate(xi)) - covariance_;
}

double WickProduct::variance() const {
  const double vx = x_.variance();
  const double vy = y_.variance();
  // linear part x0·Y + y0·X is orthogonal to the second-chaos part X⋄Y
  return x0_ * x0_ * vy + y0_ * y0_ * vx + 2.0 * x0_ * y0_ * covariance_ + vx * vy +
         covariance_ * covariance_;
}

double WickProduct::s_transform(const TestFunction& eta) const {
  // E[(x0 + x·(ξ+η))(y0 + y·(ξ+η))] − x·y
  const double xe = mbm::s_transform(x_, eta);
  const double ye = mbm::s_transform(y_, eta);
  const double shifted_second_moment = (x0_ + xe) * (y0_ + ye) + covariance_;
  return shifted_second_moment - covariance_;
}

WickProduct wick_product_first_chaos(const ChaosVector& X, const ChaosVector& Y) { return {X, Y}; }

WickProduct wick_product_first_chaos(double c, const ChaosVector& Y) { return {ChaosVector{}, Y, c, 0.0}; }

double xi_kernel(double t, double H, int k, double x) {
  if (!(t > 0.0)) throw DomainError("xi_kernel: t must be > 0");
  const double tH = std::pow(t, H);
  return std::pow(2.0, -0.5 * k) * std::pow(tH, k) * hermite_poly(k, x / (std::sqrt(2.0) * tH)) *
         std::exp(-x * x / (2.0 * tH * tH));
}

double FunctionalExpansion::second_moment() const {
  double acc = 0.0;
  double scale = 1.0;  // k! σ^{2k}
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) scale *= static_cast<double>(k) * sigma * sigma;
    acc += coeffs[k] * coeffs[k] * scale;
  }
  return acc;
}

FunctionalExpansion functional_coeffs(const std::function<double(double)>& f, const HurstFunction& h,
                                      double t, int K) {
  if (!(t > 0.0)) throw DomainError("functional_coeffs: t must be > 0");
  check_truncation(K);
  const double sigma = std::pow(t, h(t));
  // On x = σz, ξ_{t,H,k}(x) e^{z²/2} = σ^k He_k(z), so ⟨f, ξ⟩ = √(2π) σ^{k+1} E[f(σZ) He_k(Z)].
  const GaussRule rule = gauss_hermite_normal(std::max(96, 2 * K + 32));
  std::vector<double> moments(static_cast<std::size_t>(K), 0.0);
  std::vector<double> he(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = rule.nodes[i];
    const double wf = rule.weights[i] * f(sigma * z);
    hermite_prob_polys(z, he);
    for (std::size_t k = 0; k < he.size(); ++k) moments[k] += wf * he[k];
  }
  FunctionalExpansion out{std::vector<double>(static_cast<std::size_t>(K)), sigma};
  double denom = 1.0;  // k! σ^k
  for (std::size_t k = 0; k < moments.size(); ++k) {
    if (k > 0) denom *= static_cast<double>(k) * sigma;
    out.coeffs[k] = moments[k] / denom;
  }
  return out;
}

}  // namespace mbm
