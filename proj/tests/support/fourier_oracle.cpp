// SPDX-License-Identifier: MIT
#include "fourier_oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

namespace oracle {
namespace {

constexpr double kPi = std::numbers::pi;

// Frequencies above this carry nothing for low-order Hermite inputs.
constexpr double kFrequencyCut = 14.0;

struct Samples {
  double L;
  double h;
  std::vector<double> x;
  std::vector<double> fx;
};

Samples sample(const std::function<double(double)>& f, double L, int n) {
  Samples s{L, 2.0 * L / n, {}, {}};
  for (int j = 0; j <= n; ++j) {
    const double x = -L + s.h * j;
    s.x.push_back(x);
    s.fx.push_back(f(x) * ((j == 0 || j == n) ? 0.5 : 1.0));
  }
  return s;
}

std::complex<double> transform(const Samples& s, double y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    re += s.fx[j] * std::cos(y * s.x[j]);
    im -= s.fx[j] * std::sin(y * s.x[j]);
  }
  return {re * s.h, im * s.h};
}

}  // namespace

double hermite_function(int k, double x) {
  const double norm = std::sqrt(std::pow(2.0, k) * std::tgamma(k + 1.0) * std::sqrt(kPi));
  return std::hermite(static_cast<unsigned>(k), x) * std::exp(-0.5 * x * x) / norm;
}

double c_h(double H) { return std::sqrt(2.0 * kPi / (std::tgamma(2.0 * H + 1.0) * std::sin(kPi * H))); }

std::complex<double> fourier_trapezoid(const std::function<double(double)>& f, double y, double L, int n) {
  return transform(sample(f, L, n), y);
}

std::vector<double> mh_hermite(int k, double H, const std::vector<double>& xs) {
  const Samples s = sample([k](double x) { return hermite_function(k, x); }, 30.0, 3000);
  const double scale = 2.0 / (std::sqrt(2.0 * kPi) * c_h(H));
  // y = u^p with p(3/2 − H) = 2 turns y^{1/2−H} dy into p·u du.
  const double p = 2.0 / (1.5 - H);
  const double U = std::pow(kFrequencyCut, 1.0 / p);
  std::vector<std::pair<double, double>> panels;
  constexpr int kUniform = 160;
  const double width = U / kUniform;
  double lo = width;
  for (int g = 0; g < 12; ++g) {
    panels.emplace_back(lo / 2.0, lo);
    lo /= 2.0;
  }
  panels.emplace_back(0.0, lo);
  for (int j = 1; j < kUniform; ++j) panels.emplace_back(j * width, (j + 1) * width);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  std::vector<double> out(xs.size(), 0.0);
  auto add = [&](double u, double w) {
    const double y = std::pow(u, p);
    const std::complex<double> fy = transform(s, y);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double re = std::real(std::exp(std::complex<double>(0.0, xs[i] * y)) * fy);
      out[i] += w * p * u * re;
    }
  };
  for (const auto& [a, b] : panels) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t j = 0; j < Rule::abscissa().size(); ++j) {
      const double z = Rule::abscissa()[j], w = Rule::weights()[j];
      if (z == 0.0) {
        add(mid, half * w);
      } else {
        add(mid - half * z, half * w);
        add(mid + half * z, half * w);
      }
    }
  }
  for (double& v : out) v *= scale;
  return out;
}

double mh_indicator(double H, double a, double b, double x) {
  static thread_local boost::math::quadrature::ooura_fourier_sin<double> ooura(1e-12);
  const double nu = 0.5 + H;
  // ∫₀^∞ y^{−ν} sin(c y) dy
  auto sine_integral = [&](double c) {
    if (c == 0.0) return 0.0;
    const auto r = ooura.integrate([nu](double y) { return std::pow(y, -nu); }, std::abs(c));
    return std::copysign(r.first, c);
  };
  const double scale = 2.0 / (std::sqrt(2.0 * kPi) * c_h(H));
  return scale * (sine_integral(x - a) - sine_integral(x - b));
}

double delta_norm_sq_hermite(int k, double H, double beta) {
  const Samples s = sample([k](double x) { return hermite_function(k, x); }, 30.0, 3000);
  auto g = [&](double y) {
    const double l = beta + std::log(y);
    return std::pow(y, 1.0 - 2.0 * H) * l * l * std::norm(transform(s, y));
  };
  const double v = boost::math::quadrature::tanh_sinh<double>().integrate(g, 0.0, kFrequencyCut, 1e-13);
  const double c = c_h(H);
  return 2.0 * v / (c * c);
}

}  // namespace oracle
