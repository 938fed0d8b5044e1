// SPDX-License-Identifier: MIT
#include "mbm/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "mbm/chaos.hpp"
#include "mbm/errors.hpp"
#include "mbm/quadrature.hpp"
#include "mbm/rng.hpp"
#include "mbm/specfun.hpp"

namespace mbm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinSubstitutionExponent = 0.02;

const char* policy_name(PassPolicy p) {
  switch (p) {
    case PassPolicy::Absolute: return "abs";
    case PassPolicy::AbsoluteOrRelative: return "abs_or_rel";
    case PassPolicy::LhsPositive: return "lhs_positive";
  }
  return "abs";
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

const GaussRule& normal_rule() {
  static const GaussRule rule = gauss_hermite_normal(kGaussHermiteNodes);
  return rule;
}

/// E[g(σZ)] by Gauss–Hermite.
double normal_expectation(double sigma, const std::function<double(double)>& g) {
  const auto& r = normal_rule();
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * g(sigma * r.nodes[i]);
  return s;
}

double variance_at(const HurstFunction& h, double t) { return std::pow(t, 2.0 * h(t)); }

/// Smallest h on (0,T], used for the endpoint substitution t = u^{1/(k·H₁)}.
double lower_hurst(const HurstFunction& h, double T) {
  return std::max(kMinSubstitutionExponent, h.range_on(0.0, T).first);
}

QuadOptions time_quad_options() {
  QuadOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-12;
  o.max_subdivisions = 8000;
  return o;
}

/// ∫₀ᵀ g(t) dt through t = u^p, which removes endpoint singularities up to t^{1/p − 1}.
QuadResult integrate_from_zero(const std::function<double(double)>& g, double T, double p) {
  const double U = std::pow(T, 1.0 / p);
  return integrate(
      [&](double u) {
        const double t = std::pow(u, p);
        if (t <= 0.0) return 0.0;
        return g(t) * p * std::pow(u, p - 1.0);
      },
      0.0, U, time_quad_options());
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double central4 = 0.0;
  std::size_t n = 0;
};

template <class Draw>
Moments sample_moments(int n_draws, std::uint64_t seed, std::uint64_t stream, Draw draw) {
  if (n_draws < 2) throw InputError("Monte Carlo check needs at least 2 draws");
  NormalStream rng(seed, stream);
  std::vector<double> y(static_cast<std::size_t>(n_draws));
  for (double& v : y) v = draw(rng);
  Moments m;
  m.n = y.size();
  // Neumaier summation keeps a constant sample's mean exact.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : y) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  m.mean = (sum + carry) / static_cast<double>(m.n);
  double s2 = 0.0;
  double s4 = 0.0;
  for (double v : y) {
    const double d = (v - m.mean) * (v - m.mean);
    s2 += d;
    s4 += d * d;
  }
  m.variance = s2 / static_cast<double>(m.n - 1);
  m.central4 = s4 / static_cast<double>(m.n);
  return m;
}

void check_growth(const ItoIntegrand& f, const HurstFunction& h, double T) {
  double vmax = 0.0;
  constexpr int kSamples = 257;
  for (int i = 1; i < kSamples; ++i) {
    const double t = T * i / (kSamples - 1);
    if (h.in_domain(t)) vmax = std::max(vmax, variance_at(h, t));
  }
  if (!(vmax > 0.0)) return;
  const double limit = 1.0 / (4.0 * vmax);
  const double s = std::sqrt(vmax);
  auto size = [&](double x) {
    double m = 0.0;
    for (double t : {0.5 * T, T}) {
      for (double xx : {x, -x}) {
        m = std::max({m, std::abs(f.f(t, xx)), std::abs(f.f_t(t, xx)), std::abs(f.f_xx(t, xx))});
      }
    }
    return m;
  };
  const double x1 = 4.0 * s;
  const double x2 = 8.0 * s;
  const double g1 = size(x1);
  const double g2 = size(x2);
  if (!std::isfinite(g2)) {
    throw PreconditionError("growth condition: " + f.name + " is not finite at x = " + std::to_string(x2));
  }
  const double rate = (std::log1p(g2) - std::log1p(g1)) / (x2 * x2 - x1 * x1);
  if (rate >= limit) {
    throw PreconditionError("growth condition: " + f.name + " grows like exp(" + std::to_string(rate) +
                            " x^2), needs exponent < 1/(4 max t^{2h(t)}) = " + std::to_string(limit));
  }
}

std::function<double(double)> affine(double c0, double c1) {
  return [c0, c1](double s) { return c0 + c1 * s; };
}

}  // namespace

VerificationReport make_report(std::string name, double lhs, double rhs, double tolerance, PassPolicy policy,
                               nlohmann::json meta) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = rhs != 0.0 ? r.abs_err / std::abs(rhs) : (r.abs_err == 0.0 ? 0.0 : kInf);
  r.tolerance = tolerance;
  switch (policy) {
    case PassPolicy::Absolute: r.passed = r.abs_err <= tolerance; break;
    case PassPolicy::AbsoluteOrRelative: r.passed = r.abs_err <= tolerance || r.rel_err <= tolerance; break;
    case PassPolicy::LhsPositive: r.passed = lhs > rhs; break;
  }
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.passed = false;
  r.meta = std::move(meta);
  r.meta["policy"] = policy_name(policy);
  return r;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"name", r.name},
          {"lhs", finite_or_null(r.lhs)},
          {"rhs", finite_or_null(r.rhs)},
          {"abs_err", finite_or_null(r.abs_err)},
          {"rel_err", finite_or_null(r.rel_err)},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"meta", r.meta}};
}

nlohmann::json to_json(const std::vector<VerificationReport>& rs) {
  auto out = nlohmann::json::array();
  for (const auto& r : rs) out.push_back(to_json(r));
  return out;
}

ItoIntegrand ItoIntegrand::polynomial(std::vector<std::vector<double>> c, std::string name) {
  auto eval = [](const std::vector<std::vector<double>>& a, double t, double x) {
    double s = 0.0;
    double ti = 1.0;
    for (const auto& row : a) {
      double xj = 1.0;
      double inner = 0.0;
      for (double v : row) {
        inner += v * xj;
        xj *= x;
      }
      s += ti * inner;
      ti *= t;
    }
    return s;
  };
  std::vector<std::vector<double>> dt;
  for (std::size_t i = 1; i < c.size(); ++i) {
    dt.push_back(c[i]);
    for (double& v : dt.back()) v *= static_cast<double>(i);
  }
  std::vector<std::vector<double>> dxx;
  for (const auto& row : c) {
    dxx.emplace_back();
    for (std::size_t j = 2; j < row.size(); ++j) dxx.back().push_back(row[j] * static_cast<double>(j * (j - 1)));
  }
  if (name.empty()) name = "polynomial";
  return {std::move(name), [c, eval](double t, double x) { return eval(c, t, x); },
          [dt, eval](double t, double x) { return eval(dt, t, x); },
          [dxx, eval](double t, double x) { return eval(dxx, t, x); }};
}

ItoIntegrand ItoIntegrand::monomial(int degree) {
  if (degree < 0) throw InputError("monomial degree must be non-negative");
  std::vector<double> row(static_cast<std::size_t>(degree) + 1, 0.0);
  row.back() = 1.0;
  return polynomial({row}, "x^" + std::to_string(degree));
}

ItoIntegrand ItoIntegrand::cosine() {
  return {"cos(x)", [](double, double x) { return std::cos(x); }, [](double, double) { return 0.0; },
          [](double, double x) { return -std::cos(x); }};
}

VerificationReport ito_expectation_check(const ItoIntegrand& f, const HurstFunction& h, double T,
                                         double tolerance) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InputError("ito check needs finite T > 0");
  check_growth(f, h, T);
  const double H1 = lower_hurst(h, T);
  const double vT = variance_at(h, T);
  const double end_term = normal_expectation(std::sqrt(vT), [&](double x) { return f.f(T, x); });
  const double start_term = f.f(0.0, 0.0);
  const auto drift = integrate_from_zero(
      [&](double t) {
        const double sigma = std::sqrt(variance_at(h, t));
        const double et = normal_expectation(sigma, [&](double x) { return f.f_t(t, x); });
        const double exx = normal_expectation(sigma, [&](double x) { return f.f_xx(t, x); });
        return et + 0.5 * qv_rate(h, t) * exx;
      },
      T, 1.0 / (2.0 * H1));
  const double residual = end_term - start_term - drift.value;
  nlohmann::json meta{{"f", f.name},         {"h", h.spec()},
                      {"T", T},              {"E_f_T", end_term},
                      {"f_0", start_term},   {"time_integral", drift.value},
                      {"quad_error", drift.error}, {"substitution_H1", H1},
                      {"gauss_hermite_nodes", kGaussHermiteNodes}};
  if (f.name == "cos(x)") meta["E_cos_closed_form"] = std::exp(-0.5 * vT);
  return make_report("ito:" + f.name + ":" + h.spec(), residual, 0.0, tolerance, PassPolicy::Absolute,
                     std::move(meta));
}

VerificationReport tanaka_check(double a, const HurstFunction& h, double T, double tolerance) {
  if (!(T > 0.0) || !std::isfinite(T) || !std::isfinite(a)) throw InputError("tanaka check needs finite a and T > 0");
  const double sigma = std::sqrt(variance_at(h, T));
  const double lhs = sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-a * a / (2.0 * sigma * sigma)) +
                     a * std::erf(a / (sigma * std::numbers::sqrt2));
  const double H1 = lower_hurst(h, T);
  const auto local = integrate_from_zero(
      [&](double t) { return qv_rate(h, t) * heat_kernel(variance_at(h, t), a); }, T, 1.0 / H1);
  const double rhs = std::abs(a) + local.value;
  nlohmann::json meta{{"a", a}, {"h", h.spec()}, {"T", T}, {"local_time_term", local.value},
                      {"quad_error", local.error}, {"substitution_H1", H1}};
  return make_report("tanaka:a=" + num(a) + ":" + h.spec() + ":T=" + num(T), lhs, rhs,
                     tolerance, PassPolicy::Absolute, std::move(meta));
}

VerificationReport wick_square_check(const HurstFunction& h, double T, int n_draws, std::uint64_t seed) {
  const double v = variance_at(h, T);
  const double sigma = std::sqrt(v);
  const Moments m = sample_moments(n_draws, seed, 0, [&](NormalStream& g) {
    const double z = sigma * g.normal();
    return 0.5 * (z * z - v);
  });
  const double se = std::sqrt(m.variance / static_cast<double>(m.n));
  return make_report("wick_square_mean:" + h.spec(), m.mean, 0.0, 4.0 * se, PassPolicy::Absolute,
                     {{"h", h.spec()}, {"T", T}, {"draws", n_draws}, {"seed", seed}, {"standard_error", se},
                      {"variance_T", v}});
}

VerificationReport wick_square_variance_check(const HurstFunction& h, double T, int n_draws, std::uint64_t seed) {
  const double v = variance_at(h, T);
  const double sigma = std::sqrt(v);
  const Moments m = sample_moments(n_draws, seed, 1, [&](NormalStream& g) {
    const double z = sigma * g.normal();
    return 0.5 * (z * z - v);
  });
  const double se = std::sqrt(std::max(0.0, m.central4 - m.variance * m.variance) / static_cast<double>(m.n));
  return make_report("wick_square_variance:" + h.spec(), m.variance, 0.5 * v * v, 4.0 * se, PassPolicy::Absolute,
                     {{"h", h.spec()}, {"T", T}, {"draws", n_draws}, {"seed", seed}, {"standard_error", se}});
}

VerificationReport wiener_zero_mean_check(const std::function<double(double)>& f, const HurstFunction& h, double T,
                                          int K, int n_draws, std::uint64_t seed) {
  const ChaosVector a = wiener_coeffs(f, h, T, K);
  std::vector<double> xi(static_cast<std::size_t>(K));
  const Moments m = sample_moments(n_draws, seed, 2, [&](NormalStream& g) {
    for (double& x : xi) x = g.normal();
    return a.evaluate(xi);
  });
  const double se = std::sqrt(m.variance / static_cast<double>(m.n));
  return make_report("wiener_integral_zero_mean:" + h.spec(), m.mean, 0.0, 4.0 * se, PassPolicy::Absolute,
                     {{"h", h.spec()}, {"T", T}, {"K", K}, {"draws", n_draws}, {"seed", seed},
                      {"standard_error", se}, {"chaos_variance", a.variance()}});
}

VerificationReport geometric_mbm_check(double x, double alpha, double beta, const HurstFunction& h, double t,
                                       int n_draws, std::uint64_t seed) {
  const double v = variance_at(h, t);
  const double sigma = std::sqrt(v);
  const Moments m = sample_moments(n_draws, seed, 3, [&](NormalStream& g) {
    return x * std::exp(beta * sigma * g.normal() + alpha * t - 0.5 * beta * beta * v);
  });
  const double rhs = x * std::exp(alpha * t);
  const double se = std::abs(rhs) * std::sqrt(std::expm1(beta * beta * v) / static_cast<double>(m.n));
  const double tol = 4.0 * se + 1e-12 * std::abs(rhs);
  return make_report("geometric:" + h.spec(), m.mean, rhs, tol, PassPolicy::Absolute,
                     {{"x", x}, {"alpha", alpha}, {"beta", beta}, {"h", h.spec()}, {"t", t}, {"draws", n_draws},
                      {"seed", seed}, {"lognormal_standard_error", se},
                      {"sample_standard_error", std::sqrt(m.variance / static_cast<double>(m.n))}});
}

VerificationReport geometric_mbm_varying_check(double x, double alpha0, double alpha1, double beta0, double beta1,
                                               const HurstFunction& h, double t, int K, int n_draws,
                                               std::uint64_t seed) {
  const ChaosVector b = wiener_coeffs(affine(beta0, beta1), h, t, K);
  const double v = b.variance();
  const double drift = alpha0 * t + 0.5 * alpha1 * t * t;
  const double sigma = std::sqrt(v);
  const Moments m = sample_moments(n_draws, seed, 4, [&](NormalStream& g) {
    return x * std::exp(sigma * g.normal() + drift - 0.5 * v);
  });
  const double rhs = x * std::exp(drift);
  const double se = std::abs(rhs) * std::sqrt(std::expm1(v) / static_cast<double>(m.n));
  const double tol = 4.0 * se + 1e-12 * std::abs(rhs);
  return make_report("geometric_varying:" + h.spec(), m.mean, rhs, tol, PassPolicy::Absolute,
                     {{"x", x}, {"alpha", {alpha0, alpha1}}, {"beta", {beta0, beta1}}, {"h", h.spec()}, {"t", t},
                      {"K", K}, {"draws", n_draws}, {"seed", seed}, {"integral_variance", v},
                      {"truncation_tail_estimate", finite_or_null(b.tail_estimate)},
                      {"lognormal_standard_error", se}});
}

VerificationReport s_factorization_check(const HurstFunction& h, double T, const TestFunction& eta,
                                         double tolerance) {
  double lhs = 0.0;
  double rhs = 0.0;
  double err = 0.0;
  if (!eta.is_zero()) {
    QuadOptions o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-10;
    const auto r = integrate(
        [&](double t) { return g_primitive(eta, t, h(t)) * dg_along_h(eta, h, t); }, 0.0, T, o);
    lhs = r.value;
    err = r.error;
    const double g = g_primitive(eta, T, h(T));
    rhs = 0.5 * g * g;
  }
  return make_report("sfact:" + h.spec(), lhs, rhs, tolerance, PassPolicy::Absolute,
                     {{"h", h.spec()}, {"T", T}, {"eta", eta.coeffs()}, {"quad_error", err}});
}

VerificationReport wick_factorization_check(const HurstFunction& h, double t, double s, const TestFunction& eta,
                                            int K, double tolerance) {
  const ChaosVector x = mbm_coeffs(h, t, K);
  const ChaosVector y = mbm_coeffs(h, s, K);
  const double lhs = wick_product_first_chaos(x, y).s_transform(eta);
  const double rhs = s_transform(x, eta) * s_transform(y, eta);
  return make_report("wick_factorization:" + h.spec(), lhs, rhs, tolerance, PassPolicy::AbsoluteOrRelative,
                     {{"h", h.spec()}, {"t", t}, {"s", s}, {"K", K}, {"eta", eta.coeffs()}});
}

VerificationReport isometry_check(double H, double t, double s, double tolerance) {
  const double lhs = mh_l2_inner(H, SignedIndicator{0.0, t}, SignedIndicator{0.0, s});
  return make_report("isometry:H=" + num(H) + ":t=" + num(t) + ":s=" + num(s),
                     lhs, r_fbm(H, t, s), tolerance, PassPolicy::Absolute, {{"H", H}, {"t", t}, {"s", s}});
}

VerificationReport delta_isometry_check(const TestFunction& f, double H, double tolerance) {
  return make_report("delta_isometry:H=" + num(H), dmh_dH_l2_norm_sq(H, f), delta_h_norm_sq(f, H),
                     tolerance, PassPolicy::Absolute, {{"H", H}, {"f", f.coeffs()}});
}

VerificationReport gram_check(const HurstFunction& h, const std::vector<double>& times) {
  const CovarianceMatrix g = gram(h, times);
  const double asym = (g.entries - g.entries.transpose()).cwiseAbs().maxCoeff();
  return make_report("gram:" + h.spec(), g.min_eigenvalue(), 0.0, 0.0, PassPolicy::LhsPositive,
                     {{"h", h.spec()}, {"times", times}, {"asymmetry", asym}});
}

std::vector<VerificationReport> gram_random_suite(int count, int n_times, double lo, double hi,
                                                  std::uint64_t seed) {
  NormalStream rng(seed, 5);
  auto uniform = [&](double a, double b) { return a + (b - a) * rng.uniform(); };
  std::vector<VerificationReport> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> times(static_cast<std::size_t>(n_times));
    for (double& t : times) t = uniform(lo, hi);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (i % 2 == 0) {
      out.push_back(gram_check(constant_hurst(uniform(0.1, 0.9)), times));
    } else {
      double ta = uniform(lo, hi);
      double tb = uniform(lo, hi);
      if (ta > tb) std::swap(ta, tb);
      out.push_back(gram_check(smoothstep_hurst(uniform(0.1, 0.9), uniform(0.1, 0.9), ta, tb), times));
    }
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ito", "tanaka", "wick", "geometric", "sfact", "isometry", "gram",
                                              "all"};
  return names;
}

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& opts) {
  std::vector<VerificationReport> out;
  const auto smooth = smoothstep_hurst(0.3, 0.7, 0.5, 1.5);
  if (name == "ito") {
    out.push_back(ito_expectation_check(ItoIntegrand::monomial(2), smooth, 2.0, 1e-8));
    out.push_back(ito_expectation_check(ItoIntegrand::monomial(3), smooth, 2.0, 1e-8));
    out.push_back(ito_expectation_check(ItoIntegrand::monomial(4), constant_hurst(0.3), 1.5, 1e-8));
    out.push_back(ito_expectation_check(
        ItoIntegrand::polynomial({{1.0, 0.5, -1.0, 0.0, 0.25}, {0.0, 2.0, 1.0}}, "1+x/2-x^2+x^4/4+t(2x+x^2)"),
        smooth, 2.0, 1e-8));
    out.push_back(ito_expectation_check(ItoIntegrand::cosine(), smooth, 2.0, 1e-6));
  } else if (name == "tanaka") {
    out.push_back(tanaka_check(0.0, constant_hurst(0.5), 1.0));
    out.push_back(tanaka_check(1.0, family_hc(0.0), 0.8));
    for (const auto& h : {constant_hurst(0.3), constant_hurst(0.7), smooth}) {
      for (double a : {-1.0, 0.0, 0.5}) {
        for (double T : {0.5, 2.0}) out.push_back(tanaka_check(a, h, T));
      }
    }
  } else if (name == "wick") {
    out.push_back(wick_square_check(constant_hurst(0.7), 1.0, opts.mc_draws, opts.seed));
    out.push_back(wick_square_variance_check(constant_hurst(0.7), 1.0, opts.mc_draws, opts.seed));
    out.push_back(wick_square_check(smooth, 2.0, opts.mc_draws, opts.seed));
    out.push_back(wick_square_variance_check(smooth, 2.0, opts.mc_draws, opts.seed));
    out.push_back(wiener_zero_mean_check([](double s) { return s; }, constant_hurst(0.5), 1.0, 16,
                                         opts.mc_draws / 4, opts.seed));
  } else if (name == "geometric") {
    out.push_back(geometric_mbm_check(2.0, 0.3, 0.0, constant_hurst(0.6), 1.0, opts.mc_draws, opts.seed));
    out.push_back(geometric_mbm_check(1.0, 0.0, 1.0, constant_hurst(0.6), 1.0, opts.mc_draws, opts.seed));
    out.push_back(geometric_mbm_check(1.0, 0.1, 0.5, smooth, 2.0, opts.mc_draws, opts.seed));
    out.push_back(geometric_mbm_varying_check(1.0, 0.1, 0.2, 0.5, 0.25, smooth, 1.0, 32, opts.mc_draws, opts.seed));
  } else if (name == "sfact") {
    out.push_back(s_factorization_check(smooth, 1.0, TestFunction()));
    out.push_back(s_factorization_check(constant_hurst(0.5), 1.0, TestFunction::basis(0)));
    {
      const double g = g_primitive(TestFunction::basis(0), 1.0, 0.5);
      const double plain = integrate([](double x) { return hermite_fn(0, x); }, 0.0, 1.0).value;
      out.push_back(make_report("sfact:brownian_primitive", 0.5 * g * g, 0.5 * plain * plain, 1e-6,
                                PassPolicy::Absolute, {{"eta", "e0"}, {"T", 1.0}}));
    }
    out.push_back(s_factorization_check(smooth, 2.0, TestFunction::basis(0) + TestFunction::basis(1)));
    out.push_back(wick_factorization_check(smooth, 0.7, 1.8, TestFunction::basis(0) + 0.5 * TestFunction::basis(2),
                                           kDefaultTruncation));
  } else if (name == "isometry") {
    for (double H : {0.2, 0.5, 0.8}) {
      for (auto [t, s] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
        out.push_back(isometry_check(H, t, s));
      }
    }
    for (double H : {0.25, 0.75}) {
      for (int k : {0, 1, 2}) out.push_back(delta_isometry_check(TestFunction::basis(k), H));
    }
  } else if (name == "gram") {
    out = gram_random_suite(20, 12, 0.1, 10.0, opts.seed);
  } else if (name == "all") {
    for (const auto& n : suite_names()) {
      if (n == "all") continue;
      auto part = run_suite(n, opts);
      out.insert(out.end(), part.begin(), part.end());
    }
  } else {
    throw InputError("unknown verification suite '" + name + "'");
  }
  return out;
}

}  // namespace mbm
