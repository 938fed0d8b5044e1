// SPDX-License-Identifier: MIT
#include "mbm/mh_op.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "mbm/errors.hpp"
#include "mbm/quadrature.hpp"
#include "mbm/specfun.hpp"

namespace mbm {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

void check_hurst(double H, const char* what) {
  if (!(H > 0.0 && H < 1.0)) {
    throw DomainError(std::string(what) + ": H must lie in (0,1), got " + std::to_string(H));
  }
}

// sgn(d)|d|^p, with the removable value 0 at d = 0.
double signed_power(double d, double p) {
  if (d == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(d), p), d);
}

QuadOptions inner_opts() {
  QuadOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  o.max_subdivisions = 6000;
  return o;
}

QuadOptions outer_opts() {
  QuadOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-10;
  o.max_subdivisions = 4000;
  return o;
}

enum class Basis { Value, Derivative };

// Weights w_j(y), j < count, against which the Hermite functions are integrated.
// eval(anchor, offset, w) with y = anchor + offset; anchor is a singular point whenever one is near.
struct Kernel {
  int count;
  std::vector<double> singular;
  std::function<void(double, double, double*)> eval;
};

// out[j·K + k] = ∫ w_j φ_k, or out[j] = ∫ w_j Σ c_k φ_k when coeffs is given; φ = e or e'.
std::vector<double> moments(int K, Basis basis, const Kernel& kernel,
                            const std::vector<double>* coeffs = nullptr) {
  if (K <= 0) return std::vector<double>(static_cast<std::size_t>(kernel.count) * (coeffs ? 1 : 0), 0.0);
  const double R = hermite_support_radius(K + 1);
  std::vector<Breakpoint> pts{{-R, false}};
  std::vector<double> sing = kernel.singular;
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
  for (double p : sing) {
    if (p > -R && p < R) pts.push_back({p, true});
  }
  pts.push_back({R, false});

  const auto uk = static_cast<std::size_t>(K);
  const auto nw = static_cast<std::size_t>(kernel.count);
  const std::size_t dim = coeffs ? nw : nw * uk;
  std::vector<double> e(uk + 1);
  std::vector<double> phi(uk);
  std::vector<double> w(nw);
  const AnchoredIntegrand f = [&](double anchor, double offset, std::span<double> out) {
    hermite_fns(anchor + offset, e);
    if (basis == Basis::Value) {
      std::copy(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(uk), phi.begin());
    } else {
      for (std::size_t k = 0; k < uk; ++k) {
        const double down = k > 0 ? std::sqrt(0.5 * static_cast<double>(k)) * e[k - 1] : 0.0;
        phi[k] = down - std::sqrt(0.5 * static_cast<double>(k + 1)) * e[k + 1];
      }
    }
    kernel.eval(anchor, offset, w.data());
    if (coeffs) {
      const double fy = std::inner_product(phi.begin(), phi.end(), coeffs->begin(), 0.0);
      for (std::size_t j = 0; j < nw; ++j) out[j] = w[j] * fy;
    } else {
      for (std::size_t j = 0; j < nw; ++j) {
        for (std::size_t k = 0; k < uk; ++k) out[j * uk + k] = w[j] * phi[k];
      }
    }
  };
  return integrate_vec_piecewise_anchored(f, dim, pts, 2.0, inner_opts()).value;
}

Kernel mh_kernel(double H, double x, bool with_log) {
  const double p = H - 0.5;
  return Kernel{with_log ? 2 : 1, {x}, [p, x, with_log](double anchor, double offset, double* w) {
                  const double d = (anchor - x) + offset;
                  w[0] = signed_power(d, p);
                  if (with_log) w[1] = d == 0.0 ? 0.0 : w[0] * std::log(std::abs(d));
                }};
}

// Outside the support of f the representation γ_H ∫ f(y)|y−x|^{H−3/2} dy (γ_H = −α_H(H−½)) has no
// cancellation, unlike the f' form whose leading x^{H−½} term integrates to zero.
Kernel far_kernel(double H, double x, bool with_log) {
  const double q = H - 1.5;
  return Kernel{with_log ? 2 : 1, {}, [q, x, with_log](double anchor, double offset, double* w) {
                  const double d = std::abs((anchor - x) + offset);
                  w[0] = std::pow(d, q);
                  if (with_log) w[1] = w[0] * std::log(d);
                }};
}

bool is_far(double x, int K) { return std::abs(x) > hermite_support_radius(K + 1) + 1.0; }

Kernel primitive_kernel(double H, double t, bool with_log) {
  const double p = H - 0.5;
  return Kernel{with_log ? 2 : 1, {0.0, t}, [p, t, with_log](double anchor, double offset, double* w) {
                  const double d = (anchor - t) + offset;
                  const double y = anchor + offset;
                  const double at_t = signed_power(d, p);
                  const double at_0 = signed_power(y, p);
                  w[0] = at_t - at_0;
                  if (with_log) {
                    const double lt = d == 0.0 ? 0.0 : at_t * std::log(std::abs(d));
                    const double l0 = y == 0.0 ? 0.0 : at_0 * std::log(std::abs(y));
                    w[1] = lt - l0;
                  }
                }};
}

std::vector<double> split_pair(const std::vector<double>& m, double a0, double a1, std::size_t K) {
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) out[k] = a0 * m[k] + a1 * m[K + k];
  return out;
}

std::complex<double> operand_fourier(const Operand& u, double y) {
  return std::visit([y](const auto& v) { return v.fourier(y); }, u);
}

double operand_radius(const Operand& u) {
  if (const auto* f = std::get_if<TestFunction>(&u)) return f->support_radius();
  const auto& s = std::get<SignedIndicator>(u);
  return std::max(std::abs(s.a), std::abs(s.b));
}

void operand_singular_points(const Operand& u, std::vector<double>& out) {
  if (const auto* s = std::get_if<SignedIndicator>(&u)) {
    if (s->a != s->b) {
      out.push_back(s->a);
      out.push_back(s->b);
    }
  }
}

// M_H 1_{[a,b]} from da = a − x and db = b − x, so callers can pass exact distances.
double indicator_from_offsets(double H, double a, double b, double da, double db) {
  if (a == b) return 0.0;
  if (da == 0.0 || db == 0.0) throw SingularityError("mh_indicator: x sits on an interval endpoint");
  const double r = H - 0.5;
  if ((da > 0.0) != (db > 0.0)) {
    return -alpha_const(H) * (std::copysign(std::pow(std::abs(db), r), db) -
                              std::copysign(std::pow(std::abs(da), r), da));
  }
  // Outside [a,b] both terms share a sign and nearly cancel far away; write the difference
  // as |a−x|^r·expm1(r·log1p(·)) to keep relative accuracy.
  const double side = da > 0.0 ? 1.0 : -1.0;  // −1 when x is right of the interval
  const double ada = std::abs(da);
  const double ratio_m1 = side * (b - a) / ada;  // |b−x|/|a−x| − 1
  const double diff = std::abs(ratio_m1) < 0.5 ? std::pow(ada, r) * std::expm1(r * std::log1p(ratio_m1))
                                               : std::pow(std::abs(db), r) - std::pow(ada, r);
  return -alpha_const(H) * side * diff;
}

// ∫_{−∞}^{∞} F with power-type singularities at `sing`, decaying like |x|^{2H−3} (possibly times logs).
double integrate_line(const std::function<double(double, double)>& F, std::vector<double> sing, double X,
                      double H) {
  const QuadOptions opts = outer_opts();
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
  std::vector<Breakpoint> pts{{-X, false}};
  for (double p : sing) {
    if (p > -X && p < X) pts.push_back({p, true});
  }
  pts.push_back({X, false});
  const double m_mid = std::max(2.0, 1.0 / (2.0 * H));
  double total = integrate_piecewise_anchored(F, pts, m_mid, opts).value;
  // x = ±X/w maps each tail onto (0,1]; the integrand then behaves like w^{1−2H} at w = 0.
  const double m_tail = std::max(1.0, 1.0 / (2.0 - 2.0 * H));
  const std::vector<Breakpoint> unit{{0.0, true}, {1.0, false}};
  for (double side : {-1.0, 1.0}) {
    const ScalarIntegrand tail = [&F, X, side](double w) {
      if (w == 0.0) return 0.0;
      return F(0.0, side * X / w) * X / (w * w);
    };
    total += integrate_piecewise(tail, unit, m_tail, opts).value;
  }
  return total;
}

// ∫_0^∞ ξ^{1−2H} g(ξ) dξ for g of Gaussian decay beyond `radius`.
double integrate_half_line_weighted(const ScalarIntegrand& g, double H, double radius) {
  const QuadOptions opts = outer_opts();
  const ScalarIntegrand weighted = [&g, H](double xi) {
    if (xi == 0.0) return 0.0;
    return std::pow(xi, 1.0 - 2.0 * H) * g(xi);
  };
  const std::vector<Breakpoint> head{{0.0, true}, {1.0, false}};
  double total = integrate_piecewise(weighted, head, std::max(1.0, 1.0 / (2.0 - 2.0 * H)), opts).value;
  if (radius > 1.0) total += integrate(weighted, 1.0, radius, opts).value;
  return total;
}

}  // namespace

TestFunction::TestFunction(std::vector<double> hermite_coeffs) : coeffs_(std::move(hermite_coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InputError("TestFunction: non-finite coefficient");
  }
  if (static_cast<int>(coeffs_.size()) > kDefaultMaxOrder) {
    throw DomainError("TestFunction: expansion longer than the maximum Hermite order");
  }
}

TestFunction TestFunction::basis(int k) {
  if (k < 0) throw InputError("TestFunction::basis: negative order");
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return TestFunction(std::move(c));
}

bool TestFunction::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double TestFunction::operator()(double x) const {
  if (coeffs_.empty()) return 0.0;
  std::vector<double> e(coeffs_.size());
  hermite_fns(x, e);
  return std::inner_product(e.begin(), e.end(), coeffs_.begin(), 0.0);
}

double TestFunction::derivative_at(double x) const {
  if (coeffs_.empty()) return 0.0;
  std::vector<double> d(coeffs_.size());
  hermite_fn_derivs(x, d);
  return std::inner_product(d.begin(), d.end(), coeffs_.begin(), 0.0);
}

TestFunction TestFunction::derivative() const {
  if (coeffs_.empty()) return {};
  const std::size_t n = coeffs_.size();
  std::vector<double> d(n + 1, 0.0);
  for (std::size_t j = 0; j <= n; ++j) {
    double v = 0.0;
    if (j + 1 < n) v += coeffs_[j + 1] * std::sqrt(0.5 * static_cast<double>(j + 1));
    if (j >= 1 && j - 1 < n) v -= coeffs_[j - 1] * std::sqrt(0.5 * static_cast<double>(j));
    d[j] = v;
  }
  return TestFunction(std::move(d));
}

std::complex<double> TestFunction::fourier(double y) const {
  if (coeffs_.empty()) return 0.0;
  std::vector<double> e(coeffs_.size());
  hermite_fns(y, e);
  // (−i)^k cycles through 1, −i, −1, i
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double v = coeffs_[k] * e[k];
    switch (k % 4) {
      case 0: re += v; break;
      case 1: im -= v; break;
      case 2: re -= v; break;
      default: im += v; break;
    }
  }
  return kSqrt2Pi * std::complex<double>(re, im);
}

double TestFunction::l2_norm() const {
  return std::sqrt(std::inner_product(coeffs_.begin(), coeffs_.end(), coeffs_.begin(), 0.0));
}

double TestFunction::support_radius() const { return hermite_support_radius(size() + 1); }

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return TestFunction(std::move(c));
}

TestFunction operator*(double s, const TestFunction& a) {
  std::vector<double> c = a.coeffs_;
  for (double& v : c) v *= s;
  return TestFunction(std::move(c));
}

double SignedIndicator::operator()(double x) const {
  if (a <= b) return (x >= a && x <= b) ? 1.0 : 0.0;
  return (x >= b && x <= a) ? -1.0 : 0.0;
}

std::complex<double> SignedIndicator::fourier(double y) const {
  const double scale = std::max(std::abs(a), std::abs(b)) * std::abs(y);
  if (scale < 1e-3) {
    // ∫_a^b e^{−ixy} dx = Σ_n (−iy)^n (b^{n+1} − a^{n+1}) / (n+1)!
    std::complex<double> sum = 0.0;
    std::complex<double> pw = 1.0;
    double fact = 1.0;
    double an = a;
    double bn = b;
    for (int n = 0; n < 6; ++n) {
      fact *= (n + 1);
      sum += pw * (bn - an) / fact;
      pw *= std::complex<double>(0.0, -y);
      an *= a;
      bn *= b;
    }
    return sum;
  }
  const std::complex<double> ea = std::exp(std::complex<double>(0.0, -a * y));
  const std::complex<double> eb = std::exp(std::complex<double>(0.0, -b * y));
  return (ea - eb) / std::complex<double>(0.0, y);
}

double hermite_support_radius(int K) { return std::sqrt(2.0 * std::max(K, 1) + 1.0) + 10.0; }

double mh_indicator(double H, double a, double b, double x) {
  check_hurst(H, "mh_indicator");
  if (a == b) return 0.0;
  if (x == a || x == b) throw SingularityError("mh_indicator: x sits on an interval endpoint");
  return indicator_from_offsets(H, a, b, a - x, b - x);
}

double mh_schwartz(double H, const TestFunction& f, double x) {
  check_hurst(H, "mh_schwartz");
  if (f.size() == 0) return 0.0;
  if (is_far(x, f.size())) {
    const double g = -alpha_const(H) * (H - 0.5);
    return g * moments(f.size(), Basis::Value, far_kernel(H, x, false), &f.coeffs())[0];
  }
  return alpha_const(H) * moments(f.size(), Basis::Derivative, mh_kernel(H, x, false), &f.coeffs())[0];
}

double mh_schwartz_fractional(double H, const TestFunction& f, double x) {
  check_hurst(H, "mh_schwartz_fractional");
  if (!(H < 0.5)) throw DomainError("mh_schwartz_fractional: needs H < 1/2");
  const double U = std::abs(x) + f.support_radius();
  const double fx = f(x);
  const ScalarIntegrand g = [&](double u) {
    if (u == 0.0) return 0.0;
    return (f(x - u) + f(x + u) - 2.0 * fx) * std::pow(u, H - 1.5);
  };
  const std::vector<Breakpoint> pts{{0.0, true}, {U, false}};
  const double head = integrate_piecewise(g, pts, 2.0, inner_opts()).value;
  // beyond U only the −2f(x) term survives
  const double tail = -2.0 * fx * std::pow(U, H - 0.5) / (0.5 - H);
  return gamma_const(H) * (head + tail);
}

double mh_schwartz_riesz(double H, const TestFunction& f, double x) {
  check_hurst(H, "mh_schwartz_riesz");
  if (!(H > 0.5)) throw DomainError("mh_schwartz_riesz: needs H > 1/2");
  const double R = f.support_radius();
  const double q = H - 1.5;
  if (x <= -R || x >= R) {
    const ScalarIntegrand g = [&](double y) { return f(y) * std::pow(std::abs(y - x), q); };
    return gamma_const(H) * integrate(g, -R, R, inner_opts()).value;
  }
  const double fx = f(x);
  const ScalarIntegrand g = [&](double y) {
    const double d = std::abs(y - x);
    if (d == 0.0) return 0.0;
    return (f(y) - fx) * std::pow(d, q);
  };
  const std::vector<Breakpoint> pts{{-R, false}, {x, true}, {R, false}};
  const double body = integrate_piecewise(g, pts, 2.0, inner_opts()).value;
  const double r = H - 0.5;
  const double flat = fx * (std::pow(R - x, r) + std::pow(R + x, r)) / r;
  return gamma_const(H) * (body + flat);
}

double dmh_dH(double H, const TestFunction& f, double x) {
  check_hurst(H, "dmh_dH");
  if (f.size() == 0) return 0.0;
  if (is_far(x, f.size())) {
    const auto m = moments(f.size(), Basis::Value, far_kernel(H, x, true), &f.coeffs());
    const double g = -alpha_const(H) * (H - 0.5);
    const double dg = -alpha_const_derivative(H) * (H - 0.5) - alpha_const(H);
    return dg * m[0] + g * m[1];
  }
  const auto m = moments(f.size(), Basis::Derivative, mh_kernel(H, x, true), &f.coeffs());
  return alpha_const_derivative(H) * m[0] + alpha_const(H) * m[1];
}

double mh_apply(double H, const Operand& u, double x) {
  if (const auto* f = std::get_if<TestFunction>(&u)) return mh_schwartz(H, *f, x);
  const auto& s = std::get<SignedIndicator>(u);
  return mh_indicator(H, s.a, s.b, x);
}

double inner_h_frac(const Operand& u, const Operand& v, double H) {
  check_hurst(H, "inner_h_frac");
  const double c = c_const(H);
  const ScalarIntegrand prod = [&](double xi) {
    return std::real(operand_fourier(u, xi) * std::conj(operand_fourier(v, xi)));
  };
  const auto* iu = std::get_if<SignedIndicator>(&u);
  const auto* iv = std::get_if<SignedIndicator>(&v);
  double total = 0.0;
  if (iu && iv) {
    total = integrate_half_line_weighted(prod, H, 1.0);
    // Beyond ξ = 1: Re[û v̄̂] = [cos((c−a)ξ) − cos((d−a)ξ) − cos((c−b)ξ) + cos((d−b)ξ)]/ξ².
    const double terms[4][2] = {{iv->a - iu->a, 1.0},
                                {iv->b - iu->a, -1.0},
                                {iv->a - iu->b, -1.0},
                                {iv->b - iu->b, 1.0}};
    for (const auto& [omega, sign] : terms) {
      const double piece =
          omega == 0.0 ? 1.0 / (2.0 * H) : std::real(power_exp_tail(omega, 1.0 + 2.0 * H, 1.0, outer_opts()));
      total += sign * piece;
    }
  } else {
    double radius = 0.0;
    if (!iu) radius = std::max(radius, std::get<TestFunction>(u).support_radius());
    if (!iv) radius = std::max(radius, std::get<TestFunction>(v).support_radius());
    total = integrate_half_line_weighted(prod, H, radius);
  }
  return 2.0 * total / (c * c);
}

double delta_h_norm_sq(const TestFunction& f, double H) {
  check_hurst(H, "delta_h_norm_sq");
  const double c = c_const(H);
  const double beta = beta_const(H);
  const ScalarIntegrand g = [&](double xi) {
    const double l = beta + std::log(xi);
    return l * l * std::norm(f.fourier(xi));
  };
  return 2.0 * integrate_half_line_weighted(g, H, f.support_radius()) / (c * c);
}

double mh_l2_inner(double H, const Operand& u, const Operand& v) {
  check_hurst(H, "mh_l2_inner");
  std::vector<double> sing;
  operand_singular_points(u, sing);
  operand_singular_points(v, sing);
  double X = std::max(operand_radius(u), operand_radius(v));
  for (double p : sing) X = std::max(X, std::abs(p));
  X += 2.0;
  auto at = [H](const Operand& w, double anchor, double offset) {
    if (const auto* s = std::get_if<SignedIndicator>(&w)) {
      return indicator_from_offsets(H, s->a, s->b, (s->a - anchor) - offset, (s->b - anchor) - offset);
    }
    return mh_apply(H, w, anchor + offset);
  };
  return integrate_line([&](double anchor, double offset) { return at(u, anchor, offset) * at(v, anchor, offset); },
                        sing, X, H);
}

double dmh_dH_l2_norm_sq(double H, const TestFunction& f) {
  check_hurst(H, "dmh_dH_l2_norm_sq");
  const auto F = [&](double anchor, double offset) {
    const double d = dmh_dH(H, f, anchor + offset);
    return d * d;
  };
  return integrate_line(F, {}, f.support_radius() + 2.0, H);
}

double g_primitive(const TestFunction& f, double t, double H) {
  check_hurst(H, "g_primitive");
  if (t == 0.0 || f.size() == 0) return 0.0;
  return alpha_const(H) * moments(f.size(), Basis::Value, primitive_kernel(H, t, false), &f.coeffs())[0];
}

double dg_dH(const TestFunction& f, double t, double H) {
  check_hurst(H, "dg_dH");
  if (t == 0.0 || f.size() == 0) return 0.0;
  const auto m = moments(f.size(), Basis::Value, primitive_kernel(H, t, true), &f.coeffs());
  return alpha_const_derivative(H) * m[0] + alpha_const(H) * m[1];
}

double dg_along_h(const TestFunction& f, const HurstFunction& h, double t) {
  const double H = h(t);
  const double dh = h.derivative(t);
  double out = mh_schwartz(H, f, t);
  if (dh != 0.0) out += dh * dg_dH(f, t, H);
  return out;
}

std::vector<double> mh_basis(double H, int K, double x) {
  check_hurst(H, "mh_basis");
  if (is_far(x, K)) {
    std::vector<double> m = moments(K, Basis::Value, far_kernel(H, x, false));
    const double g = -alpha_const(H) * (H - 0.5);
    for (double& v : m) v *= g;
    return m;
  }
  std::vector<double> m = moments(K, Basis::Derivative, mh_kernel(H, x, false));
  const double a = alpha_const(H);
  for (double& v : m) v *= a;
  return m;
}

std::vector<double> dmh_dH_basis(double H, int K, double x) {
  check_hurst(H, "dmh_dH_basis");
  if (is_far(x, K)) {
    const auto m = moments(K, Basis::Value, far_kernel(H, x, true));
    return split_pair(m, -alpha_const_derivative(H) * (H - 0.5) - alpha_const(H), -alpha_const(H) * (H - 0.5),
                      static_cast<std::size_t>(std::max(K, 0)));
  }
  const auto m = moments(K, Basis::Derivative, mh_kernel(H, x, true));
  return split_pair(m, alpha_const_derivative(H), alpha_const(H), static_cast<std::size_t>(std::max(K, 0)));
}

std::vector<double> g_primitive_basis(int K, double t, double H) {
  check_hurst(H, "g_primitive_basis");
  if (t == 0.0) return std::vector<double>(static_cast<std::size_t>(std::max(K, 0)), 0.0);
  std::vector<double> m = moments(K, Basis::Value, primitive_kernel(H, t, false));
  const double a = alpha_const(H);
  for (double& v : m) v *= a;
  return m;
}

std::vector<double> dg_dH_basis(int K, double t, double H) {
  check_hurst(H, "dg_dH_basis");
  if (t == 0.0) return std::vector<double>(static_cast<std::size_t>(std::max(K, 0)), 0.0);
  const auto m = moments(K, Basis::Value, primitive_kernel(H, t, true));
  return split_pair(m, alpha_const_derivative(H), alpha_const(H), static_cast<std::size_t>(std::max(K, 0)));
}

std::vector<double> dg_along_h_basis(int K, const HurstFunction& h, double t) {
  const double H = h(t);
  const double dh = h.derivative(t);
  std::vector<double> out = mh_basis(H, K, t);
  if (dh != 0.0) {
    const auto d = dg_dH_basis(K, t, H);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += dh * d[k];
  }
  return out;
}

}  // namespace mbm
