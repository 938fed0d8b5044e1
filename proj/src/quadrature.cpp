// SPDX-License-Identifier: MIT
#include "mbm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "mbm/errors.hpp"

namespace mbm {
namespace {

// QUADPACK qk21 abscissae and weights; odd-indexed abscissae are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208024852522, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a;
  double b;
  std::vector<double> value;
  double error;
  double floor;  // roundoff level 50·eps·∫|f|
};

struct PanelOrder {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

class Kronrod21 {
 public:
  Kronrod21(const VectorIntegrand& f, std::size_t dim)
      : f_(f), dim_(dim), fv_(21 * dim) {}

  Panel apply(double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double ahalf = std::abs(half);
    // Node order in fv_: 0 = centre, then pairs (centre − h·x_j, centre + h·x_j) for j = 0..9.
    f_(centre, std::span<double>(fv_.data(), dim_));
    for (std::size_t j = 0; j < 10; ++j) {
      const double dx = half * kXgk[j];
      f_(centre - dx, std::span<double>(fv_.data() + (1 + 2 * j) * dim_, dim_));
      f_(centre + dx, std::span<double>(fv_.data() + (2 + 2 * j) * dim_, dim_));
    }
    evaluations += 21;
    Panel p{a, b, std::vector<double>(dim_), 0.0, 0.0};
    for (std::size_t c = 0; c < dim_; ++c) {
      const double fc = fv_[c];
      double resk = kWgk[10] * fc;
      double resg = 0.0;
      double resabs = std::abs(resk);
      for (std::size_t j = 0; j < 10; ++j) {
        const double f1 = fv_[(1 + 2 * j) * dim_ + c];
        const double f2 = fv_[(2 + 2 * j) * dim_ + c];
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
      }
      const double reskh = 0.5 * resk;
      double resasc = kWgk[10] * std::abs(fc - reskh);
      for (std::size_t j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv_[(1 + 2 * j) * dim_ + c] - reskh) +
                             std::abs(fv_[(2 + 2 * j) * dim_ + c] - reskh));
      }
      if (!std::isfinite(resk)) {
        std::ostringstream msg;
        msg << "quadrature: non-finite integrand on [" << a << ", " << b << "], component " << c;
        throw NumericalError(msg.str());
      }
      p.value[c] = resk * half;
      resabs *= ahalf;
      resasc *= ahalf;
      double err = std::abs((resk - resg) * half);
      if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
      const double floor = 50.0 * kEps * resabs;
      err = std::max(err, floor);
      p.error = std::max(p.error, err);
      p.floor = std::max(p.floor, floor);
    }
    return p;
  }

  int evaluations = 0;

 private:
  const VectorIntegrand& f_;
  std::size_t dim_;
  std::vector<double> fv_;
};

}  // namespace

QuadVecResult integrate_vec(const VectorIntegrand& f, std::size_t dim, double a, double b,
                            const QuadOptions& opts) {
  QuadVecResult out;
  out.value.assign(dim, 0.0);
  if (a == b || dim == 0) return out;
  Kronrod21 rule(f, dim);
  const PanelOrder order;
  std::vector<Panel> heap;
  heap.push_back(rule.apply(a, b));
  std::vector<double> total = heap.front().value;
  double err_sum = heap.front().error;
  double floor_sum = heap.front().floor;
  int subdivisions = 0;
  auto tolerance = [&] {
    double scale = 0.0;
    for (double v : total) scale = std::max(scale, std::abs(v));
    return std::max(opts.abs_tol, opts.rel_tol * scale);
  };
  // Re-sum from the panels to shed the drift of the running updates.
  auto resum = [&] {
    std::fill(total.begin(), total.end(), 0.0);
    err_sum = 0.0;
    floor_sum = 0.0;
    for (const Panel& p : heap) {
      for (std::size_t c = 0; c < dim; ++c) total[c] += p.value[c];
      err_sum += p.error;
      floor_sum += p.floor;
    }
  };
  while (subdivisions < opts.max_subdivisions) {
    if (err_sum <= tolerance()) {
      resum();
      if (err_sum <= tolerance()) break;
    }
    std::pop_heap(heap.begin(), heap.end(), order);
    Panel worst = std::move(heap.back());
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {
      heap.push_back(std::move(worst));
      std::push_heap(heap.begin(), heap.end(), order);
      break;
    }
    heap.pop_back();
    Panel left = rule.apply(worst.a, mid);
    Panel right = rule.apply(mid, worst.b);
    for (std::size_t c = 0; c < dim; ++c) total[c] += left.value[c] + right.value[c] - worst.value[c];
    err_sum += left.error + right.error - worst.error;
    floor_sum += left.floor + right.floor - worst.floor;
    heap.push_back(std::move(left));
    std::push_heap(heap.begin(), heap.end(), order);
    heap.push_back(std::move(right));
    std::push_heap(heap.begin(), heap.end(), order);
    ++subdivisions;
  }
  resum();
  const double tol = tolerance();
  out.value = std::move(total);
  out.error = err_sum;
  out.subdivisions = subdivisions;
  out.evaluations = rule.evaluations;
  out.converged = err_sum <= std::max(tol, 4.0 * floor_sum);
  if (!out.converged && opts.throw_on_failure) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << err_sum
        << " > tolerance " << tol << " after " << subdivisions << " subdivisions ("
        << rule.evaluations << " evaluations)";
    throw NumericalError(msg.str());
  }
  return out;
}

QuadResult integrate(const ScalarIntegrand& f, double a, double b, const QuadOptions& opts) {
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  const QuadVecResult r = integrate_vec(vf, 1, a, b, opts);
  return {r.value[0], r.error, r.subdivisions, r.evaluations, r.converged};
}

QuadVecResult integrate_vec_piecewise_anchored(const AnchoredIntegrand& f, std::size_t dim,
                                               std::span<const Breakpoint> points, double m,
                                               const QuadOptions& opts) {
  QuadVecResult out;
  out.value.assign(dim, 0.0);
  auto accumulate = [&](const QuadVecResult& r, double sign) {
    for (std::size_t c = 0; c < dim; ++c) out.value[c] += sign * r.value[c];
    out.error += r.error;
    out.subdivisions += r.subdivisions;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  };
  // Singular end at `end`, regular end at `other`; sign restores the left-to-right orientation.
  auto substituted = [&](double end, double other) {
    const double len = other - end;
    const VectorIntegrand g = [&f, end, len, m](double s, std::span<double> o) {
      const double sm1 = std::pow(s, m - 1.0);
      const double offset = len * sm1 * s;
      if (offset == 0.0) {
        // node underflowed onto the singular point; the transformed integrand is bounded there
        std::fill(o.begin(), o.end(), 0.0);
        return;
      }
      f(end, offset, o);
      const double jac = len * m * sm1;
      for (double& v : o) v *= jac;
    };
    accumulate(integrate_vec(g, dim, 0.0, 1.0, opts), end < other ? 1.0 : -1.0);
  };
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Breakpoint lo = points[i];
    const Breakpoint hi = points[i + 1];
    if (lo.x == hi.x) continue;
    if (lo.singular && hi.singular) {
      const double mid = 0.5 * (lo.x + hi.x);
      substituted(lo.x, mid);
      substituted(hi.x, mid);
    } else if (lo.singular) {
      substituted(lo.x, hi.x);
    } else if (hi.singular) {
      substituted(hi.x, lo.x);
    } else {
      const double anchor = lo.x;
      const VectorIntegrand g = [&f, anchor](double o, std::span<double> r) { f(anchor, o, r); };
      accumulate(integrate_vec(g, dim, 0.0, hi.x - lo.x, opts), 1.0);
    }
  }
  return out;
}

QuadVecResult integrate_vec_piecewise(const VectorIntegrand& f, std::size_t dim,
                                      std::span<const Breakpoint> points, double m,
                                      const QuadOptions& opts) {
  const AnchoredIntegrand g = [&f](double anchor, double offset, std::span<double> o) { f(anchor + offset, o); };
  return integrate_vec_piecewise_anchored(g, dim, points, m, opts);
}

QuadResult integrate_piecewise_anchored(const std::function<double(double, double)>& f,
                                        std::span<const Breakpoint> points, double m, const QuadOptions& opts) {
  const AnchoredIntegrand vf = [&f](double anchor, double offset, std::span<double> out) {
    out[0] = f(anchor, offset);
  };
  const QuadVecResult r = integrate_vec_piecewise_anchored(vf, 1, points, m, opts);
  return {r.value[0], r.error, r.subdivisions, r.evaluations, r.converged};
}

QuadResult integrate_piecewise(const ScalarIntegrand& f, std::span<const Breakpoint> points,
                               double m, const QuadOptions& opts) {
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  const QuadVecResult r = integrate_vec_piecewise(vf, 1, points, m, opts);
  return {r.value[0], r.error, r.subdivisions, r.evaluations, r.converged};
}

std::complex<double> power_exp_tail(double omega, double nu, double lower, const QuadOptions& opts) {
  if (!(lower > 0.0) || !(nu > 0.0) || omega == 0.0) {
    throw DomainError("power_exp_tail: needs lower > 0, nu > 0, omega != 0");
  }
  constexpr double kSwitch = 60.0;
  const double A = std::max(lower, kSwitch / std::abs(omega));
  std::complex<double> head = 0.0;
  if (A > lower) {
    const VectorIntegrand g = [omega, nu](double y, std::span<double> o) {
      const double w = std::pow(y, -nu);
      o[0] = w * std::cos(omega * y);
      o[1] = w * std::sin(omega * y);
    };
    const QuadVecResult r = integrate_vec(g, 2, lower, A, opts);
    head = {r.value[0], r.value[1]};
  }
  // ∫_A^∞ y^{−ν} e^{iωy} dy = −e^{iωA} A^{−ν}/(iω) · Σ_n (ν)_n/(iωA)^n
  const std::complex<double> iwA(0.0, omega * A);
  std::complex<double> term = 1.0;
  std::complex<double> sum = 1.0;
  double last = 1.0;
  for (int n = 0; n < 200; ++n) {
    term *= (nu + n) / iwA;
    const double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-18) break;
  }
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, omega * A));
  const std::complex<double> tail = -phase * std::pow(A, -nu) / std::complex<double>(0.0, omega) * sum;
  return head + tail;
}

namespace {

GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Golub–Welsch eigenproblem failed");
  const auto n = diag.size();
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

// Eigenvalues come back to ~1 ulp; pair the nodes of a symmetric weight exactly.
void symmetrize(GaussRule& r) {
  const std::size_t n = r.nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[j] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  GaussRule r = golub_welsch(diag, off, 2.0);
  symmetrize(r);
  return r;
}

GaussRule gauss_hermite_normal(int n) {
  if (n < 1) throw InputError("gauss_hermite_normal: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  GaussRule r = golub_welsch(diag, off, 1.0);
  symmetrize(r);
  return r;
}

}  // namespace mbm
