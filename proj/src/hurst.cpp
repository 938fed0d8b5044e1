// SPDX-License-Identifier: MIT
#include "mbm/hurst.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "mbm/errors.hpp"
#include "mbm/specfun.hpp"

namespace mbm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest text that parses back to v.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace

const char* const kHurstSpecGrammar =
    "h-family spec grammar:\n"
    "  const:H=<h>                 constant h in (0,1)\n"
    "  h1:lambda=<l>               l/ln|t| on |t| > e^l, l > 0\n"
    "  h2:lambda=<l>               l/ln|t| on 0 < |t| < e^l, l < 0\n"
    "  hc:c=<c>                    ln(t-c)/(2 ln|t|) on its (0,1)-valued domain\n"
    "  smoothstep:<Ha>,<Hb>,<ta>,<tb>   Ha before ta, Hb after tb, C1 cubic between\n";

HurstFunction::HurstFunction(std::string spec, Fn h, Fn dh, std::vector<Interval> domain,
                             double lower, double upper)
    : spec_(std::move(spec)),
      h_(std::move(h)),
      dh_(std::move(dh)),
      domain_(std::move(domain)),
      lower_(lower),
      upper_(upper) {}

bool HurstFunction::in_domain(double t) const noexcept {
  return std::any_of(domain_.begin(), domain_.end(), [t](const Interval& i) { return i.contains(t); });
}

void HurstFunction::check(double t) const {
  if (!in_domain(t)) throw DomainError("t = " + fmt(t) + " outside the domain of " + spec_);
}

double HurstFunction::operator()(double t) const {
  check(t);
  return h_(t);
}

double HurstFunction::derivative(double t) const {
  check(t);
  return dh_(t);
}

std::pair<double, double> HurstFunction::range_on(double a, double b, int samples) const {
  double lo = kInf;
  double hi = -kInf;
  for (int i = 0; i < samples; ++i) {
    const double t = a + (b - a) * i / (samples - 1);
    if (!in_domain(t)) continue;
    const double v = h_(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) throw DomainError("range_on: [" + fmt(a) + ", " + fmt(b) + "] misses the domain of " + spec_);
  return {lo, hi};
}

HurstFunction HurstFunction::restricted(double a, double b) const {
  std::vector<Interval> dom;
  for (const Interval& i : domain_) {
    const Interval cut{std::max(i.lo, a), std::min(i.hi, b)};
    if (cut.lo < cut.hi) dom.push_back(cut);
  }
  if (dom.empty()) throw DomainError("restricted: (" + fmt(a) + ", " + fmt(b) + ") misses the domain of " + spec_);
  HurstFunction out(spec_, h_, dh_, dom, lower_, upper_);
  const auto [lo, hi] = out.range_on(a, b);
  out.lower_ = lo;
  out.upper_ = hi;
  return out;
}

HurstFunction constant_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw InputError("const: H must lie in (0,1), got " + fmt(H));
  return HurstFunction(
      "const:H=" + fmt(H), [H](double) { return H; }, [](double) { return 0.0; },
      {Interval{-kInf, kInf}}, H, H);
}

HurstFunction family_h1(double lambda) {
  if (!(lambda > 0.0)) throw InputError("h1: lambda must be > 0, got " + fmt(lambda));
  const double edge = std::exp(lambda);
  return HurstFunction(
      "h1:lambda=" + fmt(lambda), [lambda](double t) { return lambda / std::log(std::abs(t)); },
      [lambda](double t) {
        const double L = std::log(std::abs(t));
        return -lambda / (t * L * L);
      },
      {Interval{-kInf, -edge}, Interval{edge, kInf}}, 0.0, 1.0);
}

HurstFunction family_h2(double lambda) {
  if (!(lambda < 0.0)) throw InputError("h2: lambda must be < 0, got " + fmt(lambda));
  const double edge = std::exp(lambda);
  return HurstFunction(
      "h2:lambda=" + fmt(lambda), [lambda](double t) { return lambda / std::log(std::abs(t)); },
      [lambda](double t) {
        const double L = std::log(std::abs(t));
        return -lambda / (t * L * L);
      },
      {Interval{-edge, 0.0}, Interval{0.0, edge}}, 0.0, 1.0);
}

std::vector<Interval> hc_domain(double c) {
  if (c >= 0.25) return {{1.0 + c, kInf}};
  const double root = std::sqrt(1.0 - 4.0 * c);
  const double t1 = 0.5 * (1.0 - root);
  const double t2 = 0.5 * (1.0 + root);
  if (c <= -2.0) return {{1.0 + c, t1}, {t2, kInf}};
  if (c <= -1.0) return {{t1, 1.0 + c}, {t2, kInf}};
  if (c < 0.0) return {{t1, 0.0}, {0.0, 1.0 + c}, {t2, kInf}};
  return {{t1, t2}, {1.0 + c, kInf}};
}

HurstFunction family_hc(double c) {
  if (!std::isfinite(c)) throw InputError("hc: c must be finite");
  std::vector<Interval> dom = hc_domain(c);
  dom.erase(std::remove_if(dom.begin(), dom.end(), [](const Interval& i) { return !(i.lo < i.hi); }),
            dom.end());
  return HurstFunction(
      "hc:c=" + fmt(c), [c](double t) { return 0.5 * std::log(t - c) / std::log(std::abs(t)); },
      [c](double t) {
        const double L = std::log(std::abs(t));
        return 0.5 * (1.0 / ((t - c) * L) - std::log(t - c) / (t * L * L));
      },
      std::move(dom), 0.0, 1.0);
}

HurstFunction smoothstep_hurst(double Ha, double Hb, double ta, double tb) {
  if (!(Ha > 0.0 && Ha < 1.0 && Hb > 0.0 && Hb < 1.0)) {
    throw InputError("smoothstep: Ha and Hb must lie in (0,1)");
  }
  if (!(ta < tb)) throw InputError("smoothstep: needs ta < tb");
  const double width = tb - ta;
  auto h = [=](double t) {
    if (t <= ta) return Ha;
    if (t >= tb) return Hb;
    const double s = (t - ta) / width;
    return Ha + (Hb - Ha) * s * s * (3.0 - 2.0 * s);
  };
  auto dh = [=](double t) {
    if (t <= ta || t >= tb) return 0.0;
    const double s = (t - ta) / width;
    return (Hb - Ha) * 6.0 * s * (1.0 - s) / width;
  };
  return HurstFunction("smoothstep:" + fmt(Ha) + "," + fmt(Hb) + "," + fmt(ta) + "," + fmt(tb), h, dh,
                       {Interval{-kInf, kInf}}, std::min(Ha, Hb), std::max(Ha, Hb));
}

namespace {

double parse_number(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InputError("cannot parse number '" + std::string(text) + "' in h spec '" + std::string(spec) +
                     "'\n" + kHurstSpecGrammar);
  }
  return v;
}

double parse_keyed(std::string_view body, std::string_view key, std::string_view spec) {
  if (body.size() <= key.size() || body.substr(0, key.size()) != key || body[key.size()] != '=') {
    throw InputError("expected '" + std::string(key) + "=<value>' in h spec '" + std::string(spec) +
                     "'\n" + kHurstSpecGrammar);
  }
  return parse_number(body.substr(key.size() + 1), spec);
}

}  // namespace

HurstFunction parse_hurst_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("h spec '" + std::string(spec) + "' has no family prefix\n" + kHurstSpecGrammar);
  }
  const std::string_view family = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (family == "const") return constant_hurst(parse_keyed(body, "H", spec));
  if (family == "h1") return family_h1(parse_keyed(body, "lambda", spec));
  if (family == "h2") return family_h2(parse_keyed(body, "lambda", spec));
  if (family == "hc") return family_hc(parse_keyed(body, "c", spec));
  if (family == "smoothstep") {
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      v.push_back(parse_number(body.substr(start, comma - start), spec));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (v.size() != 4) {
      throw InputError("smoothstep takes 4 values, got " + std::to_string(v.size()) + "\n" +
                       kHurstSpecGrammar);
    }
    return smoothstep_hurst(v[0], v[1], v[2], v[3]);
  }
  throw InputError("unknown h family '" + std::string(family) + "'\n" + kHurstSpecGrammar);
}

double r_fbm(double H, double t, double s) {
  const double e = 2.0 * H;
  return 0.5 * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

double r_mbm(const HurstFunction& h, double t, double s) {
  const double ht = h(t);
  const double hs = h(s);
  const double hts = 0.5 * (ht + hs);
  const double cm = c_const(hts);
  return cm * cm / (c_const(ht) * c_const(hs)) * r_fbm(hts, t, s);
}

double qv_rate(const HurstFunction& h, double t) {
  if (!(t > 0.0)) throw DomainError("qv_rate: t must be > 0, got " + fmt(t));
  const double H = h(t);
  const double dH = h.derivative(t);
  return 2.0 * std::pow(t, 2.0 * H - 1.0) * (dH * t * std::log(t) + H);
}

double CovarianceMatrix::min_eigenvalue() const {
  if (entries.rows() == 0) return kInf;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CovarianceMatrix gram(const HurstFunction& h, const std::vector<double>& times) {
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("gram: duplicate times");
  }
  for (double t : times) {
    if (t == 0.0) throw InputError("gram: time 0 is not allowed");
    if (!h.in_domain(t)) throw DomainError("gram: t = " + fmt(t) + " outside the domain of " + h.spec());
  }
  const auto n = static_cast<Eigen::Index>(times.size());
  CovarianceMatrix out{times, Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = r_mbm(h, times[static_cast<std::size_t>(i)], times[static_cast<std::size_t>(j)]);
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  return out;
}

}  // namespace mbm
