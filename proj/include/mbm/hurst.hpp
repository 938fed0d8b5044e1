// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

/// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo;
  double hi;
  [[nodiscard]] bool contains(double t) const noexcept { return t > lo && t < hi; }
};

/// A C¹ Hurst function h with analytic derivative, defined on a union of open intervals.
/// Immutable once built.
class HurstFunction {
 public:
  using Fn = std::function<double(double)>;

  HurstFunction(std::string spec, Fn h, Fn dh, std::vector<Interval> domain, double lower,
                double upper);

  /// h(t); DomainError outside the domain (endpoints included).
  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] double derivative(double t) const;
  [[nodiscard]] bool in_domain(double t) const noexcept;

  [[nodiscard]] const std::vector<Interval>& domain() const noexcept { return domain_; }
  /// Known range bounds on the whole domain. Families that approach 0 or 1 report 0 / 1.
  [[nodiscard]] double lower_bound() const noexcept { return lower_; }
  [[nodiscard]] double upper_bound() const noexcept { return upper_; }
  [[nodiscard]] const std::string& spec() const noexcept { return spec_; }

  /// Sampled min/max of h over [a,b] (points outside the domain are skipped).
  [[nodiscard]] std::pair<double, double> range_on(double a, double b, int samples = 2049) const;

  /// The same function with domain cut down to (a,b) and bounds sampled there.
  [[nodiscard]] HurstFunction restricted(double a, double b) const;

 private:
  void check(double t) const;
  std::string spec_;
  Fn h_;
  Fn dh_;
  std::vector<Interval> domain_;
  double lower_;
  double upper_;
};

[[nodiscard]] HurstFunction constant_hurst(double H);

/// h(t) = λ/ln|t| on |t| > e^λ, λ > 0.
[[nodiscard]] HurstFunction family_h1(double lambda);

/// h(t) = λ/ln|t| on 0 < |t| < e^λ, λ < 0.
[[nodiscard]] HurstFunction family_h2(double lambda);

/// h(t) = ½ ln(t−c)/ln|t| on the interval set where it lies in (0,1).
[[nodiscard]] HurstFunction family_hc(double c);
[[nodiscard]] std::vector<Interval> hc_domain(double c);

/// H_a for t ≤ t_a, H_b for t ≥ t_b, cubic smoothstep in between.
[[nodiscard]] HurstFunction smoothstep_hurst(double Ha, double Hb, double ta, double tb);

/// Parses `const:H=0.5`, `h1:lambda=1`, `h2:lambda=-1`, `hc:c=1`, `smoothstep:0.2,0.8,1,5`.
[[nodiscard]] HurstFunction parse_hurst_spec(std::string_view spec);
extern const char* const kHurstSpecGrammar;

/// ½(|t|^{2H} + |s|^{2H} − |t−s|^{2H}).
[[nodiscard]] double r_fbm(double H, double t, double s);

/// Normalized mBm covariance c²_{h_ts}/(c_{h(t)} c_{h(s)}) · r_fbm(h_ts, t, s), h_ts = (h(t)+h(s))/2.
[[nodiscard]] double r_mbm(const HurstFunction& h, double t, double s);

/// d/dt[t^{2h(t)}] = 2 t^{2h(t)−1}(h'(t) t ln t + h(t)), t > 0.
[[nodiscard]] double qv_rate(const HurstFunction& h, double t);

struct CovarianceMatrix {
  std::vector<double> times;
  Eigen::MatrixXd entries;
  [[nodiscard]] double min_eigenvalue() const;
};

/// Matrix of r_mbm over distinct nonzero times, in the order given.
[[nodiscard]] CovarianceMatrix gram(const HurstFunction& h, const std::vector<double>& times);

}  // namespace mbm
