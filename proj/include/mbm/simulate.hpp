// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbm/hurst.hpp"

namespace mbm {

struct TimeGrid {
  std::vector<double> points;  // strictly increasing

  /// n points from t0 to t1 inclusive.
  [[nodiscard]] static TimeGrid uniform(double t0, double t1, int n);
  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  /// InputError unless strictly increasing; DomainError if a point is outside h's domain.
  void validate(const HurstFunction& h) const;
};

struct SimulationMethod {
  enum class Kind { Cholesky, Chaos };
  Kind kind = Kind::Cholesky;
  int truncation = 0;  // K for chaos

  [[nodiscard]] std::string label() const;  // "cholesky" or "chaos:K"
  [[nodiscard]] static SimulationMethod parse(const std::string& text);
};

using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PathEnsemble {
  TimeGrid grid;
  PathMatrix paths;  // n_paths × grid.size()
  std::uint64_t seed = 0;
  SimulationMethod method;
  std::string h_spec;
  double jitter = 0.0;  // diagonal shift used by the Cholesky factorization

  [[nodiscard]] Eigen::Index n_paths() const noexcept { return paths.rows(); }
  /// Sample covariance with the known zero mean.
  [[nodiscard]] Eigen::MatrixXd sample_covariance() const;
};

/// Lower Cholesky factor, escalating a diagonal jitter through 0, 1e−14, 1e−12, 1e−10 × trace/n.
/// NumericalError names the first leading minor that is not positive definite.
[[nodiscard]] Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& A, double* jitter_used = nullptr);

/// workers = 0 uses the hardware concurrency; results do not depend on it.
[[nodiscard]] PathEnsemble simulate_cholesky(const HurstFunction& h, const TimeGrid& grid, int n_paths,
                                             std::uint64_t seed, int workers = 0);

/// B(t) ≈ Σ_{k<K} a_k(t) ξ_k with one ξ per path shared by all grid points.
[[nodiscard]] PathEnsemble simulate_chaos(const HurstFunction& h, const TimeGrid& grid, int K, int n_paths,
                                          std::uint64_t seed, int workers = 0);

/// CSV: header t,p0,p1,... then one row per grid point, 17 significant digits.
void write_csv(const PathEnsemble& e, std::ostream& os);
void write_json(const PathEnsemble& e, std::ostream& os);
/// Single-polyline plot of the first path; `description` goes into a <desc> element.
void write_svg(const PathEnsemble& e, std::ostream& os, const std::string& description = {});

struct FigureSpec {
  int which;
  std::string h_spec;
  double t0;
  double t1;
};

inline constexpr int kFigurePoints = 2048;
inline constexpr std::uint64_t kFigureSeed = 42;

[[nodiscard]] FigureSpec figure_spec(int which);

/// Simulates one path and writes figure<which>.csv and figure<which>.svg into out_dir.
/// The SVG description records h, interval, point count, seed and jitter.
std::vector<std::filesystem::path> figures(int which, const std::filesystem::path& out_dir);

}  // namespace mbm
