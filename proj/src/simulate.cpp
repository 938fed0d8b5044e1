// SPDX-License-Identifier: MIT
#include "mbm/simulate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mbm/chaos.hpp"
#include "mbm/errors.hpp"
#include "mbm/rng.hpp"
#include "mbm/specfun.hpp"

namespace mbm {
namespace {

constexpr double kJitterLadder[] = {0.0, 1e-14, 1e-12, 1e-10};

int resolve_workers(int workers, Eigen::Index n_paths) {
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::clamp<Eigen::Index>(w, 1, std::max<Eigen::Index>(1, n_paths)));
}

/// Row p holds `cols` standard normals from stream p, filled by `workers` threads over disjoint row ranges.
PathMatrix standard_normals(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, int workers) {
  PathMatrix z(rows, cols);
  if (rows == 0 || cols == 0) return z;
  const int w = resolve_workers(workers, rows);
  auto fill = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index p = begin; p < end; ++p) {
      NormalStream stream(seed, static_cast<std::uint64_t>(p));
      for (Eigen::Index j = 0; j < cols; ++j) z(p, j) = stream.normal();
    }
  };
  if (w == 1) {
    fill(0, rows);
    return z;
  }
  std::vector<std::thread> pool;
  const Eigen::Index chunk = (rows + w - 1) / w;
  for (Eigen::Index begin = 0; begin < rows; begin += chunk) {
    pool.emplace_back(fill, begin, std::min(rows, begin + chunk));
  }
  for (auto& t : pool) t.join();
  return z;
}

/// Index of the first leading minor whose pivot is not positive, or −1.
Eigen::Index failing_minor(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) return j;
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      L(i, j) = (A(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  return -1;
}

void check_grid(const TimeGrid& grid) {
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (!std::isfinite(grid.points[i])) throw InputError("time grid contains a non-finite point");
    if (i > 0 && !(grid.points[i] > grid.points[i - 1])) {
      throw InputError("time grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

TimeGrid TimeGrid::uniform(double t0, double t1, int n) {
  if (n < 1) throw InputError("time grid needs at least one point");
  if (!(t1 > t0) && n > 1) throw InputError("time grid needs t1 > t0");
  TimeGrid g;
  g.points.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    g.points[0] = t0;
    return g;
  }
  const double step = (t1 - t0) / (n - 1);
  for (int i = 0; i < n; ++i) g.points[static_cast<std::size_t>(i)] = t0 + step * i;
  g.points.back() = t1;
  return g;
}

void TimeGrid::validate(const HurstFunction& h) const {
  check_grid(*this);
  for (double t : points) {
    if (t == 0.0) throw DomainError("time grid contains t = 0, where the process is identically 0");
    if (!h.in_domain(t)) throw DomainError("time " + fmt17(t) + " outside the domain of " + h.spec());
  }
}

std::string SimulationMethod::label() const {
  return kind == Kind::Cholesky ? std::string("cholesky") : "chaos:" + std::to_string(truncation);
}

SimulationMethod SimulationMethod::parse(const std::string& text) {
  if (text == "cholesky") return {};
  constexpr std::string_view prefix = "chaos:";
  if (text.rfind(prefix, 0) == 0) {
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    int K = -1;
    auto [ptr, ec] = std::from_chars(first, last, K);
    if (ec == std::errc() && ptr == last && K >= 0 && K <= kDefaultMaxOrder) return {Kind::Chaos, K};
  }
  throw InputError("unknown method '" + text + "'; expected cholesky or chaos:K with 0 <= K <= " +
                   std::to_string(kDefaultMaxOrder));
}

Eigen::MatrixXd PathEnsemble::sample_covariance() const {
  const Eigen::Index n = paths.cols();
  if (paths.rows() == 0) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd c = paths.transpose() * paths;
  return c / static_cast<double>(paths.rows());
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& A, double* jitter_used) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw InputError("Cholesky needs a square matrix");
  if (n == 0) return A;
  const double scale = A.trace() / static_cast<double>(n);
  for (double rung : kJitterLadder) {
    const double jitter = rung * scale;
    Eigen::MatrixXd shifted = A;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      if (jitter_used) *jitter_used = jitter;
      return llt.matrixL();
    }
  }
  Eigen::MatrixXd shifted = A;
  shifted.diagonal().array() += kJitterLadder[3] * scale;
  const Eigen::Index bad = failing_minor(shifted);
  throw NumericalError("Cholesky factorization failed after jitter " + fmt17(kJitterLadder[3] * scale) +
                       ": leading minor of order " + std::to_string(bad + 1) + " of " + std::to_string(n) +
                       " is not positive definite");
}

PathEnsemble simulate_cholesky(const HurstFunction& h, const TimeGrid& grid, int n_paths, std::uint64_t seed,
                               int workers) {
  if (n_paths < 0) throw InputError("number of paths must be non-negative");
  grid.validate(h);
  PathEnsemble e;
  e.grid = grid;
  e.seed = seed;
  e.h_spec = h.spec();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::MatrixXd L = cholesky_with_jitter(gram(h, grid.points).entries, &e.jitter);
  const PathMatrix z = standard_normals(n_paths, n, seed, workers);
  e.paths = z * L.transpose();
  return e;
}

PathEnsemble simulate_chaos(const HurstFunction& h, const TimeGrid& grid, int K, int n_paths, std::uint64_t seed,
                            int workers) {
  if (n_paths < 0) throw InputError("number of paths must be non-negative");
  if (K < 0 || K > kDefaultMaxOrder) {
    throw DomainError("chaos truncation K = " + std::to_string(K) + " outside [0, " +
                      std::to_string(kDefaultMaxOrder) + "]");
  }
  grid.validate(h);
  PathEnsemble e;
  e.grid = grid;
  e.seed = seed;
  e.method = {SimulationMethod::Kind::Chaos, K};
  e.h_spec = h.spec();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd A(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto a = mbm_coeffs(h, grid.points[static_cast<std::size_t>(i)], K).coeffs;
    for (Eigen::Index k = 0; k < K; ++k) A(i, k) = a[static_cast<std::size_t>(k)];
  }
  const PathMatrix xi = standard_normals(n_paths, K, seed, workers);
  e.paths = PathMatrix::Zero(n_paths, n);
  if (K > 0) e.paths = xi * A.transpose();
  return e;
}

void write_csv(const PathEnsemble& e, std::ostream& os) {
  os << 't';
  for (Eigen::Index p = 0; p < e.paths.rows(); ++p) os << ",p" << p;
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    os << e.grid.points[i];
    for (Eigen::Index p = 0; p < e.paths.rows(); ++p) os << ',' << e.paths(p, static_cast<Eigen::Index>(i));
    os << '\n';
  }
}

void write_json(const PathEnsemble& e, std::ostream& os) {
  nlohmann::json j;
  j["h"] = e.h_spec;
  j["method"] = e.method.label();
  j["seed"] = e.seed;
  j["jitter"] = e.jitter;
  j["t"] = e.grid.points;
  auto paths = nlohmann::json::array();
  for (Eigen::Index p = 0; p < e.paths.rows(); ++p) {
    std::vector<double> row(e.paths.row(p).begin(), e.paths.row(p).end());
    paths.push_back(row);
  }
  j["paths"] = std::move(paths);
  os << j.dump(1) << '\n';
}

void write_svg(const PathEnsemble& e, std::ostream& os, const std::string& description) {
  constexpr double W = 800, Hgt = 400, ml = 70, mr = 20, mt = 30, mb = 50;
  const auto& t = e.grid.points;
  const double t0 = t.empty() ? 0.0 : t.front();
  const double t1 = t.empty() ? 1.0 : t.back();
  double y0 = 0.0, y1 = 0.0;
  if (e.paths.rows() > 0 && e.paths.cols() > 0) {
    y0 = e.paths.row(0).minCoeff();
    y1 = e.paths.row(0).maxCoeff();
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double tspan = t1 > t0 ? t1 - t0 : 1.0;
  auto sx = [&](double v) { return ml + (v - t0) / tspan * (W - ml - mr); };
  auto sy = [&](double v) { return Hgt - mb - (v - y0) / (y1 - y0) * (Hgt - mt - mb); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hgt << "\" viewBox=\"0 0 "
     << W << ' ' << Hgt << "\">\n";
  if (!description.empty()) os << "<desc>" << description << "</desc>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << Hgt - mb << "\" x2=\"" << W - mr << "\" y2=\"" << Hgt - mb
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << Hgt - mb
     << "\" stroke=\"black\"/>\n";
  os << std::setprecision(6);
  os << "<text x=\"" << ml << "\" y=\"" << Hgt - mb + 18 << "\" font-size=\"12\">" << t0 << "</text>\n";
  os << "<text x=\"" << W - mr << "\" y=\"" << Hgt - mb + 18 << "\" font-size=\"12\" text-anchor=\"end\">" << t1
     << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << Hgt - mb << "\" font-size=\"12\" text-anchor=\"end\">" << y0
     << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10 << "\" font-size=\"12\" text-anchor=\"end\">" << y1
     << "</text>\n";
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << Hgt - 12
     << "\" font-size=\"14\" text-anchor=\"middle\">t  (h = " << e.h_spec << ")</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + Hgt - mb) / 2 << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (mt + Hgt - mb) / 2 << ")\">B(t), h = " << e.h_spec << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
  os << std::setprecision(8);
  if (e.paths.rows() > 0) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) os << ' ';
      os << sx(t[i]) << ',' << sy(e.paths(0, static_cast<Eigen::Index>(i)));
    }
  }
  os << "\"/>\n</svg>\n";
}

FigureSpec figure_spec(int which) {
  constexpr double d = 1e-3;
  switch (which) {
    case 1: return {1, "h1:lambda=1", std::numbers::e + d, 100.0};
    case 2: return {2, "h2:lambda=-1", d, 1.0 / std::numbers::e - d};
    case 3: return {3, "hc:c=1", 2.0 + d, 5.0};
    case 4: return {4, "hc:c=-1", (1.0 - std::sqrt(5.0)) / 2.0 + d, -d};
    default: throw InputError("figure index must be 1, 2, 3 or 4 (got " + std::to_string(which) + ")");
  }
}

std::vector<std::filesystem::path> figures(int which, const std::filesystem::path& out_dir) {
  const FigureSpec spec = figure_spec(which);
  const HurstFunction h = parse_hurst_spec(spec.h_spec);
  const PathEnsemble e =
      simulate_cholesky(h, TimeGrid::uniform(spec.t0, spec.t1, kFigurePoints), 1, kFigureSeed);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::string stem = "figure" + std::to_string(which);
  std::vector<std::filesystem::path> written{out_dir / (stem + ".csv"), out_dir / (stem + ".svg")};
  for (std::size_t i = 0; i < written.size(); ++i) {
    std::ofstream f(written[i], std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + written[i].string());
    if (i == 0) {
      write_csv(e, f);
    } else {
      write_svg(e, f,
                "figure=" + std::to_string(which) + " h=" + spec.h_spec + " t0=" + fmt17(spec.t0) +
                    " t1=" + fmt17(spec.t1) + " n=" + std::to_string(kFigurePoints) +
                    " seed=" + std::to_string(kFigureSeed) + " method=cholesky jitter=" + fmt17(e.jitter));
    }
    if (!f) throw std::ios_base::failure("error writing " + written[i].string());
  }
  return written;
}

}  // namespace mbm
