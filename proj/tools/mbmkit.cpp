// SPDX-License-Identifier: MIT
// mbmkit: simulate, verify, transform, cov, figures.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mbm/errors.hpp"
#include "mbm/hurst.hpp"
#include "mbm/mh_op.hpp"
#include "mbm/simulate.hpp"
#include "mbm/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MBMKIT_SEED")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw mbm::InputError(std::string("MBMKIT_SEED is not an unsigned integer: '") + env + "'");
  }
  return 42;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + p.string());
  f << text;
  if (!f) throw std::ios_base::failure("error writing " + p.string());
}

struct SimulateArgs {
  std::string h;
  double t0 = 0.0;
  double t1 = 1.0;
  int n = 100;
  int paths = 1;
  std::uint64_t seed = 42;
  std::string method = "cholesky";
  std::string out;
  std::string format = "csv";
  int workers = 0;
};

int run_simulate(const SimulateArgs& a) {
  const auto h = mbm::parse_hurst_spec(a.h);
  const auto method = mbm::SimulationMethod::parse(a.method);
  const auto grid = mbm::TimeGrid::uniform(a.t0, a.t1, a.n);
  const auto e = method.kind == mbm::SimulationMethod::Kind::Cholesky
                     ? mbm::simulate_cholesky(h, grid, a.paths, a.seed, a.workers)
                     : mbm::simulate_chaos(h, grid, method.truncation, a.paths, a.seed, a.workers);
  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  std::ostringstream body;
  if (a.format == "csv") {
    mbm::write_csv(e, body);
  } else {
    mbm::write_json(e, body);
  }
  const auto data = dir / ("paths." + a.format);
  write_file(data, body.str());
  nlohmann::json meta{{"subcommand", "simulate"}, {"h", h.spec()},      {"t0", a.t0},
                      {"t1", a.t1},               {"n", a.n},           {"paths", a.paths},
                      {"seed", a.seed},           {"method", method.label()}, {"format", a.format},
                      {"jitter", e.jitter},       {"rng", "philox4x32-10, inverse-CDF normals"},
                      {"output", data.filename().string()}};
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
  std::cout << "wrote " << data.string() << " and " << (dir / "metadata.json").string() << '\n';
  return kExitOk;
}

int run_verify(const std::string& suite, const std::string& json_path, std::uint64_t seed, int draws) {
  mbm::SuiteOptions opts;
  opts.seed = seed;
  opts.mc_draws = draws;
  auto reports = mbm::run_suite(suite, opts);
  bool ok = true;
  for (auto& r : reports) {
    r.meta["run"] = {{"subcommand", "verify"}, {"suite", suite}, {"seed", seed}, {"draws", draws}};
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  lhs=" << std::setprecision(12) << r.lhs
              << " rhs=" << r.rhs << " abs_err=" << std::setprecision(3) << r.abs_err << " tol=" << r.tolerance
              << '\n';
  }
  if (!json_path.empty()) write_file(json_path, mbm::to_json(reports).dump(2) + "\n");
  std::cout << reports.size() << " reports, " << (ok ? "all passed" : "some failed") << '\n';
  return ok ? kExitOk : kExitFailed;
}

int run_transform(const std::string& kind, double H, double a, double b, int k, const std::vector<double>& xs) {
  std::cout << "# transform " << kind << " H=" << std::setprecision(17) << H;
  if (kind == "indicator") {
    std::cout << " a=" << a << " b=" << b;
  } else {
    std::cout << " k=" << k;
  }
  std::cout << " xs=" << join(xs) << "\nx,value\n";
  for (double x : xs) {
    const double v = kind == "indicator" ? mbm::mh_indicator(H, a, b, x)
                                         : mbm::mh_schwartz(H, mbm::TestFunction::basis(k), x);
    std::cout << x << ',' << v << '\n';
  }
  return kExitOk;
}

int run_cov(const std::string& spec, const std::vector<double>& times) {
  const auto h = mbm::parse_hurst_spec(spec);
  const auto g = mbm::gram(h, times);
  std::cout << "# cov h=" << h.spec() << " times=" << join(times) << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < g.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.entries.cols(); ++j) std::cout << (j ? "," : "") << g.entries(i, j);
    std::cout << '\n';
  }
  return kExitOk;
}

int run_figures(const std::string& which, const std::string& out) {
  std::vector<int> list;
  if (which == "all") {
    list = {1, 2, 3, 4};
  } else {
    list = {std::stoi(which)};
  }
  for (int w : list) {
    for (const auto& p : mbm::figures(w, out)) std::cout << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

int usage_error(const std::string& message) {
  std::cerr << "usage error: " << message << '\n';
  if (message.find(mbm::kHurstSpecGrammar) == std::string::npos) std::cerr << mbm::kHurstSpecGrammar;
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mbmkit: multifractional Brownian motion toolkit"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  std::uint64_t seed = 42;
  try {
    seed = default_seed();
  } catch (const mbm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  SimulateArgs sim;
  sim.seed = seed;
  auto* simulate = app.add_subcommand("simulate", "simulate mBm paths on a uniform grid");
  simulate->add_option("--h", sim.h, "Hurst function spec")->required();
  simulate->add_option("--t0", sim.t0, "first grid point")->required();
  simulate->add_option("--t1", sim.t1, "last grid point")->required();
  simulate->add_option("--n", sim.n, "number of grid points")->check(CLI::PositiveNumber);
  simulate->add_option("--paths", sim.paths, "number of paths")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed (default 42 or MBMKIT_SEED)");
  simulate->add_option("--method", sim.method, "cholesky or chaos:K");
  simulate->add_option("--out", sim.out, "output directory")->required();
  simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--workers", sim.workers, "threads (0 = all cores); output does not depend on it");

  std::string suite;
  std::string json_path;
  std::uint64_t verify_seed = seed;
  int draws = 1'000'000;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite, "ito|tanaka|wick|geometric|sfact|isometry|gram|all")
      ->required()
      ->check(CLI::IsMember(mbm::suite_names()));
  verify->add_option("--json", json_path, "write the JSON array of reports here");
  verify->add_option("--seed", verify_seed, "Monte Carlo seed (default 42 or MBMKIT_SEED)");
  verify->add_option("--draws", draws, "Monte Carlo draws")->check(CLI::Range(2, 100'000'000));

  std::string kind;
  double H = 0.5, a = 0.0, b = 1.0;
  int k = 0;
  std::vector<double> xs;
  auto* transform = app.add_subcommand("transform", "evaluate M_H of an indicator or a Hermite function");
  transform->add_option("kind", kind, "indicator or hermite")->required()->check(CLI::IsMember({"indicator", "hermite"}));
  transform->add_option("--H", H, "Hurst index in (0,1)")->required()->check(CLI::Range(0.0, 1.0));
  transform->add_option("--a", a, "indicator left end");
  transform->add_option("--b", b, "indicator right end");
  transform->add_option("--k", k, "Hermite order")->check(CLI::Range(0, 512));
  transform->add_option("--xs", xs, "comma-separated evaluation points")->required()->delimiter(',');

  std::string cov_spec;
  std::vector<double> times;
  auto* cov = app.add_subcommand("cov", "print the mBm covariance matrix");
  cov->add_option("--h", cov_spec, "Hurst function spec")->required();
  cov->add_option("--times", times, "comma-separated times")->required()->delimiter(',');

  std::string which = "all";
  std::string fig_out = "figures";
  auto* figs = app.add_subcommand("figures", "reproduce the four single-path figures (seed 42, 2048 points)");
  figs->add_option("--which", which, "1, 2, 3, 4 or all")->check(CLI::IsMember({"1", "2", "3", "4", "all"}));
  figs->add_option("--out", fig_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (verify->parsed()) return run_verify(suite, json_path, verify_seed, draws);
    if (transform->parsed()) return run_transform(kind, H, a, b, k, xs);
    if (cov->parsed()) return run_cov(cov_spec, times);
    if (figs->parsed()) return run_figures(which, fig_out);
  } catch (const mbm::InputError& e) {
    return usage_error(e.what());
  } catch (const mbm::DomainError& e) {
    return usage_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
