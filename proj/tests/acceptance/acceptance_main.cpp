// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/config.hpp"
#include "driftlab/durations.hpp"
#include "driftlab/experiments.hpp"
#include "driftlab/inference.hpp"
#include "driftlab/kernels.hpp"
#include "driftlab/price.hpp"
#include "oracles.hpp"

using namespace driftlab;

namespace {

constexpr std::uint64_t kSeed = 2026;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 means no runtime budget
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

const LmsdParams kLmsdExp{0.9, SigmaFunction::exponential(), InnovationSpec::exponential()};

ExperimentConfig base_config(std::string id, DurationModel model) {
  ExperimentConfig c;
  c.scenario_id = std::move(id);
  c.model = std::move(model);
  c.master_seed = kSeed;
  return c;
}

Outcome acd_stationary_mean() {
  const AcdParams params{0.2, 0.1, 0.8, InnovationSpec::exponential()};
  double total = 0.0;
  constexpr int seeds = 50;
  constexpr std::size_t n = 1'000'000;
  for (int s = 0; s < seeds; ++s) {
    const auto sample = simulate_acd(params, n, kDefaultAcdBurnin, RandomStream{kSeed, 1}.substream(s));
    total += oracle::mean(sample.durations);
  }
  const double grand = total / seeds;
  return {std::abs(grand - 2.0) <= 0.02, fmt("grand mean %.5f over %d x 1e6 (target 2 +- 0.02)", grand, seeds)};
}

Outcome tail_index_consistency() {
  const double sets[][2] = {{0.45, 0.5}, {0.5, 0.45}, {0.6, 0.3}, {0.55, 0.35}, {0.6, 0.35}};
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 5; ++i) {
    const double a = sets[i][0];
    const double b = sets[i][1];
    const AcdParams params{1.0 - a - b, a, b, InnovationSpec::exponential()};
    const double kappa = acd_tail_index(params, 1e-10);
    const double residual = std::abs(oracle::exp_tail_moment(a, b, kappa) - 1.0);
    const auto sample = simulate_acd(params, 1'000'000, kDefaultAcdBurnin, RandomStream{kSeed, 2}.substream(i));
    const double hill = hill_estimator(sample.durations, 5000).value;
    const bool ok = kappa > 1.0 && kappa < 2.0 && residual <= 1e-8 && std::abs(hill - kappa) <= 0.15;
    pass = pass && ok;
    detail += fmt("%s(%.2f,%.2f) k*=%.4f res=%.1e hill=%.3f", i ? "; " : "", a, b, kappa, residual, hill);
  }
  return {pass, detail};
}

Outcome long_memory_rate() {
  auto c = base_config("acc_lmsd_h09_exp", kLmsdExp);
  c.replicates = 500;
  const auto report = run_rate_experiment(c);
  const double g = report.value("gamma_hat");
  return {std::abs(g - 0.9) <= 0.05 && report.value("gamma_theory") == 0.9,
          fmt("gamma_hat=%.4f (se %.4f), theory %.1f, tolerance 0.05", g, report.row("gamma_hat").std_error,
              report.value("gamma_theory"))};
}

Outcome stable_rate() {
  auto c = base_config("acc_acd_stable", AcdParams{0.05, 0.6, 0.35, InnovationSpec::exponential()});
  c.replicates = 20000;
  c.hill_fraction = 0.02;
  const auto report = run_rate_experiment(c);
  const double kappa = oracle::exp_tail_index(0.6, 0.35);
  const double g = report.value("gamma_hat");
  const double hill = report.value("hill_index", c.n_grid.back());
  const bool pass = std::abs(g - 1.0 / kappa) <= 0.07 && std::abs(hill - kappa) <= 0.2 &&
                    std::abs(report.value("stable_index") - kappa) <= 1e-7;
  return {pass, fmt("kappa*=%.4f gamma_hat=%.4f vs %.4f (+-0.07); hill=%.3f (+-0.2)", kappa, g, 1.0 / kappa, hill)};
}

Outcome dichotomy_switch() {
  auto c = base_config("acc_lmsd_h06_square", LmsdParams{0.6, SigmaFunction::square(), InnovationSpec::exponential()});
  c.replicates = 2000;
  const auto report = run_rate_experiment(c);
  const double g = report.value("gamma_hat");
  const double ks = report.value("ks_distance", c.n_grid.back());
  const double crit = report.value("ks_critical_1pct", c.n_grid.back());
  return {std::abs(g - 0.5) <= 0.04 && ks < crit && report.value("gamma_theory") == 0.5,
          fmt("gamma_hat=%.4f (+-0.04); KS=%.4f vs 1%% critical %.4f", g, ks, crit)};
}

ExperimentConfig poisson_ttest_config() {
  auto c = base_config("acc_poisson_ttest", PoissonParams{1.0});
  c.mu = 0.05;
  c.sigma_e = 0.1;
  c.n_grid = {4096};
  c.replicates = 4000;
  return c;
}

Outcome poisson_size() {
  const auto c = poisson_ttest_config();
  const auto report = run_ttest_experiment(c, null_drift(c));
  const double rate = report.value("rejection_rate", 4096);
  return {rate >= 0.035 && rate <= 0.065, fmt("rejection rate %.4f at n=4096 (band [0.035, 0.065])", rate)};
}

Outcome lmsd_divergence() {
  auto c = base_config("acc_lmsd_ttest", kLmsdExp);
  c.mu = 0.05;
  c.sigma_e = 0.1;
  c.replicates = 2000;
  const auto report = run_ttest_experiment(c, null_drift(c));
  bool increasing = true;
  std::string rates;
  for (std::size_t g = 0; g < c.n_grid.size(); ++g) {
    const double r = report.value("rejection_rate", c.n_grid[g]);
    rates += fmt("%s%.3f", g ? "," : "", r);
    if (g > 0 && !(r > report.value("rejection_rate", c.n_grid[g - 1]))) {
      increasing = false;
    }
  }
  const double slope = report.value("t_slope");
  return {increasing && std::abs(slope - 0.4) <= 0.1,
          fmt("rejection rates [%s]; median|t| slope %.4f (0.4 +- 0.1)", rates.c_str(), slope)};
}

Outcome lmsd_size_without_drift() {
  auto c = base_config("acc_lmsd_zero_drift", kLmsdExp);
  c.mu = 0.0;
  c.sigma_e = 0.1;
  c.n_grid = {1024, 4096, 16384};
  c.replicates = 4000;
  const auto report = run_ttest_experiment(c, 0.0);
  const double rate = report.value("rejection_rate", 16384);
  return {rate >= 0.035 && rate <= 0.065, fmt("rejection rate %.4f at n=16384 (band [0.035, 0.065])", rate)};
}

Outcome s2_limit() {
  auto c = poisson_ttest_config();
  c.scenario_id = "acc_poisson_s2";
  c.n_grid = {100000};
  c.replicates = 200;
  const auto report = run_s2_experiment(c);
  const double m = report.value("s2_mean", 100000);
  return {std::abs(m - 0.0125) <= 0.001 && std::abs(report.value("s2_target") - 0.0125) < 1e-15,
          fmt("mean s2 %.6f at n=1e5 over 200 paths (0.0125 +- 0.001)", m)};
}

// Var(sum_{k<=n} eta_k) across seeds for the leverage noise of an LMSD(0.9) path.
std::vector<double> leverage_variances(const MicrostructureSpec& micro, const std::vector<std::size_t>& grid,
                                       std::size_t seeds, std::uint64_t stream_id) {
  std::vector<std::vector<double>> sums(grid.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    const RandomStream stream = RandomStream{kSeed, stream_id}.substream(s);
    const auto lmsd = simulate_lmsd(kLmsdExp, grid.back(), stream.substream(0), micro.presample());
    const auto ticks = build_ticks(lmsd.sample, 0.05, 0.1, micro, stream.substream(1),
                                   std::span<const double>(lmsd.gaussian_path));
    double running = 0.0;
    std::size_t g = 0;
    for (std::size_t k = 0; k < grid.back(); ++k) {
      running += ticks.noise()[k];
      if (k + 1 == grid[g]) {
        sums[g++].push_back(running);
      }
    }
  }
  std::vector<double> out;
  for (const auto& s : sums) {
    out.push_back(oracle::variance(s));
  }
  return out;
}

Outcome leverage_negligibility() {
  std::vector<std::size_t> wide;
  for (std::size_t n = 16; n <= 16384; n *= 2) {
    wide.push_back(n);
  }
  const auto unit = leverage_variances(MicrostructureSpec::fractional_leverage(1.0), wide, 200, 10);
  const double max_var = *std::max_element(unit.begin(), unit.end());

  std::vector<std::size_t> grid;
  for (std::size_t n = 16; n <= 4096; n *= 2) {
    grid.push_back(n);
  }
  const auto frac = leverage_variances(MicrostructureSpec::fractional_leverage(0.7, 4096), grid, 200, 11);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    x.push_back(std::log(static_cast<double>(grid[g])));
    y.push_back(std::log(frac[g]));
  }
  const double slope = ols_slope(x, y);
  return {max_var <= 4.0 && std::abs(slope - 0.4) <= 0.1,
          fmt("delta=1 max Var %.3f (<= 4); delta=0.7 slope %.4f over n=2^4..2^12 (0.4 +- 0.1)", max_var, slope)};
}

Outcome fgn_exactness() {
  constexpr std::size_t n = 1 << 14;
  constexpr std::size_t series = 200;
  constexpr std::size_t max_lag = 50;
  double worst = 0.0;
  std::string detail;
  for (double h : {0.6, 0.75, 0.9}) {
    std::vector<double> pooled(max_lag + 1, 0.0);
    for (std::size_t s = 0; s < series; ++s) {
      const auto y = sample_fgn({h, n}, RandomStream{kSeed, 12}.substream(static_cast<std::uint64_t>(h * 100) * 1000 + s));
      for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) {
          acc += y[t] * y[t + lag];
        }
        pooled[lag] += acc / static_cast<double>(n - lag) / series;
      }
    }
    double dev = 0.0;
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
      dev = std::max(dev, std::abs(pooled[lag] - oracle::fgn_acov(h, static_cast<double>(lag))));
    }
    worst = std::max(worst, dev);
    detail += fmt("%sH=%.2f max dev %.4f", detail.empty() ? "" : "; ", h, dev);
  }
  return {worst <= 0.02, detail + " (tolerance 0.02)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> run_all_kinds(const std::filesystem::path& dir, std::size_t threads) {
  std::filesystem::remove_all(dir);
  std::vector<std::string> files;
  auto rate = base_config("det_rate", AcdParams{0.05, 0.6, 0.35, InnovationSpec::exponential()});
  rate.n_grid = {256, 512, 1024, 2048};
  rate.replicates = 300;
  rate.threads = threads;
  write_run_outputs(run_rate_experiment(rate), dir);

  auto lmsd = base_config("det_ttest", kLmsdExp);
  lmsd.mu = 0.05;
  lmsd.sigma_e = 0.1;
  lmsd.micro = MicrostructureSpec::fractional_leverage(1.0);
  lmsd.n_grid = {256, 1024};
  lmsd.replicates = 200;
  lmsd.threads = threads;
  write_run_outputs(run_ttest_experiment(lmsd, null_drift(lmsd)), dir);
  lmsd.scenario_id = "det_s2";
  write_run_outputs(run_s2_experiment(lmsd), dir);
  lmsd.scenario_id = "det_classify";
  write_run_outputs(run_classify(lmsd), dir);

  lmsd.scenario_id = "det_sim";
  const auto sim = run_simulate(lmsd);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "ticks_det_sim.csv", std::ios::binary);
    write_ticks_csv(out, sim.path.ticks);
    std::ofstream ret(dir / "returns_det_sim.csv", std::ios::binary);
    write_returns_csv(ret, sim.path.returns);
  }
  write_run_outputs(sim.report, dir, {dir / "ticks_det_sim.csv", dir / "returns_det_sim.csv"});

  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") {
      files.push_back(entry.path().filename().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "driftlab_acceptance_determinism";
  const auto first = run_all_kinds(base / "a", 1);
  const auto second = run_all_kinds(base / "b", 1);
  const auto threaded = run_all_kinds(base / "c", 3);
  bool pass = first == second && first == threaded && first.size() == 7;
  std::size_t identical = 0;
  for (const auto& f : first) {
    const auto a = slurp(base / "a" / f);
    const bool same = !a.empty() && a == slurp(base / "b" / f) && a == slurp(base / "c" / f);
    identical += same;
    pass = pass && same;
  }
  std::filesystem::remove_all(base);
  return {pass, fmt("%zu of %zu CSVs byte-identical across two runs and a 3-thread run", identical, first.size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "ACD stationarity mean", 30, acd_stationary_mean},
      {2, "tail-index solver self-consistency", 120, tail_index_consistency},
      {3, "rate, long-memory branch", 300, long_memory_rate},
      {4, "rate, stable branch", 300, stable_rate},
      {5, "dichotomy switch", 300, dichotomy_switch},
      {6, "t-test size, Poisson", 180, poisson_size},
      {7, "t-test divergence, LMSD", 300, lmsd_divergence},
      {8, "t-test size without drift, LMSD", 180, lmsd_size_without_drift},
      {9, "s2 limit, Poisson", 60, s2_limit},
      {10, "leverage negligibility", 120, leverage_negligibility},
      {11, "fGn exactness", 60, fgn_exactness},
      {12, "determinism", 0, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::atoi(argv[i]));
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_seconds <= 0.0 || secs <= c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    failures += !pass;
    std::string timing = c.budget_seconds > 0.0 ? fmt("%.1f s of %.0f s budget", secs, c.budget_seconds)
                                                : fmt("%.1f s", secs);
    std::printf("%s criterion %2d (%s): %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
