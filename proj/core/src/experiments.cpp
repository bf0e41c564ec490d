#include "driftlab/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/inference.hpp"
#include "driftlab/kernels.hpp"
#include "driftlab/parallel.hpp"
#include "json.hpp"

#ifndef DRIFTLAB_VERSION
#define DRIFTLAB_VERSION "unknown"
#endif

namespace driftlab {

namespace {

constexpr double kNoError = std::numeric_limits<double>::quiet_NaN();
constexpr double kCritical = 1.96;
constexpr std::size_t kBootstrapDraws = 200;

using Clock = std::chrono::steady_clock;

ExperimentReport start_report(const ExperimentConfig& config, std::string kind) {
  ExperimentReport report;
  report.scenario_id = config.scenario_id;
  report.master_seed = config.master_seed;
  report.kind = std::move(kind);
  report.config_json = config_to_json(config);
  return report;
}

void finish(ExperimentReport& report, Clock::time_point started) {
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
}

RandomStream root_stream(const ExperimentConfig& config) {
  return RandomStream{config.master_seed, 0};
}

double sample_sd(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) {
    return kNoError;
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / (n - 1.0));
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Replicate-by-grid matrix of a per-path statistic, row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  [[nodiscard]] std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      out[r] = data[r * cols + c];
    }
    return out;
  }
};

std::vector<double> abs_values(std::vector<double> v) {
  for (auto& x : v) {
    x = std::abs(x);
  }
  return v;
}

double log_log_slope(std::span<const std::size_t> n_grid, std::span<const double> medians) {
  std::vector<double> x(n_grid.size());
  std::vector<double> y(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    if (!(medians[g] > 0.0)) {
      throw DegenerateSampleError("log-log slope: median is zero");
    }
    x[g] = std::log(static_cast<double>(n_grid[g]));
    y[g] = std::log(medians[g]);
  }
  return ols_slope(x, y);
}

/// Bootstrap over replicates of the per-column medians of |m| and of their
/// log-log slope. Returns the per-column standard errors followed by the
/// slope's (the latter only when there are at least two columns).
std::vector<double> bootstrap_medians(const Matrix& m, std::span<const std::size_t> n_grid,
                                      const RandomStream& stream) {
  Rng rng(stream);
  const bool with_slope = m.cols >= 2;
  std::vector<std::vector<double>> draws(m.cols + (with_slope ? 1 : 0));
  std::vector<std::size_t> pick(m.rows);
  std::vector<double> col(m.rows);
  std::vector<double> medians(m.cols);
  for (std::size_t b = 0; b < kBootstrapDraws; ++b) {
    for (auto& idx : pick) {
      idx = static_cast<std::size_t>(rng.below(m.rows));
    }
    for (std::size_t c = 0; c < m.cols; ++c) {
      for (std::size_t r = 0; r < m.rows; ++r) {
        col[r] = std::abs(m.at(pick[r], c));
      }
      medians[c] = median(col);
      draws[c].push_back(medians[c]);
    }
    if (with_slope) {
      draws.back().push_back(log_log_slope(n_grid, medians));
    }
  }
  std::vector<double> errors;
  errors.reserve(draws.size());
  for (const auto& d : draws) {
    errors.push_back(sample_sd(d));
  }
  return errors;
}

std::size_t max_n(const ExperimentConfig& config) { return config.n_grid.back(); }

void add_classification(ExperimentReport& report, const TheoreticalLimit& limit) {
  report.rows.push_back({std::nullopt, "gamma_theory", limit.gamma, kNoError});
  report.rows.push_back({std::nullopt, "limit_kind", static_cast<double>(limit.family.kind), kNoError});
  switch (limit.family.kind) {
    case LimitKind::fbm_increment:
    case LimitKind::hermite:
      report.rows.push_back({std::nullopt, "hermite_rank", static_cast<double>(limit.family.order), kNoError});
      report.rows.push_back({std::nullopt, "hurst", limit.family.hurst, kNoError});
      break;
    case LimitKind::stable:
      report.rows.push_back({std::nullopt, "stable_index", limit.family.index, kNoError});
      break;
    case LimitKind::gaussian:
      break;
  }
}

double interquartile_range(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
  };
  return quantile(0.75) - quantile(0.25);
}

}  // namespace

std::string library_version() { return DRIFTLAB_VERSION; }

const ReportRow& ExperimentReport::row(const std::string& metric, std::optional<std::size_t> n) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.n == n) {
      return r;
    }
  }
  throw InvalidArgument("report " + scenario_id + " has no row '" + metric + "'" +
                        (n ? " at n=" + std::to_string(*n) : std::string()));
}

bool ExperimentReport::has(const std::string& metric, std::optional<std::size_t> n) const {
  return std::any_of(rows.begin(), rows.end(),
                     [&](const ReportRow& r) { return r.metric == metric && r.n == n; });
}

double null_drift(const ExperimentConfig& config) {
  return config.mu * config.spacing / stationary_mean(config.model);
}

CalendarPath simulate_calendar_path(const ExperimentConfig& config, std::size_t count,
                                    const RandomStream& stream) {
  if (count == 0) {
    throw InvalidArgument("simulate_calendar_path: count must be positive");
  }
  const double horizon = static_cast<double>(count) * config.spacing;
  const double rate = 1.0 / stationary_mean(config.model);
  auto events = static_cast<std::size_t>(std::ceil(1.25 * rate * horizon)) + 64;
  const auto* lmsd = std::get_if<LmsdParams>(&config.model);
  const bool leverage = config.micro.kind == MicrostructureKind::fractional_leverage;
  if (leverage && lmsd == nullptr) {
    throw InvalidArgument("fractional_leverage noise needs an LMSD duration model");
  }

  for (int attempt = 0; attempt < 40; ++attempt) {
    std::optional<TickSeries> ticks;
    if (leverage) {
      const LmsdSample sample = simulate_lmsd(*lmsd, events, stream.substream(0), config.micro.presample());
      ticks.emplace(build_ticks(sample.sample, config.mu, config.sigma_e, config.micro,
                                stream.substream(1), std::span<const double>(sample.gaussian_path)));
    } else {
      const DurationSample sample = simulate_durations(config.model, events, stream.substream(0), config.acd_burnin);
      ticks.emplace(build_ticks(sample, config.mu, config.sigma_e, config.micro, stream.substream(1)));
    }
    if (ticks->last_event_time() >= horizon) {
      auto returns = calendar_returns(*ticks, config.spacing, count);
      return CalendarPath{std::move(*ticks), std::move(returns)};
    }
    events *= 2;
  }
  throw NumericalError("simulate_calendar_path: durations never covered the calendar horizon");
}

ExperimentReport run_classify(const ExperimentConfig& config) {
  const auto started = Clock::now();
  auto report = start_report(config, "classify");
  add_classification(report, classify_limit(config.model));
  finish(report, started);
  return report;
}

SimulationResult run_simulate(const ExperimentConfig& config) {
  const auto started = Clock::now();
  auto report = start_report(config, "simulate");
  CalendarPath path = simulate_calendar_path(config, max_n(config), root_stream(config));
  const std::size_t n = path.returns.size();
  report.rows.push_back({n, "events", static_cast<double>(counting_process(path.ticks, static_cast<double>(n) * config.spacing)), kNoError});
  report.rows.push_back({n, "mean_return", mean_return(path.returns), kNoError});
  report.rows.push_back({n, "s2", sample_variance_s2(path.returns), kNoError});
  finish(report, started);
  return SimulationResult{std::move(report), std::move(path)};
}

ExperimentReport run_rate_experiment(const ExperimentConfig& config) {
  const auto started = Clock::now();
  auto report = start_report(config, "rate");
  const TheoreticalLimit limit = classify_limit(config.model);
  const std::size_t reps = config.replicates_or(kDefaultRateReplicates);
  if (reps < 100) {
    throw InvalidArgument("rate experiment needs at least 100 replicates");
  }
  const RandomStream root = root_stream(config);
  const auto sampler = make_sampler(config.model, config.acd_burnin);
  const PartialSumTable table =
      collect_partial_sums(sampler, config.n_grid, reps, root.substream(0), config.threads);
  const ScalingFit fit = fit_scaling_exponent(table, root.substream(1), kBootstrapDraws);

  Matrix sums(reps, table.n_grid.size());
  sums.data = table.sums;
  const auto median_errors = bootstrap_medians(sums, config.n_grid, root.substream(2));
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const double norm = std::pow(static_cast<double>(n), limit.gamma);
    report.rows.push_back({n, "median_abs_sum", fit.median_abs_sum[g], median_errors[g]});
    report.rows.push_back({n, "median_abs_normalized", fit.median_abs_sum[g] / norm, median_errors[g] / norm});
  }
  report.rows.push_back({std::nullopt, "gamma_hat", fit.gamma.value, fit.gamma.std_error});
  add_classification(report, limit);
  report.rows.push_back({std::nullopt, "gamma_error", fit.gamma.value - limit.gamma, fit.gamma.std_error});

  // Shape of the normalized sums at the largest n.
  std::vector<double> z = table.column(config.n_grid.size() - 1);
  const double norm = std::pow(static_cast<double>(max_n(config)), limit.gamma);
  for (auto& v : z) {
    v /= norm;
  }
  std::vector<double> reference;
  switch (limit.family.kind) {
    case LimitKind::gaussian:
    case LimitKind::fbm_increment: {
      double sd = 0.0;
      if (limit.scale_known) {
        sd = stationary_mean(config.model);  // exponential durations: sd = mean
      } else {
        double ss = 0.0;
        for (double v : z) {
          ss += v * v;
        }
        sd = std::sqrt(ss / static_cast<double>(z.size()));
      }
      Rng rng(root.substream(3));
      reference.resize(z.size());
      for (auto& v : reference) {
        v = sd * rng.normal();
      }
      report.rows.push_back({max_n(config), "reference_scale", sd, kNoError});
      break;
    }
    case LimitKind::stable: {
      const double index = limit.family.index;
      const auto unit = sample_stable_skewed(index, 1.0, std::max<std::size_t>(20000, z.size()), root.substream(4));
      const double scale = interquartile_range(z) / interquartile_range(unit);
      reference = sample_stable_skewed(index, scale, z.size(), root.substream(3));
      report.rows.push_back({max_n(config), "reference_scale", scale, kNoError});

      std::vector<double> positive;
      std::copy_if(z.begin(), z.end(), std::back_inserter(positive), [](double v) { return v > 0.0; });
      const auto top_k = static_cast<std::size_t>(config.hill_fraction * static_cast<double>(reps));
      if (top_k >= 10 && top_k < positive.size()) {
        const auto hill = hill_estimator(positive, top_k);
        report.rows.push_back({max_n(config), "hill_index", hill.value, hill.std_error});
      }
      break;
    }
    case LimitKind::hermite:
      break;
  }
  if (!reference.empty()) {
    report.rows.push_back({max_n(config), "ks_distance", two_sample_distance(z, reference), kNoError});
    report.rows.push_back({max_n(config), "ks_critical_1pct", ks_critical_value(z.size(), reference.size()), kNoError});
  }
  finish(report, started);
  return report;
}

namespace {

/// t statistics and s_n^2 on every prefix r_1..r_n of one calendar path per replicate.
struct PrefixStats {
  Matrix t;
  Matrix s2;
};

PrefixStats collect_prefix_stats(const ExperimentConfig& config, std::size_t reps, double mu0_star,
                                 bool with_t, const RandomStream& stream) {
  const std::size_t grid = config.n_grid.size();
  PrefixStats out{Matrix(reps, grid), Matrix(reps, grid)};
  parallel_for(reps, config.threads, [&](std::size_t r) {
    const CalendarPath path = simulate_calendar_path(config, max_n(config), stream.substream(r));
    const std::span<const double> returns(path.returns);
    for (std::size_t g = 0; g < grid; ++g) {
      const auto prefix = returns.first(config.n_grid[g]);
      out.s2.at(r, g) = sample_variance_s2(prefix);
      if (with_t) {
        out.t.at(r, g) = t_statistic(prefix, mu0_star);
      }
    }
  });
  return out;
}

}  // namespace

ExperimentReport run_ttest_experiment(const ExperimentConfig& config, double mu0_star) {
  const auto started = Clock::now();
  auto report = start_report(config, "ttest");
  if (config.n_grid.front() < 2) {
    throw InvalidArgument("t-test needs n >= 2");
  }
  const std::size_t reps = config.replicates_or(kDefaultTtestReplicates);
  const RandomStream root = root_stream(config);
  const PrefixStats stats = collect_prefix_stats(config, reps, mu0_star, true, root.substream(0));
  const auto errors = bootstrap_medians(stats.t, config.n_grid, root.substream(1));

  const std::size_t grid = config.n_grid.size();
  std::vector<double> medians(grid);
  report.rows.push_back({std::nullopt, "mu0_star", mu0_star, kNoError});
  for (std::size_t g = 0; g < grid; ++g) {
    const std::size_t n = config.n_grid[g];
    const auto t = stats.t.column(g);
    const auto rejected = std::count_if(t.begin(), t.end(), [](double v) { return std::abs(v) > kCritical; });
    const double rate = static_cast<double>(rejected) / static_cast<double>(reps);
    medians[g] = median(abs_values(t));
    const auto s2 = stats.s2.column(g);
    report.rows.push_back({n, "rejection_rate", rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps))});
    report.rows.push_back({n, "median_abs_t", medians[g], errors[g]});
    report.rows.push_back({n, "mean_s2", mean_of(s2), sample_sd(s2) / std::sqrt(static_cast<double>(reps))});
  }
  if (grid >= 2) {
    report.rows.push_back({std::nullopt, "t_slope", log_log_slope(config.n_grid, medians), errors.back()});
    try {
      const auto limit = classify_limit(config.model);
      report.rows.push_back({std::nullopt, "t_slope_theory", std::max(limit.gamma - 0.5, 0.0), kNoError});
    } catch (const ClassificationError&) {
      // No predicted slope for models the classifier cannot place.
    }
  }
  finish(report, started);
  return report;
}

ExperimentReport run_s2_experiment(const ExperimentConfig& config) {
  const auto started = Clock::now();
  auto report = start_report(config, "s2");
  if (config.n_grid.front() < 2) {
    throw InvalidArgument("s2 experiment needs n >= 2");
  }
  const std::size_t reps = config.replicates_or(kDefaultS2Replicates);
  const PrefixStats stats = collect_prefix_stats(config, reps, 0.0, false, root_stream(config).substream(0));
  for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
    const std::size_t n = config.n_grid[g];
    const auto s2 = stats.s2.column(g);
    const double spread = sample_sd(s2);
    report.rows.push_back({n, "s2_mean", mean_of(s2), spread / std::sqrt(static_cast<double>(reps))});
    report.rows.push_back({n, "s2_spread", spread, kNoError});
  }
  if (const auto* p = std::get_if<PoissonParams>(&config.model);
      p != nullptr && config.micro.kind != MicrostructureKind::fractional_leverage) {
    const double noise_var = config.micro.kind == MicrostructureKind::iid_noise ? config.micro.sd * config.micro.sd : 0.0;
    const double target = p->rate * config.spacing * (config.mu * config.mu + config.sigma_e * config.sigma_e + noise_var);
    report.rows.push_back({std::nullopt, "s2_target", target, kNoError});
  }
  finish(report, started);
  return report;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "scenario_id,master_seed,n,metric,value,std_error\n";
  const std::string id = detail::csv_field(report.scenario_id);
  for (const auto& row : report.rows) {
    out << id << ',' << report.master_seed << ',';
    if (row.n) {
      out << *row.n;
    }
    out << ',' << detail::csv_field(row.metric) << ',' << detail::format_double(row.value) << ',';
    if (!std::isnan(row.std_error)) {
      out << detail::format_double(row.std_error);
    }
    out << '\n';
  }
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot read " + path.string());
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 initialisation failed");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::filesystem::path write_run_outputs(const ExperimentReport& report, const std::filesystem::path& dir,
                                        const std::vector<std::filesystem::path>& extra_files) {
  std::filesystem::create_directories(dir);
  const auto report_path = dir / ("report_" + report.scenario_id + ".csv");
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      throw InvalidArgument("cannot write " + report_path.string());
    }
    write_report_csv(out, report);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "driftlab";
  manifest["version"] = library_version();
  manifest["subcommand"] = report.kind;
  manifest["scenario_id"] = report.scenario_id;
  manifest["master_seed"] = report.master_seed;
  manifest["wall_seconds"] = report.wall_seconds;
  manifest["config"] = nlohmann::json::parse(report.config_json);
  auto files = nlohmann::ordered_json::array();
  std::vector<std::filesystem::path> all{report_path};
  all.insert(all.end(), extra_files.begin(), extra_files.end());
  for (const auto& file : all) {
    nlohmann::ordered_json entry;
    entry["path"] = file.filename().string();
    entry["bytes"] = std::filesystem::file_size(file);
    entry["sha256"] = sha256_file(file);
    files.push_back(entry);
  }
  manifest["files"] = files;

  const auto manifest_path = dir / ("manifest_" + report.scenario_id + ".json");
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) {
    throw InvalidArgument("cannot write " + manifest_path.string());
  }
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

}  // namespace driftlab
