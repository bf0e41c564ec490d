#include "driftlab/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/parallel.hpp"

namespace driftlab {

double mean_return(std::span<const double> returns) {
  if (returns.empty()) {
    throw InvalidArgument("mean_return: empty input");
  }
  return std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
}

double sample_variance_s2(std::span<const double> returns) {
  if (returns.size() < 2) {
    throw InvalidArgument("sample_variance_s2: need at least two returns");
  }
  const double mean = mean_return(returns);
  double acc = 0.0;
  for (double r : returns) {
    acc += (r - mean) * (r - mean);
  }
  return acc / static_cast<double>(returns.size() - 1);
}

double t_statistic(std::span<const double> returns, double mu0_star) {
  const double s2 = sample_variance_s2(returns);
  if (!(s2 > 0.0)) {
    throw DegenerateSampleError("t_statistic: zero sample variance");
  }
  const double n = static_cast<double>(returns.size());
  return std::sqrt(n) * (mean_return(returns) - mu0_star) / std::sqrt(s2);
}

double normalized_partial_sum(std::span<const double> durations, double mean, double gamma) {
  double acc = 0.0;
  for (double tau : durations) {
    acc += tau - mean;
  }
  return acc * std::pow(static_cast<double>(durations.size()), -gamma);
}

double normalized_partial_sum(const DurationSample& durations, double gamma) {
  return normalized_partial_sum(durations.durations, durations.theoretical_mean, gamma);
}

std::vector<double> PartialSumTable::column(std::size_t grid_index) const {
  std::vector<double> out(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    out[r] = at(r, grid_index);
  }
  return out;
}

namespace {

void check_grid(std::span<const std::size_t> n_grid) {
  if (n_grid.size() < 4) {
    throw InvalidArgument("scaling grid needs at least 4 points");
  }
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw InvalidArgument("scaling grid must be strictly increasing");
    }
  }
  if (n_grid.front() == 0 || n_grid.back() < 4 * n_grid.front()) {
    throw InvalidArgument("scaling grid must span at least two octaves");
  }
}

double slope_of_medians(std::span<const std::size_t> n_grid, std::span<const double> medians) {
  std::vector<double> x(n_grid.size());
  std::vector<double> y(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    if (!(medians[g] > 0.0)) {
      throw DegenerateSampleError("scaling_exponent: median partial sum is zero");
    }
    x[g] = std::log(static_cast<double>(n_grid[g]));
    y[g] = std::log(medians[g]);
  }
  return ols_slope(x, y);
}

}  // namespace

PartialSumTable collect_partial_sums(const DurationSampler& sampler,
                                     std::span<const std::size_t> n_grid, std::size_t replicates,
                                     const RandomStream& stream, std::size_t threads) {
  if (n_grid.empty()) {
    throw InvalidArgument("collect_partial_sums: empty grid");
  }
  PartialSumTable table;
  table.n_grid.assign(n_grid.begin(), n_grid.end());
  table.replicates = replicates;
  table.sums.assign(replicates * n_grid.size(), 0.0);
  const std::size_t n_max = *std::max_element(n_grid.begin(), n_grid.end());

  parallel_for(replicates, threads, [&](std::size_t r) {
    const DurationSample sample = sampler(n_max, stream.substream(r));
    std::vector<double> running(n_max + 1, 0.0);
    for (std::size_t k = 0; k < n_max; ++k) {
      running[k + 1] = running[k] + (sample.durations[k] - sample.theoretical_mean);
    }
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      table.sums[r * n_grid.size() + g] = running[n_grid[g]];
    }
  });
  return table;
}

ScalingFit fit_scaling_exponent(const PartialSumTable& table, const RandomStream& stream,
                                std::size_t bootstrap_draws) {
  check_grid(table.n_grid);
  const std::size_t grid = table.n_grid.size();
  const std::size_t reps = table.replicates;

  ScalingFit fit;
  fit.n_grid = table.n_grid;
  fit.median_abs_sum.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    auto col = table.column(g);
    for (auto& v : col) {
      v = std::abs(v);
    }
    fit.median_abs_sum[g] = median(std::move(col));
  }
  fit.gamma.value = slope_of_medians(fit.n_grid, fit.median_abs_sum);
  fit.gamma.replicates = reps;

  if (bootstrap_draws >= 2) {
    Rng rng(stream);
    std::vector<double> slopes;
    slopes.reserve(bootstrap_draws);
    std::vector<std::size_t> pick(reps);
    std::vector<double> medians(grid);
    std::vector<double> col(reps);
    for (std::size_t b = 0; b < bootstrap_draws; ++b) {
      for (auto& idx : pick) {
        idx = static_cast<std::size_t>(rng.below(reps));
      }
      for (std::size_t g = 0; g < grid; ++g) {
        for (std::size_t r = 0; r < reps; ++r) {
          col[r] = std::abs(table.at(pick[r], g));
        }
        medians[g] = median(col);
      }
      slopes.push_back(slope_of_medians(fit.n_grid, medians));
    }
    const double mean = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(slopes.size());
    double ss = 0.0;
    for (double s : slopes) {
      ss += (s - mean) * (s - mean);
    }
    fit.gamma.std_error = std::sqrt(ss / static_cast<double>(slopes.size() - 1));
  }
  return fit;
}

ScalingFit scaling_exponent(const DurationSampler& sampler, std::span<const std::size_t> n_grid,
                            std::size_t replicates, const RandomStream& stream,
                            std::size_t threads) {
  check_grid(n_grid);
  if (replicates < 100) {
    throw InvalidArgument("scaling_exponent needs at least 100 replicates");
  }
  const auto table = collect_partial_sums(sampler, n_grid, replicates, stream.substream(0), threads);
  return fit_scaling_exponent(table, stream.substream(1));
}

std::vector<std::size_t> geometric_grid(std::size_t first, std::size_t ratio, std::size_t points) {
  std::vector<std::size_t> grid(points);
  std::size_t n = first;
  for (auto& g : grid) {
    g = n;
    n *= ratio;
  }
  return grid;
}

EstimateWithError hill_estimator(std::span<const double> sample, std::size_t top_k) {
  if (top_k < 10) {
    throw InvalidArgument("hill_estimator: top_k must be >= 10");
  }
  if (top_k >= sample.size()) {
    throw InvalidArgument("hill_estimator: top_k must be smaller than the sample size");
  }
  for (double x : sample) {
    if (!(x > 0.0)) {
      throw DomainError("hill_estimator: sample entries must be positive");
    }
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(top_k), sorted.end(),
                   std::greater<>());
  const double threshold = sorted[top_k];
  const double log_threshold = std::log(threshold);
  double acc = 0.0;
  for (std::size_t i = 0; i < top_k; ++i) {
    acc += std::log(sorted[i]) - log_threshold;
  }
  const double mean_excess = acc / static_cast<double>(top_k);
  if (!(mean_excess > 0.0)) {
    throw DegenerateSampleError("hill_estimator: top order statistics are all tied");
  }
  EstimateWithError est;
  est.value = 1.0 / mean_excess;
  est.std_error = est.value / std::sqrt(static_cast<double>(top_k));
  est.replicates = top_k;
  return est;
}

double two_sample_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("two_sample_distance: empty input");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) {
      ++i;
    }
    while (j < y.size() && y[j] == v) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double c) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("ols_slope: need two equally long series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) {
    throw DegenerateSampleError("ols_slope: regressor has no spread");
  }
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidArgument("median: empty input");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void write_estimate_header(std::ostream& out) {
  out << "scenario_id,estimator,value,std_error,replicates\n";
}

void write_estimate_row(std::ostream& out, const std::string& scenario_id,
                        const std::string& estimator, const EstimateWithError& estimate) {
  out << detail::csv_field(scenario_id) << ',' << detail::csv_field(estimator) << ','
      << detail::format_double(estimate.value) << ',' << detail::format_double(estimate.std_error)
      << ',' << estimate.replicates << '\n';
}

}  // namespace driftlab
