#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "driftlab/durations.hpp"
#include "driftlab/random.hpp"

namespace driftlab {

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 1;
};

double mean_return(std::span<const double> returns);

/// (n - 1)^{-1} sum (r_j - rbar)^2.
double sample_variance_s2(std::span<const double> returns);

/// n^{1/2} (rbar - mu0_star) / s_n. Throws DegenerateSampleError when s_n = 0.
double t_statistic(std::span<const double> returns, double mu0_star);

/// n^{-gamma} sum_k (tau_k - 1/lambda) with 1/lambda the model's theoretical mean.
double normalized_partial_sum(const DurationSample& durations, double gamma);

/// Same with a caller-supplied centering (for example a pilot estimate of 1/lambda).
double normalized_partial_sum(std::span<const double> durations, double mean, double gamma);

/// Centered partial sums S_n = sum_{k<=n}(tau_k - 1/lambda) for every replicate
/// and every n in the grid, all taken from one path of length max(n_grid).
struct PartialSumTable {
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 0;
  std::vector<double> sums;  // row-major [replicate][grid point]

  [[nodiscard]] double at(std::size_t replicate, std::size_t grid_index) const {
    return sums[replicate * n_grid.size() + grid_index];
  }
  [[nodiscard]] std::vector<double> column(std::size_t grid_index) const;
};

PartialSumTable collect_partial_sums(const DurationSampler& sampler,
                                     std::span<const std::size_t> n_grid, std::size_t replicates,
                                     const RandomStream& stream, std::size_t threads = 1);

struct ScalingFit {
  EstimateWithError gamma;
  std::vector<std::size_t> n_grid;
  std::vector<double> median_abs_sum;
};

/// Least-squares slope of log median |S_n| on log n, with a replicate
/// bootstrap standard error.
ScalingFit fit_scaling_exponent(const PartialSumTable& table, const RandomStream& stream,
                                std::size_t bootstrap_draws = 200);

/// Runs the sampler and fits gamma. n_grid needs >= 4 points spanning >= 2
/// octaves; replicates >= 100.
ScalingFit scaling_exponent(const DurationSampler& sampler, std::span<const std::size_t> n_grid,
                            std::size_t replicates, const RandomStream& stream,
                            std::size_t threads = 1);

/// Geometric grid first, first * ratio, ... with `points` entries.
std::vector<std::size_t> geometric_grid(std::size_t first, std::size_t ratio, std::size_t points);

/// Hill estimator of the right tail index from the top_k order statistics.
EstimateWithError hill_estimator(std::span<const double> sample, std::size_t top_k);

/// Kolmogorov-Smirnov distance between the empirical CDFs of a and b.
double two_sample_distance(std::span<const double> a, std::span<const double> b);

/// Large-sample two-sample KS critical value c * sqrt((n + m) / (n m));
/// c = 1.628 is the 1% level.
double ks_critical_value(std::size_t n, std::size_t m, double c = 1.628);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

/// CSV rows scenario_id,estimator,value,std_error,replicates.
void write_estimate_header(std::ostream& out);
void write_estimate_row(std::ostream& out, const std::string& scenario_id,
                        const std::string& estimator, const EstimateWithError& estimate);

}  // namespace driftlab
