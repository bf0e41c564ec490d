#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftlab/random.hpp"

namespace driftlab {

enum class InnovationFamily { unit_exponential, unit_pareto, unit_lognormal };

/// Law of a positive i.i.d. innovation, normalized to mean exactly 1.
///
/// unit_pareto(a) has density a x_m^a x^{-a-1} on [x_m, inf) with
/// x_m = (a - 1) / a. unit_lognormal(s) is exp(s Z - s^2 / 2).
class InnovationSpec {
 public:
  static InnovationSpec exponential() noexcept;
  static InnovationSpec pareto(double tail_index);
  static InnovationSpec lognormal(double log_sd);

  [[nodiscard]] InnovationFamily family() const noexcept { return family_; }
  /// Tail index for pareto, log-sd for lognormal, 0 for exponential.
  [[nodiscard]] double parameter() const noexcept { return parameter_; }

  /// E[eps^p]; +inf when the moment does not exist.
  [[nodiscard]] double moment(double p) const;
  [[nodiscard]] double second_moment() const { return moment(2.0); }
  [[nodiscard]] bool has_finite_variance() const;

  double draw(Rng& rng) const noexcept;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const InnovationSpec&, const InnovationSpec&) = default;

 private:
  InnovationSpec(InnovationFamily family, double parameter) noexcept
      : family_(family), parameter_(parameter) {}

  InnovationFamily family_;
  double parameter_;
};

std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t n,
                                       const RandomStream& stream);

struct FgnSpec {
  double hurst = 0.75;
  std::size_t length = 0;
};

/// Autocovariance of unit-variance fractional Gaussian noise,
/// 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}). Requires H in (1/2, 1).
double fgn_autocovariance(double hurst, std::size_t lag);

/// One exact draw of fGn by circulant embedding (Davies-Harte / Wood-Chan).
std::vector<double> sample_fgn(const FgnSpec& spec, const RandomStream& stream);

/// I.i.d. totally right-skewed (beta = +1) alpha-stable draws with zero shift,
/// via the Chambers-Mallows-Stuck transform. index must lie in (1, 2].
std::vector<double> sample_stable_skewed(double index, double scale, std::size_t n,
                                         const RandomStream& stream);

/// Coefficients of (1 - B)^delta up to and including lag `lags`.
std::vector<double> fractional_difference_weights(double delta, std::size_t lags);

/// Number of leading observations consumed by fractional_difference.
/// Integer delta uses the exact finite filter of delta lags; otherwise the
/// filter is truncated at `truncation` lags.
std::size_t fractional_difference_lags(double delta, std::size_t truncation);

/// [(I - B)^delta Y]_k for every k with a full filter window. The output
/// drops the first fractional_difference_lags(delta, truncation) points.
std::vector<double> fractional_difference(std::span<const double> series, double delta,
                                          std::size_t truncation = 512);

}  // namespace driftlab
