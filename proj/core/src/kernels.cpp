#include "driftlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "driftlab/errors.hpp"
#include "fft.hpp"

namespace driftlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hurst(double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    std::ostringstream msg;
    msg << "Hurst index must lie in (1/2, 1), got " << hurst;
    throw DomainError(msg.str());
  }
}

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

InnovationSpec InnovationSpec::exponential() noexcept {
  return {InnovationFamily::unit_exponential, 0.0};
}

InnovationSpec InnovationSpec::pareto(double tail_index) {
  if (!(tail_index > 1.0) || !std::isfinite(tail_index)) {
    throw DomainError("pareto innovations need a finite tail index > 1");
  }
  return {InnovationFamily::unit_pareto, tail_index};
}

InnovationSpec InnovationSpec::lognormal(double log_sd) {
  if (!(log_sd >= 0.0) || !std::isfinite(log_sd)) {
    throw DomainError("lognormal innovations need a finite log_sd >= 0");
  }
  return {InnovationFamily::unit_lognormal, log_sd};
}

double InnovationSpec::moment(double p) const {
  switch (family_) {
    case InnovationFamily::unit_exponential:
      return std::tgamma(p + 1.0);
    case InnovationFamily::unit_pareto: {
      const double a = parameter_;
      if (p >= a) {
        return kInf;
      }
      const double xm = (a - 1.0) / a;
      return a * std::pow(xm, p) / (a - p);
    }
    case InnovationFamily::unit_lognormal: {
      const double s = parameter_;
      return std::exp(0.5 * p * (p - 1.0) * s * s);
    }
  }
  return kInf;
}

bool InnovationSpec::has_finite_variance() const { return std::isfinite(second_moment()); }

double InnovationSpec::draw(Rng& rng) const noexcept {
  switch (family_) {
    case InnovationFamily::unit_exponential:
      return rng.exponential();
    case InnovationFamily::unit_pareto: {
      const double a = parameter_;
      const double xm = (a - 1.0) / a;
      return xm * std::pow(rng.uniform_open(), -1.0 / a);
    }
    case InnovationFamily::unit_lognormal: {
      const double s = parameter_;
      if (s == 0.0) {
        return 1.0;
      }
      return std::exp(s * rng.normal() - 0.5 * s * s);
    }
  }
  return 1.0;
}

std::string InnovationSpec::describe() const {
  std::ostringstream out;
  switch (family_) {
    case InnovationFamily::unit_exponential:
      out << "unit_exponential";
      break;
    case InnovationFamily::unit_pareto:
      out << "unit_pareto(" << parameter_ << ")";
      break;
    case InnovationFamily::unit_lognormal:
      out << "unit_lognormal(" << parameter_ << ")";
      break;
  }
  return out.str();
}

std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t n,
                                       const RandomStream& stream) {
  if (n == 0) {
    throw InvalidArgument("sample_innovations: n must be >= 1");
  }
  Rng rng(stream);
  std::vector<double> out(n);
  for (auto& x : out) {
    x = spec.draw(rng);
  }
  return out;
}

double fgn_autocovariance(double hurst, std::size_t lag) {
  require_hurst(hurst);
  const double two_h = 2.0 * hurst;
  if (lag == 0) {
    return 1.0;
  }
  if (lag == 1) {
    return 0.5 * (std::pow(2.0, two_h) - 2.0);
  }
  // k^{2H} [(1 + 1/k)^{2H} - 2 + (1 - 1/k)^{2H}] / 2, written with expm1/log1p
  // so the second difference does not cancel catastrophically at large lags.
  const double k = static_cast<double>(lag);
  const double up = std::expm1(two_h * std::log1p(1.0 / k));
  const double down = std::expm1(two_h * std::log1p(-1.0 / k));
  return 0.5 * std::pow(k, two_h) * (up + down);
}

std::vector<double> sample_fgn(const FgnSpec& spec, const RandomStream& stream) {
  require_hurst(spec.hurst);
  const std::size_t n = spec.length;
  if (n < 2) {
    throw InvalidArgument("sample_fgn: length must be >= 2");
  }

  std::size_t m = 2;
  while (m < 2 * (n - 1)) {
    m *= 2;
  }
  const std::size_t half = m / 2;

  detail::ComplexBuffer spectrum(m);
  for (std::size_t j = 0; j <= half; ++j) {
    spectrum[j] = fgn_autocovariance(spec.hurst, j);
  }
  for (std::size_t j = 1; j < half; ++j) {
    spectrum[m - j] = spectrum[j];
  }
  detail::forward_dft(spectrum);

  double largest = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    largest = std::max(largest, spectrum[k].real());
  }
  const double floor = -1e-10 * largest;
  for (std::size_t k = 0; k < m; ++k) {
    if (spectrum[k].real() < floor) {
      std::ostringstream msg;
      msg << "circulant embedding has negative eigenvalue " << spectrum[k].real()
          << " at frequency " << k << " of " << m;
      throw NumericalError(msg.str());
    }
  }

  Rng rng(stream);
  detail::ComplexBuffer noise(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double amplitude = std::sqrt(std::max(spectrum[k].real(), 0.0) * inv_m);
    const double re = rng.normal();
    const double im = rng.normal();
    noise[k] = {amplitude * re, amplitude * im};
  }
  detail::forward_dft(noise);

  std::vector<double> path(n);
  for (std::size_t j = 0; j < n; ++j) {
    path[j] = noise[j].real();
  }
  return path;
}

std::vector<double> sample_stable_skewed(double index, double scale, std::size_t n,
                                         const RandomStream& stream) {
  if (!(index > 1.0 && index <= 2.0)) {
    throw DomainError("stable index must lie in (1, 2]");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("stable scale must be positive");
  }
  const double alpha = index;
  const double skew_term = std::tan(0.5 * std::numbers::pi * alpha);
  const double shift = std::atan(skew_term) / alpha;
  const double stretch = std::pow(1.0 + skew_term * skew_term, 0.5 / alpha);

  Rng rng(stream);
  std::vector<double> out(n);
  for (auto& x : out) {
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
    const double w = rng.exponential();
    const double a = alpha * (v + shift);
    const double z = stretch * std::sin(a) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
    x = scale * z;
  }
  return out;
}

std::vector<double> fractional_difference_weights(double delta, std::size_t lags) {
  std::vector<double> w(lags + 1);
  w[0] = 1.0;
  for (std::size_t j = 1; j <= lags; ++j) {
    const auto jd = static_cast<double>(j);
    w[j] = w[j - 1] * (jd - 1.0 - delta) / jd;
  }
  return w;
}

std::size_t fractional_difference_lags(double delta, std::size_t truncation) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("fractional difference order must be finite and >= 0");
  }
  if (is_integer(delta)) {
    return static_cast<std::size_t>(delta);
  }
  return truncation;
}

std::vector<double> fractional_difference(std::span<const double> series, double delta,
                                          std::size_t truncation) {
  if (series.empty()) {
    throw InvalidArgument("fractional_difference: empty series");
  }
  const std::size_t lags = fractional_difference_lags(delta, truncation);
  if (lags >= series.size()) {
    throw InvalidArgument("fractional_difference: truncation must be shorter than the series");
  }
  const auto weights = fractional_difference_weights(delta, lags);
  std::vector<double> out(series.size() - lags);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t t = k + lags;
    double acc = 0.0;
    for (std::size_t j = 0; j <= lags; ++j) {
      acc += weights[j] * series[t - j];
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace driftlab
