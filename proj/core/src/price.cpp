#include "driftlab/price.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"

namespace driftlab {

MicrostructureSpec MicrostructureSpec::fractional_leverage(double delta, std::size_t truncation) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("leverage delta must be finite and >= 0");
  }
  MicrostructureSpec spec;
  spec.kind = MicrostructureKind::fractional_leverage;
  spec.delta = delta;
  spec.truncation = truncation;
  return spec;
}

MicrostructureSpec MicrostructureSpec::iid_noise(double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw DomainError("iid noise sd must be positive");
  }
  MicrostructureSpec spec;
  spec.kind = MicrostructureKind::iid_noise;
  spec.sd = sd;
  return spec;
}

std::size_t MicrostructureSpec::presample() const {
  if (kind != MicrostructureKind::fractional_leverage) {
    return 0;
  }
  return fractional_difference_lags(delta, truncation);
}

TickSeries::TickSeries(std::vector<double> event_times, double mu, double sigma_e,
                       std::vector<double> shocks, std::vector<double> noise)
    : event_times_(std::move(event_times)),
      mu_(mu),
      sigma_e_(sigma_e),
      shocks_(std::move(shocks)),
      noise_(std::move(noise)) {
  if (shocks_.size() != event_times_.size() || noise_.size() != event_times_.size()) {
    throw InvalidArgument("TickSeries: shocks and noise must match the number of events");
  }
  // Durations are strictly positive, but a duration below one ulp of the
  // running clock rounds to a tie, so only monotonicity is enforced here.
  double previous = 0.0;
  for (double t : event_times_) {
    if (!(t > 0.0) || t < previous) {
      throw InvalidArgument("TickSeries: event times must be positive and increasing");
    }
    previous = t;
  }
  levels_.resize(event_times_.size() + 1);
  levels_[0] = 0.0;
  for (std::size_t k = 0; k < event_times_.size(); ++k) {
    levels_[k + 1] = levels_[k] + jump(k);
  }
}

double TickSeries::last_event_time() const noexcept {
  return event_times_.empty() ? 0.0 : event_times_.back();
}

TickSeries build_ticks(const DurationSample& durations, double mu, double sigma_e,
                       const MicrostructureSpec& micro, const RandomStream& stream,
                       std::optional<std::span<const double>> gaussian_path) {
  if (!(sigma_e >= 0.0) || !std::isfinite(sigma_e)) {
    throw DomainError("sigma_e must be finite and >= 0");
  }
  const std::size_t n = durations.durations.size();
  std::vector<double> times(n);
  double clock = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    clock += durations.durations[k];
    times[k] = clock;
  }

  std::vector<double> shocks(n, 0.0);
  Rng shock_rng(stream.substream(0));
  for (auto& e : shocks) {
    e = sigma_e * shock_rng.normal();
  }

  std::vector<double> noise(n, 0.0);
  switch (micro.kind) {
    case MicrostructureKind::none:
      break;
    case MicrostructureKind::iid_noise: {
      Rng noise_rng(stream.substream(1));
      for (auto& eta : noise) {
        eta = micro.sd * noise_rng.normal();
      }
      break;
    }
    case MicrostructureKind::fractional_leverage: {
      if (!gaussian_path) {
        throw InvalidArgument("fractional leverage noise needs the Gaussian path behind the durations");
      }
      const std::size_t lead = micro.presample();
      if (gaussian_path->size() != n + lead) {
        std::ostringstream msg;
        msg << "Gaussian path length " << gaussian_path->size() << " does not match " << n
            << " durations plus " << lead << " presample points";
        throw InvalidArgument(msg.str());
      }
      noise = fractional_difference(*gaussian_path, micro.delta, micro.truncation);
      break;
    }
  }
  return TickSeries(std::move(times), mu, sigma_e, std::move(shocks), std::move(noise));
}

std::size_t counting_process(const TickSeries& ticks, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("counting_process: t must be >= 0");
  }
  const auto times = ticks.event_times();
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

double log_price(const TickSeries& ticks, double t) {
  return ticks.level_after(counting_process(ticks, t));
}

std::vector<double> calendar_returns(const TickSeries& ticks, double spacing, std::size_t count) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("calendar_returns: spacing must be positive");
  }
  const double horizon = spacing * static_cast<double>(count);
  if (horizon > ticks.last_event_time()) {
    std::ostringstream msg;
    msg << "calendar horizon " << horizon << " exceeds simulated span " << ticks.last_event_time();
    throw InvalidArgument(msg.str());
  }
  std::vector<double> returns(count);
  double previous = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double level = log_price(ticks, spacing * static_cast<double>(j + 1));
    returns[j] = level - previous;
    previous = level;
  }
  return returns;
}

void write_ticks_csv(std::ostream& out, const TickSeries& ticks) {
  out << "k,t_k,jump_k\n";
  const auto times = ticks.event_times();
  for (std::size_t k = 0; k < ticks.size(); ++k) {
    out << (k + 1) << ',' << detail::format_double(times[k]) << ','
        << detail::format_double(ticks.jump(k)) << '\n';
  }
}

void write_returns_csv(std::ostream& out, std::span<const double> returns) {
  out << "j,r_j\n";
  for (std::size_t j = 0; j < returns.size(); ++j) {
    out << (j + 1) << ',' << detail::format_double(returns[j]) << '\n';
  }
}

}  // namespace driftlab
