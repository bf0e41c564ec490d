#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "driftlab/durations.hpp"
#include "driftlab/random.hpp"

namespace driftlab {

enum class MicrostructureKind { none, fractional_leverage, iid_noise };

/// Microstructure noise eta_k added to the efficient shocks.
struct MicrostructureSpec {
  MicrostructureKind kind = MicrostructureKind::none;
  double delta = 1.0;              // fractional_leverage: order of (I - B)^delta
  std::size_t truncation = 512;    // fractional_leverage: filter length for fractional delta
  double sd = 0.0;                 // iid_noise: Gaussian standard deviation

  static MicrostructureSpec none() { return {}; }
  static MicrostructureSpec fractional_leverage(double delta, std::size_t truncation = 512);
  static MicrostructureSpec iid_noise(double sd);

  /// Leading points of the Gaussian path consumed by the leverage filter (0 otherwise).
  [[nodiscard]] std::size_t presample() const;
};

/// Pure-jump log price: y jumps by mu + e_k + eta_k at each event time t_k
/// and is constant in between. Immutable once built.
class TickSeries {
 public:
  TickSeries(std::vector<double> event_times, double mu, double sigma_e,
             std::vector<double> shocks, std::vector<double> noise);

  [[nodiscard]] std::span<const double> event_times() const noexcept { return event_times_; }
  [[nodiscard]] std::span<const double> shocks() const noexcept { return shocks_; }
  [[nodiscard]] std::span<const double> noise() const noexcept { return noise_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double sigma_e() const noexcept { return sigma_e_; }
  [[nodiscard]] std::size_t size() const noexcept { return event_times_.size(); }
  [[nodiscard]] double last_event_time() const noexcept;

  /// mu + e_k + eta_k (0-based k).
  [[nodiscard]] double jump(std::size_t k) const noexcept { return mu_ + shocks_[k] + noise_[k]; }

  /// y just after the k-th event, i.e. the sum of the first k jumps.
  [[nodiscard]] double level_after(std::size_t events) const noexcept { return levels_[events]; }

 private:
  std::vector<double> event_times_;
  double mu_;
  double sigma_e_;
  std::vector<double> shocks_;
  std::vector<double> noise_;
  std::vector<double> levels_;
};

/// Builds ticks from durations. For fractional_leverage the Gaussian path
/// behind LMSD durations must be supplied, with micro.presample() leading
/// points before the first duration.
TickSeries build_ticks(const DurationSample& durations, double mu, double sigma_e,
                       const MicrostructureSpec& micro, const RandomStream& stream,
                       std::optional<std::span<const double>> gaussian_path = std::nullopt);

/// Number of events in (0, t].
std::size_t counting_process(const TickSeries& ticks, double t);

/// y(t) = mu N(t) + sum_{k <= N(t)} (e_k + eta_k).
double log_price(const TickSeries& ticks, double t);

/// r_j = y(jT) - y((j - 1)T), j = 1..count.
std::vector<double> calendar_returns(const TickSeries& ticks, double spacing, std::size_t count);

/// CSV with header k,t_k,jump_k (k is 1-based).
void write_ticks_csv(std::ostream& out, const TickSeries& ticks);

/// CSV with header j,r_j (j is 1-based).
void write_returns_csv(std::ostream& out, std::span<const double> returns);

}  // namespace driftlab
