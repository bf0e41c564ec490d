#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "driftlab/kernels.hpp"
#include "driftlab/random.hpp"

namespace driftlab {

enum class ModelTag { poisson, acd, lmsd };

std::string to_string(ModelTag tag);

/// A finite realization of a stationary duration process.
struct DurationSample {
  std::vector<double> durations;
  ModelTag model_tag = ModelTag::poisson;
  double theoretical_mean = 1.0;  // 1 / lambda
};

struct PoissonParams {
  double rate = 1.0;
};

/// ACD(1,1): tau_k = psi_k eps_k, psi_k = omega + alpha tau_{k-1} + beta psi_{k-1}.
struct AcdParams {
  double omega = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  InnovationSpec innovation = InnovationSpec::exponential();

  /// Throws StationarityError unless omega > 0, alpha, beta >= 0, alpha + beta < 1.
  void validate() const;
  /// omega / (1 - alpha - beta).
  [[nodiscard]] double stationary_mean() const;
};

enum class SigmaKind { exponential, square, shifted_polynomial };

/// Positive volatility function of a standard Gaussian.
class SigmaFunction {
 public:
  static SigmaFunction exponential() noexcept;
  static SigmaFunction square() noexcept;
  /// sigma(y) = sum_i coeffs[i] y^i. Must be strictly positive on the real line.
  static SigmaFunction shifted_polynomial(std::vector<double> coeffs);

  [[nodiscard]] SigmaKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_even() const noexcept;

  double operator()(double y) const noexcept;

  /// E[sigma(Y)] for Y standard Gaussian.
  [[nodiscard]] double gaussian_mean() const;

  [[nodiscard]] std::string describe() const;

 private:
  SigmaFunction(SigmaKind kind, std::vector<double> coeffs) noexcept
      : kind_(kind), coeffs_(std::move(coeffs)) {}

  SigmaKind kind_;
  std::vector<double> coeffs_;
};

/// LMSD: tau_k = eps_k sigma(Y_k) with Y unit-variance fGn of index hurst.
struct LmsdParams {
  double hurst = 0.75;
  SigmaFunction sigma = SigmaFunction::exponential();
  InnovationSpec innovation = InnovationSpec::exponential();

  void validate() const;
  /// E[eps] E[sigma(Y)].
  [[nodiscard]] double stationary_mean() const;
};

using DurationModel = std::variant<PoissonParams, AcdParams, LmsdParams>;

inline constexpr std::size_t kDefaultAcdBurnin = 10'000;

DurationSample simulate_poisson_durations(double rate, std::size_t n, const RandomStream& stream);

DurationSample simulate_acd(const AcdParams& params, std::size_t n, std::size_t burnin,
                            const RandomStream& stream);

/// LMSD durations together with the Gaussian path that drives them.
/// gaussian_path has `presample` extra leading points so that filters of the
/// path (leverage noise) can be aligned with the durations.
struct LmsdSample {
  DurationSample sample;
  std::vector<double> gaussian_path;
  std::size_t presample = 0;
};

LmsdSample simulate_lmsd(const LmsdParams& params, std::size_t n, const RandomStream& stream,
                         std::size_t presample = 0);

/// Dispatches on the model. ACD uses `acd_burnin` discarded draws.
DurationSample simulate_durations(const DurationModel& model, std::size_t n,
                                  const RandomStream& stream,
                                  std::size_t acd_burnin = kDefaultAcdBurnin);

double stationary_mean(const DurationModel& model);

/// E[(alpha eps + beta)^kappa]; +inf where the moment diverges.
double acd_tail_moment(const AcdParams& params, double kappa);

/// Unique kappa > 1 with E[(alpha eps + beta)^kappa] = 1, by bisection on
/// [1 + 1e-6, 50]. Throws ClassificationError when no root exists there.
double acd_tail_index(const AcdParams& params, double tol = 1e-8);

struct SecondMomentCondition {
  bool holds = false;
  /// 1 - (alpha^2 E[eps^2] + 2 alpha beta + beta^2); -inf if E[eps^2] = inf.
  double margin = 0.0;
};

SecondMomentCondition acd_second_moment_condition(const AcdParams& params);

/// Hermite coefficient E[sigma(Y) He_j(Y)].
double hermite_coefficient(const SigmaFunction& sigma, std::size_t j);

/// Smallest j in 1..max_order with |E[sigma(Y) He_j(Y)]| > tol.
std::size_t hermite_rank(const SigmaFunction& sigma, double tol = 1e-8,
                         std::size_t max_order = 8);

enum class LimitKind { gaussian, fbm_increment, hermite, stable };

std::string to_string(LimitKind kind);

struct LimitFamily {
  LimitKind kind = LimitKind::gaussian;
  std::size_t order = 0;  // Hermite rank q for fbm_increment (1) / hermite (>= 2)
  double hurst = 0.0;
  double index = 2.0;  // stable index

  [[nodiscard]] std::string describe() const;
};

/// Predicted rate gamma and limit family of n^{-gamma} sum (tau_k - 1/lambda).
struct TheoreticalLimit {
  double gamma = 0.5;
  LimitFamily family;
  bool scale_known = false;
};

TheoreticalLimit classify_limit(const DurationModel& model);

/// Sampler handle used by the Monte Carlo drivers.
using DurationSampler = std::function<DurationSample(std::size_t, const RandomStream&)>;

DurationSampler make_sampler(DurationModel model, std::size_t acd_burnin = kDefaultAcdBurnin);

}  // namespace driftlab
