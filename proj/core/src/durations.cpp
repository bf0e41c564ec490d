#include "driftlab/durations.hpp"

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "driftlab/errors.hpp"
#include "driftlab/gauss_hermite.hpp"

namespace driftlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKappaLow = 1.0 + 1e-6;
constexpr double kKappaHigh = 50.0;
constexpr double kQuadratureTol = 1e-12;
constexpr std::size_t kHermiteNodes = 160;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

double exponential_tail_moment(double alpha, double beta, double kappa) {
  // E[(alpha eps + beta)^k] = alpha^k e^{beta/alpha} Gamma(k + 1, beta/alpha).
  const double x0 = beta / alpha;
  if (x0 <= 500.0) {
    const double q = boost::math::gamma_q(kappa + 1.0, x0);
    if (q > 0.0) {
      return std::exp(kappa * std::log(alpha) + x0 + boost::math::lgamma(kappa + 1.0) + std::log(q));
    }
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  // eps = -log(u) maps [0, inf) onto (0, 1].
  auto f = [&](double u) { return std::pow(alpha * -std::log(u) + beta, kappa); };
  return integrator.integrate(f, 0.0, 1.0, kQuadratureTol);
}

double pareto_tail_moment(double alpha, double beta, double tail, double kappa) {
  if (kappa >= tail) {
    return kInf;
  }
  const double xm = (tail - 1.0) / tail;
  // eps = x_m u^{-1/a} with u uniform on (0, 1].
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double u) { return std::pow(alpha * xm * std::pow(u, -1.0 / tail) + beta, kappa); };
  return integrator.integrate(f, 0.0, 1.0, kQuadratureTol);
}

double lognormal_tail_moment(double alpha, double beta, double s, double kappa) {
  boost::math::quadrature::sinh_sinh<double> integrator;
  const double log_norm = -0.5 * std::log(2.0 * M_PI);
  const double log_alpha = std::log(alpha);
  // log(alpha e^{sz - s^2/2} + beta) by log-sum-exp, so the power never overflows.
  auto f = [&](double z) {
    const double x = log_alpha + s * z - 0.5 * s * s;
    double log_base = x;
    if (beta > 0.0) {
      const double y = std::log(beta);
      log_base = std::max(x, y) + std::log1p(std::exp(-std::abs(x - y)));
    }
    return std::exp(kappa * log_base - 0.5 * z * z + log_norm);
  };
  // For large kappa the moment itself exceeds the double range.
  try {
    return integrator.integrate(f, kQuadratureTol);
  } catch (const boost::math::evaluation_error&) {
    return kInf;
  }
}

}  // namespace

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::poisson:
      return "poisson";
    case ModelTag::acd:
      return "acd";
    case ModelTag::lmsd:
      return "lmsd";
  }
  return "unknown";
}

void AcdParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw StationarityError("ACD omega must be positive");
  }
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw StationarityError("ACD alpha and beta must be nonnegative");
  }
  if (!(alpha + beta < 1.0)) {
    std::ostringstream msg;
    msg << "ACD has no stationary solution: alpha + beta = " << alpha + beta << " >= 1";
    throw StationarityError(msg.str());
  }
}

double AcdParams::stationary_mean() const {
  validate();
  return omega / (1.0 - alpha - beta);
}

SigmaFunction SigmaFunction::exponential() noexcept { return {SigmaKind::exponential, {}}; }

SigmaFunction SigmaFunction::square() noexcept { return {SigmaKind::square, {0.0, 0.0, 1.0}}; }

SigmaFunction SigmaFunction::shifted_polynomial(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) {
    coeffs.pop_back();
  }
  if (coeffs.empty()) {
    throw DomainError("sigma polynomial must not be identically zero");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw DomainError("sigma polynomial coefficients must be finite");
    }
  }
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) {
    if (!(coeffs[0] > 0.0)) {
      throw DomainError("constant sigma must be positive");
    }
  } else {
    if (degree % 2 != 0 || !(coeffs.back() > 0.0)) {
      throw DomainError("sigma polynomial must have even degree and positive leading coefficient");
    }
    Eigen::VectorXd poly(static_cast<Eigen::Index>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      poly[static_cast<Eigen::Index>(i)] = coeffs[i];
    }
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(poly);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
      const auto root = solver.roots()[i];
      if (std::abs(root.imag()) <= 1e-9 * (1.0 + std::abs(root))) {
        throw DomainError("sigma polynomial has a real root; it must be positive everywhere");
      }
    }
  }
  return {SigmaKind::shifted_polynomial, std::move(coeffs)};
}

bool SigmaFunction::is_even() const noexcept {
  if (kind_ == SigmaKind::exponential) {
    return false;
  }
  for (std::size_t i = 1; i < coeffs_.size(); i += 2) {
    if (coeffs_[i] != 0.0) {
      return false;
    }
  }
  return true;
}

double SigmaFunction::operator()(double y) const noexcept {
  switch (kind_) {
    case SigmaKind::exponential:
      return std::exp(y);
    case SigmaKind::square:
      return y * y;
    case SigmaKind::shifted_polynomial: {
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * y + *it;
      }
      return acc;
    }
  }
  return 0.0;
}

double SigmaFunction::gaussian_mean() const {
  if (kind_ == SigmaKind::exponential) {
    return std::exp(0.5);
  }
  return gauss_hermite_rule(kHermiteNodes).expect(*this);
}

std::string SigmaFunction::describe() const {
  switch (kind_) {
    case SigmaKind::exponential:
      return "exponential";
    case SigmaKind::square:
      return "square";
    case SigmaKind::shifted_polynomial: {
      std::ostringstream out;
      out << "shifted_polynomial(";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        out << (i ? "," : "") << coeffs_[i];
      }
      out << ")";
      return out.str();
    }
  }
  return "unknown";
}

void LmsdParams::validate() const {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    std::ostringstream msg;
    msg << "LMSD Hurst index must lie in (1/2, 1), got " << hurst;
    throw DomainError(msg.str());
  }
}

double LmsdParams::stationary_mean() const {
  validate();
  return innovation.moment(1.0) * sigma.gaussian_mean();
}

DurationSample simulate_poisson_durations(double rate, std::size_t n, const RandomStream& stream) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("Poisson rate must be positive");
  }
  Rng rng(stream);
  DurationSample out{std::vector<double>(n), ModelTag::poisson, 1.0 / rate};
  for (auto& tau : out.durations) {
    tau = rng.exponential() / rate;
  }
  return out;
}

DurationSample simulate_acd(const AcdParams& params, std::size_t n, std::size_t burnin,
                            const RandomStream& stream) {
  params.validate();
  const double mean = params.stationary_mean();
  Rng rng(stream);
  DurationSample out{std::vector<double>(n), ModelTag::acd, mean};

  double psi = mean;
  double tau = 0.0;
  const std::size_t total = burnin + n;
  for (std::size_t k = 0; k < total; ++k) {
    if (k > 0) {
      psi = params.omega + params.alpha * tau + params.beta * psi;
    }
    tau = psi * params.innovation.draw(rng);
    if (k >= burnin) {
      out.durations[k - burnin] = tau;
    }
  }
  return out;
}

LmsdSample simulate_lmsd(const LmsdParams& params, std::size_t n, const RandomStream& stream,
                         std::size_t presample) {
  params.validate();
  if (n < 2) {
    throw InvalidArgument("simulate_lmsd: n must be >= 2");
  }
  LmsdSample out;
  out.presample = presample;
  out.gaussian_path = sample_fgn({params.hurst, n + presample}, stream.substream(0));
  Rng rng(stream.substream(1));
  out.sample = {std::vector<double>(n), ModelTag::lmsd, params.stationary_mean()};
  for (std::size_t k = 0; k < n; ++k) {
    out.sample.durations[k] = params.innovation.draw(rng) * params.sigma(out.gaussian_path[presample + k]);
  }
  return out;
}

DurationSample simulate_durations(const DurationModel& model, std::size_t n,
                                  const RandomStream& stream, std::size_t acd_burnin) {
  return std::visit(
      Overloaded{
          [&](const PoissonParams& p) { return simulate_poisson_durations(p.rate, n, stream); },
          [&](const AcdParams& p) { return simulate_acd(p, n, acd_burnin, stream); },
          [&](const LmsdParams& p) { return simulate_lmsd(p, n, stream).sample; },
      },
      model);
}

double stationary_mean(const DurationModel& model) {
  return std::visit(Overloaded{
                        [](const PoissonParams& p) {
                          if (!(p.rate > 0.0)) {
                            throw DomainError("Poisson rate must be positive");
                          }
                          return 1.0 / p.rate;
                        },
                        [](const AcdParams& p) { return p.stationary_mean(); },
                        [](const LmsdParams& p) { return p.stationary_mean(); },
                    },
                    model);
}

double acd_tail_moment(const AcdParams& params, double kappa) {
  const double a = params.alpha;
  const double b = params.beta;
  if (a == 0.0) {
    return std::pow(b, kappa);
  }
  const auto& eps = params.innovation;
  switch (eps.family()) {
    case InnovationFamily::unit_exponential:
      return exponential_tail_moment(a, b, kappa);
    case InnovationFamily::unit_pareto:
      return pareto_tail_moment(a, b, eps.parameter(), kappa);
    case InnovationFamily::unit_lognormal:
      if (eps.parameter() == 0.0) {
        return std::pow(a + b, kappa);
      }
      return lognormal_tail_moment(a, b, eps.parameter(), kappa);
  }
  return kInf;
}

double acd_tail_index(const AcdParams& params, double tol) {
  params.validate();
  double lo = kKappaLow;
  double hi = kKappaHigh;
  if (params.innovation.family() == InnovationFamily::unit_pareto) {
    // The moment blows up at the innovation tail index, so the root sits below it.
    hi = std::min(hi, params.innovation.parameter() * (1.0 - 1e-12));
  }
  auto excess = [&](double kappa) { return acd_tail_moment(params, kappa) - 1.0; };

  const double at_hi = excess(hi);
  if (!(at_hi >= 0.0)) {
    throw ClassificationError("no finite tail index in search range: E[(alpha eps + beta)^kappa] < 1");
  }
  if (excess(lo) >= 0.0) {
    throw ClassificationError("tail index below search range (alpha + beta too close to 1)");
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = excess(mid);
    if (std::abs(f) <= tol) {
      return mid;
    }
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      break;
    }
  }
  if (std::abs(excess(mid)) > tol) {
    throw NumericalError("tail index bisection could not reach the requested residual");
  }
  return mid;
}

SecondMomentCondition acd_second_moment_condition(const AcdParams& params) {
  const double a = params.alpha;
  const double b = params.beta;
  const double m2 = params.innovation.second_moment();
  if (!std::isfinite(m2)) {
    if (a == 0.0) {
      const double margin = 1.0 - b * b;
      return {margin > 0.0, margin};
    }
    return {false, -kInf};
  }
  const double margin = 1.0 - (a * a * m2 + 2.0 * a * b + b * b);
  return {margin > 0.0, margin};
}

double hermite_coefficient(const SigmaFunction& sigma, std::size_t j) {
  const auto& rule = gauss_hermite_rule(kHermiteNodes);
  return rule.expect([&](double y) {
    double prev = 1.0;
    double cur = y;
    if (j == 0) {
      return sigma(y);
    }
    for (std::size_t k = 1; k < j; ++k) {
      const double next = y * cur - static_cast<double>(k) * prev;
      prev = cur;
      cur = next;
    }
    return sigma(y) * cur;
  });
}

std::size_t hermite_rank(const SigmaFunction& sigma, double tol, std::size_t max_order) {
  for (std::size_t j = 1; j <= max_order; ++j) {
    if (std::abs(hermite_coefficient(sigma, j)) > tol) {
      return j;
    }
  }
  throw ClassificationError("Hermite rank undetermined (function may be a.s. constant)");
}

std::string to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::gaussian:
      return "gaussian";
    case LimitKind::fbm_increment:
      return "fbm_increment";
    case LimitKind::hermite:
      return "hermite";
    case LimitKind::stable:
      return "stable";
  }
  return "unknown";
}

std::string LimitFamily::describe() const {
  std::ostringstream out;
  switch (kind) {
    case LimitKind::gaussian:
      out << "gaussian";
      break;
    case LimitKind::fbm_increment:
      out << "fbm_increment(H=" << hurst << ")";
      break;
    case LimitKind::hermite:
      out << "hermite(q=" << order << ",H=" << hurst << ")";
      break;
    case LimitKind::stable:
      out << "stable(" << index << ")";
      break;
  }
  return out.str();
}

namespace {

TheoreticalLimit long_memory_limit(std::size_t rank, double hurst) {
  TheoreticalLimit limit;
  limit.gamma = 1.0 - static_cast<double>(rank) * (1.0 - hurst);
  limit.family.kind = rank == 1 ? LimitKind::fbm_increment : LimitKind::hermite;
  limit.family.order = rank;
  limit.family.hurst = hurst;
  return limit;
}

TheoreticalLimit classify_acd(const AcdParams& p) {
  p.validate();
  if (acd_second_moment_condition(p).holds) {
    return {0.5, {LimitKind::gaussian}, false};
  }
  const double kappa = acd_tail_index(p);
  if (!(kappa > 1.0 && kappa < 2.0)) {
    std::ostringstream msg;
    msg << "ACD with infinite variance but tail index " << kappa << " is outside (1, 2)";
    throw ClassificationError(msg.str());
  }
  TheoreticalLimit limit{1.0 / kappa, {LimitKind::stable}, false};
  limit.family.index = kappa;
  return limit;
}

TheoreticalLimit classify_lmsd(const LmsdParams& p) {
  p.validate();
  const std::size_t rank = hermite_rank(p.sigma);
  const double memory = static_cast<double>(rank) * (1.0 - p.hurst);
  if (p.innovation.has_finite_variance()) {
    if (nearly_equal(memory, 0.5)) {
      throw ClassificationError("boundary case, unclassified: rank * (1 - H) = 1/2");
    }
    if (memory < 0.5) {
      return long_memory_limit(rank, p.hurst);
    }
    return {0.5, {LimitKind::gaussian}, false};
  }
  const double tail = p.innovation.parameter();
  if (!(tail > 1.0 && tail < 2.0)) {
    throw ClassificationError("innovation tail index outside (1, 2)");
  }
  if (nearly_equal(memory, 1.0 / tail)) {
    throw ClassificationError("boundary case, unclassified: rank * (1 - H) = 1/alpha");
  }
  if (memory < 1.0 / tail) {
    return long_memory_limit(rank, p.hurst);
  }
  TheoreticalLimit limit{1.0 / tail, {LimitKind::stable}, false};
  limit.family.index = tail;
  return limit;
}

}  // namespace

TheoreticalLimit classify_limit(const DurationModel& model) {
  return std::visit(Overloaded{
                        [](const PoissonParams& p) {
                          if (!(p.rate > 0.0)) {
                            throw DomainError("Poisson rate must be positive");
                          }
                          return TheoreticalLimit{0.5, {LimitKind::gaussian}, true};
                        },
                        [](const AcdParams& p) { return classify_acd(p); },
                        [](const LmsdParams& p) { return classify_lmsd(p); },
                    },
                    model);
}

DurationSampler make_sampler(DurationModel model, std::size_t acd_burnin) {
  return [model = std::move(model), acd_burnin](std::size_t n, const RandomStream& stream) {
    return simulate_durations(model, n, stream, acd_burnin);
  };
}

}  // namespace driftlab
