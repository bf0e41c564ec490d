#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/durations.hpp"
#include "driftlab/price.hpp"

namespace driftlab {

/// Declarative description of one Monte Carlo scenario.
///
/// The on-disk form is a JSON object; see README.md for the schema. Unknown
/// keys are rejected with ConfigError. Model parameters are range-checked
/// later, when the model is used, so that e.g. a non-stationary ACD surfaces
/// as a model error rather than a config error.
struct ExperimentConfig {
  std::string scenario_id;
  DurationModel model = PoissonParams{};
  std::size_t acd_burnin = kDefaultAcdBurnin;
  double mu = 0.0;
  double sigma_e = 1.0;
  MicrostructureSpec micro;
  std::vector<std::size_t> n_grid = {1024, 2048, 4096, 8192, 16384};
  std::optional<std::size_t> replicates;
  std::uint64_t master_seed = 0;
  std::filesystem::path outputs = ".";
  std::optional<double> mu0_star;
  double spacing = 1.0;
  std::size_t threads = 1;
  double hill_fraction = 0.02;

  [[nodiscard]] std::size_t replicates_or(std::size_t fallback) const {
    return replicates.value_or(fallback);
  }
};

inline constexpr std::size_t kDefaultRateReplicates = 500;
inline constexpr std::size_t kDefaultTtestReplicates = 4000;
inline constexpr std::size_t kDefaultS2Replicates = 200;

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON rendering (sorted keys); parse_config(config_to_json(c))
/// reproduces c.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace driftlab
