#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/config.hpp"
#include "driftlab/durations.hpp"
#include "driftlab/price.hpp"
#include "driftlab/random.hpp"

namespace driftlab {

std::string library_version();

/// One line of the long-format report. n is empty for scenario-level metrics;
/// std_error is NaN when the metric has no standard error.
struct ReportRow {
  std::optional<std::size_t> n;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
};

struct ExperimentReport {
  std::string scenario_id;
  std::uint64_t master_seed = 0;
  std::string kind;
  std::vector<ReportRow> rows;
  std::string config_json;
  double wall_seconds = 0.0;

  /// First row with this metric and n; throws InvalidArgument if absent.
  [[nodiscard]] const ReportRow& row(const std::string& metric,
                                     std::optional<std::size_t> n = std::nullopt) const;
  [[nodiscard]] bool has(const std::string& metric,
                         std::optional<std::size_t> n = std::nullopt) const;
  [[nodiscard]] double value(const std::string& metric,
                             std::optional<std::size_t> n = std::nullopt) const {
    return row(metric, n).value;
  }
};

/// A price path long enough to cover `count` calendar returns.
struct CalendarPath {
  TickSeries ticks;
  std::vector<double> returns;
};

/// Durations come from stream.substream(0) and price shocks from
/// stream.substream(1). The event budget starts at 1.25 lambda count T + 64 and
/// doubles until the path covers count * T.
CalendarPath simulate_calendar_path(const ExperimentConfig& config, std::size_t count,
                                    const RandomStream& stream);

/// mu0* = lambda mu T, the drift of calendar returns when the null holds.
double null_drift(const ExperimentConfig& config);

ExperimentReport run_classify(const ExperimentConfig& config);

/// One calendar path of max(n_grid) returns. Also returns the ticks and
/// returns for CSV export.
struct SimulationResult {
  ExperimentReport report;
  CalendarPath path;
};
SimulationResult run_simulate(const ExperimentConfig& config);

ExperimentReport run_rate_experiment(const ExperimentConfig& config);
ExperimentReport run_ttest_experiment(const ExperimentConfig& config, double mu0_star);
ExperimentReport run_s2_experiment(const ExperimentConfig& config);

/// Header scenario_id,master_seed,n,metric,value,std_error then one line per row.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes report_<id>.csv (plus any extra files already on disk listed in
/// `extra_files`) and manifest_<id>.json into `dir`. Returns the manifest path.
std::filesystem::path write_run_outputs(const ExperimentReport& report,
                                        const std::filesystem::path& dir,
                                        const std::vector<std::filesystem::path>& extra_files = {});

}  // namespace driftlab
