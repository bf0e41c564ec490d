#include "driftlab_cli/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "driftlab/config.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/experiments.hpp"

namespace driftlab::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> spacing;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config_path, "Scenario config (JSON)")->required();
  sub->add_option("--seed", opts.seed, "Override master_seed");
  sub->add_option("--out", opts.out_dir, "Output directory (overrides outputs)");
  sub->add_option("--spacing", opts.spacing, "Calendar spacing T (overrides spacing)");
  sub->add_option("--threads", opts.threads, "Worker threads (overrides threads)");
}

ExperimentConfig resolve(const Options& opts) {
  ExperimentConfig config = load_config(opts.config_path);
  if (opts.seed) {
    config.master_seed = *opts.seed;
  }
  if (opts.out_dir) {
    config.outputs = *opts.out_dir;
  }
  if (opts.spacing) {
    if (!(*opts.spacing > 0.0)) {
      throw ConfigError("--spacing must be positive");
    }
    config.spacing = *opts.spacing;
  }
  if (opts.threads) {
    if (*opts.threads < 1) {
      throw ConfigError("--threads must be >= 1");
    }
    config.threads = *opts.threads;
  }
  return config;
}

std::filesystem::path write_ticks(const ExperimentConfig& config, const CalendarPath& path) {
  std::filesystem::create_directories(config.outputs);
  const auto file = config.outputs / ("ticks_" + config.scenario_id + ".csv");
  std::ofstream out(file, std::ios::binary);
  write_ticks_csv(out, path.ticks);
  if (!out) {
    throw InvalidArgument("cannot write " + file.string());
  }
  return file;
}

std::filesystem::path write_returns(const ExperimentConfig& config, const CalendarPath& path) {
  const auto file = config.outputs / ("returns_" + config.scenario_id + ".csv");
  std::ofstream out(file, std::ios::binary);
  write_returns_csv(out, path.returns);
  if (!out) {
    throw InvalidArgument("cannot write " + file.string());
  }
  return file;
}

int run(const std::string& command, const Options& opts, std::ostream& out) {
  const ExperimentConfig config = resolve(opts);
  std::filesystem::path manifest;
  if (command == "classify") {
    const auto report = run_classify(config);
    const auto limit = classify_limit(config.model);
    out << "gamma=" << limit.gamma << " family=" << to_string(limit.family.kind) << " ("
        << limit.family.describe() << ")\n";
    manifest = write_run_outputs(report, config.outputs);
  } else if (command == "simulate") {
    const auto result = run_simulate(config);
    const auto ticks = write_ticks(config, result.path);
    const auto returns = write_returns(config, result.path);
    manifest = write_run_outputs(result.report, config.outputs, {ticks, returns});
  } else if (command == "rate") {
    const auto report = run_rate_experiment(config);
    out << "gamma_hat=" << report.value("gamma_hat") << " gamma_theory=" << report.value("gamma_theory") << '\n';
    manifest = write_run_outputs(report, config.outputs);
  } else if (command == "ttest") {
    const double mu0 = config.mu0_star ? *config.mu0_star : null_drift(config);
    const auto report = run_ttest_experiment(config, mu0);
    for (std::size_t n : config.n_grid) {
      out << "n=" << n << " rejection_rate=" << report.value("rejection_rate", n) << '\n';
    }
    manifest = write_run_outputs(report, config.outputs);
  } else {
    const auto report = run_s2_experiment(config);
    for (std::size_t n : config.n_grid) {
      out << "n=" << n << " s2_mean=" << report.value("s2_mean", n) << '\n';
    }
    manifest = write_run_outputs(report, config.outputs);
  }
  out << "manifest: " << manifest.string() << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo harness for transaction-time duration models and the drift t-test", "driftlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  Options opts;
  const char* commands[][2] = {
      {"simulate", "Simulate one tick path and its calendar returns"},
      {"classify", "Print the predicted rate and limit family"},
      {"rate", "Estimate the partial-sum scaling exponent"},
      {"ttest", "Rejection rates of the drift t-test across n"},
      {"s2", "Behaviour of the return sample variance across n"},
  };
  for (const auto& [name, help] : commands) {
    add_common(app.add_subcommand(name, help), opts);
  }

  if (argc >= 2) {
    const std::string first = argv[1];
    const bool known = std::any_of(std::begin(commands), std::end(commands),
                                   [&](const auto& c) { return first == c[0]; });
    if (!known && !first.starts_with("-")) {
      err << "error: unknown subcommand '" << first << "'\n\n" << app.help();
      return kExitConfig;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opts, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace driftlab::cli
