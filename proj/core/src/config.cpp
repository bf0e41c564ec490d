#include "driftlab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "driftlab/errors.hpp"
#include "json.hpp"

namespace driftlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + key + "' in " + where);
  }
  return obj.at(key);
}

double as_number(const json& value, const std::string& what) {
  if (!value.is_number()) {
    throw ConfigError(what + " must be a number");
  }
  return value.get<double>();
}

std::size_t as_count(const json& value, const std::string& what) {
  if (!value.is_number_unsigned()) {
    throw ConfigError(what + " must be a nonnegative integer");
  }
  return value.get<std::size_t>();
}

std::string as_string(const json& value, const std::string& what) {
  if (!value.is_string()) {
    throw ConfigError(what + " must be a string");
  }
  return value.get<std::string>();
}

void require_object(const json& value, const std::string& what) {
  if (!value.is_object()) {
    throw ConfigError(what + " must be an object");
  }
}

InnovationSpec parse_innovation(const json& value) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "exponential") {
      return InnovationSpec::exponential();
    }
    throw ConfigError("innovation '" + name + "' needs parameters; use an object");
  }
  require_object(value, "innovation");
  const auto family = as_string(require(value, "family", "innovation"), "innovation.family");
  if (family == "exponential") {
    reject_unknown(value, {"family"}, "innovation");
    return InnovationSpec::exponential();
  }
  if (family == "pareto") {
    reject_unknown(value, {"family", "tail_index"}, "innovation");
    return InnovationSpec::pareto(as_number(require(value, "tail_index", "innovation"), "tail_index"));
  }
  if (family == "lognormal") {
    reject_unknown(value, {"family", "log_sd"}, "innovation");
    return InnovationSpec::lognormal(as_number(require(value, "log_sd", "innovation"), "log_sd"));
  }
  throw ConfigError("unknown innovation family '" + family + "'");
}

json innovation_to_json(const InnovationSpec& spec) {
  switch (spec.family()) {
    case InnovationFamily::unit_exponential:
      return {{"family", "exponential"}};
    case InnovationFamily::unit_pareto:
      return {{"family", "pareto"}, {"tail_index", spec.parameter()}};
    case InnovationFamily::unit_lognormal:
      return {{"family", "lognormal"}, {"log_sd", spec.parameter()}};
  }
  return {};
}

SigmaFunction parse_sigma(const json& value) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "exponential") {
      return SigmaFunction::exponential();
    }
    if (name == "square") {
      return SigmaFunction::square();
    }
    throw ConfigError("unknown sigma '" + name + "'");
  }
  require_object(value, "sigma");
  reject_unknown(value, {"kind", "coeffs"}, "sigma");
  const auto kind = as_string(require(value, "kind", "sigma"), "sigma.kind");
  if (kind == "exponential") {
    return SigmaFunction::exponential();
  }
  if (kind == "square") {
    return SigmaFunction::square();
  }
  if (kind == "shifted_polynomial") {
    const auto& coeffs = require(value, "coeffs", "sigma");
    if (!coeffs.is_array()) {
      throw ConfigError("sigma.coeffs must be an array");
    }
    std::vector<double> c;
    for (const auto& x : coeffs) {
      c.push_back(as_number(x, "sigma.coeffs entry"));
    }
    return SigmaFunction::shifted_polynomial(std::move(c));
  }
  throw ConfigError("unknown sigma kind '" + kind + "'");
}

json sigma_to_json(const SigmaFunction& sigma) {
  switch (sigma.kind()) {
    case SigmaKind::exponential:
      return "exponential";
    case SigmaKind::square:
      return "square";
    case SigmaKind::shifted_polynomial:
      return {{"kind", "shifted_polynomial"}, {"coeffs", sigma.coefficients()}};
  }
  return {};
}

void parse_model(const json& value, ExperimentConfig& config) {
  require_object(value, "model");
  const auto type = as_string(require(value, "type", "model"), "model.type");
  if (type == "poisson") {
    reject_unknown(value, {"type", "rate"}, "model");
    config.model = PoissonParams{as_number(require(value, "rate", "model"), "model.rate")};
  } else if (type == "acd") {
    reject_unknown(value, {"type", "omega", "alpha", "beta", "innovation", "burnin"}, "model");
    AcdParams p;
    p.omega = as_number(require(value, "omega", "model"), "model.omega");
    p.alpha = as_number(require(value, "alpha", "model"), "model.alpha");
    p.beta = as_number(require(value, "beta", "model"), "model.beta");
    if (value.contains("innovation")) {
      p.innovation = parse_innovation(value.at("innovation"));
    }
    if (value.contains("burnin")) {
      config.acd_burnin = as_count(value.at("burnin"), "model.burnin");
    }
    config.model = p;
  } else if (type == "lmsd") {
    reject_unknown(value, {"type", "hurst", "sigma", "innovation"}, "model");
    LmsdParams p;
    p.hurst = as_number(require(value, "hurst", "model"), "model.hurst");
    if (value.contains("sigma")) {
      p.sigma = parse_sigma(value.at("sigma"));
    }
    if (value.contains("innovation")) {
      p.innovation = parse_innovation(value.at("innovation"));
    }
    config.model = p;
  } else {
    throw ConfigError("unknown model type '" + type + "'");
  }
}

MicrostructureSpec parse_micro(const json& value) {
  if (value.is_string() && value.get<std::string>() == "none") {
    return MicrostructureSpec::none();
  }
  require_object(value, "micro");
  const auto kind = as_string(require(value, "kind", "micro"), "micro.kind");
  if (kind == "none") {
    reject_unknown(value, {"kind"}, "micro");
    return MicrostructureSpec::none();
  }
  if (kind == "fractional_leverage") {
    reject_unknown(value, {"kind", "delta", "truncation"}, "micro");
    const double delta = as_number(require(value, "delta", "micro"), "micro.delta");
    std::size_t truncation = 512;
    if (value.contains("truncation")) {
      truncation = as_count(value.at("truncation"), "micro.truncation");
    }
    return MicrostructureSpec::fractional_leverage(delta, truncation);
  }
  if (kind == "iid_noise") {
    reject_unknown(value, {"kind", "sd"}, "micro");
    return MicrostructureSpec::iid_noise(as_number(require(value, "sd", "micro"), "micro.sd"));
  }
  throw ConfigError("unknown micro kind '" + kind + "'");
}

json micro_to_json(const MicrostructureSpec& micro) {
  switch (micro.kind) {
    case MicrostructureKind::none:
      return {{"kind", "none"}};
    case MicrostructureKind::fractional_leverage:
      return {{"kind", "fractional_leverage"}, {"delta", micro.delta}, {"truncation", micro.truncation}};
    case MicrostructureKind::iid_noise:
      return {{"kind", "iid_noise"}, {"sd", micro.sd}};
  }
  return {};
}

bool filesystem_safe(const std::string& id) {
  if (id.empty() || id == "." || id == "..") {
    return false;
  }
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) {
      return false;
    }
  }
  return true;
}

void check_leverage(const ExperimentConfig& config) {
  if (config.micro.kind != MicrostructureKind::fractional_leverage) {
    return;
  }
  const auto* lmsd = std::get_if<LmsdParams>(&config.model);
  if (lmsd == nullptr) {
    throw ConfigError("fractional_leverage noise needs an lmsd duration model");
  }
  const double memory = lmsd->hurst - 0.5;
  if (!(config.micro.delta > memory)) {
    std::ostringstream msg;
    msg << "fractional_leverage delta " << config.micro.delta
        << " must exceed the duration memory parameter H - 1/2 = " << memory;
    throw ConfigError(msg.str());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root,
                 {"scenario_id", "model", "mu", "sigma_e", "micro", "n_grid", "replicates",
                  "master_seed", "outputs", "mu0_star", "spacing", "threads", "hill_fraction"},
                 "config");

  ExperimentConfig config;
  config.scenario_id = as_string(require(root, "scenario_id", "config"), "scenario_id");
  if (!filesystem_safe(config.scenario_id)) {
    throw ConfigError("scenario_id must be nonempty and use only [A-Za-z0-9_.-]");
  }
  parse_model(require(root, "model", "config"), config);

  if (root.contains("mu")) {
    config.mu = as_number(root.at("mu"), "mu");
  }
  if (root.contains("sigma_e")) {
    config.sigma_e = as_number(root.at("sigma_e"), "sigma_e");
    if (!(config.sigma_e >= 0.0)) {
      throw ConfigError("sigma_e must be >= 0");
    }
  }
  if (root.contains("micro")) {
    config.micro = parse_micro(root.at("micro"));
  }
  if (root.contains("n_grid")) {
    const auto& grid = root.at("n_grid");
    if (!grid.is_array() || grid.empty()) {
      throw ConfigError("n_grid must be a nonempty array");
    }
    config.n_grid.clear();
    for (const auto& n : grid) {
      config.n_grid.push_back(as_count(n, "n_grid entry"));
    }
  }
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] == 0 || (i > 0 && config.n_grid[i] <= config.n_grid[i - 1])) {
      throw ConfigError("n_grid must be positive and strictly increasing");
    }
  }
  if (root.contains("replicates")) {
    config.replicates = as_count(root.at("replicates"), "replicates");
    if (*config.replicates < 1) {
      throw ConfigError("replicates must be >= 1");
    }
  }
  if (root.contains("master_seed")) {
    config.master_seed = as_count(root.at("master_seed"), "master_seed");
  }
  if (root.contains("outputs")) {
    config.outputs = as_string(root.at("outputs"), "outputs");
  }
  if (root.contains("mu0_star")) {
    config.mu0_star = as_number(root.at("mu0_star"), "mu0_star");
  }
  if (root.contains("spacing")) {
    config.spacing = as_number(root.at("spacing"), "spacing");
    if (!(config.spacing > 0.0)) {
      throw ConfigError("spacing must be positive");
    }
  }
  if (root.contains("threads")) {
    config.threads = as_count(root.at("threads"), "threads");
    if (config.threads < 1) {
      throw ConfigError("threads must be >= 1");
    }
  }
  if (root.contains("hill_fraction")) {
    config.hill_fraction = as_number(root.at("hill_fraction"), "hill_fraction");
    if (!(config.hill_fraction > 0.0 && config.hill_fraction < 1.0)) {
      throw ConfigError("hill_fraction must lie in (0, 1)");
    }
  }
  check_leverage(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  root["scenario_id"] = config.scenario_id;
  json model;
  if (const auto* p = std::get_if<PoissonParams>(&config.model)) {
    model = {{"type", "poisson"}, {"rate", p->rate}};
  } else if (const auto* a = std::get_if<AcdParams>(&config.model)) {
    model = {{"type", "acd"},
             {"omega", a->omega},
             {"alpha", a->alpha},
             {"beta", a->beta},
             {"innovation", innovation_to_json(a->innovation)},
             {"burnin", config.acd_burnin}};
  } else if (const auto* l = std::get_if<LmsdParams>(&config.model)) {
    model = {{"type", "lmsd"},
             {"hurst", l->hurst},
             {"sigma", sigma_to_json(l->sigma)},
             {"innovation", innovation_to_json(l->innovation)}};
  }
  root["model"] = model;
  root["mu"] = config.mu;
  root["sigma_e"] = config.sigma_e;
  root["micro"] = micro_to_json(config.micro);
  root["n_grid"] = config.n_grid;
  if (config.replicates) {
    root["replicates"] = *config.replicates;
  }
  root["master_seed"] = config.master_seed;
  root["outputs"] = config.outputs.string();
  if (config.mu0_star) {
    root["mu0_star"] = *config.mu0_star;
  }
  root["spacing"] = config.spacing;
  root["threads"] = config.threads;
  root["hill_fraction"] = config.hill_fraction;
  return root.dump(2);
}

}  // namespace driftlab
