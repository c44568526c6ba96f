#include "alaam/run_config.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "alaam/errors.hpp"
#include "alaam/io.hpp"
#include "alaam/simulator.hpp"

namespace alaam {

namespace {

const std::vector<std::string> kSectionOrder = {"data",    "model",   "prior",
                                                "missing", "sampler", "evaluate"};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"data",
       {"graph", "attributes", "clamp", "one-based", "undirected",
        "outcome-column"}},
      {"model", {"terms"}},
      {"prior", {"type", "mean", "sd", "lambda", "center"}},
      {"missing", {"mode", "phi", "prior-mean", "prior-sd", "step-sd"}},
      {"sampler",
       {"iterations", "burnin", "thin", "chains", "seed", "c", "aux-sweeps",
        "rule", "systematic", "pilot", "tuning-draws", "tuning-burnin",
        "tuning-thin", "theta", "theta-start", "draws", "divergence-limit"}},
      {"evaluate",
       {"battery", "bridges", "bridge-samples", "bridge-burnin", "bridge-thin",
        "lambda-grid", "phi1-grid", "numerator-draws", "proposal-draws",
        "draws-per-proposal", "models"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_tokens(const std::string& s,
                                      const char* separators) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : s) {
    if (std::strchr(separators, ch)) {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  if (!current.empty()) out.push_back(current);
  for (auto& t : out) t = trim(t);
  return out;
}

Eigen::Vector3d vector3_value(const RunConfig& config,
                              const std::string& section,
                              const std::string& key,
                              const Eigen::Vector3d& fallback) {
  if (!config.has(section, key)) return fallback;
  const std::vector<double> v = config.get_doubles(section, key);
  if (v.size() == 1) return Eigen::Vector3d::Constant(v[0]);
  if (v.size() != 3)
    throw ConfigError(section + "." + key + " needs 1 or 3 numbers");
  return {v[0], v[1], v[2]};
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig config;
  config.origin_ = origin;
  config.base_dir_ =
      std::filesystem::path(origin).parent_path().string();

  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(line_number));
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section))
        throw ConfigError("unknown section: [" + section + "]");
      config.sections_[section];
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_number));
    if (section.empty())
      throw ConfigError("key outside any section at line " +
                        std::to_string(line_number));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    config.check_key(section, key);
    if (config.sections_[section].count(key))
      throw ConfigError("duplicate key: " + section + "." + key);
    config.sections_[section][key] = value;
  }
  return config;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

void RunConfig::set(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: " +
                      assignment);
  const std::string target = trim(assignment.substr(0, eq));
  const std::size_t dot = target.find('.');
  if (dot == std::string::npos)
    throw ConfigError("override must look like section.key=value: " +
                      assignment);
  const std::string section = target.substr(0, dot);
  const std::string key = target.substr(dot + 1);
  check_key(section, key);
  sections_[section][key] = trim(assignment.substr(eq + 1));
}

void RunConfig::check_key(const std::string& section,
                          const std::string& key) const {
  const auto it = schema().find(section);
  if (it == schema().end())
    throw ConfigError("unknown section: [" + section + "]");
  if (!it->second.count(key))
    throw ConfigError("unknown key: " + section + "." + key);
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string RunConfig::get_string(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  check_key(section, key);
  const auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  const auto kt = it->second.find(key);
  return kt == it->second.end() ? fallback : kt->second;
}

std::string RunConfig::require_string(const std::string& section,
                                      const std::string& key) const {
  if (!has(section, key)) throw ConfigError(section + "." + key + " required");
  return sections_.at(section).at(key);
}

bool RunConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) {
    check_key(section, key);
    return fallback;
  }
  const std::string v = sections_.at(section).at(key);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(section + "." + key + " is not a boolean: " + v);
}

long long RunConfig::get_int(const std::string& section,
                             const std::string& key,
                             long long fallback) const {
  if (!has(section, key)) {
    check_key(section, key);
    return fallback;
  }
  const std::string v = sections_.at(section).at(key);
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError(section + "." + key + " is not an integer: " + v);
  }
}

double RunConfig::get_double(const std::string& section,
                             const std::string& key, double fallback) const {
  if (!has(section, key)) {
    check_key(section, key);
    return fallback;
  }
  const std::string v = sections_.at(section).at(key);
  try {
    std::size_t used = 0;
    const double parsed = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError(section + "." + key + " is not a number: " + v);
  }
}

std::vector<double> RunConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
  check_key(section, key);
  std::vector<double> out;
  if (!has(section, key)) return out;
  for (const std::string& token :
       split_tokens(sections_.at(section).at(key), " \t,")) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError(section + "." + key + " has a non-numeric entry: " +
                        token);
    }
  }
  return out;
}

std::vector<std::string> RunConfig::get_list(const std::string& section,
                                             const std::string& key) const {
  check_key(section, key);
  if (!has(section, key)) return {};
  return split_tokens(sections_.at(section).at(key), ",");
}

std::string RunConfig::resolve_path(const std::string& relative) const {
  std::filesystem::path p(relative);
  if (p.is_absolute() || base_dir_.empty()) return relative;
  return (std::filesystem::path(base_dir_) / p).string();
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const std::string& section : kSectionOrder) {
    const auto it = sections_.find(section);
    if (it == sections_.end() || it->second.empty()) continue;
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, value] : it->second)
      out << key << " = " << value << '\n';
  }
  return out.str();
}

Problem load_problem(const RunConfig& config) {
  GraphReadOptions graph_options;
  graph_options.one_based = config.get_bool("data", "one-based", false);
  graph_options.undirected = config.get_bool("data", "undirected", false);

  DirectedGraph graph = load_graph(
      config.resolve_path(config.require_string("data", "graph")),
      graph_options);

  AttributeReadOptions attr_options;
  attr_options.outcome_column =
      config.get_string("data", "outcome-column", "y");
  attr_options.expected_n = graph.node_count();
  AttributeData data = load_attributes(
      config.resolve_path(config.require_string("data", "attributes")),
      attr_options);
  require_same_node_count(graph, data);

  ClampMask clamp = ClampMask::none(graph.node_count());
  if (config.has("data", "clamp")) {
    const std::vector<int> nodes = load_node_list(
        config.resolve_path(config.require_string("data", "clamp")),
        graph_options.one_based);
    clamp = clamp_from_nodes(nodes, data);
  }

  const std::vector<std::string> terms = config.get_list("model", "terms");
  if (terms.empty()) throw ConfigError("model.terms required");
  ModelSpec spec = ModelSpec::parse(terms);
  const std::vector<std::string> problems = validate_spec(spec, data);
  if (!problems.empty()) {
    std::string message = "invalid model:";
    for (const std::string& p : problems) message += " " + p + ";";
    message.pop_back();
    throw ConfigError(message);
  }
  return Problem{std::move(graph), std::move(data), std::move(clamp),
                 std::move(spec)};
}

Prior build_prior(const RunConfig& config, const CompiledModel& model,
                  const AttributeData& data, const ClampMask& clamp) {
  const int p = model.parameter_count();
  const std::string type = config.get_string("prior", "type", "flat");

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  const std::string center = config.get_string("prior", "center", "zero");
  if (center == "data") {
    const double ybar = data.observed_mean();
    const double clamped =
        std::min(std::max(ybar, 1e-6), 1.0 - 1e-6);
    const double logit = std::log(clamped / (1.0 - clamped));
    for (std::size_t k = 0; k < model.spec().terms.size(); ++k)
      if (model.spec().terms[k].kind == EffectKind::intercept)
        mean[static_cast<Eigen::Index>(k)] = logit;
  } else if (center != "zero") {
    throw ConfigError("prior.center must be zero or data");
  }
  if (config.has("prior", "mean")) {
    const std::vector<double> m = config.get_doubles("prior", "mean");
    if (m.size() == 1)
      mean.setConstant(m[0]);
    else if (static_cast<int>(m.size()) == p)
      for (int k = 0; k < p; ++k) mean[k] = m[static_cast<std::size_t>(k)];
    else
      throw ConfigError("prior.mean needs 1 or " + std::to_string(p) +
                        " numbers");
  }

  if (type == "flat") return Prior::flat(p);

  if (type == "normal") {
    std::vector<double> sd = config.get_doubles("prior", "sd");
    if (sd.empty()) sd = {5.0};
    Eigen::VectorXd sdv(p);
    if (sd.size() == 1)
      sdv.setConstant(sd[0]);
    else if (static_cast<int>(sd.size()) == p)
      for (int k = 0; k < p; ++k) sdv[k] = sd[static_cast<std::size_t>(k)];
    else
      throw ConfigError("prior.sd needs 1 or " + std::to_string(p) +
                        " numbers");
    for (int k = 0; k < p; ++k)
      if (!(sdv[k] > 0)) throw ConfigError("prior.sd must be positive");
    return Prior::normal(mean, sdv.array().square().matrix().asDiagonal());
  }

  if (type == "normal-scaled") {
    const double lambda = config.get_double("prior", "lambda", 0);
    if (!(lambda > 0)) throw ConfigError("prior.lambda required and positive");
    std::vector<std::uint8_t> start = data.outcome();
    for (int i = 0; i < data.node_count(); ++i)
      if (data.missing()[i]) start[i] = 2;
    const StatCovariance sc = estimate_stat_covariance(
        model, mean, static_cast<int>(config.get_int("sampler", "tuning-draws", 1000)),
        static_cast<int>(config.get_int("sampler", "tuning-burnin", 100)),
        static_cast<int>(config.get_int("sampler", "tuning-thin", 1)),
        mix_seed(static_cast<std::uint64_t>(config.get_int("sampler", "seed", 1)), 5),
        &clamp, &start);
    return Prior::normal_scaled(mean, lambda, sc.covariance);
  }

  throw ConfigError("prior.type must be flat, normal, or normal-scaled");
}

MissingMechanism build_mechanism(const RunConfig& config) {
  const std::string mode = config.get_string("missing", "mode", "mar");
  if (mode == "mar") return MissingMechanism::mar();
  if (mode == "mnar-fixed") {
    if (!config.has("missing", "phi"))
      throw ConfigError("missing.phi required for mnar-fixed");
    return MissingMechanism::mnar_fixed(
        vector3_value(config, "missing", "phi", Eigen::Vector3d::Zero()));
  }
  if (mode == "mnar-estimated") {
    MissingMechanism m = MissingMechanism::mnar_estimated(
        vector3_value(config, "missing", "prior-mean",
                      Eigen::Vector3d::Zero()),
        vector3_value(config, "missing", "prior-sd",
                      Eigen::Vector3d::Constant(5.0)),
        vector3_value(config, "missing", "step-sd",
                      Eigen::Vector3d::Constant(0.2)));
    m.phi = vector3_value(config, "missing", "phi", Eigen::Vector3d::Zero());
    return m;
  }
  throw ConfigError("missing.mode must be mar, mnar-fixed, or mnar-estimated");
}

RunSettings build_run_settings(const RunConfig& config) {
  RunSettings settings;
  settings.iterations =
      static_cast<int>(config.get_int("sampler", "iterations", 10000));
  settings.auxiliary.sweeps =
      static_cast<int>(config.get_int("sampler", "aux-sweeps", 50));
  const std::string rule = config.get_string("sampler", "rule", "gibbs");
  if (rule == "gibbs")
    settings.auxiliary.rule = UpdateRule::gibbs;
  else if (rule == "metropolis")
    settings.auxiliary.rule = UpdateRule::metropolis;
  else
    throw ConfigError("sampler.rule must be gibbs or metropolis");
  settings.auxiliary.systematic_scan =
      config.get_bool("sampler", "systematic", false);
  settings.tuning_draws =
      static_cast<int>(config.get_int("sampler", "tuning-draws", 1000));
  settings.tuning_burnin_sweeps =
      static_cast<int>(config.get_int("sampler", "tuning-burnin", 100));
  settings.tuning_thin_sweeps =
      static_cast<int>(config.get_int("sampler", "tuning-thin", 1));
  settings.proposal_c = config.get_double("sampler", "c", 1.0);
  settings.pilot_iterations =
      static_cast<int>(config.get_int("sampler", "pilot", 0));
  settings.seed =
      static_cast<std::uint64_t>(config.get_int("sampler", "seed", 1));
  settings.chains = static_cast<int>(config.get_int("sampler", "chains", 1));
  settings.divergence_limit =
      config.get_double("sampler", "divergence-limit", 1e3);
  if (config.has("sampler", "theta-start")) {
    const std::vector<double> t = config.get_doubles("sampler", "theta-start");
    Eigen::VectorXd v(static_cast<Eigen::Index>(t.size()));
    for (std::size_t k = 0; k < t.size(); ++k)
      v[static_cast<Eigen::Index>(k)] = t[k];
    settings.theta_start = v;
  }
  return settings;
}

SimulationSettings build_simulation_settings(const RunConfig& config) {
  SimulationSettings settings;
  settings.burnin = static_cast<int>(config.get_int("sampler", "burnin", 100));
  settings.thin = static_cast<int>(config.get_int("sampler", "thin", 1));
  settings.draws = static_cast<int>(config.get_int("sampler", "draws", 1000));
  const std::string rule = config.get_string("sampler", "rule", "gibbs");
  if (rule == "gibbs")
    settings.rule = UpdateRule::gibbs;
  else if (rule == "metropolis")
    settings.rule = UpdateRule::metropolis;
  else
    throw ConfigError("sampler.rule must be gibbs or metropolis");
  settings.systematic_scan = config.get_bool("sampler", "systematic", false);
  settings.seed =
      static_cast<std::uint64_t>(config.get_int("sampler", "seed", 1));
  return settings;
}

PathSettings build_path_settings(const RunConfig& config) {
  PathSettings settings;
  settings.bridges =
      static_cast<int>(config.get_int("evaluate", "bridges", 20));
  settings.samples =
      static_cast<int>(config.get_int("evaluate", "bridge-samples", 100));
  settings.burnin_sweeps =
      static_cast<int>(config.get_int("evaluate", "bridge-burnin", 10));
  settings.thin_sweeps =
      static_cast<int>(config.get_int("evaluate", "bridge-thin", 1));
  settings.seed = mix_seed(
      static_cast<std::uint64_t>(config.get_int("sampler", "seed", 1)), 17);
  return settings;
}

OrdinateSettings build_ordinate_settings(const RunConfig& config) {
  OrdinateSettings settings;
  settings.posterior_burnin = summary_burnin(config);
  settings.posterior_thin = summary_thin(config);
  settings.numerator_draws =
      static_cast<int>(config.get_int("evaluate", "numerator-draws", 1000));
  settings.proposal_draws =
      static_cast<int>(config.get_int("evaluate", "proposal-draws", 200));
  settings.draws_per_proposal = static_cast<int>(
      config.get_int("evaluate", "draws-per-proposal", 10));
  settings.aux_burnin_sweeps =
      static_cast<int>(config.get_int("sampler", "aux-sweeps", 50));
  settings.seed = mix_seed(
      static_cast<std::uint64_t>(config.get_int("sampler", "seed", 1)), 19);
  return settings;
}

int summary_burnin(const RunConfig& config) {
  return static_cast<int>(config.get_int("sampler", "burnin", 0));
}

int summary_thin(const RunConfig& config) {
  return static_cast<int>(config.get_int("sampler", "thin", 1));
}

std::vector<ModelSpec> evaluation_models(const RunConfig& config) {
  std::vector<ModelSpec> models;
  if (config.has("evaluate", "models")) {
    const std::string raw = config.require_string("evaluate", "models");
    for (const std::string& entry : split_tokens(raw, ";")) {
      const std::vector<std::string> names = split_tokens(entry, ",");
      if (names.empty()) continue;
      models.push_back(ModelSpec::parse(names));
    }
  }
  if (models.empty()) {
    const std::vector<std::string> terms = config.get_list("model", "terms");
    if (terms.empty()) throw ConfigError("model.terms required");
    models.push_back(ModelSpec::parse(terms));
  }
  return models;
}

Eigen::VectorXd require_theta(const RunConfig& config, int dim) {
  if (!config.has("sampler", "theta"))
    throw ConfigError("sampler.theta required");
  const std::vector<double> t = config.get_doubles("sampler", "theta");
  if (static_cast<int>(t.size()) != dim)
    throw ConfigError("sampler.theta has " + std::to_string(t.size()) +
                      " entries but the model has " + std::to_string(dim) +
                      " terms");
  Eigen::VectorXd v(dim);
  for (int k = 0; k < dim; ++k) v[k] = t[static_cast<std::size_t>(k)];
  return v;
}

}  // namespace alaam
