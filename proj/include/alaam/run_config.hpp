#pragma once

#include <map>
#include <string>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/evidence.hpp"
#include "alaam/graph.hpp"
#include "alaam/mechanism.hpp"
#include "alaam/model.hpp"
#include "alaam/prior.hpp"

namespace alaam {

// Sectioned key-value run description.  Parsing is strict: a section or key
// outside the fixed schema is an error naming the offending "section.key",
// never a silent ignore.  Values stay as raw text until a typed getter pulls
// them, so type errors also name the key.
class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::string& origin);
  static RunConfig load(const std::string& path);

  // Applies one "section.key=value" override (command-line --set).
  void set(const std::string& assignment);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section,
                             const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<std::string> get_list(const std::string& section,
                                    const std::string& key) const;

  // Paths in [data] resolve relative to the config file's directory.
  std::string resolve_path(const std::string& relative) const;

  // Canonical serialization: schema section order, keys sorted.
  std::string serialize() const;

  const std::string& origin() const { return origin_; }

 private:
  void check_key(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;  // config path, or "<set>" for synthetic configs
  std::string base_dir_;
};

// Everything the subcommands assemble from a config.
struct Problem {
  DirectedGraph graph;
  AttributeData data;
  ClampMask clamp;
  ModelSpec spec;
};

Problem load_problem(const RunConfig& config);

// Prior construction may need statistic moments at the prior center; those
// are simulated with the tuning settings from [sampler].
Prior build_prior(const RunConfig& config, const CompiledModel& model,
                  const AttributeData& data, const ClampMask& clamp);

MissingMechanism build_mechanism(const RunConfig& config);
RunSettings build_run_settings(const RunConfig& config);
SimulationSettings build_simulation_settings(const RunConfig& config);
PathSettings build_path_settings(const RunConfig& config);
OrdinateSettings build_ordinate_settings(const RunConfig& config);

// Summary burn-in and thinning applied to recorded draws, from [sampler].
int summary_burnin(const RunConfig& config);
int summary_thin(const RunConfig& config);

// Model list for multi-model evaluations: [evaluate] models (semicolon
// separated term lists) when present, else the single [model] terms entry.
std::vector<ModelSpec> evaluation_models(const RunConfig& config);

// Required theta vector from [sampler] theta; message names the key.
Eigen::VectorXd require_theta(const RunConfig& config, int dim);

}  // namespace alaam
