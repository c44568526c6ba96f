#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace alaam {

// Node-level data: a binary outcome vector with a missingness indicator,
// plus named real-valued covariates.  Outcome entries with missing[i] == 1
// hold a placeholder 0 and carry no information.
class AttributeData {
 public:
  AttributeData() = default;
  AttributeData(std::vector<std::uint8_t> outcome,
                std::vector<std::uint8_t> missing);

  int node_count() const { return static_cast<int>(outcome_.size()); }

  const std::vector<std::uint8_t>& outcome() const { return outcome_; }
  const std::vector<std::uint8_t>& missing() const { return missing_; }

  int missing_count() const;
  int observed_count() const { return node_count() - missing_count(); }
  std::vector<int> missing_nodes() const;

  // Mean outcome over observed nodes.  Throws if none are observed.
  double observed_mean() const;

  void add_covariate(const std::string& name, std::vector<double> values);
  bool has_covariate(const std::string& name) const;
  const std::vector<double>& covariate(const std::string& name) const;
  const std::vector<std::string>& covariate_names() const { return names_; }

  // Rescales a covariate to zero mean and unit variance in place.
  void standardize_covariate(const std::string& name);

 private:
  std::vector<std::uint8_t> outcome_;
  std::vector<std::uint8_t> missing_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> values_;
};

// Nodes held fixed during simulation.  Clamped nodes must be observed.
class ClampMask {
 public:
  ClampMask() = default;
  explicit ClampMask(std::vector<std::uint8_t> clamped);

  static ClampMask none(int n);

  int node_count() const { return static_cast<int>(clamped_.size()); }
  bool clamped(int i) const { return clamped_[i] != 0; }
  const std::vector<std::uint8_t>& mask() const { return clamped_; }

  int free_count() const;
  std::vector<int> free_nodes() const;

 private:
  std::vector<std::uint8_t> clamped_;
};

}  // namespace alaam
