#include "alaam/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alaam/errors.hpp"

namespace alaam {

AttributeData::AttributeData(std::vector<std::uint8_t> outcome,
                             std::vector<std::uint8_t> missing)
    : outcome_(std::move(outcome)), missing_(std::move(missing)) {
  if (outcome_.size() != missing_.size())
    throw DimensionError("outcome and missingness vectors differ in length");
  for (std::size_t i = 0; i < outcome_.size(); ++i) {
    if (outcome_[i] > 1 || missing_[i] > 1)
      throw ParseError("outcome and missingness entries must be 0 or 1");
    if (missing_[i]) outcome_[i] = 0;
  }
}

int AttributeData::missing_count() const {
  return static_cast<int>(
      std::count(missing_.begin(), missing_.end(), std::uint8_t{1}));
}

std::vector<int> AttributeData::missing_nodes() const {
  std::vector<int> nodes;
  for (int i = 0; i < node_count(); ++i)
    if (missing_[i]) nodes.push_back(i);
  return nodes;
}

double AttributeData::observed_mean() const {
  int count = 0;
  long sum = 0;
  for (int i = 0; i < node_count(); ++i) {
    if (!missing_[i]) {
      ++count;
      sum += outcome_[i];
    }
  }
  if (count == 0) throw PreconditionError("no observed outcomes");
  return static_cast<double>(sum) / count;
}

void AttributeData::add_covariate(const std::string& name,
                                  std::vector<double> values) {
  if (values.size() != outcome_.size())
    throw DimensionError("covariate '" + name + "' has " +
                         std::to_string(values.size()) + " rows, expected " +
                         std::to_string(outcome_.size()));
  if (has_covariate(name))
    throw ParseError("duplicate covariate '" + name + "'");
  names_.push_back(name);
  values_.push_back(std::move(values));
}

bool AttributeData::has_covariate(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& AttributeData::covariate(
    const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end())
    throw DimensionError("unknown covariate '" + name + "'");
  return values_[static_cast<std::size_t>(it - names_.begin())];
}

void AttributeData::standardize_covariate(const std::string& name) {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end())
    throw DimensionError("unknown covariate '" + name + "'");
  auto& v = values_[static_cast<std::size_t>(it - names_.begin())];
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0))
    throw PreconditionError("covariate '" + name +
                            "' has zero variance, cannot standardize");
  for (double& x : v) x = (x - mean) / sd;
}

ClampMask::ClampMask(std::vector<std::uint8_t> clamped)
    : clamped_(std::move(clamped)) {
  for (auto c : clamped_)
    if (c > 1) throw ParseError("clamp mask entries must be 0 or 1");
}

ClampMask ClampMask::none(int n) {
  return ClampMask(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
}

int ClampMask::free_count() const {
  return node_count() - static_cast<int>(std::count(
                            clamped_.begin(), clamped_.end(), std::uint8_t{1}));
}

std::vector<int> ClampMask::free_nodes() const {
  std::vector<int> nodes;
  for (int i = 0; i < node_count(); ++i)
    if (!clamped_[i]) nodes.push_back(i);
  return nodes;
}

}  // namespace alaam
