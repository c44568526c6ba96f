#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "alaam/graph.hpp"
#include "alaam/model.hpp"

namespace alaam {

// A model bound to its graph and covariate columns.  Change statistics are
// the workhorse: for node i they give z(y with y_i=1) - z(y with y_i=0),
// which never depends on the current y_i.
class CompiledModel {
 public:
  CompiledModel(const DirectedGraph& g, const ModelSpec& spec,
                const AttributeData& data);

  int parameter_count() const { return static_cast<int>(bound_.size()); }
  const DirectedGraph& graph() const { return *graph_; }
  const ModelSpec& spec() const { return spec_; }

  Eigen::VectorXd statistics(std::span<const std::uint8_t> y) const;

  void change_statistics(std::span<const std::uint8_t> y, int node,
                         Eigen::VectorXd& out) const;
  Eigen::VectorXd change_statistics(std::span<const std::uint8_t> y,
                                    int node) const;

  // Row i holds the change statistics of the independent terms at node i;
  // dependence columns are zero.  This is the design matrix of the nested
  // logistic regression.
  Eigen::MatrixXd independent_design() const;

  bool term_is_dependence(int k) const {
    return bound_[static_cast<std::size_t>(k)].term.is_dependence();
  }

 private:
  struct BoundTerm {
    EffectTerm term;
    const double* cov = nullptr;  // resolved covariate column or null
  };

  const DirectedGraph* graph_;
  ModelSpec spec_;
  std::vector<BoundTerm> bound_;
};

// Convenience wrappers that compile on the fly.
Eigen::VectorXd compute_statistics(std::span<const std::uint8_t> y,
                                   const DirectedGraph& g,
                                   const ModelSpec& spec,
                                   const AttributeData& data);
Eigen::VectorXd change_statistics(std::span<const std::uint8_t> y,
                                  const DirectedGraph& g,
                                  const ModelSpec& spec,
                                  const AttributeData& data, int node);

// Fixed descriptive battery used for posterior-predictive checks.
inline constexpr int kGofBatterySize = 15;
const std::array<std::string_view, kGofBatterySize>& gof_statistic_names();
Eigen::VectorXd gof_statistics(std::span<const std::uint8_t> y,
                               const DirectedGraph& g);

}  // namespace alaam
