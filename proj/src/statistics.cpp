#include "alaam/statistics.hpp"

#include "alaam/errors.hpp"

namespace alaam {

namespace {

double choose2(double d) { return d * (d - 1) / 2.0; }
double choose3(double d) { return d * (d - 1) * (d - 2) / 6.0; }

}  // namespace

CompiledModel::CompiledModel(const DirectedGraph& g, const ModelSpec& spec,
                             const AttributeData& data)
    : graph_(&g), spec_(spec) {
  if (g.node_count() != data.node_count())
    throw DimensionError("graph has " + std::to_string(g.node_count()) +
                         " nodes but attribute table has " +
                         std::to_string(data.node_count()) + " rows");
  const auto problems = validate_spec(spec, data);
  if (!problems.empty()) throw PreconditionError(problems.front());
  bound_.reserve(spec.terms.size());
  for (const auto& t : spec.terms) {
    BoundTerm b{t, nullptr};
    if (t.needs_covariate()) b.cov = data.covariate(t.binding).data();
    bound_.push_back(b);
  }
}

Eigen::VectorXd CompiledModel::statistics(
    std::span<const std::uint8_t> y) const {
  const DirectedGraph& g = *graph_;
  const int n = g.node_count();
  if (static_cast<int>(y.size()) != n)
    throw DimensionError("outcome vector length does not match node count");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(parameter_count());

  for (int k = 0; k < parameter_count(); ++k) {
    const auto& [term, cov] = bound_[static_cast<std::size_t>(k)];
    double acc = 0;
    switch (term.kind) {
      case EffectKind::intercept:
        for (int i = 0; i < n; ++i) acc += y[i];
        break;
      case EffectKind::out_activity:
        for (int i = 0; i < n; ++i)
          if (y[i]) acc += g.out_degree(i);
        break;
      case EffectKind::in_activity:
        for (int i = 0; i < n; ++i)
          if (y[i]) acc += g.in_degree(i);
        break;
      case EffectKind::out_star:
        for (int i = 0; i < n; ++i)
          if (y[i])
            acc += term.order == 2 ? choose2(g.out_degree(i))
                                   : choose3(g.out_degree(i));
        break;
      case EffectKind::contagion:
        for (int i = 0; i < n; ++i)
          if (y[i])
            for (int j : g.out_neighbors(i)) acc += y[j];
        break;
      case EffectKind::reciprocal_contagion:
        for (int i = 0; i < n; ++i)
          if (y[i])
            for (int j : g.out_neighbors(i))
              if (j > i && y[j] && g.has_arc(j, i)) acc += 1;
        break;
      case EffectKind::indirect_contagion:
        for (int m = 0; m < n; ++m)
          for (int i : g.in_neighbors(m))
            if (y[i])
              for (int j : g.out_neighbors(m))
                if (j != i && y[j]) acc += 1;
        break;
      case EffectKind::indirect_ties:
        for (int m = 0; m < n; ++m)
          for (int i : g.in_neighbors(m))
            if (y[i])
              for (int j : g.out_neighbors(m))
                if (j != i) acc += 1;
        break;
      case EffectKind::mixed_two_path:
        for (int i = 0; i < n; ++i)
          if (y[i]) {
            const double d = g.out_degree(i);
            acc += d * (d - 1);
          }
        break;
      case EffectKind::closure_contagion:
        for (int m = 0; m < n; ++m)
          for (int j : g.in_neighbors(m))
            if (y[j])
              for (int k2 : g.out_neighbors(m))
                if (k2 != j && y[k2] && g.has_arc(j, k2)) acc += 1;
        break;
      case EffectKind::transitive_contagion:
        for (int m = 0; m < n; ++m)
          if (y[m])
            for (int j : g.in_neighbors(m))
              if (y[j])
                for (int k2 : g.out_neighbors(m))
                  if (k2 != j && y[k2] && g.has_arc(j, k2)) acc += 1;
        break;
      case EffectKind::covariate:
        for (int i = 0; i < n; ++i)
          if (y[i]) acc += cov[i];
        break;
      case EffectKind::contagion_interaction:
        for (int i = 0; i < n; ++i)
          if (y[i])
            for (int j : g.out_neighbors(i))
              if (y[j]) acc += cov[i];
        break;
    }
    z[k] = acc;
  }
  return z;
}

void CompiledModel::change_statistics(std::span<const std::uint8_t> y,
                                      int node, Eigen::VectorXd& out) const {
  const DirectedGraph& g = *graph_;
  const int n = g.node_count();
  if (static_cast<int>(y.size()) != n)
    throw DimensionError("outcome vector length does not match node count");
  if (node < 0 || node >= n) throw DimensionError("node index out of range");
  out.resize(parameter_count());

  const int a = node;
  for (int k = 0; k < parameter_count(); ++k) {
    const auto& [term, cov] = bound_[static_cast<std::size_t>(k)];
    double acc = 0;
    switch (term.kind) {
      case EffectKind::intercept:
        acc = 1;
        break;
      case EffectKind::out_activity:
        acc = g.out_degree(a);
        break;
      case EffectKind::in_activity:
        acc = g.in_degree(a);
        break;
      case EffectKind::out_star:
        acc = term.order == 2 ? choose2(g.out_degree(a))
                              : choose3(g.out_degree(a));
        break;
      case EffectKind::contagion:
        for (int j : g.out_neighbors(a)) acc += y[j];
        for (int j : g.in_neighbors(a)) acc += y[j];
        break;
      case EffectKind::reciprocal_contagion:
        for (int j : g.out_neighbors(a))
          if (y[j] && g.has_arc(j, a)) acc += 1;
        break;
      case EffectKind::indirect_contagion:
        for (int m : g.out_neighbors(a))
          for (int j : g.out_neighbors(m))
            if (j != a && y[j]) acc += 1;
        for (int m : g.in_neighbors(a))
          for (int j : g.in_neighbors(m))
            if (j != a && y[j]) acc += 1;
        break;
      case EffectKind::indirect_ties:
        for (int m : g.out_neighbors(a))
          for (int j : g.out_neighbors(m))
            if (j != a) acc += 1;
        break;
      case EffectKind::mixed_two_path: {
        const double d = g.out_degree(a);
        acc = d * (d - 1);
        break;
      }
      case EffectKind::closure_contagion:
        for (int m : g.out_neighbors(a))
          for (int k2 : g.out_neighbors(m))
            if (k2 != a && y[k2] && g.has_arc(a, k2)) acc += 1;
        for (int m : g.in_neighbors(a))
          for (int j : g.in_neighbors(m))
            if (j != a && y[j] && g.has_arc(j, a)) acc += 1;
        break;
      case EffectKind::transitive_contagion:
        // node as two-path middle
        for (int j : g.in_neighbors(a))
          if (y[j])
            for (int k2 : g.out_neighbors(a))
              if (k2 != j && y[k2] && g.has_arc(j, k2)) acc += 1;
        // node as two-path source
        for (int m : g.out_neighbors(a))
          if (y[m])
            for (int k2 : g.out_neighbors(m))
              if (k2 != a && y[k2] && g.has_arc(a, k2)) acc += 1;
        // node as two-path sink
        for (int m : g.in_neighbors(a))
          if (y[m])
            for (int j : g.in_neighbors(m))
              if (j != a && y[j] && g.has_arc(j, a)) acc += 1;
        break;
      case EffectKind::covariate:
        acc = cov[a];
        break;
      case EffectKind::contagion_interaction:
        for (int j : g.out_neighbors(a))
          if (y[j]) acc += cov[a];
        for (int j : g.in_neighbors(a))
          if (y[j]) acc += cov[j];
        break;
    }
    out[k] = acc;
  }
}

Eigen::VectorXd CompiledModel::change_statistics(
    std::span<const std::uint8_t> y, int node) const {
  Eigen::VectorXd out;
  change_statistics(y, node, out);
  return out;
}

Eigen::MatrixXd CompiledModel::independent_design() const {
  const int n = graph_->node_count();
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, parameter_count());
  const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd delta(parameter_count());
  for (int i = 0; i < n; ++i) {
    change_statistics(zeros, i, delta);
    for (int k = 0; k < parameter_count(); ++k)
      design(i, k) = term_is_dependence(k) ? 0.0 : delta[k];
  }
  return design;
}

Eigen::VectorXd compute_statistics(std::span<const std::uint8_t> y,
                                   const DirectedGraph& g,
                                   const ModelSpec& spec,
                                   const AttributeData& data) {
  return CompiledModel(g, spec, data).statistics(y);
}

Eigen::VectorXd change_statistics(std::span<const std::uint8_t> y,
                                  const DirectedGraph& g,
                                  const ModelSpec& spec,
                                  const AttributeData& data, int node) {
  return CompiledModel(g, spec, data).change_statistics(y, node);
}

const std::array<std::string_view, kGofBatterySize>& gof_statistic_names() {
  static const std::array<std::string_view, kGofBatterySize> names = {
      "intercept",
      "direct-contagion",
      "reciprocal-contagion",
      "indirect-contagion",
      "closure-contagion",
      "transitive-contagion",
      "indegree-activity",
      "outdegree-activity",
      "mixed-two-path",
      "out-2-star",
      "in-2-star",
      "out-triangles",
      "in-triangles",
      "transitive-triangles",
      "indirect-ties"};
  return names;
}

Eigen::VectorXd gof_statistics(std::span<const std::uint8_t> y,
                               const DirectedGraph& g) {
  const int n = g.node_count();
  if (static_cast<int>(y.size()) != n)
    throw DimensionError("outcome vector length does not match node count");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(kGofBatterySize);

  for (int i = 0; i < n; ++i) {
    if (!y[i]) continue;
    const double dout = g.out_degree(i);
    const double din = g.in_degree(i);
    z[0] += 1;
    z[6] += din;
    z[7] += dout;
    z[8] += dout * (dout - 1);
    z[9] += choose2(dout);
    z[10] += choose2(din);
    for (int j : g.out_neighbors(i)) {
      if (y[j]) {
        z[1] += 1;
        if (j > i && g.has_arc(j, i)) z[2] += 1;
      }
      // ordered out-pairs and transitive closures from i
      for (int k : g.out_neighbors(i))
        if (k != j && g.has_arc(j, k)) z[11] += 1;
      for (int k : g.out_neighbors(j))
        if (k != i && g.has_arc(i, k)) z[13] += 1;
    }
    for (int j : g.in_neighbors(i))
      for (int k : g.in_neighbors(i))
        if (k != j && g.has_arc(j, k)) z[12] += 1;
  }
  for (int m = 0; m < n; ++m) {
    for (int i : g.in_neighbors(m)) {
      for (int j : g.out_neighbors(m)) {
        if (j == i) continue;
        if (y[i]) {
          z[14] += 1;
          if (y[j]) {
            z[3] += 1;
            if (g.has_arc(i, j)) {
              z[4] += 1;
              if (y[m]) z[5] += 1;
            }
          }
        }
      }
    }
  }
  return z;
}

}  // namespace alaam
