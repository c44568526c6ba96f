#pragma once

#include <string>
#include <vector>

#include "alaam/attributes.hpp"

namespace alaam {

enum class EffectKind {
  intercept,
  out_activity,
  in_activity,
  out_star,              // order 2 or 3
  contagion,
  reciprocal_contagion,
  indirect_contagion,
  indirect_ties,
  mixed_two_path,
  closure_contagion,
  transitive_contagion,
  covariate,             // bound to a named covariate
  contagion_interaction  // bound to a named covariate
};

// One model term.  Identity is (kind, order, binding).
struct EffectTerm {
  EffectKind kind = EffectKind::intercept;
  int order = 0;         // star order, 0 elsewhere
  std::string binding;   // covariate name, empty elsewhere

  // Canonical display name, e.g. "out-star(2)" or "covariate(age)".
  std::string name() const;

  // Parses a canonical name.  Throws ParseError on unknown kinds, star
  // orders outside {2,3}, or missing bindings.
  static EffectTerm parse(const std::string& text);

  bool needs_covariate() const;

  // True when the statistic couples distinct outcome values, so the model
  // no longer factorizes over nodes.
  bool is_dependence() const;

  bool operator==(const EffectTerm&) const = default;
};

struct ModelSpec {
  std::vector<EffectTerm> terms;

  int parameter_count() const { return static_cast<int>(terms.size()); }
  std::vector<std::string> term_names() const;
  bool has_dependence() const;

  static ModelSpec parse(const std::vector<std::string>& names);
};

// Checks a model against the data it will be fit to.  Returns a list of
// problems; empty means valid.  Rejects duplicate terms, unresolved
// covariate bindings, and outcome vectors that are not binary.
std::vector<std::string> validate_spec(const ModelSpec& spec,
                                       const AttributeData& data);

}  // namespace alaam
