#include "alaam/model.hpp"

#include <algorithm>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

struct KindName {
  EffectKind kind;
  const char* name;
};

constexpr KindName kPlainKinds[] = {
    {EffectKind::intercept, "intercept"},
    {EffectKind::out_activity, "out-activity"},
    {EffectKind::in_activity, "in-activity"},
    {EffectKind::contagion, "contagion"},
    {EffectKind::reciprocal_contagion, "reciprocal-contagion"},
    {EffectKind::indirect_contagion, "indirect-contagion"},
    {EffectKind::indirect_ties, "indirect-ties"},
    {EffectKind::mixed_two_path, "mixed-two-path"},
    {EffectKind::closure_contagion, "closure-contagion"},
    {EffectKind::transitive_contagion, "transitive-contagion"},
};

}  // namespace

std::string EffectTerm::name() const {
  if (kind == EffectKind::out_star)
    return "out-star(" + std::to_string(order) + ")";
  if (kind == EffectKind::covariate) return "covariate(" + binding + ")";
  if (kind == EffectKind::contagion_interaction)
    return "contagion-interaction(" + binding + ")";
  for (const auto& [k, n] : kPlainKinds)
    if (k == kind) return n;
  throw Error("unnamed effect kind");
}

EffectTerm EffectTerm::parse(const std::string& text) {
  for (const auto& [k, n] : kPlainKinds)
    if (text == n) return EffectTerm{k, 0, ""};

  const auto open = text.find('(');
  if (open != std::string::npos && text.back() == ')') {
    const std::string head = text.substr(0, open);
    const std::string arg = text.substr(open + 1, text.size() - open - 2);
    if (head == "out-star") {
      if (arg != "2" && arg != "3")
        throw ParseError("out-star order must be 2 or 3, got '" + arg + "'");
      return EffectTerm{EffectKind::out_star, arg == "2" ? 2 : 3, ""};
    }
    if (head == "covariate") {
      if (arg.empty()) throw ParseError("covariate term needs a name");
      return EffectTerm{EffectKind::covariate, 0, arg};
    }
    if (head == "contagion-interaction") {
      if (arg.empty())
        throw ParseError("contagion-interaction term needs a covariate name");
      return EffectTerm{EffectKind::contagion_interaction, 0, arg};
    }
  }
  throw ParseError("unknown model term '" + text + "'");
}

bool EffectTerm::needs_covariate() const {
  return kind == EffectKind::covariate ||
         kind == EffectKind::contagion_interaction;
}

bool EffectTerm::is_dependence() const {
  switch (kind) {
    case EffectKind::contagion:
    case EffectKind::reciprocal_contagion:
    case EffectKind::indirect_contagion:
    case EffectKind::closure_contagion:
    case EffectKind::transitive_contagion:
    case EffectKind::contagion_interaction:
      return true;
    default:
      return false;
  }
}

std::vector<std::string> ModelSpec::term_names() const {
  std::vector<std::string> names;
  names.reserve(terms.size());
  for (const auto& t : terms) names.push_back(t.name());
  return names;
}

bool ModelSpec::has_dependence() const {
  return std::any_of(terms.begin(), terms.end(),
                     [](const EffectTerm& t) { return t.is_dependence(); });
}

ModelSpec ModelSpec::parse(const std::vector<std::string>& names) {
  ModelSpec spec;
  spec.terms.reserve(names.size());
  for (const auto& n : names) spec.terms.push_back(EffectTerm::parse(n));
  return spec;
}

std::vector<std::string> validate_spec(const ModelSpec& spec,
                                       const AttributeData& data) {
  std::vector<std::string> problems;
  if (spec.terms.empty()) problems.push_back("model has no terms");
  for (std::size_t a = 0; a < spec.terms.size(); ++a)
    for (std::size_t b = a + 1; b < spec.terms.size(); ++b)
      if (spec.terms[a] == spec.terms[b])
        problems.push_back("duplicate term '" + spec.terms[a].name() + "'");
  for (const auto& t : spec.terms)
    if (t.needs_covariate() && !data.has_covariate(t.binding))
      problems.push_back("term '" + t.name() +
                         "' references unknown covariate '" + t.binding + "'");
  // AttributeData construction already enforces 0/1 entries; re-check here so
  // hand-built data cannot slip through.
  for (int i = 0; i < data.node_count(); ++i)
    if (data.outcome()[i] > 1 || data.missing()[i] > 1) {
      problems.push_back("outcome vector is not binary");
      break;
    }
  return problems;
}

}  // namespace alaam
