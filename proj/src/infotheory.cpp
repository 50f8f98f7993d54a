#include "csanitize/infotheory.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "csanitize/errors.hpp"
#include "csanitize/log.hpp"

namespace csan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kClampTolerance = 1e-9;

// log2(joint / (pc * pt)), with the two containment cases reduced
// algebraically first so the disclosure identities hold bit-for-bit:
// p(c,t) = p(t) gives exactly IC(c), p(c,t) = p(c) gives exactly IC(t).
Bits pmi_from_probabilities(double p_entity, double p_terms, double p_joint,
                            bool any_unseen, const CanonicalTerm& entity) {
  if (p_joint == 0.0) return {-kInf, any_unseen};

  double raw;
  if (p_joint == p_terms) {
    raw = -std::log2(p_entity);
  } else if (p_joint == p_entity) {
    raw = -std::log2(p_terms);
  } else {
    raw = std::log2(p_joint) - std::log2(p_entity) - std::log2(p_terms);
  }
  double ic_entity = -std::log2(p_entity);
  if (raw > ic_entity + kClampTolerance) {
    log::warn("PMI for entity '", entity.id(), "' exceeds IC(c) by ",
              raw - ic_entity,
              " bits; index violates generalization-aware counting, "
              "clamping");
  }
  return {std::min(raw, ic_entity), false};
}

}  // namespace

bool Bits::finite() const { return std::isfinite(value); }

Bits information_content(const CorpusIndex& index, const CanonicalTerm& t) {
  double p = index.probability(t);
  if (p == 0.0) return {kInf, true};
  double value = -std::log2(p);
  return {value == 0.0 ? 0.0 : value, false};  // avoid -0.0 for p(t)=1
}

Bits pmi(const CorpusIndex& index, const CanonicalTerm& c,
         const CanonicalTerm& t) {
  const CanonicalTerm group[1] = {t};
  return pmi_group(index, c, group);
}

Bits pmi_group(const CorpusIndex& index, const CanonicalTerm& c,
               std::span<const CanonicalTerm> group) {
  if (group.empty()) {
    throw InputError("pmi_group requires a non-empty term group");
  }
  double p_entity = index.probability(c);
  if (p_entity == 0.0) throw EntityNotInCorpusError(c.id());

  bool any_unseen = false;
  for (const CanonicalTerm& t : group) {
    if (!index.contains(t)) any_unseen = true;
  }
  double p_terms = index.probability(group);
  if (p_terms == 0.0) return {-kInf, any_unseen};

  std::vector<CanonicalTerm> with_entity(group.begin(), group.end());
  with_entity.push_back(c);
  double p_joint = index.probability(with_entity);
  return pmi_from_probabilities(p_entity, p_terms, p_joint, any_unseen, c);
}

}  // namespace csan
