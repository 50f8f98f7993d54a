#ifndef CSANITIZE_RISK_HPP
#define CSANITIZE_RISK_HPP

#include <optional>
#include <vector>

#include "csanitize/corpus_index.hpp"
#include "csanitize/infotheory.hpp"
#include "csanitize/term.hpp"
#include "csanitize/text.hpp"

namespace csan {

enum class SanitizeMode { redact, sanitize };

// Detection treats a PMI within this many bits below the threshold as
// crossing it. Exact-threshold cases (e.g. a term co-occurring only with
// the entity at alpha=1) are representable in exact arithmetic but land a
// few ulps off after log2; the epsilon keeps the predicate stable and errs
// toward privacy. Generalization acceptance uses the exact complement.
inline constexpr double kRiskEpsilonBits = 1e-9;

inline bool crosses_threshold(double pmi_bits, double threshold_bits) {
  return pmi_bits >= threshold_bits - kRiskEpsilonBits;
}

std::string to_string(SanitizeMode mode);
SanitizeMode sanitize_mode_from_string(std::string_view name);

// The protection request: entities C, strictness alpha, and how terms are
// detected and rewritten.
struct SanitizationPolicy {
  std::vector<CanonicalTerm> entities;  // canonicalized, deduplicated
  double alpha = 1.0;                   // >= 1
  SanitizeMode mode = SanitizeMode::sanitize;
  ContextUnit context_unit = ContextUnit::document;
  std::size_t group_max = 1;  // maximum group cardinality m
  bool strict_unseen = false;
  std::size_t group_budget = 10000;  // pmi_group evaluations per context

  void validate() const;  // throws InputError on out-of-domain fields
};

enum class FindingKind {
  single,  // one term with PMI(c;t) >= IC(c)/alpha
  group,   // a term group with PMI(c;T) >= IC(c)/alpha
  unseen,  // corpus-unseen term flagged by the strict-unseen policy
};

std::string to_string(FindingKind kind);

struct RiskFinding {
  FindingKind kind = FindingKind::single;
  std::vector<CanonicalTerm> terms;
  CanonicalTerm entity;  // first entity in C order that the terms disclose
  Bits pmi_bits;
  double threshold_bits = 0.0;  // IC(entity)/alpha
  std::optional<int> context_index;  // groups only; singles are document-wide
};

struct RiskEvidence {
  bool risky = false;
  Bits pmi_bits;
  double ic_bits = 0.0;
  double threshold_bits = 0.0;
};

// Threshold check for one term/entity pair: risky iff
// PMI(c;t) >= IC(c)/alpha. Throws EntityNotInCorpusError when p(c) = 0.
RiskEvidence is_risky_term(const CorpusIndex& index, const CanonicalTerm& t,
                           const CanonicalTerm& c, double alpha);

// One finding per distinct document term that is risky for at least one
// entity (first violating entity recorded), in first-occurrence order.
// With strict_unseen, corpus-unseen terms are also reported (kind=unseen).
std::vector<RiskFinding> risky_terms(const Document& doc,
                                     const CorpusIndex& index,
                                     const SanitizationPolicy& policy);

// Minimal risky groups per context, cardinalities 2..group_max. Candidates
// are the distinct corpus-seen terms of the context that are not already
// individually risky. Cardinality k evaluates every k-subset of the
// candidates that survived rounds < k; members of groups reported at round
// k are excluded from rounds > k. Throws GroupBudgetError when a context
// needs more than policy.group_budget pmi_group evaluations.
std::vector<RiskFinding> risky_groups(const Document& doc,
                                      const CorpusIndex& index,
                                      const SanitizationPolicy& policy);

}  // namespace csan

#endif  // CSANITIZE_RISK_HPP
