#ifndef CSANITIZE_SANITIZER_HPP
#define CSANITIZE_SANITIZER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "csanitize/corpus_index.hpp"
#include "csanitize/risk.hpp"
#include "csanitize/taxonomy.hpp"
#include "csanitize/text.hpp"

namespace csan {

struct TriedGeneralization {
  CanonicalTerm term;
  // PMI(c; term) per entity, in C order, as far as the scan got before the
  // first rejection.
  std::vector<std::pair<CanonicalTerm, Bits>> entity_pmi;
  bool accepted = false;
};

struct Replacement {
  CanonicalTerm original;
  // Empty optional means the term was removed (no acceptable
  // generalization, or redact mode).
  std::optional<CanonicalTerm> replacement;
  std::vector<TriedGeneralization> chain_tried;
  std::size_t occurrences_rewritten = 0;
};

struct GeneralizationChoice {
  std::optional<CanonicalTerm> replacement;
  std::vector<TriedGeneralization> chain_tried;
};

// Walks generalizations(t) from most specific to most general and returns
// the first g with PMI(c;g) < IC(c)/alpha for every entity (strict, the
// exact complement of the risky predicate). Returns REMOVED (empty
// optional) when the chain is exhausted or empty, and always in redact
// mode. Under strict_unseen a generalization must also be corpus-seen.
GeneralizationChoice select_generalization(const CanonicalTerm& t,
                                           const CorpusIndex& index,
                                           const Taxonomy& taxonomy,
                                           const SanitizationPolicy& policy);

struct SanitizedDocument {
  std::string doc_id;
  std::string output_text;
  std::vector<Replacement> replacements;
  SanitizationPolicy policy_snapshot;
  std::vector<RiskFinding> residual_findings;  // empty on success
};

struct SanitizeOutcome {
  SanitizedDocument sanitized;
  std::vector<RiskFinding> findings;  // detection evidence on the input
  double utility_original_bits = 0.0;
  double utility_output_bits = 0.0;
  std::optional<double> preservation_pct;
  bool verification_passed = false;
  int verification_passes = 0;
};

// Full pipeline on one prepared document: detect risky terms (and groups
// when group_max > 1), pick replacements, rewrite every occurrence, then
// re-extract the output and re-run detection. A residual finding triggers
// removal of the offending replacement terms and one re-verification; a
// finding that survives that is returned with verification_passed=false so
// the audit report can still be written. The vocabulary must be the one
// the document was prepared with.
SanitizeOutcome sanitize(const Document& doc, const CorpusIndex& index,
                         const Taxonomy& taxonomy, const Vocabulary& vocab,
                         const SanitizationPolicy& policy);

}  // namespace csan

#endif  // CSANITIZE_SANITIZER_HPP
