#ifndef CSANITIZE_METRICS_HPP
#define CSANITIZE_METRICS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>

#include "csanitize/corpus_index.hpp"
#include "csanitize/taxonomy.hpp"
#include "csanitize/term.hpp"
#include "csanitize/text.hpp"

namespace csan {

using TermSet = std::unordered_set<CanonicalTerm>;

// Percentages are in [0,100]; an empty optional means the metric is
// undefined (reported as such, never silently 0 or 100).

// |S n H| / |S| * 100; undefined when S is empty.
std::optional<double> precision(const TermSet& system, const TermSet& gold);

// |S n H| / |H| * 100; undefined when H is empty.
std::optional<double> recall(const TermSet& system, const TermSet& gold);

// Harmonic mean 2RP/(R+P); 0 when both are 0; undefined inputs propagate.
std::optional<double> f_measure(std::optional<double> precision_pct,
                                std::optional<double> recall_pct);

// Sum of IC over term occurrences; corpus-unseen occurrences contribute 0
// and are tallied into *unseen_occurrences when given.
double utility(std::span<const TermOccurrence> occurrences,
               const CorpusIndex& index,
               std::size_t* unseen_occurrences = nullptr);

// Utility(output) / Utility(original) * 100; undefined when the original
// document carries zero utility.
std::optional<double> utility_preservation(const Document& output,
                                           const Document& original,
                                           const CorpusIndex& index);

struct GoldAnnotation {
  std::string doc_id;
  TermSet sensitive_terms;  // canonicalized through the taxonomy
};

// Gold annotation file: JSON {"doc_id": ..., "sensitive_terms": [...]}, or
// an array of such objects.
std::vector<GoldAnnotation> load_gold_annotations(
    const std::filesystem::path& file, const Taxonomy& taxonomy);

}  // namespace csan

#endif  // CSANITIZE_METRICS_HPP
