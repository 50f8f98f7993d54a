#ifndef CSANITIZE_CORPUS_INDEX_HPP
#define CSANITIZE_CORPUS_INDEX_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "csanitize/taxonomy.hpp"
#include "csanitize/term.hpp"
#include "csanitize/text.hpp"

namespace csan {

namespace detail {

using PostingsMap =
    std::unordered_map<CanonicalTerm, std::vector<std::uint32_t>>;

// Union every term's postings into all of its ISA ancestors, transitively:
// an occurrence of a specialization counts as an occurrence of each of its
// generalizations. Idempotent.
void apply_generalization_closure(PostingsMap& postings,
                                  const Taxonomy& taxonomy);

}  // namespace detail

// Immutable context-level co-occurrence index over a reference corpus.
// Each context contributes at most one count per canonical term, and
// postings are closed upward through ISA edges at build time, so marginal
// and joint probabilities live on the same sample space of `total_contexts`
// contexts. Concurrent reads are safe.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  std::uint64_t total_contexts() const { return total_contexts_; }
  ContextUnit counting_unit() const { return unit_; }
  const Fingerprint& taxonomy_fingerprint() const { return fingerprint_; }

  // |intersection of postings over terms| / N, with set semantics over the
  // term list; any term with no postings makes the result 0.
  double probability(std::span<const CanonicalTerm> terms) const;
  double probability(const CanonicalTerm& term) const;
  double probability(std::initializer_list<CanonicalTerm> terms) const {
    return probability(std::span<const CanonicalTerm>(terms.begin(), terms.end()));
  }

  bool contains(const CanonicalTerm& term) const;
  // Sorted context ids; nullptr when the term never occurs.
  const std::vector<std::uint32_t>* postings(const CanonicalTerm& term) const;

  std::size_t vocabulary_size() const { return postings_.size(); }
  std::vector<CanonicalTerm> vocabulary() const;  // sorted by id

  void save(const std::filesystem::path& path) const;
  static CorpusIndex load(const std::filesystem::path& path);
  // Additionally verifies the stored taxonomy fingerprint.
  static CorpusIndex load(const std::filesystem::path& path,
                          const Taxonomy& taxonomy);

  friend CorpusIndex build_index(const std::vector<Document>& corpus_docs,
                                 ContextUnit unit, const Taxonomy& taxonomy);

 private:
  std::uint64_t total_contexts_ = 0;
  ContextUnit unit_ = ContextUnit::document;
  Fingerprint fingerprint_{};
  detail::PostingsMap postings_;
};

// Counts one posting per (canonical term, context) over the corpus, then
// applies the generalization closure. Documents must already be tokenized,
// segmented with `unit`, and term-extracted with `taxonomy`.
CorpusIndex build_index(const std::vector<Document>& corpus_docs,
                        ContextUnit unit, const Taxonomy& taxonomy);

}  // namespace csan

#endif  // CSANITIZE_CORPUS_INDEX_HPP
