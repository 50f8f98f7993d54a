#ifndef CSANITIZE_INFOTHEORY_HPP
#define CSANITIZE_INFOTHEORY_HPP

#include <span>

#include "csanitize/corpus_index.hpp"
#include "csanitize/term.hpp"

namespace csan {

// A point-wise information quantity in bits (log base 2). IC values are
// >= 0 or +infinity; PMI values are clamped to at most IC(c).
struct Bits {
  double value = 0.0;
  // Set when a constituent term has zero corpus probability, i.e. the
  // value is an infinity produced by an unseen term rather than by
  // observed counts.
  bool unseen = false;

  bool finite() const;
};

// IC(t) = -log2 p(t); +infinity (flagged unseen) when p(t) = 0.
Bits information_content(const CorpusIndex& index, const CanonicalTerm& t);

// PMI(c;t) = log2( p(c,t) / (p(c) p(t)) ). Throws EntityNotInCorpusError
// when p(c) = 0. Returns -infinity when c and t never co-occur. Results
// above IC(c) are clamped; an excess beyond 1e-9 is logged, since it can
// only come from an index that violates the counting discipline.
Bits pmi(const CorpusIndex& index, const CanonicalTerm& c,
         const CanonicalTerm& t);

// PMI(c;T) = log2( p(c,t1..tn) / (p(c) p(t1..tn)) ); order-insensitive,
// reduces to pmi() for |T| = 1.
Bits pmi_group(const CorpusIndex& index, const CanonicalTerm& c,
               std::span<const CanonicalTerm> group);

}  // namespace csan

#endif  // CSANITIZE_INFOTHEORY_HPP
