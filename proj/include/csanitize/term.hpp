#ifndef CSANITIZE_TERM_HPP
#define CSANITIZE_TERM_HPP

#include <functional>
#include <string>
#include <vector>

namespace csan {

// A canonical term identifier: lowercase, single-space-separated words,
// no leading/trailing whitespace. All probability mass for a concept is
// keyed by one CanonicalTerm, so surface variants must be normalized (and
// synonym-mapped, see Taxonomy::canonicalize) before they reach counting
// or query code.
class CanonicalTerm {
 public:
  CanonicalTerm() = default;

  // Normalizes: lowercase (ASCII + Latin-1), collapse whitespace runs to a
  // single space, trim ends.
  static CanonicalTerm normalized(std::string_view surface);

  // Wraps a string that is already in canonical shape (no re-normalization).
  static CanonicalTerm from_canonical(std::string id);

  const std::string& id() const { return id_; }
  bool empty() const { return id_.empty(); }

  // Canonical ids are single-space separated; this splits them back into
  // words for phrase matching.
  std::vector<std::string> words() const;

  friend bool operator==(const CanonicalTerm& a, const CanonicalTerm& b) {
    return a.id_ == b.id_;
  }
  friend bool operator!=(const CanonicalTerm& a, const CanonicalTerm& b) {
    return a.id_ != b.id_;
  }
  friend bool operator<(const CanonicalTerm& a, const CanonicalTerm& b) {
    return a.id_ < b.id_;
  }

 private:
  explicit CanonicalTerm(std::string id) : id_(std::move(id)) {}

  std::string id_;
};

// Lowercases one byte of ASCII or Latin-1 text. Codepoints above U+00FF
// are left untouched by normalization.
std::string fold_case(std::string_view text);

}  // namespace csan

template <>
struct std::hash<csan::CanonicalTerm> {
  std::size_t operator()(const csan::CanonicalTerm& t) const noexcept {
    return std::hash<std::string>{}(t.id());
  }
};

#endif  // CSANITIZE_TERM_HPP
