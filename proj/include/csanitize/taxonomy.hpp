#ifndef CSANITIZE_TAXONOMY_HPP
#define CSANITIZE_TAXONOMY_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "csanitize/term.hpp"

namespace csan {

using Fingerprint = std::array<std::uint8_t, 32>;

std::string to_hex(const Fingerprint& fp);

// ISA/SYN knowledge base. The ISA graph is a single-parent forest; synonyms
// are directional alias -> canonical entries resolved to a fixed point at
// load time. Immutable once built; safe to share across threads.
class Taxonomy {
 public:
  class Builder {
   public:
    Builder& add_isa(std::string_view child, std::string_view parent);
    Builder& add_synonym(std::string_view alias, std::string_view canonical);

    // Validates the forest (acyclic, single parent) and the synonym map
    // (no cycles, aliases are not node ids). Throws TaxonomyLoadError.
    Taxonomy build() &&;

   private:
    std::unordered_map<CanonicalTerm, CanonicalTerm> parent_;
    std::unordered_map<CanonicalTerm, CanonicalTerm> synonyms_;
    std::unordered_set<CanonicalTerm> standalone_;
  };

  Taxonomy() = default;

  // Normalize, then follow the synonym mapping. Unknown surfaces
  // canonicalize to their normalized selves. Idempotent.
  CanonicalTerm canonicalize(std::string_view surface) const;
  CanonicalTerm canonicalize(const CanonicalTerm& term) const;

  // ISA ancestor chain from most specific to most general (root last).
  // Empty for roots and for terms outside the forest.
  std::vector<CanonicalTerm> generalizations(const CanonicalTerm& term) const;

  // True iff `a` appears in generalizations(b). Strict: never true for a==b.
  bool is_strict_ancestor(const CanonicalTerm& a, const CanonicalTerm& b) const;

  std::optional<CanonicalTerm> parent(const CanonicalTerm& term) const;
  bool is_node(const CanonicalTerm& term) const;
  const std::unordered_set<CanonicalTerm>& roots() const { return roots_; }

  // All canonical terms the taxonomy knows: forest nodes plus standalone
  // synonym targets.
  const std::unordered_set<CanonicalTerm>& terms() const { return terms_; }

  // Fully resolved alias -> canonical map.
  const std::unordered_map<CanonicalTerm, CanonicalTerm>& synonym_aliases()
      const {
    return synonyms_;
  }

  const std::unordered_map<CanonicalTerm, CanonicalTerm>& isa_edges() const {
    return parent_;
  }

  // 32-byte hash over the resolved ISA and SYN relations; indexes record it
  // at build time so a query-time taxonomy swap is detectable.
  const Fingerprint& fingerprint() const { return fingerprint_; }

 private:
  friend class Builder;

  void compute_fingerprint();

  std::unordered_map<CanonicalTerm, CanonicalTerm> parent_;
  std::unordered_map<CanonicalTerm, CanonicalTerm> synonyms_;
  std::unordered_set<CanonicalTerm> roots_;
  std::unordered_set<CanonicalTerm> terms_;
  Fingerprint fingerprint_{};
};

// Line-oriented taxonomy file: `ISA <child> | <parent>`,
// `SYN <alias> | <canonical>`, ` | ` as the field separator, `#` comments,
// blank lines ignored. Throws TaxonomyLoadError with line numbers.
Taxonomy load_taxonomy(const std::filesystem::path& file);
Taxonomy load_taxonomy(std::istream& in, const std::string& source_name);

}  // namespace csan

#endif  // CSANITIZE_TAXONOMY_HPP
