#include "csanitize/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "csanitize/errors.hpp"

namespace csan {

namespace {

// Four independent FNV-1a 64-bit lanes make up the 32-byte fingerprint.
// This is a change detector, not a cryptographic digest.
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
constexpr std::uint64_t kLaneSeeds[4] = {
    14695981039346656037ULL, 0x9e3779b97f4a7c15ULL, 0xc2b2ae3d27d4eb4fULL,
    0x165667b19e3779f9ULL};

void fnv_absorb(std::uint64_t* lanes, std::string_view data) {
  for (unsigned char byte : data) {
    for (int lane = 0; lane < 4; ++lane) {
      lanes[lane] ^= static_cast<std::uint64_t>(byte) +
                     static_cast<std::uint64_t>(lane) * 0x9e3779b9ULL;
      lanes[lane] *= kFnvPrime;
    }
  }
}

}  // namespace

std::string to_hex(const Fingerprint& fp) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(fp.size() * 2);
  for (std::uint8_t byte : fp) {
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xF]);
  }
  return out;
}

Taxonomy::Builder& Taxonomy::Builder::add_isa(std::string_view child,
                                              std::string_view parent) {
  CanonicalTerm c = CanonicalTerm::normalized(child);
  CanonicalTerm p = CanonicalTerm::normalized(parent);
  if (c.empty() || p.empty()) {
    throw TaxonomyLoadError("ISA record with empty term");
  }
  if (c == p) {
    throw TaxonomyLoadError("ISA cycle: '" + c.id() + "' is its own parent");
  }
  auto it = parent_.find(c);
  if (it != parent_.end() && it->second != p) {
    throw TaxonomyLoadError("multiple parents for '" + c.id() + "': '" +
                            it->second.id() + "' and '" + p.id() + "'");
  }
  parent_.emplace(std::move(c), std::move(p));
  return *this;
}

Taxonomy::Builder& Taxonomy::Builder::add_synonym(std::string_view alias,
                                                  std::string_view canonical) {
  CanonicalTerm a = CanonicalTerm::normalized(alias);
  CanonicalTerm c = CanonicalTerm::normalized(canonical);
  if (a.empty() || c.empty()) {
    throw TaxonomyLoadError("SYN record with empty term");
  }
  if (a == c) {
    // Self-mapping: registers the term (useful for multiword phrase
    // matching) without creating an alias.
    standalone_.insert(std::move(a));
    return *this;
  }
  auto it = synonyms_.find(a);
  if (it != synonyms_.end() && it->second != c) {
    throw TaxonomyLoadError("conflicting synonym targets for '" + a.id() +
                            "': '" + it->second.id() + "' and '" + c.id() +
                            "'");
  }
  synonyms_.emplace(std::move(a), std::move(c));
  return *this;
}

Taxonomy Taxonomy::Builder::build() && {
  // Cycle check: walk each chain; any node revisited on the way up names
  // a cycle.
  for (const auto& [child, parent] : parent_) {
    std::unordered_set<CanonicalTerm> seen{child};
    CanonicalTerm cursor = parent;
    while (true) {
      if (seen.count(cursor) > 0) {
        std::string cycle = cursor.id();
        CanonicalTerm walk = parent_.at(cursor);
        while (walk != cursor) {
          cycle += " -> " + walk.id();
          walk = parent_.at(walk);
        }
        throw TaxonomyLoadError("ISA cycle detected: " + cycle + " -> " +
                                cursor.id());
      }
      seen.insert(cursor);
      auto next = parent_.find(cursor);
      if (next == parent_.end()) break;
      cursor = next->second;
    }
  }

  // Aliases may not shadow forest nodes: that would remap a node identity.
  for (const auto& [alias, target] : synonyms_) {
    if (parent_.count(alias) > 0 ||
        std::any_of(parent_.begin(), parent_.end(),
                    [&](const auto& e) { return e.second == alias; })) {
      throw TaxonomyLoadError("synonym alias '" + alias.id() +
                              "' is also a taxonomy node");
    }
  }

  // Resolve alias chains (SYN a|b, SYN b|c => a->c) to a fixed point.
  std::unordered_map<CanonicalTerm, CanonicalTerm> resolved;
  for (const auto& [alias, target] : synonyms_) {
    std::unordered_set<CanonicalTerm> seen{alias};
    CanonicalTerm cursor = target;
    while (true) {
      if (seen.count(cursor) > 0) {
        throw TaxonomyLoadError("synonym cycle involving '" + alias.id() +
                                "'");
      }
      auto next = synonyms_.find(cursor);
      if (next == synonyms_.end()) break;
      seen.insert(cursor);
      cursor = next->second;
    }
    resolved.emplace(alias, cursor);
  }

  Taxonomy tax;
  tax.parent_ = std::move(parent_);
  tax.synonyms_ = std::move(resolved);
  for (const auto& [child, parent] : tax.parent_) {
    tax.terms_.insert(child);
    tax.terms_.insert(parent);
    if (tax.parent_.count(parent) == 0) tax.roots_.insert(parent);
  }
  for (const auto& [alias, target] : tax.synonyms_) tax.terms_.insert(target);
  for (const CanonicalTerm& term : standalone_) tax.terms_.insert(term);
  tax.compute_fingerprint();
  return tax;
}

void Taxonomy::compute_fingerprint() {
  std::vector<std::string> records;
  records.reserve(parent_.size() + synonyms_.size() + terms_.size());
  for (const auto& [child, parent] : parent_) {
    records.push_back("I\x1f" + child.id() + "\x1f" + parent.id() + "\n");
  }
  for (const auto& [alias, target] : synonyms_) {
    records.push_back("S\x1f" + alias.id() + "\x1f" + target.id() + "\n");
  }
  for (const CanonicalTerm& term : terms_) {
    records.push_back("T\x1f" + term.id() + "\n");
  }
  std::sort(records.begin(), records.end());

  std::uint64_t lanes[4];
  for (int i = 0; i < 4; ++i) lanes[i] = kLaneSeeds[i];
  for (const std::string& record : records) fnv_absorb(lanes, record);
  for (int lane = 0; lane < 4; ++lane) {
    for (int byte = 0; byte < 8; ++byte) {
      fingerprint_[lane * 8 + byte] =
          static_cast<std::uint8_t>(lanes[lane] >> (8 * byte));
    }
  }
}

CanonicalTerm Taxonomy::canonicalize(std::string_view surface) const {
  return canonicalize(CanonicalTerm::normalized(surface));
}

CanonicalTerm Taxonomy::canonicalize(const CanonicalTerm& term) const {
  auto it = synonyms_.find(term);
  return it == synonyms_.end() ? term : it->second;
}

std::vector<CanonicalTerm> Taxonomy::generalizations(
    const CanonicalTerm& term) const {
  std::vector<CanonicalTerm> chain;
  auto it = parent_.find(term);
  while (it != parent_.end()) {
    chain.push_back(it->second);
    it = parent_.find(it->second);
  }
  return chain;
}

bool Taxonomy::is_strict_ancestor(const CanonicalTerm& a,
                                  const CanonicalTerm& b) const {
  auto it = parent_.find(b);
  while (it != parent_.end()) {
    if (it->second == a) return true;
    it = parent_.find(it->second);
  }
  return false;
}

std::optional<CanonicalTerm> Taxonomy::parent(const CanonicalTerm& term) const {
  auto it = parent_.find(term);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

bool Taxonomy::is_node(const CanonicalTerm& term) const {
  if (parent_.count(term) > 0) return true;
  return roots_.count(term) > 0;
}

Taxonomy load_taxonomy(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw InputError("cannot open taxonomy file: " + file.string());
  }
  return load_taxonomy(in, file.string());
}

Taxonomy load_taxonomy(std::istream& in, const std::string& source_name) {
  Taxonomy::Builder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view view(line);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front())))
      view.remove_prefix(1);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.back())))
      view.remove_suffix(1);
    if (view.empty()) continue;

    auto fail = [&](const std::string& what) -> void {
      throw TaxonomyLoadError(source_name + ":" + std::to_string(line_no) +
                              ": " + what);
    };

    std::string_view kind = view.substr(0, view.find(' '));
    if (kind != "ISA" && kind != "SYN") {
      fail("expected ISA or SYN record, got '" + std::string(view) + "'");
    }
    std::string_view rest = view.substr(kind.size());
    if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    std::size_t sep = rest.find(" | ");
    if (sep == std::string_view::npos) {
      fail("missing ' | ' field separator");
    }
    std::string_view left = rest.substr(0, sep);
    std::string_view right = rest.substr(sep + 3);
    if (left.empty() || right.empty()) fail("empty field");

    try {
      if (kind == "ISA") {
        builder.add_isa(left, right);
      } else {
        builder.add_synonym(left, right);
      }
    } catch (const TaxonomyLoadError& e) {
      fail(e.what());
    }
  }
  return std::move(builder).build();
}

}  // namespace csan
