#include <doctest.h>

#include <sstream>

#include "csanitize/errors.hpp"
#include "csanitize/taxonomy.hpp"
#include "csanitize/term.hpp"

using csan::CanonicalTerm;
using csan::Taxonomy;
using csan::TaxonomyLoadError;

namespace {

Taxonomy from_string(const std::string& text) {
  std::istringstream in(text);
  return csan::load_taxonomy(in, "<test>");
}

CanonicalTerm t(const std::string& s) { return CanonicalTerm::normalized(s); }

}  // namespace

TEST_CASE("load builds chains and roots") {
  Taxonomy tax = from_string(
      "# comment\n"
      "ISA aids | disease\n"
      "\n"
      "ISA disease | condition\n");
  auto chain = tax.generalizations(t("aids"));
  REQUIRE(chain.size() == 2);
  CHECK(chain[0] == t("disease"));
  CHECK(chain[1] == t("condition"));
  CHECK(tax.roots().count(t("condition")) == 1);
  CHECK(tax.roots().size() == 1);
}

TEST_CASE("cycles and multi-parents are load errors") {
  CHECK_THROWS_AS(from_string("ISA a | b\nISA b | a\n"), TaxonomyLoadError);
  CHECK_THROWS_WITH_AS(from_string("ISA x | x\n"),
                       doctest::Contains("cycle"), TaxonomyLoadError);
  CHECK_THROWS_WITH_AS(from_string("ISA a | b\nISA a | c\n"),
                       doctest::Contains("multiple parents"),
                       TaxonomyLoadError);
}

TEST_CASE("malformed lines name the line number") {
  CHECK_THROWS_WITH_AS(from_string("ISA a | b\nBOGUS line\n"),
                       doctest::Contains("<test>:2"), TaxonomyLoadError);
  CHECK_THROWS_WITH_AS(from_string("ISA a b\n"),
                       doctest::Contains(" | "), TaxonomyLoadError);
}

TEST_CASE("synonyms canonicalize transitively and idempotently") {
  Taxonomy tax = from_string(
      "SYN acquired immunodeficiency syndrome | aids\n"
      "SYN sida | acquired immunodeficiency syndrome\n");
  CHECK(tax.canonicalize("Acquired  Immunodeficiency SYNDROME") == t("aids"));
  CHECK(tax.canonicalize("sida") == t("aids"));
  CHECK(tax.canonicalize("fever") == t("fever"));
  CHECK(tax.canonicalize(tax.canonicalize("sida")) ==
        tax.canonicalize("sida"));
}

TEST_CASE("synonym cycles and node-shadowing aliases are errors") {
  CHECK_THROWS_AS(from_string("SYN a | b\nSYN b | a\n"), TaxonomyLoadError);
  CHECK_THROWS_AS(from_string("ISA aids | disease\nSYN aids | hiv\n"),
                  TaxonomyLoadError);
}

TEST_CASE("generalizations edge cases") {
  Taxonomy tax = from_string("ISA aids | disease\nISA disease | condition\n");
  CHECK(tax.generalizations(t("condition")).empty());  // root
  CHECK(tax.generalizations(t("absent")).empty());     // unknown
}

TEST_CASE("is_strict_ancestor") {
  Taxonomy tax = from_string("ISA aids | disease\nISA disease | condition\n");
  CHECK(tax.is_strict_ancestor(t("disease"), t("aids")));
  CHECK(tax.is_strict_ancestor(t("condition"), t("aids")));
  CHECK_FALSE(tax.is_strict_ancestor(t("aids"), t("aids")));
  CHECK_FALSE(tax.is_strict_ancestor(t("fever"), t("aids")));
  // antisymmetry over every edge
  for (const auto& [child, parent] : tax.isa_edges()) {
    CHECK(tax.is_strict_ancestor(parent, child));
    CHECK_FALSE(tax.is_strict_ancestor(child, parent));
  }
}

TEST_CASE("generalization chains strictly approach a root") {
  Taxonomy tax = from_string(
      "ISA a | b\nISA b | c\nISA c | d\nISA x | y\n");
  for (const auto& [child, parent] : tax.isa_edges()) {
    auto chain = tax.generalizations(child);
    // each chain step loses exactly one element: strictly increasing depth
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      CHECK(tax.generalizations(chain[i]).size() ==
            chain.size() - i - 1);
    }
    CHECK(tax.roots().count(chain.back()) == 1);
  }
}

TEST_CASE("fingerprint is order-insensitive and content-sensitive") {
  Taxonomy a = from_string("ISA aids | disease\nSYN x | aids\n");
  Taxonomy b = from_string("SYN x | aids\nISA aids | disease\n");
  Taxonomy c = from_string("ISA aids | disease\nSYN x | hiv\n");
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(csan::to_hex(a.fingerprint()).size() == 64);
}

TEST_CASE("file loading errors") {
  CHECK_THROWS_AS(csan::load_taxonomy("/nonexistent/kb.txt"),
                  csan::InputError);
}
