#ifndef CSANITIZE_TEXT_HPP
#define CSANITIZE_TEXT_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "csanitize/taxonomy.hpp"
#include "csanitize/term.hpp"

namespace csan {

enum class ContextUnit { sentence, paragraph, document };

std::string to_string(ContextUnit unit);
ContextUnit context_unit_from_string(std::string_view name);

struct Token {
  std::string surface;  // equals raw_text slice [start, end)
  std::size_t start = 0;
  std::size_t end = 0;
  bool is_word = false;
};

// Half-open token index range.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TokenRange& a, const TokenRange& b) {
    return a.begin == b.begin && a.end == b.end;
  }
};

struct ContextSpan {
  ContextUnit unit = ContextUnit::document;
  TokenRange tokens;  // non-empty
};

struct TermOccurrence {
  CanonicalTerm canonical;
  TokenRange tokens;      // covers one or more consecutive tokens
  int context_index = 0;  // the single context containing the range

  friend bool operator==(const TermOccurrence& a, const TermOccurrence& b) {
    return a.canonical == b.canonical && a.tokens == b.tokens &&
           a.context_index == b.context_index;
  }
};

struct Document {
  std::string doc_id;
  std::string raw_text;
  std::vector<Token> tokens;
  std::vector<ContextSpan> contexts;
  std::vector<TermOccurrence> occurrences;

  // Distinct canonical terms in first-occurrence order.
  std::vector<CanonicalTerm> distinct_terms() const;
};

// One normalized word per line, `#` comments. Stopwords never start a term
// occurrence; they are matched against case-folded single words.
class StopwordList {
 public:
  static StopwordList defaults();
  static StopwordList none();
  static StopwordList load(const std::filesystem::path& file);

  void add(std::string_view word);
  bool contains(std::string_view folded_word) const;
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

// The term-matching configuration: a phrase table over taxonomy surface
// forms plus any extra canonical terms (corpus vocabulary, policy entities),
// combined with the stopword list. Matching is greedy longest-match over
// word tokens; whitespace and hyphen tokens are transparent inside phrases.
class Vocabulary {
 public:
  Vocabulary(const Taxonomy& taxonomy, StopwordList stopwords);

  void add_term(const CanonicalTerm& term);
  template <typename Range>
  void add_terms(const Range& terms) {
    for (const auto& t : terms) add_term(t);
  }

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const StopwordList& stopwords() const { return stopwords_; }
  bool is_stopword(std::string_view folded_word) const {
    return stopwords_.contains(folded_word);
  }

  // Longest phrase match starting at `words[pos]`; returns the number of
  // words consumed (0 if none) and the canonical term via out-param.
  // `chainable[i]` says words i and i+1 may belong to the same phrase.
  std::size_t match(const std::vector<std::string>& words, std::size_t pos,
                    const std::vector<char>& chainable,
                    CanonicalTerm* canonical) const;

 private:
  struct TrieNode {
    std::unordered_map<std::string, std::size_t> children;
    CanonicalTerm terminal;  // empty when not a phrase end
  };

  void add_surface(const std::string& surface_id, const CanonicalTerm& canonical);

  const Taxonomy* taxonomy_;
  StopwordList stopwords_;
  std::vector<TrieNode> trie_;
};

// Splits text into word tokens (maximal runs of letters/digits/apostrophes
// containing at least one letter or digit), whitespace tokens, and
// punctuation tokens. Tokens are contiguous and cover the whole input.
// Throws InputError naming the byte offset on malformed UTF-8.
std::vector<Token> tokenize(std::string_view raw_text);

bool is_whitespace_token(const Token& token);
bool is_hyphen_token(const Token& token);

std::vector<ContextSpan> segment_contexts(const std::vector<Token>& tokens,
                                          ContextUnit unit);

// Greedy longest-match extraction over doc.tokens; requires doc.contexts to
// be populated so each occurrence can record its context.
std::vector<TermOccurrence> extract_terms(const Document& doc,
                                          const Vocabulary& vocab);

// tokenize + segment_contexts + extract_terms in one step.
Document prepare_document(std::string doc_id, std::string raw_text,
                          ContextUnit unit, const Vocabulary& vocab);

}  // namespace csan

#endif  // CSANITIZE_TEXT_HPP
