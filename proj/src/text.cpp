#include "csanitize/text.hpp"

#include <algorithm>
#include <fstream>

#include "csanitize/errors.hpp"

namespace csan {

namespace {

enum class CharClass { word, space, punct };

struct Decoded {
  char32_t cp;
  std::size_t len;
};

Decoded decode_utf8(std::string_view text, std::size_t pos) {
  auto bad = [&](const char* what) -> Decoded {
    throw InputError("malformed UTF-8 (" + std::string(what) +
                     ") at byte offset " + std::to_string(pos));
  };
  unsigned char b0 = static_cast<unsigned char>(text[pos]);
  if (b0 < 0x80) return {b0, 1};
  if (b0 < 0xC2) return bad("unexpected continuation or overlong byte");

  std::size_t len = b0 < 0xE0 ? 2 : (b0 < 0xF0 ? 3 : (b0 < 0xF5 ? 4 : 0));
  if (len == 0) return bad("invalid lead byte");
  if (pos + len > text.size()) return bad("truncated sequence");

  char32_t cp = b0 & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80) return bad("missing continuation byte");
    cp = (cp << 6) | (b & 0x3F);
  }
  if (len == 3 && cp < 0x800) return bad("overlong sequence");
  if (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) return bad("out of range");
  if (cp >= 0xD800 && cp <= 0xDFFF) return bad("surrogate codepoint");
  return {cp, len};
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Heuristic classification: ASCII alnum plus apostrophe are word chars;
// everything non-ASCII is a word char unless it falls in a known
// punctuation block.
CharClass classify(char32_t cp) {
  if (is_space_cp(cp)) return CharClass::space;
  if (cp < 0x80) {
    bool alnum = (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
                 (cp >= 'A' && cp <= 'Z');
    if (alnum || cp == '\'') return CharClass::word;
    return CharClass::punct;
  }
  if ((cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
      (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
      (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
      (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
      (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65)) {
    return CharClass::punct;
  }
  return CharClass::word;
}

bool starts_uppercase(const Token& token) {
  if (token.surface.empty()) return false;
  unsigned char b0 = static_cast<unsigned char>(token.surface[0]);
  if (b0 >= 'A' && b0 <= 'Z') return true;
  // Latin-1 uppercase letters (UTF-8 C3 80..9E, excluding multiplication
  // sign C3 97).
  if (b0 == 0xC3 && token.surface.size() >= 2) {
    unsigned char b1 = static_cast<unsigned char>(token.surface[1]);
    return b1 >= 0x80 && b1 <= 0x9E && b1 != 0x97;
  }
  return false;
}

bool ends_sentence(const Token& token) {
  if (token.is_word || token.surface.empty()) return false;
  char last = token.surface.back();
  return last == '.' || last == '!' || last == '?';
}

std::size_t count_newlines(const Token& token) {
  return static_cast<std::size_t>(
      std::count(token.surface.begin(), token.surface.end(), '\n'));
}

}  // namespace

std::string to_string(ContextUnit unit) {
  switch (unit) {
    case ContextUnit::sentence: return "sentence";
    case ContextUnit::paragraph: return "paragraph";
    case ContextUnit::document: return "document";
  }
  return "document";
}

ContextUnit context_unit_from_string(std::string_view name) {
  if (name == "sentence") return ContextUnit::sentence;
  if (name == "paragraph") return ContextUnit::paragraph;
  if (name == "document") return ContextUnit::document;
  throw InputError("unknown context unit: '" + std::string(name) +
                   "' (expected sentence|paragraph|document)");
}

bool is_whitespace_token(const Token& token) {
  if (token.surface.empty() || token.is_word) return false;
  return is_space_cp(decode_utf8(token.surface, 0).cp);
}

bool is_hyphen_token(const Token& token) {
  return !token.is_word && !token.surface.empty() &&
         token.surface.find_first_not_of('-') == std::string::npos;
}

std::vector<Token> tokenize(std::string_view raw_text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  std::size_t run_start = 0;
  CharClass run_class = CharClass::space;
  bool run_has_alnum = false;
  bool in_run = false;

  auto flush = [&](std::size_t end) {
    if (!in_run) return;
    Token t;
    t.start = run_start;
    t.end = end;
    t.surface = std::string(raw_text.substr(run_start, end - run_start));
    t.is_word = run_class == CharClass::word && run_has_alnum;
    tokens.push_back(std::move(t));
    in_run = false;
  };

  while (pos < raw_text.size()) {
    Decoded d = decode_utf8(raw_text, pos);
    CharClass cls = classify(d.cp);
    if (!in_run || cls != run_class) {
      flush(pos);
      run_start = pos;
      run_class = cls;
      run_has_alnum = false;
      in_run = true;
    }
    if (cls == CharClass::word && d.cp != '\'') run_has_alnum = true;
    pos += d.len;
  }
  flush(pos);
  return tokens;
}

std::vector<ContextSpan> segment_contexts(const std::vector<Token>& tokens,
                                          ContextUnit unit) {
  std::vector<ContextSpan> spans;
  if (tokens.empty()) return spans;

  // Token indices after which a new context starts.
  std::vector<std::size_t> breaks;
  if (unit == ContextUnit::sentence) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (!ends_sentence(tokens[i])) continue;
      std::size_t j = i + 1;
      bool saw_space = false;
      while (j < tokens.size() && is_whitespace_token(tokens[j])) {
        saw_space = true;
        ++j;
      }
      if (saw_space && j < tokens.size() && tokens[j].is_word &&
          starts_uppercase(tokens[j])) {
        breaks.push_back(i);
      }
    }
  } else if (unit == ContextUnit::paragraph) {
    bool seen_content = false;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (!is_whitespace_token(tokens[i])) {
        seen_content = true;
        continue;
      }
      if (seen_content && count_newlines(tokens[i]) >= 2) {
        bool content_follows = false;
        for (std::size_t j = i + 1; j < tokens.size(); ++j) {
          if (!is_whitespace_token(tokens[j])) {
            content_follows = true;
            break;
          }
        }
        if (content_follows) {
          breaks.push_back(i);
          seen_content = false;
        }
      }
    }
  }

  std::size_t begin = 0;
  for (std::size_t b : breaks) {
    spans.push_back({unit, {begin, b + 1}});
    begin = b + 1;
  }
  spans.push_back({unit, {begin, tokens.size()}});
  return spans;
}

std::vector<CanonicalTerm> Document::distinct_terms() const {
  std::vector<CanonicalTerm> out;
  std::unordered_set<CanonicalTerm> seen;
  for (const TermOccurrence& occ : occurrences) {
    if (seen.insert(occ.canonical).second) out.push_back(occ.canonical);
  }
  return out;
}

StopwordList StopwordList::none() { return StopwordList{}; }

void StopwordList::add(std::string_view word) {
  CanonicalTerm t = CanonicalTerm::normalized(word);
  if (!t.empty()) words_.insert(t.id());
}

bool StopwordList::contains(std::string_view folded_word) const {
  return words_.count(std::string(folded_word)) > 0;
}

StopwordList StopwordList::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open stopword file: " + file.string());
  StopwordList list;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    list.add(line);
  }
  return list;
}

StopwordList StopwordList::defaults() {
  static const char* kWords[] = {
      // articles & determiners
      "a", "an", "the", "this", "that", "these", "those", "each", "every",
      "either", "neither", "some", "any", "no", "all", "both", "few", "many",
      "much", "more", "most", "other", "another", "such", "own", "same",
      // prepositions
      "of", "in", "on", "at", "to", "from", "by", "with", "without", "for",
      "about", "against", "between", "among", "into", "onto", "through",
      "during", "before", "after", "above", "below", "under", "over", "up",
      "down", "out", "off", "near", "upon", "within", "along", "across",
      "behind", "beyond", "despite", "except", "inside", "outside", "since",
      "toward", "towards", "until", "via",
      // conjunctions & particles
      "and", "or", "but", "nor", "so", "yet", "if", "because", "while",
      "although", "though", "unless", "whereas", "whether", "than", "as",
      "once", "then", "also", "too", "very", "only", "not", "just",
      // auxiliaries & common verbs of being
      "be", "am", "is", "are", "was", "were", "been", "being", "do", "does",
      "did", "doing", "done", "have", "has", "had", "having", "can", "cannot",
      "could", "may", "might", "must", "shall", "should", "will", "would",
      // pronouns
      "i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
      "ourselves", "you", "your", "yours", "yourself", "yourselves", "he",
      "him", "his", "himself", "she", "her", "hers", "herself", "it", "its",
      "itself", "they", "them", "their", "theirs", "themselves", "what",
      "which", "who", "whom", "whose", "when", "where", "why", "how", "there",
      "here",
  };
  StopwordList list;
  for (const char* w : kWords) list.add(w);
  return list;
}

Vocabulary::Vocabulary(const Taxonomy& taxonomy, StopwordList stopwords)
    : taxonomy_(&taxonomy), stopwords_(std::move(stopwords)) {
  trie_.emplace_back();
  for (const CanonicalTerm& term : taxonomy.terms()) {
    add_surface(term.id(), taxonomy.canonicalize(term));
  }
  for (const auto& [alias, target] : taxonomy.synonym_aliases()) {
    add_surface(alias.id(), target);
  }
}

void Vocabulary::add_term(const CanonicalTerm& term) {
  if (!term.empty()) add_surface(term.id(), taxonomy_->canonicalize(term));
}

void Vocabulary::add_surface(const std::string& surface_id,
                             const CanonicalTerm& canonical) {
  CanonicalTerm surface = CanonicalTerm::normalized(surface_id);
  if (surface.empty()) return;
  std::size_t node = 0;
  for (const std::string& word : surface.words()) {
    auto [it, inserted] = trie_[node].children.try_emplace(word, trie_.size());
    if (inserted) trie_.emplace_back();
    node = it->second;
  }
  if (trie_[node].terminal.empty()) trie_[node].terminal = canonical;
}

std::size_t Vocabulary::match(const std::vector<std::string>& words,
                              std::size_t pos,
                              const std::vector<char>& chainable,
                              CanonicalTerm* canonical) const {
  std::size_t node = 0;
  std::size_t best_len = 0;
  for (std::size_t i = pos; i < words.size(); ++i) {
    if (i > pos && !chainable[i - 1]) break;
    auto it = trie_[node].children.find(words[i]);
    if (it == trie_[node].children.end()) break;
    node = it->second;
    if (!trie_[node].terminal.empty()) {
      best_len = i - pos + 1;
      if (canonical != nullptr) *canonical = trie_[node].terminal;
    }
  }
  return best_len;
}

namespace {

int context_of_token(const std::vector<ContextSpan>& contexts,
                     std::size_t token_index) {
  auto it = std::upper_bound(
      contexts.begin(), contexts.end(), token_index,
      [](std::size_t idx, const ContextSpan& span) { return idx < span.tokens.begin; });
  if (it != contexts.begin()) {
    const ContextSpan& span = *(it - 1);
    if (token_index >= span.tokens.begin && token_index < span.tokens.end) {
      return static_cast<int>((it - 1) - contexts.begin());
    }
  }
  throw InternalError("token index " + std::to_string(token_index) +
                      " not covered by any context span");
}

}  // namespace

std::vector<TermOccurrence> extract_terms(const Document& doc,
                                          const Vocabulary& vocab) {
  std::vector<TermOccurrence> occurrences;
  if (doc.tokens.empty()) return occurrences;
  if (doc.contexts.empty()) {
    throw InternalError("extract_terms requires segmented contexts");
  }

  struct WordPos {
    std::size_t token_index;
    std::string folded;
  };
  std::vector<WordPos> word_positions;
  std::vector<std::string> folded_words;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (!doc.tokens[i].is_word) continue;
    std::string folded = CanonicalTerm::normalized(doc.tokens[i].surface).id();
    word_positions.push_back({i, folded});
    folded_words.push_back(std::move(folded));
  }

  // Words may chain into one phrase across whitespace and hyphen tokens,
  // but never across other punctuation or a blank line (so the occurrence
  // list is independent of the context unit).
  std::vector<char> chainable;
  chainable.resize(word_positions.empty() ? 0 : word_positions.size() - 1, 0);
  for (std::size_t w = 0; w + 1 < word_positions.size(); ++w) {
    bool ok = true;
    for (std::size_t k = word_positions[w].token_index + 1;
         k < word_positions[w + 1].token_index; ++k) {
      const Token& between = doc.tokens[k];
      if (is_hyphen_token(between)) continue;
      if (is_whitespace_token(between) && count_newlines(between) < 2) continue;
      ok = false;
      break;
    }
    chainable[w] = ok ? 1 : 0;
  }

  std::size_t w = 0;
  while (w < word_positions.size()) {
    const std::string& folded = word_positions[w].folded;
    if (vocab.is_stopword(folded)) {
      ++w;
      continue;
    }
    CanonicalTerm canonical;
    std::size_t matched = vocab.match(folded_words, w, chainable, &canonical);
    TermOccurrence occ;
    if (matched > 0) {
      occ.canonical = canonical;
      occ.tokens = {word_positions[w].token_index,
                    word_positions[w + matched - 1].token_index + 1};
      w += matched;
    } else {
      occ.canonical = vocab.taxonomy().canonicalize(folded);
      occ.tokens = {word_positions[w].token_index,
                    word_positions[w].token_index + 1};
      ++w;
    }
    occ.context_index = context_of_token(doc.contexts, occ.tokens.begin);
    occurrences.push_back(std::move(occ));
  }
  return occurrences;
}

Document prepare_document(std::string doc_id, std::string raw_text,
                          ContextUnit unit, const Vocabulary& vocab) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.raw_text = std::move(raw_text);
  doc.tokens = tokenize(doc.raw_text);
  doc.contexts = segment_contexts(doc.tokens, unit);
  doc.occurrences = extract_terms(doc, vocab);
  return doc;
}

}  // namespace csan
