// The 8-document fixture corpus used throughout the tests, plus generators
// for randomized corpora. Oracle-side context sets are built straight from
// the raw word lists, not through the library's extraction path.
#ifndef CSANITIZE_TESTS_FIXTURES_HPP
#define CSANITIZE_TESTS_FIXTURES_HPP

#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csanitize/corpus_index.hpp"
#include "csanitize/taxonomy.hpp"
#include "csanitize/text.hpp"
#include "oracle.hpp"

namespace fixtures {

inline csan::Taxonomy f8_taxonomy() {
  csan::Taxonomy::Builder b;
  b.add_isa("aids", "disease");
  b.add_isa("hiv", "virus");
  b.add_isa("virus", "agent");
  b.add_synonym("acquired immunodeficiency syndrome", "aids");
  return std::move(b).build();
}

inline const std::vector<std::string>& f8_texts() {
  static const std::vector<std::string> texts = {
      "aids hiv fever",        "aids hiv",  "aids transfusion fever",
      "aids transfusion",      "disease",   "disease",
      "transfusion agent",     "fever agent"};
  return texts;
}

// Taxonomy + index + a vocabulary covering the index terms, ready for
// preparing and sanitizing test documents.
struct F8 {
  csan::Taxonomy taxonomy;
  csan::Vocabulary vocab;  // refers to this->taxonomy
  csan::CorpusIndex index;
  oracle::Corpus corpus;

  F8(const F8&) = delete;
  F8& operator=(const F8&) = delete;

  F8() : taxonomy(f8_taxonomy()), vocab(taxonomy, csan::StopwordList::defaults()) {
    std::vector<csan::Document> docs;
    int n = 0;
    for (const std::string& text : f8_texts()) {
      docs.push_back(csan::prepare_document("d" + std::to_string(++n), text,
                                            csan::ContextUnit::document,
                                            vocab));
    }
    index = csan::build_index(docs, csan::ContextUnit::document, taxonomy);
    vocab.add_terms(index.vocabulary());

    for (const std::string& text : f8_texts()) {
      oracle::Context ctx;
      std::istringstream words(text);
      std::string w;
      while (words >> w) ctx.insert(w);
      corpus.push_back(std::move(ctx));
    }
  }

  csan::Document doc(const std::string& id, const std::string& text,
                     csan::ContextUnit unit = csan::ContextUnit::document) const {
    return csan::prepare_document(id, text, unit, vocab);
  }

  csan::CanonicalTerm term(const std::string& id) const {
    return csan::CanonicalTerm::normalized(id);
  }
};

// A randomized small corpus with an optional random taxonomy forest over
// its vocabulary (plus a few abstract-only terms), mirrored for the oracle.
struct RandomCorpus {
  // unique_ptr keeps the taxonomy's address stable when a RandomCorpus is
  // moved, since the vocabulary refers to it.
  std::unique_ptr<csan::Taxonomy> taxonomy_holder;
  csan::Vocabulary vocab;
  csan::CorpusIndex index;
  oracle::Corpus corpus;
  std::vector<std::string> vocabulary;       // literal corpus terms
  std::vector<std::string> context_texts;    // one document per context

  explicit RandomCorpus(csan::Taxonomy tax)
      : taxonomy_holder(std::make_unique<csan::Taxonomy>(std::move(tax))),
        vocab(*taxonomy_holder, csan::StopwordList::none()) {}

  const csan::Taxonomy& taxonomy() const { return *taxonomy_holder; }
};

inline RandomCorpus make_random_corpus(std::mt19937& rng,
                                       bool with_taxonomy = true) {
  std::uniform_int_distribution<int> n_terms_dist(3, 10);
  std::uniform_int_distribution<int> n_ctx_dist(2, 12);

  const int n_terms = n_terms_dist(rng);
  std::vector<std::string> vocabulary;
  for (int i = 0; i < n_terms; ++i) {
    vocabulary.push_back("t" + std::to_string(i));
  }

  csan::Taxonomy::Builder builder;
  if (with_taxonomy) {
    // Chance of a parent among abstract nodes a0..a2 or another term.
    std::uniform_int_distribution<int> coin(0, 3);
    std::uniform_int_distribution<int> abstract_dist(0, 2);
    for (int i = 0; i < n_terms; ++i) {
      int c = coin(rng);
      if (c == 0) {
        builder.add_isa(vocabulary[i],
                        "a" + std::to_string(abstract_dist(rng)));
      } else if (c == 1 && i + 1 < n_terms) {
        builder.add_isa(vocabulary[i], vocabulary[i + 1]);  // forward: acyclic
      }
    }
    builder.add_isa("a0", "root");
    builder.add_isa("a1", "root");
    builder.add_isa("a2", "root");
  }
  RandomCorpus rc(std::move(builder).build());
  rc.vocabulary = vocabulary;

  // One padding context holding only a unique filler term keeps every real
  // term below probability 1, so information contents stay positive.
  const int n_ctx = std::min(n_ctx_dist(rng), 11);
  std::uniform_real_distribution<double> presence(0.0, 1.0);
  std::vector<csan::Document> docs;
  for (int c = 0; c < n_ctx; ++c) {
    std::string text;
    oracle::Context ctx;
    for (const std::string& term : vocabulary) {
      if (presence(rng) < 0.45) {
        if (!text.empty()) text += ' ';
        text += term;
        ctx.insert(term);
      }
    }
    if (ctx.empty()) {  // keep every context non-empty
      const std::string& term = vocabulary[c % vocabulary.size()];
      text = term;
      ctx.insert(term);
    }
    rc.context_texts.push_back(text);
    rc.corpus.push_back(std::move(ctx));
    docs.push_back(csan::prepare_document("c" + std::to_string(c), text,
                                          csan::ContextUnit::document,
                                          rc.vocab));
  }
  docs.push_back(csan::prepare_document("pad", "padfiller",
                                        csan::ContextUnit::document, rc.vocab));
  rc.corpus.push_back(oracle::Context{"padfiller"});
  rc.index = csan::build_index(docs, csan::ContextUnit::document, rc.taxonomy());
  rc.vocab.add_terms(rc.index.vocabulary());
  return rc;
}

// Terms of the corpus that actually occur (p > 0), as entity candidates.
inline std::vector<std::string> seen_terms(const RandomCorpus& rc) {
  std::vector<std::string> out;
  for (const std::string& t : rc.vocabulary) {
    if (rc.index.contains(csan::CanonicalTerm::normalized(t))) out.push_back(t);
  }
  return out;
}

}  // namespace fixtures

#endif  // CSANITIZE_TESTS_FIXTURES_HPP
