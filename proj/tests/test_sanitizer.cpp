#include <doctest.h>

#include <random>
#include <set>

#include "csanitize/errors.hpp"
#include "csanitize/metrics.hpp"
#include "csanitize/sanitizer.hpp"
#include "fixtures.hpp"

using namespace csan;

namespace {

SanitizationPolicy make_policy(const std::vector<std::string>& entities,
                               double alpha,
                               SanitizeMode mode = SanitizeMode::sanitize,
                               std::size_t group_max = 1) {
  SanitizationPolicy p;
  for (const auto& e : entities) {
    p.entities.push_back(CanonicalTerm::normalized(e));
  }
  p.alpha = alpha;
  p.mode = mode;
  p.group_max = group_max;
  return p;
}

}  // namespace

TEST_CASE("select_generalization walks the chain") {
  fixtures::F8 f8;
  SUBCASE("hiv at alpha=1: virus rejected, agent accepted") {
    auto choice = select_generalization(f8.term("hiv"), f8.index, f8.taxonomy,
                                        make_policy({"aids"}, 1.0));
    REQUIRE(choice.replacement.has_value());
    CHECK(choice.replacement->id() == "agent");
    REQUIRE(choice.chain_tried.size() == 2);
    CHECK(choice.chain_tried[0].term.id() == "virus");
    CHECK_FALSE(choice.chain_tried[0].accepted);
    CHECK(choice.chain_tried[0].entity_pmi.front().second.value ==
          doctest::Approx(1.0));
    CHECK(choice.chain_tried[1].term.id() == "agent");
    CHECK(choice.chain_tried[1].accepted);
  }
  SUBCASE("aids at alpha=2: disease accepted (0.415 < 0.5)") {
    auto choice = select_generalization(f8.term("aids"), f8.index, f8.taxonomy,
                                        make_policy({"aids"}, 2.0));
    REQUIRE(choice.replacement.has_value());
    CHECK(choice.replacement->id() == "disease");
  }
  SUBCASE("term outside the taxonomy is removed") {
    auto choice = select_generalization(f8.term("transfusion"), f8.index,
                                        f8.taxonomy, make_policy({"aids"}, 1.0));
    CHECK_FALSE(choice.replacement.has_value());
    CHECK(choice.chain_tried.empty());
  }
  SUBCASE("redact mode always removes") {
    auto choice = select_generalization(
        f8.term("hiv"), f8.index, f8.taxonomy,
        make_policy({"aids"}, 1.0, SanitizeMode::redact));
    CHECK_FALSE(choice.replacement.has_value());
  }
  SUBCASE("exhausted chain is removed: aids at alpha=1") {
    // chain [disease]: PMI(aids;disease)=0.415 < 1? 0.415 < 1 accepted.
    // use entity=disease instead: protecting disease, term aids
    // chain of aids = [disease]; PMI(disease;disease)=IC(disease) >= IC/1
    auto choice = select_generalization(f8.term("aids"), f8.index, f8.taxonomy,
                                        make_policy({"disease"}, 1.0));
    CHECK_FALSE(choice.replacement.has_value());
    CHECK(choice.chain_tried.size() == 1);
  }
}

TEST_CASE("sanitize: the worked fixture example") {
  fixtures::F8 f8;
  Document doc = f8.doc("doc", "aids hiv fever");

  SUBCASE("sanitize mode generalizes") {
    auto outcome =
        sanitize(doc, f8.index, f8.taxonomy, f8.vocab, make_policy({"aids"}, 1.0));
    CHECK(outcome.sanitized.output_text == "disease agent fever");
    CHECK(outcome.verification_passed);
    CHECK(outcome.sanitized.residual_findings.empty());
    REQUIRE(outcome.sanitized.replacements.size() == 2);
    CHECK(outcome.sanitized.replacements[0].original.id() == "aids");
    CHECK(outcome.sanitized.replacements[0].replacement->id() == "disease");
    CHECK(outcome.sanitized.replacements[0].occurrences_rewritten == 1);
    CHECK(outcome.sanitized.replacements[1].original.id() == "hiv");
    CHECK(outcome.sanitized.replacements[1].replacement->id() == "agent");
    CHECK(outcome.preservation_pct.has_value());
    CHECK(*outcome.preservation_pct == doctest::Approx(64.1).epsilon(1e-3));
  }
  SUBCASE("redact mode removes") {
    auto outcome = sanitize(doc, f8.index, f8.taxonomy, f8.vocab,
                            make_policy({"aids"}, 1.0, SanitizeMode::redact));
    CHECK(outcome.sanitized.output_text == "fever");
    CHECK(*outcome.preservation_pct == doctest::Approx(32.05).epsilon(1e-3));
  }
  SUBCASE("no risky terms: output identical, no replacements") {
    Document safe = f8.doc("safe", "fever agent");
    auto outcome =
        sanitize(safe, f8.index, f8.taxonomy, f8.vocab, make_policy({"aids"}, 1.0));
    CHECK(outcome.sanitized.output_text == "fever agent");
    CHECK(outcome.sanitized.replacements.empty());
    CHECK(*outcome.preservation_pct == doctest::Approx(100.0));
  }
}

TEST_CASE("protection postcondition holds on the output") {
  fixtures::F8 f8;
  Document doc = f8.doc("doc", "aids hiv fever transfusion disease virus agent");
  for (double alpha : {1.0, 1.5, 2.0}) {
    auto policy = make_policy({"aids"}, alpha);
    auto outcome = sanitize(doc, f8.index, f8.taxonomy, f8.vocab, policy);
    REQUIRE(outcome.verification_passed);
    Document out = f8.doc("out", outcome.sanitized.output_text);
    for (const CanonicalTerm& t : out.distinct_terms()) {
      Bits p = pmi(f8.index, f8.term("aids"), t);
      CHECK(p.value < 1.0 / alpha);  // IC(aids) = 1
    }
  }
}

TEST_CASE("all occurrences including synonym surfaces are rewritten") {
  fixtures::F8 f8;
  Document doc =
      f8.doc("doc", "AIDS history. Acquired Immunodeficiency Syndrome, again: aids!");
  auto outcome =
      sanitize(doc, f8.index, f8.taxonomy, f8.vocab, make_policy({"aids"}, 1.0));
  CHECK(outcome.sanitized.output_text ==
        "Disease history. Disease, again: disease!");
  REQUIRE(outcome.sanitized.replacements.size() == 1);
  CHECK(outcome.sanitized.replacements[0].occurrences_rewritten == 3);
}

TEST_CASE("removal cleans up adjacent whitespace") {
  fixtures::F8 f8;
  auto policy = make_policy({"aids"}, 1.0, SanitizeMode::redact);
  CHECK(sanitize(f8.doc("a", "aids hiv fever"), f8.index, f8.taxonomy, f8.vocab,
                 policy)
            .sanitized.output_text == "fever");
  CHECK(sanitize(f8.doc("b", "fever aids"), f8.index, f8.taxonomy, f8.vocab,
                 policy)
            .sanitized.output_text == "fever");
  CHECK(sanitize(f8.doc("c", "the aids."), f8.index, f8.taxonomy, f8.vocab,
                 policy)
            .sanitized.output_text == "the.");
  CHECK(sanitize(f8.doc("d", "fever\n\naids hiv\n\nagent"), f8.index,
                 f8.taxonomy, f8.vocab, policy)
            .sanitized.output_text == "fever\n\nagent");
}

TEST_CASE("idempotence: sanitizing the output is a no-op") {
  fixtures::F8 f8;
  std::vector<std::string> texts = {
      "aids hiv fever", "AIDS and transfusion fever", "hiv hiv hiv",
      "disease virus agent", "transfusion fever"};
  for (SanitizeMode mode : {SanitizeMode::sanitize, SanitizeMode::redact}) {
    for (double alpha : {1.0, 1.5, 2.0}) {
      for (std::size_t m : {std::size_t{1}, std::size_t{2}}) {
        auto policy = make_policy({"aids"}, alpha, mode, m);
        for (const auto& text : texts) {
          auto first =
              sanitize(f8.doc("d", text), f8.index, f8.taxonomy, f8.vocab, policy);
          REQUIRE(first.verification_passed);
          auto second = sanitize(f8.doc("d", first.sanitized.output_text),
                                 f8.index, f8.taxonomy, f8.vocab, policy);
          CHECK(second.sanitized.replacements.empty());
          CHECK(second.sanitized.output_text == first.sanitized.output_text);
        }
      }
    }
  }
}

TEST_CASE("utility dominance: sanitization preserves at least redaction") {
  fixtures::F8 f8;
  std::vector<std::string> texts = {"aids hiv fever", "aids transfusion",
                                    "hiv virus disease", "fever agent"};
  for (double alpha : {1.0, 1.5, 2.0}) {
    for (const auto& text : texts) {
      auto sanitized = sanitize(f8.doc("d", text), f8.index, f8.taxonomy,
                                f8.vocab, make_policy({"aids"}, alpha));
      auto redacted =
          sanitize(f8.doc("d", text), f8.index, f8.taxonomy, f8.vocab,
                   make_policy({"aids"}, alpha, SanitizeMode::redact));
      REQUIRE(sanitized.preservation_pct.has_value());
      REQUIRE(redacted.preservation_pct.has_value());
      CHECK(*sanitized.preservation_pct >= *redacted.preservation_pct);
      bool any_generalized = false;
      for (const auto& rep : sanitized.sanitized.replacements) {
        if (rep.replacement.has_value()) any_generalized = true;
      }
      if (any_generalized) {
        CHECK(*sanitized.preservation_pct > *redacted.preservation_pct);
      }
    }
  }
}

TEST_CASE("group mode sanitizes the strongest member") {
  fixtures::F8 f8;
  Document doc = f8.doc("doc", "transfusion fever");
  auto outcome = sanitize(doc, f8.index, f8.taxonomy, f8.vocab,
                          make_policy({"aids"}, 1.0, SanitizeMode::sanitize, 2));
  // equal PMI (0.415 each): tie broken by earliest occurrence = transfusion;
  // not in the taxonomy, so it is removed
  CHECK(outcome.sanitized.output_text == "fever");
  REQUIRE(outcome.sanitized.replacements.size() == 1);
  CHECK(outcome.sanitized.replacements[0].original.id() == "transfusion");
  CHECK_FALSE(outcome.sanitized.replacements[0].replacement.has_value());
  CHECK(outcome.verification_passed);

  // after the fix the pair is no longer jointly risky
  Document out = f8.doc("out", outcome.sanitized.output_text);
  auto residual_groups =
      risky_groups(out, f8.index, make_policy({"aids"}, 1.0, SanitizeMode::sanitize, 2));
  CHECK(residual_groups.empty());
}

TEST_CASE("verification pass catches replacement-introduced group risk") {
  // Corpus: entity e; term x generalizes to g. Alone, x is risky and g is
  // safe; but {g, y} only ever co-occur alongside e, so replacing x by g
  // creates a risky pair with the original term y. The verification pass
  // must remove g.
  Taxonomy tax = [] {
    Taxonomy::Builder b;
    b.add_isa("x", "g");
    return std::move(b).build();
  }();
  Vocabulary vocab(tax, StopwordList::none());
  std::vector<std::string> corpus_texts = {
      "e x y",  // x (hence g) with e and y
      "e x",    // x with e
      "g q",    // g elsewhere keeps PMI(e;g) low
      "g q",
      "y q",    // y elsewhere keeps PMI(e;y) low
      "y q",
      "q z",
      "q z",
  };
  std::vector<Document> docs;
  int n = 0;
  for (const auto& text : corpus_texts) {
    docs.push_back(prepare_document("c" + std::to_string(n++), text,
                                    ContextUnit::document, vocab));
  }
  CorpusIndex index = build_index(docs, ContextUnit::document, tax);
  vocab.add_terms(index.vocabulary());

  // x: p={c0,c1}, joint with e = 2/8, p(e)=2/8, p(x)=2/8: PMI = 2 = IC(e) -> risky
  // g: p={c0..c3}, joint 2/8: PMI = 1 < 2 -> safe single
  // y: p={c0,c4,c5}, joint 1/8: PMI = log2((1/8)/((2/8)(3/8))) = 0.415 -> safe
  // {g,y}: p(T)={c0}=1/8, joint={c0}=1/8: PMI = 2 = IC(e) -> risky pair
  auto policy = [&] {
    SanitizationPolicy p;
    p.entities = {CanonicalTerm::normalized("e")};
    p.alpha = 1.0;
    p.group_max = 2;
    return p;
  }();

  Document doc = prepare_document("d", "x y", ContextUnit::document, vocab);
  auto outcome = sanitize(doc, index, tax, vocab, policy);
  CHECK(outcome.verification_passed);
  CHECK(outcome.verification_passes == 2);
  CHECK(outcome.sanitized.output_text == "y");
  // the audit trail shows x ending up removed after g was tried
  REQUIRE(!outcome.sanitized.replacements.empty());
  CHECK(outcome.sanitized.replacements[0].original.id() == "x");
  CHECK_FALSE(outcome.sanitized.replacements[0].replacement.has_value());
}

TEST_CASE("strict_unseen removes unseen terms and distrusts unseen replacements") {
  fixtures::F8 f8;
  auto policy = make_policy({"aids"}, 1.0);
  policy.strict_unseen = true;
  Document doc = f8.doc("d", "fever zyzzyva");
  auto outcome = sanitize(doc, f8.index, f8.taxonomy, f8.vocab, policy);
  CHECK(outcome.sanitized.output_text == "fever");
  CHECK(outcome.verification_passed);

  // An unseen generalization only happens when the unseen term's whole
  // ancestor chain is corpus-absent too (closure seeds ancestors of every
  // seen term). The strict policy must then remove rather than hide the
  // term behind an equally unvouched-for ancestor.
  Taxonomy tax = [] {
    Taxonomy::Builder b;
    b.add_isa("x", "g");  // neither x nor g occurs in the corpus
    return std::move(b).build();
  }();
  Vocabulary vocab(tax, StopwordList::none());
  std::vector<Document> docs = {
      prepare_document("c0", "e filler", ContextUnit::document, vocab),
      prepare_document("c1", "filler other", ContextUnit::document, vocab)};
  CorpusIndex index = build_index(docs, ContextUnit::document, tax);
  vocab.add_terms(index.vocabulary());
  SanitizationPolicy strict;
  strict.entities = {CanonicalTerm::normalized("e")};
  strict.alpha = 1.0;
  strict.strict_unseen = true;
  Document d2 = prepare_document("d", "filler x", ContextUnit::document, vocab);
  auto out2 = sanitize(d2, index, tax, vocab, strict);
  CHECK(out2.verification_passed);
  CHECK(out2.verification_passes == 1);  // g was never introduced
  CHECK(out2.sanitized.output_text == "filler");
  REQUIRE(out2.sanitized.replacements.size() == 1);
  CHECK(out2.sanitized.replacements[0].original.id() == "x");
  CHECK_FALSE(out2.sanitized.replacements[0].replacement.has_value());
}

TEST_CASE("fingerprint mismatch between taxonomy and index is an input error") {
  fixtures::F8 f8;
  Taxonomy other = [] {
    Taxonomy::Builder b;
    b.add_isa("a", "b");
    return std::move(b).build();
  }();
  Vocabulary vocab(other, StopwordList::none());
  Document doc = prepare_document("d", "aids", ContextUnit::document, vocab);
  CHECK_THROWS_AS(
      sanitize(doc, f8.index, other, vocab, make_policy({"aids"}, 1.0)),
      InputError);
}

TEST_CASE("entity absent from the corpus aborts sanitization") {
  fixtures::F8 f8;
  Document doc = f8.doc("d", "aids");
  CHECK_THROWS_AS(sanitize(doc, f8.index, f8.taxonomy, f8.vocab,
                           make_policy({"absent-entity"}, 1.0)),
                  EntityNotInCorpusError);
}

TEST_CASE("randomized suite: postcondition, idempotence, dominance") {
  std::mt19937 rng(77);
  for (int round = 0; round < 20; ++round) {
    auto rc = fixtures::make_random_corpus(rng);
    auto entities = fixtures::seen_terms(rc);
    if (entities.empty()) continue;
    std::string text;
    for (const auto& t : rc.vocabulary) text += t + " ";

    for (double alpha : {1.0, 1.5, 2.0}) {
      SanitizationPolicy policy;
      policy.entities = {CanonicalTerm::normalized(entities[0])};
      if (entities.size() > 2) {
        policy.entities.push_back(CanonicalTerm::normalized(entities[2]));
      }
      policy.alpha = alpha;

      Document doc =
          prepare_document("d", text, ContextUnit::document, rc.vocab);
      auto outcome = sanitize(doc, rc.index, rc.taxonomy(), rc.vocab, policy);
      REQUIRE(outcome.verification_passed);

      // postcondition
      Document out = prepare_document("o", outcome.sanitized.output_text,
                                      ContextUnit::document, rc.vocab);
      for (const CanonicalTerm& t : out.distinct_terms()) {
        for (const CanonicalTerm& c : policy.entities) {
          double threshold =
              information_content(rc.index, c).value / alpha;
          CHECK(pmi(rc.index, c, t).value < threshold);
        }
      }

      // idempotence
      auto again = sanitize(out, rc.index, rc.taxonomy(), rc.vocab, policy);
      CHECK(again.sanitized.replacements.empty());

      // dominance
      SanitizationPolicy redact = policy;
      redact.mode = SanitizeMode::redact;
      auto redacted = sanitize(doc, rc.index, rc.taxonomy(), rc.vocab, redact);
      if (outcome.preservation_pct && redacted.preservation_pct) {
        CHECK(*outcome.preservation_pct >= *redacted.preservation_pct);
      }
    }
  }
}
