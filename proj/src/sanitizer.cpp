#include "csanitize/sanitizer.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "csanitize/errors.hpp"
#include "csanitize/infotheory.hpp"
#include "csanitize/log.hpp"
#include "csanitize/metrics.hpp"

namespace csan {

namespace {

bool starts_uppercase_at(const std::string& raw, std::size_t pos) {
  unsigned char b0 = static_cast<unsigned char>(raw[pos]);
  if (b0 >= 'A' && b0 <= 'Z') return true;
  if (b0 == 0xC3 && pos + 1 < raw.size()) {
    unsigned char b1 = static_cast<unsigned char>(raw[pos + 1]);
    return b1 >= 0x80 && b1 <= 0x9E && b1 != 0x97;
  }
  return false;
}

std::string render_replacement(const CanonicalTerm& term, bool capitalize) {
  std::string out = term.id();
  if (capitalize && !out.empty() && out[0] >= 'a' && out[0] <= 'z') {
    out[0] = static_cast<char>(out[0] - 0x20);
  }
  return out;
}

bool is_ascii_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::size_t newline_count(std::string_view text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

using RewritePlan =
    std::unordered_map<CanonicalTerm, std::optional<CanonicalTerm>>;

// Applies the plan to every matching occurrence. Removed spans absorb the
// redundant side of their adjacent whitespace, preferring to keep the run
// with more newlines so paragraph breaks survive.
std::string rewrite_text(const Document& doc, const RewritePlan& plan,
                         std::unordered_map<CanonicalTerm, std::size_t>*
                             rewritten_counts) {
  const std::string& raw = doc.raw_text;
  std::string out;
  out.reserve(raw.size());
  std::size_t cursor = 0;

  auto trailing_ws_start = [&]() {
    std::size_t i = out.size();
    while (i > 0 && is_ascii_space(out[i - 1])) --i;
    return i;
  };

  for (const TermOccurrence& occ : doc.occurrences) {
    auto it = plan.find(occ.canonical);
    if (it == plan.end()) continue;

    std::size_t span_begin = doc.tokens[occ.tokens.begin].start;
    std::size_t span_end = doc.tokens[occ.tokens.end - 1].end;
    if (span_begin < cursor) continue;  // overlap guard; extraction forbids it
    out.append(raw, cursor, span_begin - cursor);
    cursor = span_end;
    if (rewritten_counts != nullptr) ++(*rewritten_counts)[occ.canonical];

    if (it->second.has_value()) {
      out += render_replacement(*it->second,
                                starts_uppercase_at(raw, span_begin));
      continue;
    }

    // Removal.
    std::size_t follow_end = cursor;
    while (follow_end < raw.size() && is_ascii_space(raw[follow_end])) {
      ++follow_end;
    }
    std::size_t follow_len = follow_end - cursor;
    std::size_t trail_start = trailing_ws_start();
    bool out_ends_ws = out.empty() || trail_start < out.size();

    if (follow_len > 0 && out_ends_ws) {
      if (out.empty()) {
        cursor = follow_end;
      } else if (newline_count(std::string_view(raw).substr(cursor, follow_len)) >
                 newline_count(std::string_view(out).substr(trail_start))) {
        out.erase(trail_start);  // keep the following run instead
      } else {
        cursor = follow_end;
      }
    } else if (follow_len == 0 && trail_start < out.size()) {
      out.erase(trail_start);
    }
  }
  out.append(raw, cursor, raw.size() - cursor);
  return out;
}

std::vector<RiskFinding> detect(const Document& doc, const CorpusIndex& index,
                                const SanitizationPolicy& policy) {
  std::vector<RiskFinding> findings = risky_terms(doc, index, policy);
  if (policy.group_max > 1) {
    std::vector<RiskFinding> groups = risky_groups(doc, index, policy);
    findings.insert(findings.end(), std::make_move_iterator(groups.begin()),
                    std::make_move_iterator(groups.end()));
  }
  return findings;
}

// Position of each term's first occurrence, for deterministic ordering.
std::unordered_map<CanonicalTerm, std::size_t> first_occurrence_rank(
    const Document& doc) {
  std::unordered_map<CanonicalTerm, std::size_t> rank;
  for (const TermOccurrence& occ : doc.occurrences) {
    rank.try_emplace(occ.canonical, rank.size());
  }
  return rank;
}

CanonicalTerm pick_group_member(const RiskFinding& finding,
                                const CorpusIndex& index,
                                const std::unordered_map<CanonicalTerm,
                                                         std::size_t>& rank) {
  CanonicalTerm best;
  double best_pmi = 0.0;
  std::size_t best_rank = 0;
  bool have = false;
  for (const CanonicalTerm& member : finding.terms) {
    double p = pmi(index, finding.entity, member).value;
    auto it = rank.find(member);
    std::size_t r = it == rank.end() ? rank.size() : it->second;
    if (!have || p > best_pmi || (p == best_pmi && r < best_rank)) {
      best = member;
      best_pmi = p;
      best_rank = r;
      have = true;
    }
  }
  return best;
}

}  // namespace

GeneralizationChoice select_generalization(const CanonicalTerm& t,
                                           const CorpusIndex& index,
                                           const Taxonomy& taxonomy,
                                           const SanitizationPolicy& policy) {
  GeneralizationChoice choice;
  if (policy.mode == SanitizeMode::redact) return choice;

  for (const CanonicalTerm& g : taxonomy.generalizations(t)) {
    TriedGeneralization tried;
    tried.term = g;
    bool ok = true;
    if (policy.strict_unseen && !index.contains(g)) {
      ok = false;  // an unseen replacement cannot be vouched for
    } else {
      for (const CanonicalTerm& c : policy.entities) {
        Bits ic = information_content(index, c);
        if (!ic.finite()) throw EntityNotInCorpusError(c.id());
        Bits p = pmi(index, c, g);
        tried.entity_pmi.emplace_back(c, p);
        if (crosses_threshold(p.value, ic.value / policy.alpha)) {
          ok = false;
          break;
        }
      }
    }
    tried.accepted = ok;
    choice.chain_tried.push_back(std::move(tried));
    if (ok) {
      choice.replacement = g;
      return choice;
    }
  }
  return choice;  // chain exhausted (or empty): REMOVED
}

SanitizeOutcome sanitize(const Document& doc, const CorpusIndex& index,
                         const Taxonomy& taxonomy, const Vocabulary& vocab,
                         const SanitizationPolicy& policy) {
  policy.validate();
  if (index.taxonomy_fingerprint() != taxonomy.fingerprint()) {
    throw InputError(
        "index was built with a different taxonomy than the one supplied");
  }
  for (const ContextSpan& span : doc.contexts) {
    if (span.unit != policy.context_unit) {
      throw InputError("document '" + doc.doc_id +
                       "' was segmented with unit '" + to_string(span.unit) +
                       "', policy wants '" + to_string(policy.context_unit) +
                       "'");
    }
  }

  SanitizeOutcome outcome;
  outcome.findings = detect(doc, index, policy);

  const auto rank = first_occurrence_rank(doc);

  // Replacement targets: every individually risky or strict-unseen term,
  // plus the strongest member of each risky group.
  std::unordered_set<CanonicalTerm> target_set;
  for (const RiskFinding& finding : outcome.findings) {
    if (finding.kind == FindingKind::group) {
      target_set.insert(pick_group_member(finding, index, rank));
    } else {
      target_set.insert(finding.terms.front());
    }
  }
  std::vector<CanonicalTerm> targets(target_set.begin(), target_set.end());
  std::sort(targets.begin(), targets.end(),
            [&](const CanonicalTerm& a, const CanonicalTerm& b) {
              return rank.at(a) < rank.at(b);
            });

  SanitizedDocument result;
  result.doc_id = doc.doc_id;
  result.policy_snapshot = policy;

  RewritePlan plan;
  for (const CanonicalTerm& term : targets) {
    GeneralizationChoice choice =
        select_generalization(term, index, taxonomy, policy);
    Replacement rep;
    rep.original = term;
    rep.replacement = choice.replacement;
    rep.chain_tried = std::move(choice.chain_tried);
    plan.emplace(term, rep.replacement);
    result.replacements.push_back(std::move(rep));
  }

  std::unordered_map<CanonicalTerm, std::size_t> rewritten;
  result.output_text = plan.empty() ? doc.raw_text
                                    : rewrite_text(doc, plan, &rewritten);
  for (Replacement& rep : result.replacements) {
    auto it = rewritten.find(rep.original);
    rep.occurrences_rewritten = it == rewritten.end() ? 0 : it->second;
  }

  // Verification: re-extract the output and re-run detection. Replacements
  // introduce terms the detection loop never examined, so this is what
  // makes the guarantee checkable.
  Document out_doc = prepare_document(doc.doc_id, result.output_text,
                                      policy.context_unit, vocab);
  std::vector<RiskFinding> residuals = detect(out_doc, index, policy);
  outcome.verification_passes = 1;

  if (!residuals.empty()) {
    std::unordered_set<CanonicalTerm> introduced;
    for (const Replacement& rep : result.replacements) {
      if (rep.replacement.has_value()) introduced.insert(*rep.replacement);
    }
    std::unordered_set<CanonicalTerm> input_terms;
    for (const TermOccurrence& occ : doc.occurrences) {
      input_terms.insert(occ.canonical);
    }

    // Break each residual group by removing one offending replacement term.
    // Prefer a term the input document never contained on its own, so
    // original text is not collateral damage; then the strongest
    // contributor, then the earliest occurrence.
    const auto out_rank = first_occurrence_rank(out_doc);
    RewritePlan removal;
    for (const RiskFinding& finding : residuals) {
      bool already_broken = false;
      for (const CanonicalTerm& term : finding.terms) {
        if (removal.count(term) > 0) already_broken = true;
      }
      if (already_broken) continue;

      CanonicalTerm chosen;
      bool chosen_pure = false;
      double chosen_pmi = 0.0;
      std::size_t chosen_rank = 0;
      bool have = false;
      for (const CanonicalTerm& term : finding.terms) {
        if (introduced.count(term) == 0) continue;
        bool pure = plan.count(term) > 0 || input_terms.count(term) == 0;
        double p = pmi(index, finding.entity, term).value;
        auto it = out_rank.find(term);
        std::size_t r = it == out_rank.end() ? out_rank.size() : it->second;
        bool better;
        if (!have) {
          better = true;
        } else if (pure != chosen_pure) {
          better = pure;
        } else if (p != chosen_pmi) {
          better = p > chosen_pmi;
        } else {
          better = r < chosen_rank;
        }
        if (better) {
          chosen = term;
          chosen_pure = pure;
          chosen_pmi = p;
          chosen_rank = r;
          have = true;
        }
      }
      if (have) removal.emplace(chosen, std::nullopt);
    }

    if (!removal.empty()) {
      log::info("verification pass removed ", removal.size(),
                " replacement term(s) in document '", doc.doc_id, "'");
      std::unordered_map<CanonicalTerm, std::size_t> removed_counts;
      std::string cleaned = rewrite_text(out_doc, removal, &removed_counts);

      // Update the audit trail: replacements whose generalization had to
      // go become removals; output terms deleted on their own account get
      // an explicit record too.
      std::unordered_set<CanonicalTerm> downgraded;
      for (Replacement& rep : result.replacements) {
        if (rep.replacement.has_value() &&
            removal.count(*rep.replacement) > 0) {
          downgraded.insert(*rep.replacement);
          rep.replacement = std::nullopt;
        }
      }
      for (const auto& [term, count] : removed_counts) {
        if (downgraded.count(term) > 0) continue;
        Replacement rep;
        rep.original = term;
        rep.replacement = std::nullopt;
        rep.occurrences_rewritten = count;
        result.replacements.push_back(std::move(rep));
      }

      result.output_text = std::move(cleaned);
      out_doc = prepare_document(doc.doc_id, result.output_text,
                                 policy.context_unit, vocab);
      residuals = detect(out_doc, index, policy);
      outcome.verification_passes = 2;
    }
  }

  // A residual finding surviving the removal retry is an internal
  // invariant violation; the outcome is returned (not thrown) so callers
  // can still write the audit report.
  result.residual_findings = residuals;
  outcome.verification_passed = residuals.empty();
  if (!outcome.verification_passed) {
    log::error("verification failed for document '", doc.doc_id, "': ",
               residuals.size(), " residual finding(s)");
  }
  outcome.utility_original_bits = utility(doc.occurrences, index);
  outcome.utility_output_bits = utility(out_doc.occurrences, index);
  if (outcome.utility_original_bits > 0.0) {
    outcome.preservation_pct =
        100.0 * outcome.utility_output_bits / outcome.utility_original_bits;
  }
  outcome.sanitized = std::move(result);
  return outcome;
}

}  // namespace csan
