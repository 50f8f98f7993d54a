#include "csanitize/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "csanitize/errors.hpp"

namespace csan {

std::string to_string(SanitizeMode mode) {
  return mode == SanitizeMode::redact ? "redact" : "sanitize";
}

SanitizeMode sanitize_mode_from_string(std::string_view name) {
  if (name == "redact") return SanitizeMode::redact;
  if (name == "sanitize") return SanitizeMode::sanitize;
  throw InputError("unknown mode: '" + std::string(name) +
                   "' (expected redact|sanitize)");
}

std::string to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::single: return "single";
    case FindingKind::group: return "group";
    case FindingKind::unseen: return "unseen";
  }
  return "single";
}

void SanitizationPolicy::validate() const {
  if (entities.empty()) {
    throw InputError("policy requires at least one protected entity");
  }
  for (const CanonicalTerm& c : entities) {
    if (c.empty()) throw InputError("protected entity is empty");
  }
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InputError("alpha must be >= 1");
  }
  if (group_max < 1) throw InputError("group-max must be >= 1");
  if (group_budget < 1) throw InputError("group budget must be >= 1");
}

namespace {

// Per-entity constants reused across every term of a document.
struct EntityThreshold {
  CanonicalTerm entity;
  double ic_bits;
  double threshold_bits;  // ic_bits / alpha
};

std::vector<EntityThreshold> entity_thresholds(
    const CorpusIndex& index, const SanitizationPolicy& policy) {
  std::vector<EntityThreshold> out;
  out.reserve(policy.entities.size());
  for (const CanonicalTerm& c : policy.entities) {
    Bits ic = information_content(index, c);
    if (!ic.finite()) throw EntityNotInCorpusError(c.id());
    out.push_back({c, ic.value, ic.value / policy.alpha});
  }
  return out;
}

}  // namespace

RiskEvidence is_risky_term(const CorpusIndex& index, const CanonicalTerm& t,
                           const CanonicalTerm& c, double alpha) {
  Bits ic = information_content(index, c);
  if (!ic.finite()) throw EntityNotInCorpusError(c.id());
  RiskEvidence ev;
  ev.ic_bits = ic.value;
  ev.threshold_bits = ic.value / alpha;
  ev.pmi_bits = pmi(index, c, t);
  ev.risky = crosses_threshold(ev.pmi_bits.value, ev.threshold_bits);
  return ev;
}

std::vector<RiskFinding> risky_terms(const Document& doc,
                                     const CorpusIndex& index,
                                     const SanitizationPolicy& policy) {
  policy.validate();
  const std::vector<EntityThreshold> thresholds =
      entity_thresholds(index, policy);

  std::vector<RiskFinding> findings;
  for (const CanonicalTerm& term : doc.distinct_terms()) {
    if (policy.strict_unseen && !index.contains(term)) {
      RiskFinding f;
      f.kind = FindingKind::unseen;
      f.terms = {term};
      f.entity = thresholds.front().entity;
      f.pmi_bits = {-std::numeric_limits<double>::infinity(), true};
      f.threshold_bits = thresholds.front().threshold_bits;
      findings.push_back(std::move(f));
      continue;
    }
    for (const EntityThreshold& et : thresholds) {
      Bits p = pmi(index, et.entity, term);
      if (crosses_threshold(p.value, et.threshold_bits)) {
        RiskFinding f;
        f.kind = FindingKind::single;
        f.terms = {term};
        f.entity = et.entity;
        f.pmi_bits = p;
        f.threshold_bits = et.threshold_bits;
        findings.push_back(std::move(f));
        break;  // first violating entity, per the C-order scan
      }
    }
  }
  return findings;
}

std::vector<RiskFinding> risky_groups(const Document& doc,
                                      const CorpusIndex& index,
                                      const SanitizationPolicy& policy) {
  policy.validate();
  std::vector<RiskFinding> findings;
  if (policy.group_max < 2) return findings;

  const std::vector<EntityThreshold> thresholds =
      entity_thresholds(index, policy);

  std::unordered_set<CanonicalTerm> individually_risky;
  for (const RiskFinding& f : risky_terms(doc, index, policy)) {
    individually_risky.insert(f.terms.front());
  }

  // Distinct candidate terms per context, in first-occurrence order.
  // Unseen terms never form a risky group (their joint probability is 0),
  // so they are skipped outright.
  std::vector<std::vector<CanonicalTerm>> per_context(doc.contexts.size());
  std::vector<std::unordered_set<CanonicalTerm>> seen(doc.contexts.size());
  for (const TermOccurrence& occ : doc.occurrences) {
    auto ctx = static_cast<std::size_t>(occ.context_index);
    if (individually_risky.count(occ.canonical) > 0) continue;
    if (!index.contains(occ.canonical)) continue;
    if (seen[ctx].insert(occ.canonical).second) {
      per_context[ctx].push_back(occ.canonical);
    }
  }

  for (std::size_t ctx = 0; ctx < per_context.size(); ++ctx) {
    std::vector<CanonicalTerm> survivors = per_context[ctx];
    std::size_t evaluations = 0;

    for (std::size_t k = 2; k <= policy.group_max; ++k) {
      if (survivors.size() < k) break;
      std::unordered_set<CanonicalTerm> consumed;

      // Lexicographic k-combinations of the surviving candidates.
      std::vector<std::size_t> pick(k);
      for (std::size_t i = 0; i < k; ++i) pick[i] = i;
      while (true) {
        if (++evaluations > policy.group_budget) {
          throw GroupBudgetError(static_cast<int>(ctx), policy.group_budget);
        }
        std::vector<CanonicalTerm> group;
        group.reserve(k);
        for (std::size_t i : pick) group.push_back(survivors[i]);

        for (const EntityThreshold& et : thresholds) {
          Bits p = pmi_group(index, et.entity, group);
          if (crosses_threshold(p.value, et.threshold_bits)) {
            RiskFinding f;
            f.kind = FindingKind::group;
            f.terms = group;
            f.entity = et.entity;
            f.pmi_bits = p;
            f.threshold_bits = et.threshold_bits;
            f.context_index = static_cast<int>(ctx);
            findings.push_back(std::move(f));
            consumed.insert(group.begin(), group.end());
            break;
          }
        }

        // Advance the combination.
        std::size_t i = k;
        while (i > 0) {
          --i;
          if (pick[i] != i + survivors.size() - k) break;
        }
        if (pick[i] == i + survivors.size() - k) break;
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }

      if (!consumed.empty()) {
        std::erase_if(survivors, [&](const CanonicalTerm& t) {
          return consumed.count(t) > 0;
        });
      }
    }
  }
  return findings;
}

}  // namespace csan
