#include "csanitize/metrics.hpp"

#include <fstream>

#include <json.hpp>

#include "csanitize/errors.hpp"
#include "csanitize/infotheory.hpp"

namespace csan {

namespace {

std::size_t intersection_size(const TermSet& a, const TermSet& b) {
  const TermSet& small = a.size() <= b.size() ? a : b;
  const TermSet& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const CanonicalTerm& t : small) n += large.count(t);
  return n;
}

}  // namespace

std::optional<double> precision(const TermSet& system, const TermSet& gold) {
  if (system.empty()) return std::nullopt;
  return 100.0 * static_cast<double>(intersection_size(system, gold)) /
         static_cast<double>(system.size());
}

std::optional<double> recall(const TermSet& system, const TermSet& gold) {
  if (gold.empty()) return std::nullopt;
  return 100.0 * static_cast<double>(intersection_size(system, gold)) /
         static_cast<double>(gold.size());
}

std::optional<double> f_measure(std::optional<double> precision_pct,
                                std::optional<double> recall_pct) {
  if (!precision_pct.has_value() || !recall_pct.has_value()) {
    return std::nullopt;
  }
  double p = *precision_pct;
  double r = *recall_pct;
  if (p == 0.0 && r == 0.0) return 0.0;
  return 2.0 * r * p / (r + p);
}

double utility(std::span<const TermOccurrence> occurrences,
               const CorpusIndex& index, std::size_t* unseen_occurrences) {
  double total = 0.0;
  std::size_t unseen = 0;
  for (const TermOccurrence& occ : occurrences) {
    Bits ic = information_content(index, occ.canonical);
    if (ic.unseen) {
      ++unseen;  // contributes 0 rather than poisoning the sum
    } else {
      total += ic.value;
    }
  }
  if (unseen_occurrences != nullptr) *unseen_occurrences = unseen;
  return total;
}

std::optional<double> utility_preservation(const Document& output,
                                           const Document& original,
                                           const CorpusIndex& index) {
  double original_bits = utility(original.occurrences, index);
  if (original_bits <= 0.0) return std::nullopt;
  return 100.0 * utility(output.occurrences, index) / original_bits;
}

std::vector<GoldAnnotation> load_gold_annotations(
    const std::filesystem::path& file, const Taxonomy& taxonomy) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open gold file: " + file.string());

  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("gold file " + file.string() + ": " + e.what());
  }

  auto parse_one = [&](const nlohmann::json& node) {
    if (!node.is_object() || !node.contains("doc_id") ||
        !node.contains("sensitive_terms")) {
      throw InputError("gold file " + file.string() +
                       ": expected {doc_id, sensitive_terms}");
    }
    GoldAnnotation gold;
    gold.doc_id = node.at("doc_id").get<std::string>();
    for (const auto& term : node.at("sensitive_terms")) {
      CanonicalTerm t = taxonomy.canonicalize(term.get<std::string>());
      if (!t.empty()) gold.sensitive_terms.insert(t);
    }
    return gold;
  };

  std::vector<GoldAnnotation> out;
  if (root.is_array()) {
    for (const auto& node : root) out.push_back(parse_one(node));
  } else {
    out.push_back(parse_one(root));
  }
  return out;
}

}  // namespace csan
