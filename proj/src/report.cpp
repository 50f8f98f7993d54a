#include "csanitize/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "csanitize/errors.hpp"

namespace csan {

namespace {

nlohmann::json bits_to_json(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : "-inf";
}

double bits_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("report: bad bits value '" + s + "'");
  }
  return j.get<double>();
}

FindingKind kind_from_string(const std::string& s) {
  if (s == "single") return FindingKind::single;
  if (s == "group") return FindingKind::group;
  if (s == "unseen") return FindingKind::unseen;
  throw InputError("report: unknown finding kind '" + s + "'");
}

}  // namespace

nlohmann::json SanitizationReport::to_json() const {
  nlohmann::json j;
  j["doc_id"] = doc_id;

  nlohmann::json jp;
  nlohmann::json entities = nlohmann::json::array();
  for (const CanonicalTerm& c : policy.entities) entities.push_back(c.id());
  jp["entities"] = std::move(entities);
  jp["alpha"] = policy.alpha;
  jp["mode"] = to_string(policy.mode);
  jp["context_unit"] = to_string(policy.context_unit);
  jp["group_max"] = policy.group_max;
  jp["strict_unseen"] = policy.strict_unseen;
  j["policy"] = std::move(jp);

  nlohmann::json jfindings = nlohmann::json::array();
  for (const RiskFinding& f : findings) {
    nlohmann::json jf;
    jf["kind"] = to_string(f.kind);
    nlohmann::json terms = nlohmann::json::array();
    for (const CanonicalTerm& t : f.terms) terms.push_back(t.id());
    jf["terms"] = std::move(terms);
    jf["entity"] = f.entity.id();
    jf["pmi_bits"] = bits_to_json(f.pmi_bits.value);
    jf["threshold_bits"] = f.threshold_bits;
    if (f.context_index.has_value()) {
      jf["context_index"] = *f.context_index;
    } else {
      jf["context_index"] = nullptr;
    }
    jfindings.push_back(std::move(jf));
  }
  j["findings"] = std::move(jfindings);

  nlohmann::json jreps = nlohmann::json::array();
  for (const Replacement& r : replacements) {
    nlohmann::json jr;
    jr["original"] = r.original.id();
    if (r.replacement.has_value()) {
      jr["replacement"] = r.replacement->id();
    } else {
      jr["replacement"] = nullptr;
    }
    jr["occurrences_rewritten"] = r.occurrences_rewritten;
    nlohmann::json chain = nlohmann::json::array();
    for (const TriedGeneralization& tried : r.chain_tried) {
      double max_pmi = -std::numeric_limits<double>::infinity();
      for (const auto& [entity, bits] : tried.entity_pmi) {
        max_pmi = std::max(max_pmi, bits.value);
      }
      nlohmann::json jt;
      jt["term"] = tried.term.id();
      jt["max_pmi_bits"] = tried.entity_pmi.empty()
                               ? nlohmann::json(nullptr)
                               : bits_to_json(max_pmi);
      chain.push_back(std::move(jt));
    }
    jr["chain_tried"] = std::move(chain);
    jreps.push_back(std::move(jr));
  }
  j["replacements"] = std::move(jreps);

  nlohmann::json ju;
  ju["original_bits"] = utility_original_bits;
  ju["output_bits"] = utility_output_bits;
  if (preservation_pct.has_value()) {
    ju["preservation_pct"] = *preservation_pct;
  } else {
    ju["preservation_pct"] = nullptr;
  }
  j["utility"] = std::move(ju);

  nlohmann::json jv;
  jv["passes"] = verification_passed;
  jv["residual_count"] = residual_count;
  j["verification"] = std::move(jv);
  return j;
}

SanitizationReport SanitizationReport::from_json(const nlohmann::json& j) {
  SanitizationReport report;
  try {
    report.doc_id = j.at("doc_id").get<std::string>();

    const auto& jp = j.at("policy");
    for (const auto& e : jp.at("entities")) {
      report.policy.entities.push_back(
          CanonicalTerm::normalized(e.get<std::string>()));
    }
    report.policy.alpha = jp.at("alpha").get<double>();
    report.policy.mode = sanitize_mode_from_string(jp.at("mode").get<std::string>());
    report.policy.context_unit =
        context_unit_from_string(jp.at("context_unit").get<std::string>());
    report.policy.group_max = jp.at("group_max").get<std::size_t>();
    report.policy.strict_unseen = jp.at("strict_unseen").get<bool>();

    for (const auto& jf : j.at("findings")) {
      RiskFinding f;
      f.kind = kind_from_string(jf.at("kind").get<std::string>());
      for (const auto& t : jf.at("terms")) {
        f.terms.push_back(CanonicalTerm::normalized(t.get<std::string>()));
      }
      f.entity = CanonicalTerm::normalized(jf.at("entity").get<std::string>());
      f.pmi_bits = {bits_from_json(jf.at("pmi_bits")), false};
      f.threshold_bits = jf.at("threshold_bits").get<double>();
      if (!jf.at("context_index").is_null()) {
        f.context_index = jf.at("context_index").get<int>();
      }
      report.findings.push_back(std::move(f));
    }

    for (const auto& jr : j.at("replacements")) {
      Replacement r;
      r.original =
          CanonicalTerm::normalized(jr.at("original").get<std::string>());
      if (!jr.at("replacement").is_null()) {
        r.replacement =
            CanonicalTerm::normalized(jr.at("replacement").get<std::string>());
      }
      r.occurrences_rewritten =
          jr.at("occurrences_rewritten").get<std::size_t>();
      for (const auto& jt : jr.at("chain_tried")) {
        TriedGeneralization tried;
        tried.term =
            CanonicalTerm::normalized(jt.at("term").get<std::string>());
        if (!jt.at("max_pmi_bits").is_null()) {
          tried.entity_pmi.emplace_back(
              CanonicalTerm(), Bits{bits_from_json(jt.at("max_pmi_bits")),
                                    false});
        }
        r.chain_tried.push_back(std::move(tried));
      }
      report.replacements.push_back(std::move(r));
    }

    const auto& ju = j.at("utility");
    report.utility_original_bits = ju.at("original_bits").get<double>();
    report.utility_output_bits = ju.at("output_bits").get<double>();
    if (!ju.at("preservation_pct").is_null()) {
      report.preservation_pct = ju.at("preservation_pct").get<double>();
    }

    const auto& jv = j.at("verification");
    report.verification_passed = jv.at("passes").get<bool>();
    report.residual_count = jv.at("residual_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report JSON: ") + e.what());
  }
  return report;
}

SanitizationReport make_report(const SanitizeOutcome& outcome) {
  SanitizationReport report;
  report.doc_id = outcome.sanitized.doc_id;
  report.policy = outcome.sanitized.policy_snapshot;
  report.findings = outcome.findings;
  report.replacements = outcome.sanitized.replacements;
  report.utility_original_bits = outcome.utility_original_bits;
  report.utility_output_bits = outcome.utility_output_bits;
  report.preservation_pct = outcome.preservation_pct;
  report.verification_passed = outcome.verification_passed;
  report.residual_count = outcome.sanitized.residual_findings.size();
  return report;
}

void save_report(const SanitizationReport& report,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write report file: " + path.string());
  out << report.to_json().dump(2) << "\n";
  if (!out) throw InputError("failed writing report file: " + path.string());
}

SanitizationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open report file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("report file " + path.string() + ": " + e.what());
  }
  return SanitizationReport::from_json(j);
}

}  // namespace csan
