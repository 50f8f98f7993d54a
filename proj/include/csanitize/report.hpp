#ifndef CSANITIZE_REPORT_HPP
#define CSANITIZE_REPORT_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "csanitize/sanitizer.hpp"

namespace csan {

// The per-document decision record written next to each sanitized output.
// Infinite PMI values are serialized as the strings "inf" / "-inf" since
// JSON has no infinity literal.
struct SanitizationReport {
  std::string doc_id;
  SanitizationPolicy policy;
  std::vector<RiskFinding> findings;
  std::vector<Replacement> replacements;
  double utility_original_bits = 0.0;
  double utility_output_bits = 0.0;
  std::optional<double> preservation_pct;
  bool verification_passed = false;
  std::size_t residual_count = 0;

  nlohmann::json to_json() const;
  static SanitizationReport from_json(const nlohmann::json& j);
};

SanitizationReport make_report(const SanitizeOutcome& outcome);

void save_report(const SanitizationReport& report,
                 const std::filesystem::path& path);
SanitizationReport load_report(const std::filesystem::path& path);

}  // namespace csan

#endif  // CSANITIZE_REPORT_HPP
