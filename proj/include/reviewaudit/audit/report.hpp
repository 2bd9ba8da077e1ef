#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "reviewaudit/audit/experiments.hpp"
#include "reviewaudit/audit/manifest.hpp"
#include "reviewaudit/llm/client.hpp"

namespace reviewaudit::audit {

inline constexpr const char* kToolName = "review-audit";
inline constexpr const char* kToolVersion = "1.0.0";

struct ReportContext {
  std::string model;
  std::string backend;     // "mock" or "http"
  llm::CacheStats cache;
  std::string created_at;  // empty: stamped with the current UTC time
};

// Assembles the persisted report: tool info, manifest echo, provenance,
// per-item results, summary, and the full-scale reference block. Identical
// inputs yield identical output except for created_at.
nlohmann::ordered_json build_report(const Manifest& m, const ExperimentResult& result,
                                    const ReportContext& ctx);

// Human-readable companion for the JSON report.
std::string report_markdown(const nlohmann::ordered_json& report);

std::string iso8601_utc_now();

// Writes report JSON to output_path and the markdown summary next to it
// with a .md extension.
void write_report_files(const std::string& output_path,
                        const nlohmann::ordered_json& report);

// Structural checks for a persisted report; empty result means valid.
std::vector<std::string> report_schema_problems(const nlohmann::ordered_json& report);

}  // namespace reviewaudit::audit
