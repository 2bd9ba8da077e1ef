#include "reviewaudit/audit/report.hpp"

#include <ctime>
#include <filesystem>

#include "reviewaudit/core/io.hpp"
#include "reviewaudit/review/templates.hpp"

namespace reviewaudit::audit {

using nlohmann::ordered_json;

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

ordered_json build_report(const Manifest& m, const ExperimentResult& result,
                          const ReportContext& ctx) {
  ordered_json r;
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["experiment"] = to_string(m.experiment);
  r["created_at"] = ctx.created_at.empty() ? iso8601_utc_now() : ctx.created_at;
  r["manifest"] = manifest_json(m);

  ordered_json prov;
  prov["seed"] = m.seed;
  prov["model"] = ctx.model;
  prov["backend"] = ctx.backend;
  prov["offline"] = m.offline;
  prov["matcher"] = m.offline_matcher ? "token-overlap" : "model";
  prov["template_ids"] = {
      review::structured_review_template().id,
      review::summarize_keypoints_template().id,
      review::match_keypoints_template().id,
      review::rate_review_template().id,
  };
  ordered_json cache;
  cache["hits"] = ctx.cache.hits;
  cache["misses"] = ctx.cache.misses;
  cache["coalesced"] = ctx.cache.coalesced;
  prov["cache"] = std::move(cache);
  r["provenance"] = std::move(prov);

  r["failed_items"] = result.failed_items;
  r["items"] = result.items;
  r["summary"] = result.summary;
  r["reference_targets"] = result.reference_targets;
  return r;
}

std::string report_markdown(const ordered_json& report) {
  std::string md;
  md += "# review-audit report: " + report.value("experiment", "?") + "\n\n";
  md += "- created: " + report.value("created_at", "?") + "\n";
  if (report.contains("provenance")) {
    const auto& p = report["provenance"];
    md += "- model: " + p.value("model", "?") + " (backend: " + p.value("backend", "?") +
          ", matcher: " + p.value("matcher", "?") + ")\n";
    if (p.contains("seed")) md += "- seed: " + p["seed"].dump() + "\n";
    if (p.contains("cache"))
      md += "- cache: " + p["cache"]["hits"].dump() + " hits, " +
            p["cache"]["misses"].dump() + " misses\n";
  }
  const std::size_t items = report.contains("items") ? report["items"].size() : 0;
  const int failed = report.value("failed_items", 0);
  md += "- items: " + std::to_string(items);
  md += failed > 0 ? " (" + std::to_string(failed) + " failed)\n" : " (all ok)\n";
  md += "\n## Summary\n\n```json\n";
  md += report.contains("summary") ? report["summary"].dump(2) : "{}";
  md += "\n```\n\n## Full-scale reference\n\n```json\n";
  md += report.contains("reference_targets") ? report["reference_targets"].dump(2) : "{}";
  md += "\n```\n";
  return md;
}

void write_report_files(const std::string& output_path, const ordered_json& report) {
  write_file(output_path, report.dump(2) + "\n");
  std::filesystem::path md_path(output_path);
  md_path.replace_extension(".md");
  write_file(md_path.string(), report_markdown(report));
}

std::vector<std::string> report_schema_problems(const ordered_json& report) {
  std::vector<std::string> problems;
  const auto need = [&](const char* key, bool ok) {
    if (!report.contains(key))
      problems.push_back(std::string("missing field '") + key + "'");
    else if (!ok)
      problems.push_back(std::string("field '") + key + "' has the wrong type");
  };
  need("tool", report.contains("tool") && report["tool"].is_string());
  need("version", report.contains("version") && report["version"].is_string());
  need("experiment", report.contains("experiment") && report["experiment"].is_string());
  need("created_at", report.contains("created_at") && report["created_at"].is_string());
  need("manifest", report.contains("manifest") && report["manifest"].is_object());
  need("provenance", report.contains("provenance") && report["provenance"].is_object());
  need("failed_items",
       report.contains("failed_items") && report["failed_items"].is_number_integer());
  need("items", report.contains("items") && report["items"].is_array());
  need("summary", report.contains("summary") && report["summary"].is_object());
  need("reference_targets",
       report.contains("reference_targets") && report["reference_targets"].is_object());

  if (report.contains("provenance") && report["provenance"].is_object()) {
    const auto& p = report["provenance"];
    for (const char* key : {"seed", "model", "backend", "matcher", "template_ids", "cache"})
      if (!p.contains(key))
        problems.push_back(std::string("provenance is missing '") + key + "'");
    if (p.contains("cache") && p["cache"].is_object()) {
      for (const char* key : {"hits", "misses", "coalesced"})
        if (!p["cache"].contains(key) || !p["cache"][key].is_number_integer())
          problems.push_back(std::string("provenance.cache needs integer '") + key + "'");
    }
  }
  if (report.contains("items") && report["items"].is_array()) {
    std::size_t i = 0;
    for (const auto& item : report["items"]) {
      const std::string where = "items[" + std::to_string(i) + "]";
      if (!item.is_object()) {
        problems.push_back(where + " is not an object");
      } else {
        const std::string status = item.value("status", "");
        if (status != "ok" && status != "error")
          problems.push_back(where + " status must be 'ok' or 'error'");
        if (status == "error" && (!item.contains("error") || !item.contains("error_kind")))
          problems.push_back(where + " error items need 'error' and 'error_kind'");
      }
      ++i;
    }
  }
  return problems;
}

}  // namespace reviewaudit::audit
