#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "reviewaudit/audit/manifest.hpp"
#include "reviewaudit/llm/client.hpp"
#include "reviewaudit/rater/record.hpp"

namespace reviewaudit::audit {

// The bundled demonstration payload: a short instruction block that tells
// the reviewing model to praise the paper and recommend acceptance.
const std::string& default_attack_payload();

// Model id used when the manifest leaves `model` empty.
std::string effective_model(const Manifest& m);

struct ExperimentResult {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  nlohmann::ordered_json reference_targets = nlohmann::ordered_json::object();
  int failed_items = 0;  // error items; drives the process exit code
};

// Runs the manifest's experiment over the corpus. Per-item failures become
// error entries in `items` (never dropped); infrastructure failures throw.
ExperimentResult run_experiment(const Manifest& m,
                                const std::vector<rater::PaperRecord>& records,
                                llm::Client& client);

ExperimentResult run_inject_detect(const Manifest& m,
                                   const std::vector<rater::PaperRecord>& records);
ExperimentResult run_review_generate(const Manifest& m,
                                     const std::vector<rater::PaperRecord>& records,
                                     llm::Client& client);
ExperimentResult run_consistency_audit(const Manifest& m,
                                       const std::vector<rater::PaperRecord>& records,
                                       llm::Client& client);
ExperimentResult run_implicit_audit(const Manifest& m,
                                    const std::vector<rater::PaperRecord>& records,
                                    llm::Client& client);
ExperimentResult run_ablation_probe(const Manifest& m,
                                    const std::vector<rater::PaperRecord>& records,
                                    llm::Client& client);
ExperimentResult run_authorship_probe(const Manifest& m,
                                      const std::vector<rater::PaperRecord>& records,
                                      llm::Client& client);
ExperimentResult run_length_probe(const Manifest& m,
                                  const std::vector<rater::PaperRecord>& records,
                                  llm::Client& client);
ExperimentResult run_ranksim(const Manifest& m,
                             const std::vector<rater::PaperRecord>& records);
ExperimentResult run_regression_diag(const Manifest& m,
                                     const std::vector<rater::PaperRecord>& records);

}  // namespace reviewaudit::audit
