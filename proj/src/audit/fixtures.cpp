#include "reviewaudit/audit/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "reviewaudit/audit/corpus.hpp"
#include "reviewaudit/audit/manifest.hpp"
#include "reviewaudit/core/io.hpp"
#include "reviewaudit/core/rng.hpp"

namespace reviewaudit::audit {

namespace {

namespace fs = std::filesystem;
using rater::Decision;
using rater::PaperRecord;

// Sentence banks. Neutral banks deliberately avoid the offline model's
// sentiment, weakness-cue, and reviewer-vocabulary word lists so that only
// the limitation sentences (and review text built from them) trigger it.

const std::vector<std::string>& topic_bank() {
  static const std::vector<std::string> v = {
      "Sparse Attention",      "Graph Pruning",      "Curriculum Sampling",
      "Contrastive Alignment", "Latent Routing",     "Gradient Caching",
      "Prompt Distillation",   "Token Merging",      "Adaptive Quantization",
      "Retrieval Fusion",
  };
  return v;
}

const std::vector<std::string>& frame_bank() {
  static const std::vector<std::string> v = {
      "for Streaming Inference", "under Domain Shift",      "at Scale",
      "with Sparse Rewards",     "for Long Contexts",       "in Low-Resource Settings",
      "beyond Standard Benchmarks",
  };
  return v;
}

// Each sentence carries exactly one weakness-cue word, and no two bank
// entries share a cue, so distinct sentences never token-match each other.
const std::vector<std::string>& cue_bank() {
  static const std::vector<std::string> v = {
      "The evaluation lacks larger benchmarks.",
      "Ablation coverage is limited to one task.",
      "The cost model remains unclear.",
      "Key baselines are missing from the tables.",
      "The theory section is insufficient.",
      "Scaling raises memory concerns.",
      "The method fails on noisy labels.",
      "Sample size is a notable weakness.",
      "The related work survey is incomplete.",
      "Reproducibility issues remain open.",
  };
  return v;
}

const std::vector<std::string>& praise_bank() {
  static const std::vector<std::string> v = {
      "The method is novel and effective.",
      "Results are strong and convincing.",
      "The presentation is clear and thorough.",
      "Experiments are solid and rigorous.",
      "The approach is robust and the writing is excellent.",
  };
  return v;
}

const std::vector<std::string>& intro_bank() {
  static const std::vector<std::string> v = {
      "Deployment budgets motivate this work.",
      "Prior systems trade speed for memory.",
      "We revisit this trade-off in depth.",
      "Modern pipelines demand lower latency.",
      "Existing schedulers ignore workload drift.",
  };
  return v;
}

const std::vector<std::string>& method_bank() {
  static const std::vector<std::string> v = {
      "Our method splits computation into stages.",
      "A scheduler balances the stages at run time.",
      "We derive a simple update rule.",
      "The rule adapts to the observed load.",
      "Training uses the standard recipe throughout.",
  };
  return v;
}

const std::vector<std::string>& experiment_bank() {
  static const std::vector<std::string> v = {
      "We evaluate on three public datasets.",
      "Accuracy improves over the baseline systems.",
      "Latency drops at equal output quality.",
      "We repeat each run five times.",
      "Ablations isolate the contribution of each stage.",
  };
  return v;
}

std::string pick_cycle(const std::vector<std::string>& bank, std::size_t start,
                       std::size_t step) {
  return bank[(start + step) % bank.size()];
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const std::string& s : sentences) {
    if (!out.empty()) out += " ";
    out += s;
  }
  return out;
}

int quality_tier(int index, int papers) {
  const int span = std::max(1, papers - 1);
  return std::clamp(2 + (index * 8) / span, 1, 10);
}

struct PaperPlan {
  pdf::FixtureDesc desc;
  PaperRecord record;  // pdf_path filled in by the generator
};

PaperPlan plan_paper(int index, int papers, std::uint64_t seed) {
  const std::size_t i = static_cast<std::size_t>(index);
  const int q = quality_tier(index, papers);
  std::string id = "P" + std::to_string(index + 1);
  while (id.size() < 4) id.insert(1, "0");
  SplitMix64 rng(derive_seed(seed, "fixture-" + id));

  const auto& cues = cue_bank();
  const std::size_t cue_base = (i * 3) % cues.size();
  const std::size_t cue_count = q <= 4 ? 3 : 2;
  std::vector<std::string> lim_cues;
  for (std::size_t k = 0; k < cue_count; ++k) lim_cues.push_back(cues[(cue_base + k) % cues.size()]);
  const std::string reviewer_cue1 = cues[(cue_base + 5) % cues.size()];
  const std::string reviewer_cue2 = cues[(cue_base + 6) % cues.size()];

  pdf::FixtureDesc desc;
  desc.title = pick_cycle(topic_bank(), i, 0) + " " + frame_bank()[i % frame_bank().size()];
  {
    std::vector<std::string> abs_sentences;
    if (q >= 7) {
      abs_sentences.push_back("Results are strong and the method is effective.");
    } else {
      abs_sentences.push_back("We study efficient models for modern workloads.");
    }
    abs_sentences.push_back("Our approach reduces cost on common benchmarks.");
    abs_sentences.push_back("We report consistent gains across tasks.");
    desc.sections.push_back({"Abstract", join_sentences(abs_sentences)});
  }
  desc.sections.push_back(
      {"1 Introduction", join_sentences({pick_cycle(intro_bank(), i, 0),
                                         pick_cycle(intro_bank(), i, 1),
                                         pick_cycle(intro_bank(), i, 2)})});
  desc.sections.push_back(
      {"2 Method", join_sentences({pick_cycle(method_bank(), i, 0),
                                   pick_cycle(method_bank(), i, 1),
                                   pick_cycle(method_bank(), i, 2)})});
  desc.sections.push_back(
      {"3 Experiments", join_sentences({pick_cycle(experiment_bank(), i, 0),
                                        pick_cycle(experiment_bank(), i, 1),
                                        pick_cycle(experiment_bank(), i, 2)})});
  desc.sections.push_back({"4 Limitations", join_sentences(lim_cues)});
  desc.sections.push_back(
      {"5 Conclusion", join_sentences({"We presented a practical approach.",
                                       "Future work extends the analysis."})});
  if (index % 3 == 0)
    desc.captions = {"Figure 1: Accuracy versus compute budget."};

  switch (index % 4) {
    case 0: break;  // classic layout and writer
    case 1: desc.two_column = true; break;
    case 2:
      desc.compress_streams = true;
      desc.xref_stream = true;
      break;
    default:
      desc.two_column = true;
      desc.compress_streams = true;
      desc.xref_stream = true;
      desc.pack_objects = true;
      break;
  }

  PaperRecord rec;
  rec.paper_id = id;
  const std::size_t rating_count = 2 + static_cast<std::size_t>(rng.next_below(3));
  for (std::size_t k = 0; k < rating_count; ++k) {
    static const int jitter[4] = {-1, 0, 0, 1};
    rec.human_ratings.push_back(std::clamp(q + jitter[rng.next_below(4)], 1, 10));
  }
  const double mean =
      std::accumulate(rec.human_ratings.begin(), rec.human_ratings.end(), 0.0) /
      static_cast<double>(rec.human_ratings.size());

  // Decision follows the rating mean, with fixed exceptions so percentile
  // does not perfectly separate the accept/reject labels (a perfectly
  // separated corpus has no finite logistic fit) plus one withdrawn paper.
  if (papers >= 6 && index == 1) {
    rec.decision = Decision::Withdrawn;
  } else if (papers >= 6 && index == 2) {
    rec.decision = Decision::Poster;
  } else if (papers >= 6 && index == papers / 2) {
    rec.decision = Decision::Rejected;
  } else if (mean >= 8.0) {
    rec.decision = Decision::Oral;
  } else if (mean >= 7.0) {
    rec.decision = Decision::Spotlight;
  } else if (mean >= 6.0) {
    rec.decision = Decision::Poster;
  } else {
    rec.decision = Decision::Rejected;
  }

  const auto& praise = praise_bank();
  const std::string closing = "Overall the submission needs another revision pass.";
  rec.review_texts.push_back(join_sentences(
      {praise[i % praise.size()], lim_cues[0], reviewer_cue1, closing}));
  rec.review_texts.push_back(join_sentences(
      {praise[(i + 2) % praise.size()],
       index % 2 == 0 ? lim_cues[1] : reviewer_cue2, closing}));

  if (index % 3 != 1) rec.limitations_text = join_sentences(lim_cues);
  if (index % 5 == 4) {
    rec.clean_llm_rating = std::clamp(static_cast<int>(std::lround(mean)), 1, 10);
    rec.manipulated_llm_rating = std::min(10, *rec.clean_llm_rating + 3);
  }
  if (index % 4 == 2) rec.token_count = 800 + 37 * index;

  return {std::move(desc), std::move(rec)};
}

nlohmann::ordered_json base_manifest(Experiment e, const fs::path& dir) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(e);
  j["corpus_path"] = (dir / "papers.jsonl").string();
  j["output_path"] = (dir / "reports" / (std::string(to_string(e)) + ".json")).string();
  j["seed"] = 7;
  j["offline"] = true;
  j["use_mock"] = true;
  j["cache_dir"] = (dir / "cache").string();
  j["jobs"] = 2;
  return j;
}

}  // namespace

pdf::FixtureDesc fixture_paper_desc(int index, int papers, std::uint64_t seed) {
  return plan_paper(index, papers, seed).desc;
}

FixtureCorpus generate_fixture_corpus(const fs::path& dir, const FixtureOptions& options) {
  const fs::path root = fs::absolute(dir);
  FixtureCorpus out;

  for (int i = 0; i < options.papers; ++i) {
    PaperPlan plan = plan_paper(i, options.papers, options.seed);
    const fs::path pdf_path = root / "pdf" / (plan.record.paper_id + ".pdf");
    write_file(pdf_path.string(), pdf::render_fixture(plan.desc));
    plan.record.pdf_path = pdf_path.string();
    out.pdf_paths.push_back(pdf_path);
    out.records.push_back(std::move(plan.record));
  }

  out.corpus_path = root / "papers.jsonl";
  write_file(out.corpus_path.string(), corpus_jsonl(out.records));

  if (options.write_manifests) {
    static const Experiment all[] = {
        Experiment::InjectDetect,   Experiment::ReviewGenerate,
        Experiment::ConsistencyAudit, Experiment::ImplicitAudit,
        Experiment::AblationProbe,  Experiment::AuthorshipProbe,
        Experiment::LengthProbe,    Experiment::RankSim,
        Experiment::RegressionDiag,
    };
    for (const Experiment e : all) {
      nlohmann::ordered_json j = base_manifest(e, root);
      if (e == Experiment::LengthProbe) j["buckets"] = 3;
      const fs::path path = root / "manifests" / (std::string(to_string(e)) + ".json");
      write_file(path.string(), j.dump(2) + "\n");
      out.manifest_paths.push_back(path);
    }
  }
  return out;
}

}  // namespace reviewaudit::audit
