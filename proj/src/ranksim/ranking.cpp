#include "reviewaudit/ranksim/ranking.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "reviewaudit/core/error.hpp"

namespace reviewaudit::ranksim {

double aggregate_rating(const rater::PaperRecord& record) {
  if (record.human_ratings.empty())
    throw RecordWithoutRatings("paper '" + record.paper_id + "' has no ratings");
  double sum = 0.0;
  for (const int r : record.human_ratings) sum += r;
  return sum / static_cast<double>(record.human_ratings.size());
}

std::vector<RankedPaper> rank_papers(const std::vector<rater::PaperRecord>& records) {
  if (records.empty()) throw EmptyInput("cannot rank an empty record set");
  std::vector<RankedPaper> out;
  out.reserve(records.size());
  for (const rater::PaperRecord& r : records)
    out.push_back(RankedPaper{r.paper_id, aggregate_rating(r), 0.0});
  std::sort(out.begin(), out.end(), [](const RankedPaper& a, const RankedPaper& b) {
    if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
    return a.paper_id < b.paper_id;
  });
  const double n = static_cast<double>(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].percentile = 100.0 * static_cast<double>(i) / n;
  return out;
}

std::vector<std::string> top_fraction(const std::vector<RankedPaper>& ranking,
                                      double cutoff_percentile) {
  std::vector<std::string> ids;
  for (const RankedPaper& p : ranking) {
    if (p.percentile >= cutoff_percentile) break;  // ranking is sorted
    ids.push_back(p.paper_id);
  }
  return ids;
}

namespace {

void require_same_ids(const std::vector<RankedPaper>& before,
                      const std::vector<RankedPaper>& after) {
  if (before.size() != after.size())
    throw IdSetMismatch("rankings cover " + std::to_string(before.size()) + " vs " +
                        std::to_string(after.size()) + " papers");
  std::set<std::string> ids;
  for (const RankedPaper& p : before) ids.insert(p.paper_id);
  for (const RankedPaper& p : after)
    if (!ids.count(p.paper_id))
      throw IdSetMismatch("paper '" + p.paper_id + "' appears only after re-ranking");
}

}  // namespace

double top_k_displacement(const std::vector<RankedPaper>& before,
                          const std::vector<RankedPaper>& after, double k_percent) {
  if (k_percent <= 0.0 || k_percent > 100.0)
    throw OutOfRange("top-band cutoff must be within (0, 100]");
  require_same_ids(before, after);
  if (before.empty()) throw EmptyInput("cannot measure displacement on empty rankings");
  const std::vector<std::string> top_before = top_fraction(before, k_percent);
  const std::vector<std::string> after_ids = top_fraction(after, k_percent);
  const std::set<std::string> top_after(after_ids.begin(), after_ids.end());
  std::size_t displaced = 0;
  for (const std::string& id : top_before)
    if (!top_after.count(id)) ++displaced;
  return 100.0 * static_cast<double>(displaced) / static_cast<double>(top_before.size());
}

FlowMatrix section_flow(const std::vector<RankedPaper>& before,
                        const std::vector<RankedPaper>& after) {
  require_same_ids(before, after);
  std::map<std::string, int> band_before;
  for (const RankedPaper& p : before)
    band_before[p.paper_id] = section_of_percentile(p.percentile);
  FlowMatrix flow{};
  for (const RankedPaper& p : after) {
    const int b = band_before.at(p.paper_id);
    const int a = section_of_percentile(p.percentile);
    ++flow[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  }
  return flow;
}

int section_of_percentile(double percentile) {
  if (percentile < 30.0) return 0;
  if (percentile < 50.0) return 1;
  if (percentile < 70.0) return 2;
  return 3;
}

const std::array<const char*, 4>& section_labels() {
  static const std::array<const char*, 4> labels = {"0-30", "30-50", "50-70", "70-100"};
  return labels;
}

}  // namespace reviewaudit::ranksim
