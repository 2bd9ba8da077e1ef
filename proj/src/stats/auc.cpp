#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/stats/stats.hpp"

namespace reviewaudit::stats {

namespace {

void split_by_label(const std::vector<double>& scores, const std::vector<int>& labels,
                    std::vector<double>& pos, std::vector<double>& neg) {
  if (scores.size() != labels.size()) {
    throw LengthMismatch("auc: " + std::to_string(scores.size()) + " scores vs " +
                         std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw OutOfRange("auc labels must be 0 or 1, got " + std::to_string(labels[i]));
    }
    (labels[i] ? pos : neg).push_back(scores[i]);
  }
  if (pos.empty() || neg.empty()) {
    throw NoPairs("auc needs at least one positive and one negative label");
  }
}

double auc_from_counts(double concordant, double ties, std::size_t n_pos, std::size_t n_neg) {
  return (concordant + 0.5 * ties) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace

double auc_serial(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> pos, neg;
  split_by_label(scores, labels, pos, neg);
  std::uint64_t concordant = 0, ties = 0;
  for (double sp : pos) {
    for (double sn : neg) {
      if (sp > sn) {
        ++concordant;
      } else if (sp == sn) {
        ++ties;
      }
    }
  }
  return auc_from_counts(static_cast<double>(concordant), static_cast<double>(ties), pos.size(),
                         neg.size());
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
#ifdef _OPENMP
  std::vector<double> pos, neg;
  split_by_label(scores, labels, pos, neg);
  std::int64_t concordant = 0, ties = 0;
  const std::int64_t np = static_cast<std::int64_t>(pos.size());
#pragma omp parallel for reduction(+ : concordant, ties) schedule(static)
  for (std::int64_t i = 0; i < np; ++i) {
    const double sp = pos[static_cast<std::size_t>(i)];
    for (double sn : neg) {
      if (sp > sn) {
        ++concordant;
      } else if (sp == sn) {
        ++ties;
      }
    }
  }
  return auc_from_counts(static_cast<double>(concordant), static_cast<double>(ties), pos.size(),
                         neg.size());
#else
  return auc_serial(scores, labels);
#endif
}

}  // namespace reviewaudit::stats
