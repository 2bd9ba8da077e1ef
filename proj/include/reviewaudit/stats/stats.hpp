#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace reviewaudit::stats {

struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  double mcfadden_r2 = 0.0;
};

// Single-feature logistic regression by iteratively reweighted least
// squares. Throws LengthMismatch, InsufficientData (< 2 points), and
// DegenerateInput (single-class labels). Perfect separation is reported
// via converged = false plus a warning, with coefficients capped.
LogisticFit fit_logistic(const std::vector<double>& x, const std::vector<int>& y,
                         int max_iterations = 100, double tolerance = 1e-8);

double predict_probability(const LogisticFit& fit, double x);

// Area under the ROC curve by pair counting; ties contribute half. The
// unsuffixed version parallelizes with OpenMP when available. Throws
// LengthMismatch, NoPairs (a class is missing).
double auc(const std::vector<double>& scores, const std::vector<int>& labels);
double auc_serial(const std::vector<double>& scores, const std::vector<int>& labels);

struct Bucket {
  double lo = 0.0;  // inclusive
  double hi = 0.0;  // inclusive (observed max in bucket)
  std::size_t count = 0;
  double positive_ratio = 0.0;
};

enum class BucketMode { EqualFrequency, EqualWidth };

// Groups (value, positive) observations into k buckets and reports the
// positive ratio per bucket. Equal-frequency gives the first (n mod k)
// buckets one extra element. Throws LengthMismatch, EmptyInput, and
// InsufficientData when k < 1 or n < k.
std::vector<Bucket> bucket_positive_ratio(const std::vector<double>& values,
                                          const std::vector<int>& positives, std::size_t k,
                                          BucketMode mode = BucketMode::EqualFrequency);

std::string buckets_csv(const std::vector<Bucket>& buckets);  // lo,hi,count,positive_ratio

}  // namespace reviewaudit::stats
