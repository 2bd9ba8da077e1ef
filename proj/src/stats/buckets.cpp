#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/stats/stats.hpp"

namespace reviewaudit::stats {

namespace {

Bucket summarize_range(const std::vector<std::size_t>& order,
                       const std::vector<double>& values, const std::vector<int>& positives,
                       std::size_t begin, std::size_t end) {
  Bucket b;
  b.count = end - begin;
  b.lo = values[order[begin]];
  b.hi = values[order[end - 1]];
  std::size_t pos = 0;
  for (std::size_t i = begin; i < end; ++i) pos += positives[order[i]] ? 1u : 0u;
  b.positive_ratio = static_cast<double>(pos) / static_cast<double>(b.count);
  return b;
}

}  // namespace

std::vector<Bucket> bucket_positive_ratio(const std::vector<double>& values,
                                          const std::vector<int>& positives, std::size_t k,
                                          BucketMode mode) {
  if (values.size() != positives.size()) {
    throw LengthMismatch("buckets: " + std::to_string(values.size()) + " values vs " +
                         std::to_string(positives.size()) + " flags");
  }
  if (values.empty()) throw EmptyInput("buckets require at least one observation");
  if (k < 1) throw InsufficientData("bucket count must be at least 1");
  if (values.size() < k) {
    throw InsufficientData("cannot form " + std::to_string(k) + " buckets from " +
                           std::to_string(values.size()) + " observations");
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<Bucket> out;
  out.reserve(k);
  if (mode == BucketMode::EqualFrequency) {
    const std::size_t n = values.size();
    const std::size_t base = n / k;
    const std::size_t extra = n % k;  // first (n mod k) buckets take one more
    std::size_t begin = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t len = base + (b < extra ? 1u : 0u);
      out.push_back(summarize_range(order, values, positives, begin, begin + len));
      begin += len;
    }
    return out;
  }

  const double lo = values[order.front()];
  const double hi = values[order.back()];
  if (hi - lo <= 0.0) {
    throw DegenerateInput("equal-width buckets require a spread of values");
  }
  const double width = (hi - lo) / static_cast<double>(k);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const double edge = (b + 1 == k) ? hi : lo + width * static_cast<double>(b + 1);
    std::size_t end = begin;
    while (end < order.size() &&
           (values[order[end]] < edge || (b + 1 == k && values[order[end]] <= edge))) {
      ++end;
    }
    Bucket bucket;
    if (end == begin) {
      bucket.lo = lo + width * static_cast<double>(b);
      bucket.hi = edge;
      bucket.count = 0;
      bucket.positive_ratio = 0.0;
    } else {
      bucket = summarize_range(order, values, positives, begin, end);
    }
    out.push_back(bucket);
    begin = end;
  }
  return out;
}

std::string buckets_csv(const std::vector<Bucket>& buckets) {
  std::string out = "lo,hi,count,positive_ratio\n";
  char line[128];
  for (const Bucket& b : buckets) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%zu,%.6f\n", b.lo, b.hi, b.count,
                  b.positive_ratio);
    out += line;
  }
  return out;
}

}  // namespace reviewaudit::stats
