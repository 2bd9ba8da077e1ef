#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/stats/stats.hpp"

namespace reviewaudit::stats {

namespace {

constexpr double kProbClip = 1e-12;
constexpr double kCoefCap = 30.0;

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clip_probability(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double log_likelihood_at(const std::vector<double>& x, const std::vector<int>& y, double b0,
                         double b1) {
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = clip_probability(sigmoid(b0 + b1 * x[i]));
    ll += y[i] ? std::log(p) : std::log(1.0 - p);
  }
  return ll;
}

}  // namespace

LogisticFit fit_logistic(const std::vector<double>& x, const std::vector<int>& y,
                         int max_iterations, double tolerance) {
  if (x.size() != y.size()) {
    throw LengthMismatch("logistic fit: " + std::to_string(x.size()) + " features vs " +
                         std::to_string(y.size()) + " labels");
  }
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientData("logistic fit needs at least 2 observations");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) {
      throw OutOfRange("logistic labels must be 0 or 1, got " + std::to_string(y[i]));
    }
    positives += static_cast<std::size_t>(y[i]);
  }
  if (positives == 0 || positives == n) {
    throw DegenerateInput("logistic fit requires both classes to be present");
  }
  const double x_min = *std::min_element(x.begin(), x.end());
  const double x_max = *std::max_element(x.begin(), x.end());
  if (x_max - x_min <= 0.0) {
    throw DegenerateInput("logistic fit requires a non-constant feature");
  }

  LogisticFit fit;
  const double p_bar = static_cast<double>(positives) / static_cast<double>(n);
  fit.null_log_likelihood = static_cast<double>(positives) * std::log(p_bar) +
                            static_cast<double>(n - positives) * std::log(1.0 - p_bar);

  double b0 = std::log(p_bar / (1.0 - p_bar));
  double b1 = 0.0;
  double ll = log_likelihood_at(x, y, b0, b1);
  bool capped = false;

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    double g0 = 0.0, g1 = 0.0;
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = clip_probability(sigmoid(b0 + b1 * x[i]));
      const double r = static_cast<double>(y[i]) - p;
      const double w = p * (1.0 - p);
      g0 += r;
      g1 += r * x[i];
      h00 += w;
      h01 += w * x[i];
      h11 += w * x[i] * x[i];
    }
    if (std::max(std::abs(g0), std::abs(g1)) < tolerance) {
      fit.converged = true;
      break;
    }
    const double det = h00 * h11 - h01 * h01;
    if (!(std::abs(det) > 1e-300)) break;  // numerically singular Hessian
    double d0 = (h11 * g0 - h01 * g1) / det;
    double d1 = (h00 * g1 - h01 * g0) / det;

    // Step-halving keeps the likelihood from decreasing on wild steps.
    double step = 1.0;
    double new_ll = ll;
    double nb0 = b0, nb1 = b1;
    bool improved = false;
    for (int h = 0; h < 40; ++h) {
      nb0 = b0 + step * d0;
      nb1 = b1 + step * d1;
      new_ll = log_likelihood_at(x, y, nb0, nb1);
      if (new_ll >= ll - 1e-15) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
    b0 = nb0;
    b1 = nb1;
    ll = new_ll;
    if (std::abs(b0) > kCoefCap || std::abs(b1) > kCoefCap) {
      capped = true;
      b0 = std::clamp(b0, -kCoefCap, kCoefCap);
      b1 = std::clamp(b1, -kCoefCap, kCoefCap);
      ll = log_likelihood_at(x, y, b0, b1);
      ++iter;
      break;
    }
  }

  if (capped) {
    fit.converged = false;
    log::warn(
        "logistic fit: coefficients diverged (likely perfectly separated data); "
        "values capped at ±" +
        std::to_string(static_cast<int>(kCoefCap)));
  }
  fit.intercept = b0;
  fit.slope = b1;
  fit.iterations = iter;
  fit.log_likelihood = ll;
  if (std::abs(ll - fit.null_log_likelihood) < 1e-9) {
    fit.mcfadden_r2 = 0.0;
  } else {
    fit.mcfadden_r2 = std::clamp(1.0 - ll / fit.null_log_likelihood, 0.0, 1.0);
  }
  return fit;
}

double predict_probability(const LogisticFit& fit, double x) {
  return sigmoid(fit.intercept + fit.slope * x);
}

}  // namespace reviewaudit::stats
