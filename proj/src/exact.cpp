#include "hetquant/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetquant/detail/summation.hpp"
#include "hetquant/parallel.hpp"

namespace hetquant {
namespace {

double snapped_product(double p, std::size_t n, bool* integral) {
  const double pn = p * static_cast<double>(n);
  const double nearest = std::round(pn);
  const bool snap = std::abs(pn - nearest) <= 1e-9 * std::max(1.0, pn);
  if (integral != nullptr) *integral = snap;
  return snap ? nearest : std::floor(pn);
}

// Sums the addends in ascending order so small tail terms are not absorbed.
double ascending_sum(std::span<const double> terms) {
  std::vector<double> sorted(terms.begin(), terms.end());
  std::sort(sorted.begin(), sorted.end());
  detail::NeumaierSum sum;
  for (double v : sorted) sum.add(v);
  return std::clamp(sum.value(), 0.0, 1.0);
}

std::size_t checked_rank(double p, std::size_t n) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("percentile level p must lie in (0, 1]");
  const std::size_t m = percentile_rank(p, n);
  if (m < 1) throw std::domain_error("percentile level requires p * n >= 1");
  return m;
}

}  // namespace

std::size_t percentile_rank(double p, std::size_t n) {
  return static_cast<std::size_t>(snapped_product(p, n, nullptr));
}

bool is_integral_rank(double p, std::size_t n) {
  bool integral = false;
  snapped_product(p, n, &integral);
  return integral;
}

std::vector<double> exceedance_probabilities(const HeteroSample& sample, double t) {
  std::vector<double> probs;
  probs.reserve(sample.size());
  for (const auto& law : sample.laws()) probs.push_back(1.0 - cdf(law, t));
  return probs;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("Bernoulli probability outside [0, 1]");
  }
  std::vector<double> q(probs.size() + 1, 0.0);
  q[0] = 1.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = probs[k];
    const double r = 1.0 - p;
    for (std::size_t j = k + 1; j > 0; --j) q[j] = q[j] * r + q[j - 1] * p;
    q[0] *= r;
  }
  for (double& v : q) v = std::max(v, 0.0);
  return q;
}

double poisson_binomial_tail(std::span<const double> probs, std::size_t m) {
  const std::size_t n = probs.size();
  if (m > n + 1) throw std::domain_error("tail threshold out of range");
  if (m == 0) return 1.0;
  if (m == n + 1) return 0.0;
  const auto pmf = poisson_binomial_pmf(probs);
  return ascending_sum(std::span<const double>(pmf).subspan(m));
}

double poisson_binomial_lower(std::span<const double> probs, std::size_t m) {
  const std::size_t n = probs.size();
  if (m > n + 1) throw std::domain_error("tail threshold out of range");
  if (m == 0) return 0.0;
  if (m == n + 1) return 1.0;
  const auto pmf = poisson_binomial_pmf(probs);
  return ascending_sum(std::span<const double>(pmf).first(m));
}

ExactTail order_stat_upper_tail(const HeteroSample& sample, double p, double t) {
  const std::size_t m = checked_rank(p, sample.size());
  const auto probs = exceedance_probabilities(sample, t);
  return {poisson_binomial_tail(probs, m), m, t};
}

double order_stat_cdf(const HeteroSample& sample, double p, double t) {
  const std::size_t m = checked_rank(p, sample.size());
  const auto probs = exceedance_probabilities(sample, t);
  return poisson_binomial_lower(probs, m);
}

double exact_two_sided_median(const HeteroSample& sample, double t) {
  if (!(t >= 0.0)) throw std::domain_error("exact_two_sided_median: t must be nonnegative");
  if (sample.size() < 2) throw std::domain_error("exact_two_sided_median: needs n >= 2");
  const double upper = order_stat_upper_tail(sample, 0.5, t).prob;
  const double lower = order_stat_cdf(sample, 0.5, -t);
  return std::clamp(upper + lower, 0.0, 1.0);
}

std::vector<ExactTail> upper_tail_grid(const HeteroSample& sample, double p,
                                       std::span<const double> ts, int threads) {
  checked_rank(p, sample.size());
  // Nothing may throw inside the parallel region.
  for (double t : ts) {
    if (!std::isfinite(t)) throw std::domain_error("upper_tail_grid: thresholds must be finite");
  }
  std::vector<ExactTail> out(ts.size());
  const auto count = static_cast<std::ptrdiff_t>(ts.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(threads))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = order_stat_upper_tail(sample, p, ts[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<ExactTail> upper_tail_grid_serial(const HeteroSample& sample, double p,
                                              std::span<const double> ts) {
  std::vector<ExactTail> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(order_stat_upper_tail(sample, p, t));
  return out;
}

}  // namespace hetquant
