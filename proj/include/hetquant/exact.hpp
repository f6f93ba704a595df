#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetquant/distributions.hpp"

namespace hetquant {

/// floor(p * n). Products within 1e-9 of an integer snap to it, so decimal
/// inputs such as p = 0.29, n = 100 give 29 rather than 28.
std::size_t percentile_rank(double p, std::size_t n);

/// True when n * p is an integer (same snapping as percentile_rank).
bool is_integral_rank(double p, std::size_t n);

/// Success probabilities B_k = 1 - F_k(t) of the counts {X_k >= t}.
std::vector<double> exceedance_probabilities(const HeteroSample& sample, double t);

/// Distribution of the number of successes among independent Bernoulli trials.
/// Single-buffer O(n^2) convolution; tiny negative rounding residue is clamped to 0.
std::vector<double> poisson_binomial_pmf(std::span<const double> probs);

/// P(S >= m) for 0 <= m <= n + 1, summed from the smallest term upward.
double poisson_binomial_tail(std::span<const double> probs, std::size_t m);

/// P(S < m) for 0 <= m <= n + 1, summed from the smallest term upward.
double poisson_binomial_lower(std::span<const double> probs, std::size_t m);

struct ExactTail {
  double prob;    // P(X^(m) >= t)
  std::size_t m;  // floor(p * n)
  double t;
};

// Order statistics are descending: X^(1) >= ... >= X^(n). Both require
// floor(p * n) >= 1 and p <= 1.
ExactTail order_stat_upper_tail(const HeteroSample& sample, double p, double t);
double order_stat_cdf(const HeteroSample& sample, double p, double t);

/// P(|M| >= t) for M = X^(floor(n/2)); t >= 0, n >= 2.
double exact_two_sided_median(const HeteroSample& sample, double t);

/// order_stat_upper_tail over a threshold grid. The grid points are spread
/// across OpenMP workers (`threads` <= 0 uses the HETQUANT_THREADS default).
std::vector<ExactTail> upper_tail_grid(const HeteroSample& sample, double p,
                                       std::span<const double> ts, int threads = 0);

/// Serial reference for upper_tail_grid; results are bit-identical.
std::vector<ExactTail> upper_tail_grid_serial(const HeteroSample& sample, double p,
                                              std::span<const double> ts);

}  // namespace hetquant
