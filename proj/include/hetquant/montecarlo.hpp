#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetquant/bounds.hpp"
#include "hetquant/distributions.hpp"

namespace hetquant {

/// Counter-based stream (SplitMix64 over a per-replicate key). Replicate r of
/// seed s always produces the same draws, whichever worker runs it.
class ReplicateStream {
 public:
  ReplicateStream(std::uint64_t seed, std::uint64_t replicate);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53 random bits.
  double next_uniform();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

enum class StatisticKind { MedianAbs, OrderStatTail, MedianTail };

struct Statistic {
  StatisticKind kind = StatisticKind::MedianAbs;
  double p = 0.5;  // OrderStatTail only
  double t = 0.0;  // tail threshold

  static Statistic median_abs() { return {StatisticKind::MedianAbs, 0.5, 0.0}; }
  static Statistic order_stat_tail(double p, double t) { return {StatisticKind::OrderStatTail, p, t}; }
  static Statistic median_tail(double t) { return {StatisticKind::MedianTail, 0.5, t}; }
};

/// OrderIndex: M = X^(floor(n/2)) in descending order, the variable the exact
/// engine and the median bounds describe. Conventional: the middle element,
/// or the average of the two middle elements for even n.
enum class MedianConvention { OrderIndex, Conventional };

struct McConfig {
  HeteroSample sample;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  Statistic statistic;
  MedianConvention median = MedianConvention::OrderIndex;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(replicates)
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  bool single_replicate = false;  // std_error is undefined and reported as 0
};

/// Runs the replicates across OpenMP workers (`threads` <= 0 defers to
/// worker_count()). Output is bit-identical for any worker count.
McEstimate run(const McConfig& config, int threads = 0);

/// Serial reference kernel; bit-identical to run().
McEstimate run_serial(const McConfig& config);

/// Per-replicate statistic values, in replicate order.
std::vector<double> replicate_values(const McConfig& config, int threads = 0);

struct SweepRow {
  std::size_t n2;
  McEstimate estimate;
};

/// E|M| of {normal:sigma1 x n1, normal:sigma2 x n2} for n2 in [n2_lo, n2_hi].
/// Every row reuses `seed`, so neighbouring rows share their random draws.
std::vector<SweepRow> sweep_n2(std::size_t n1, double sigma1, double sigma2, std::size_t n2_lo,
                               std::size_t n2_hi, std::size_t replicates, std::uint64_t seed,
                               int threads = 0);

struct ComparisonRow {
  double t;
  double exact;  // P(X^(floor(pn)) >= F_N^{-1}(1-p) + t)
  McEstimate mc;
  TailBound theorem1;
  TailBound corollary1;
};

/// Joins the exact tail, a Monte Carlo estimate and both upper-tail envelopes
/// at each deviation t.
std::vector<ComparisonRow> empirical_vs_bound(const HeteroSample& sample, double p,
                                              std::span<const double> t_grid,
                                              std::size_t replicates, std::uint64_t seed,
                                              int threads = 0);

}  // namespace hetquant
