#include "hetquant/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "hetquant/detail/summation.hpp"
#include "hetquant/exact.hpp"
#include "hetquant/mixture.hpp"
#include "hetquant/parallel.hpp"

namespace hetquant {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void validate(const McConfig& config) {
  if (config.replicates < 1) throw std::domain_error("replicates must be at least 1");
  const auto& s = config.statistic;
  if (!std::isfinite(s.t)) throw std::domain_error("statistic threshold must be finite");
  if (s.kind == StatisticKind::OrderStatTail) {
    if (!(s.p > 0.0 && s.p <= 1.0)) throw std::domain_error("percentile level p must lie in (0, 1]");
    if (percentile_rank(s.p, config.sample.size()) < 1) {
      throw std::domain_error("percentile level requires p * n >= 1");
    }
  }
}

// k-th largest (1-based) of the buffer; reorders it.
double kth_largest(std::vector<double>& values, std::size_t k) {
  const auto it = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(values.begin(), it, values.end(), std::greater<>());
  return *it;
}

double median_of(std::vector<double>& values, MedianConvention convention) {
  const std::size_t n = values.size();
  if (convention == MedianConvention::OrderIndex) {
    // A single observation is its own median.
    return kth_largest(values, std::max<std::size_t>(1, n / 2));
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double below = *std::max_element(values.begin(), mid);
  return 0.5 * (below + *mid);
}

double replicate_statistic(const McConfig& config, std::uint64_t replicate,
                           std::vector<double>& draws) {
  ReplicateStream stream(config.seed, replicate);
  const auto laws = config.sample.laws();
  for (std::size_t k = 0; k < laws.size(); ++k) draws[k] = sample(laws[k], stream.next_uniform());

  const auto& stat = config.statistic;
  switch (stat.kind) {
    case StatisticKind::MedianAbs:
      return std::abs(median_of(draws, config.median));
    case StatisticKind::MedianTail:
      return std::abs(median_of(draws, config.median)) >= stat.t ? 1.0 : 0.0;
    case StatisticKind::OrderStatTail:
      return kth_largest(draws, percentile_rank(stat.p, draws.size())) >= stat.t ? 1.0 : 0.0;
  }
  return 0.0;
}

McEstimate summarize(const std::vector<double>& values, const McConfig& config) {
  const double count = static_cast<double>(values.size());
  detail::NeumaierSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / count;

  McEstimate est;
  est.mean = mean;
  est.replicates = values.size();
  est.seed = config.seed;
  if (values.size() < 2) {
    est.single_replicate = true;
    return est;
  }
  detail::NeumaierSum squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  est.std_error = std::sqrt(squares.value() / (count - 1.0) / count);
  return est;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ReplicateStream::ReplicateStream(std::uint64_t seed, std::uint64_t replicate)
    : state_(mix64(mix64(seed) + (replicate + 1) * kGolden)) {}

std::uint64_t ReplicateStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double ReplicateStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> replicate_values(const McConfig& config, int threads) {
  validate(config);
  std::vector<double> values(config.replicates);
  const auto count = static_cast<std::ptrdiff_t>(config.replicates);
#pragma omp parallel num_threads(worker_count(threads))
  {
    std::vector<double> draws(config.sample.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      values[static_cast<std::size_t>(r)] =
          replicate_statistic(config, static_cast<std::uint64_t>(r), draws);
    }
  }
  return values;
}

McEstimate run(const McConfig& config, int threads) {
  return summarize(replicate_values(config, threads), config);
}

McEstimate run_serial(const McConfig& config) {
  validate(config);
  std::vector<double> values(config.replicates);
  std::vector<double> draws(config.sample.size());
  for (std::size_t r = 0; r < config.replicates; ++r) {
    values[r] = replicate_statistic(config, r, draws);
  }
  return summarize(values, config);
}

std::vector<SweepRow> sweep_n2(std::size_t n1, double sigma1, double sigma2, std::size_t n2_lo,
                               std::size_t n2_hi, std::size_t replicates, std::uint64_t seed,
                               int threads) {
  if (n1 < 1) throw std::domain_error("sweep needs n1 >= 1");
  if (n2_lo > n2_hi) throw std::domain_error("sweep range is empty");
  const ScaledLaw wide(BaseKind::Normal, sigma1);
  const ScaledLaw narrow(BaseKind::Normal, sigma2);

  std::vector<SweepRow> rows;
  rows.reserve(n2_hi - n2_lo + 1);
  for (std::size_t n2 = n2_lo; n2 <= n2_hi; ++n2) {
    std::vector<ScaledLaw> laws(n1, wide);
    laws.insert(laws.end(), n2, narrow);
    McConfig config{HeteroSample(std::move(laws)), replicates, seed, Statistic::median_abs()};
    rows.push_back({n2, run(config, threads)});
  }
  return rows;
}

std::vector<ComparisonRow> empirical_vs_bound(const HeteroSample& sample, double p,
                                              std::span<const double> t_grid,
                                              std::size_t replicates, std::uint64_t seed,
                                              int threads) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("percentile level p must lie in (0, 1)");
  if (t_grid.empty()) throw std::domain_error("deviation grid is empty");
  const double center = mixture_quantile(sample, 1.0 - p).x;

  std::vector<ComparisonRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    ComparisonRow row;
    row.t = t;
    row.theorem1 = theorem1_upper(sample, p, t);
    row.corollary1 = corollary1_upper(sample, p, t);
    row.exact = order_stat_upper_tail(sample, p, center + t).prob;
    McConfig config{sample, replicates, seed, Statistic::order_stat_tail(p, center + t)};
    row.mc = run(config, threads);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hetquant
