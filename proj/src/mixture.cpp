#include "hetquant/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetquant/detail/summation.hpp"

namespace hetquant {

double mixture_cdf(const HeteroSample& sample, double t) {
  if (!std::isfinite(t)) throw std::domain_error("mixture_cdf: threshold must be finite");
  detail::NeumaierSum sum;
  for (const auto& law : sample.laws()) sum.add(cdf(law, t));
  return std::clamp(sum.value() / static_cast<double>(sample.size()), 0.0, 1.0);
}

QuantileResult mixture_quantile(const HeteroSample& sample, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("mixture_quantile: p must lie in (0, 1)");

  // F_N is an average, so it crosses p between the smallest and largest
  // component quantile.
  double lo = quantile(sample[0], p);
  double hi = lo;
  for (const auto& law : sample.laws()) {
    const double q = quantile(law, p);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }

  if (mixture_cdf(sample, lo) >= p) return {lo, mixture_cdf(sample, lo), 0};
  double f_hi = mixture_cdf(sample, hi);
  // Component quantiles carry ~1e-15 relative error; widen once if needed.
  if (f_hi < p) {
    hi += 1e-9 * (1.0 + std::abs(hi));
    f_hi = mixture_cdf(sample, hi);
  }

  // Invariant: F_N(lo) < p <= F_N(hi).
  int iterations = 0;
  while (hi - lo > 1e-12 * (1.0 + std::abs(hi)) && iterations < 2000) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = mixture_cdf(sample, mid);
    if (f_mid >= p) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
    }
    ++iterations;
  }
  return {hi, f_hi, iterations};
}

double density_min(const ScaledLaw& law, double center, double half_width) {
  if (!(half_width > 0.0)) throw std::domain_error("density_min: half width must be positive");
  return std::min(pdf(law, center - half_width), pdf(law, center + half_width));
}

double density_min(const HeteroSample& sample, std::size_t k, double center, double half_width) {
  if (k >= sample.size()) throw std::domain_error("density_min: component index out of range");
  return density_min(sample[k], center, half_width);
}

double density_min_scan(const ScaledLaw& law, double lo, double hi) {
  if (!(hi > lo)) throw std::domain_error("density_min_scan: empty interval");
  constexpr int kGrid = 257;
  const double step = (hi - lo) / (kGrid - 1);
  int best = 0;
  double best_value = pdf(law, lo);
  for (int i = 1; i < kGrid; ++i) {
    const double x = i == kGrid - 1 ? hi : lo + i * step;
    const double v = pdf(law, x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = std::max(lo, lo + (best - 1) * step);
  double b = std::min(hi, lo + (best + 1) * step);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = pdf(law, c);
  double fd = pdf(law, d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = pdf(law, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = pdf(law, d);
    }
  }
  return std::min({best_value, fc, fd, pdf(law, a), pdf(law, b)});
}

double density_min_sum(const HeteroSample& sample, double p, double t) {
  if (!(t > 0.0)) throw std::domain_error("density_min_sum: t must be positive");
  const double center = mixture_quantile(sample, 1.0 - p).x;
  detail::NeumaierSum sum;
  for (const auto& law : sample.laws()) sum.add(density_min(law, center, t));
  return sum.value();
}

}  // namespace hetquant
