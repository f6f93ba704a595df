#include "hetquant/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetquant/detail/summation.hpp"
#include "hetquant/exact.hpp"
#include "hetquant/mixture.hpp"

namespace hetquant {
namespace {

void require_level(const HeteroSample& sample, double p, double t) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("percentile level p must lie in (0, 1)");
  if (percentile_rank(p, sample.size()) < 1) {
    throw std::domain_error("percentile level requires p * n >= 1");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("deviation t must be positive");
}

TailBound envelope(double log_bound, bool ok, std::string desc) {
  TailBound b;
  b.condition_ok = ok;
  b.condition_desc = std::move(desc);
  if (!ok) return b;
  b.log_bound = log_bound;
  b.prob_bound = std::clamp(std::exp(log_bound), std::numeric_limits<double>::denorm_min(), 1.0);
  return b;
}

double min_sigma(std::span<const double> sigmas) {
  return *std::min_element(sigmas.begin(), sigmas.end());
}

void require_sigmas(std::span<const double> sigmas) {
  if (sigmas.empty()) throw std::domain_error("need at least one scale parameter");
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("scale parameters must be positive");
  }
}

PhiValue phi(const HeteroSample& sample, double p, double t, Side side) {
  require_level(sample, p, t);
  const std::size_t n = sample.size();
  const double center = mixture_quantile(sample, 1.0 - p).x;
  const double shifted = side == Side::Plus ? center + t : center - t;
  const double rank_fraction = static_cast<double>(percentile_rank(p, n)) / static_cast<double>(n);
  const double value = rank_fraction + mixture_cdf(sample, shifted) - 1.0;
  const bool valid = side == Side::Plus ? value >= 0.0 : value <= 0.0;
  return {value, side, valid};
}

TailBound hoeffding(const HeteroSample& sample, const PhiValue& phi, double t, const char* desc) {
  const double n = static_cast<double>(sample.size());
  auto b = envelope(-2.0 * n * phi.value * phi.value, phi.valid, desc);
  b.radius = t;
  return b;
}

}  // namespace

int parity_flag(double p, std::size_t n) { return is_integral_rank(p, n) ? 0 : 1; }

PhiValue phi_plus(const HeteroSample& sample, double p, double t) {
  return phi(sample, p, t, Side::Plus);
}

PhiValue phi_minus(const HeteroSample& sample, double p, double t) {
  return phi(sample, p, t, Side::Minus);
}

TailBound theorem1_upper(const HeteroSample& sample, double p, double t) {
  return hoeffding(sample, phi_plus(sample, p, t), t, "phi+(t) >= 0");
}

TailBound theorem1_lower(const HeteroSample& sample, double p, double t) {
  return hoeffding(sample, phi_minus(sample, p, t), t, "phi-(t) <= 0");
}

TailBound corollary1_upper(const HeteroSample& sample, double p, double t) {
  require_level(sample, p, t);
  const double n = static_cast<double>(sample.size());
  const double s = density_min_sum(sample, p, t);
  const int ip = parity_flag(p, sample.size());
  const bool ok = t * s >= 2.0 * ip;
  const double scale = (ip + 1.0) * (ip + 1.0);
  auto b = envelope(-s * s * 2.0 * t * t / (n * scale), ok, "t * sum_k s_k >= 2 I_p");
  b.radius = t;
  return b;
}

TailBound corollary1_lower(const HeteroSample& sample, double p, double t) {
  require_level(sample, p, t);
  const double n = static_cast<double>(sample.size());
  const double s = density_min_sum(sample, p, t);
  auto b = envelope(-s * s * 2.0 * t * t / n, true, "none");
  b.radius = t;
  return b;
}

double harmonic_sum(std::span<const double> sigmas) {
  require_sigmas(sigmas);
  detail::NeumaierSum sum;
  for (double s : sigmas) sum.add(1.0 / s);
  return sum.value();
}

TailBound scale_family_median_bound(double harmonic, std::size_t n, double t,
                                    double density_floor) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("deviation t must be positive");
  if (n < 2) throw std::domain_error("median bound needs n >= 2");
  const double nd = static_cast<double>(n);
  const double h2 = harmonic * harmonic;
  const double d2 = density_floor * density_floor;
  TailBound b;
  if (n % 2 == 0) {
    b = envelope(std::log(2.0) - h2 * (2.0 * t * t / nd) * d2, true, "none (even n)");
  } else {
    const bool ok = t * density_floor * harmonic >= 2.0;
    b = envelope(std::log(2.0) - h2 * (t * t / (2.0 * nd)) * d2, ok,
                 "t * min d(u/sigma_k) * sum_k 1/sigma_k >= 2 (odd n)");
  }
  b.radius = t;
  return b;
}

TailBound theorem2_median_bound(const HeteroSample& sample, double t) {
  const auto base = sample.common_base();
  if (!base) throw std::domain_error("theorem2 requires every law to share one base distribution");
  const auto sigmas = sample.sigmas();
  // d is symmetric and nonincreasing in |u|, so the minimum over |u| <= t and
  // all k is d(t / min_k sigma_k).
  const double floor = base_pdf(*base, t / min_sigma(sigmas));
  return scale_family_median_bound(harmonic_sum(sigmas), sample.size(), t, floor);
}

MedianRadius median_radius(std::span<const double> sigmas, double t, double constant) {
  require_sigmas(sigmas);
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("confidence parameter t must be positive");
  const std::size_t n = sigmas.size();
  const double nd = static_cast<double>(n);
  const double harmonic = harmonic_sum(sigmas);
  const double radius = constant * std::sqrt(nd * t) / harmonic;
  const double max_sigma = *std::max_element(sigmas.begin(), sigmas.end());

  const bool even = n % 2 == 0;
  bool ok = radius <= 0.5 * min_sigma(sigmas);
  std::string desc = "radius <= min_k sigma_k / 2";
  if (!even) {
    ok = ok && nd * t >= 4.0;
    desc += " and n * t >= 4 (odd n)";
  }
  MedianRadius out;
  static_cast<TailBound&>(out) =
      envelope(std::log(2.0) + (even ? -2.0 * t : -0.5 * t), ok, std::move(desc));
  out.radius = radius;
  out.harmonic = harmonic;
  out.conservative_radius = constant * std::sqrt(t / nd) * max_sigma;
  return out;
}

MedianRadius normal_median_radius(std::span<const double> sigmas, double t) {
  return median_radius(sigmas, t, kNormalMedianConstant);
}

MedianRadius cauchy_median_radius(std::span<const double> sigmas, double t) {
  return median_radius(sigmas, t, kCauchyMedianConstant);
}

MedianRadius laplace_median_radius(std::span<const double> sigmas, double t) {
  return median_radius(sigmas, t, kLaplaceMedianConstant);
}

PercentileBound normal_percentile_bound(std::span<const double> sigmas, double tau, double t) {
  require_sigmas(sigmas);
  if (!(tau >= 0.0 && tau <= 0.25)) throw std::domain_error("tau must lie in [0, 0.25]");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("confidence parameter t must be positive");

  std::vector<ScaledLaw> laws;
  laws.reserve(sigmas.size());
  for (double s : sigmas) laws.emplace_back(BaseKind::Normal, s);
  const HeteroSample sample(std::move(laws));
  const std::size_t n = sample.size();
  const double nd = static_cast<double>(n);
  const double half_min = 0.5 * min_sigma(sigmas);

  auto side = [&](double level, double center_level, bool upper) {
    PercentileSide out;
    out.rank = percentile_rank(level, n);
    if (out.rank < 1) throw std::domain_error("percentile rank floor(p * n) must be at least 1");
    out.center = mixture_quantile(sample, center_level).x;
    detail::NeumaierSum w;
    for (double s : sigmas) w.add(std::exp(-out.center * out.center / (s * s)) / s);
    out.weighted = w.value();
    const double radius = std::sqrt(8.0 * t * nd * std::numbers::pi) * std::exp(0.25) / out.weighted;
    bool ok = radius <= half_min;
    std::string desc = "radius <= min_k sigma_k / 2";
    if (upper) {
      ok = ok && t * nd >= 1.0;
      desc += " and t >= 1/n";
    }
    out.bound = envelope(std::log(2.0) - 2.0 * t, ok, std::move(desc));
    out.bound.radius = radius;
    return out;
  };

  return {side(0.5 - tau, 0.5 + tau, true), side(0.5 + tau, 0.5 - tau, false)};
}

}  // namespace hetquant
