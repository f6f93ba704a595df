#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "hetquant/distributions.hpp"

namespace hetquant {

enum class Side { Plus, Minus };

/// Centered mixture-CDF increment driving the Hoeffding exponent:
///   phi+(t) = floor(pn)/n + F_N(F_N^{-1}(1-p) + t) - 1
///   phi-(t) = floor(pn)/n + F_N(F_N^{-1}(1-p) - t) - 1
/// The Plus side is usable when phi >= 0, the Minus side when phi <= 0.
struct PhiValue {
  double value;
  Side side;
  bool valid;
};

/// A probability envelope. When the hypothesis behind it fails the bound is
/// vacuous: prob_bound == 1, log_bound == 0 and condition_ok == false.
struct TailBound {
  double prob_bound = 1.0;  // min(1, exp(log_bound)), kept strictly positive
  double log_bound = 0.0;   // log of the unclamped envelope
  std::optional<double> radius;
  bool condition_ok = false;
  std::string condition_desc;
};

/// 0 when n * p is an integer, 1 otherwise.
int parity_flag(double p, std::size_t n);

PhiValue phi_plus(const HeteroSample& sample, double p, double t);
PhiValue phi_minus(const HeteroSample& sample, double p, double t);

// Hoeffding envelopes for P(X^(floor(pn)) >= F_N^{-1}(1-p) + t) and
// P(X^(floor(pn)) <= F_N^{-1}(1-p) - t): exp(-2n phi^2).
TailBound theorem1_upper(const HeteroSample& sample, double p, double t);
TailBound theorem1_lower(const HeteroSample& sample, double p, double t);

// Same events with phi replaced by its density-minimum lower bound
// t * sum_k s_k / n, s_k = min of f_k on [tau - t, tau + t]. The upper side
// loses a factor (I_p + 1)^2 and needs t * sum_k s_k >= 2 I_p.
TailBound corollary1_upper(const HeteroSample& sample, double p, double t);
TailBound corollary1_lower(const HeteroSample& sample, double p, double t);

/// sum_k 1 / sigma_k.
double harmonic_sum(std::span<const double> sigmas);

/// Two-sided median envelope for a scale family, given the harmonic sum and a
/// lower bound `density_floor` on d(u / sigma_k) over |u| <= t:
///   even n: 2 exp(-H^2 * 2t^2/n * floor^2)
///   odd n:  2 exp(-H^2 * t^2/(2n) * floor^2), needs t * floor * H >= 2.
TailBound scale_family_median_bound(double harmonic, std::size_t n, double t,
                                    double density_floor);

/// P(|M| >= t) envelope, M = X^(floor(n/2)), for a sample sharing one base law.
/// Throws std::domain_error on mixed bases.
TailBound theorem2_median_bound(const HeteroSample& sample, double t);

/// Confidence radius for |M| at confidence parameter t. `radius` holds
/// C * sqrt(n t) / sum_k sigma_k^{-1}; prob_bound is 2e^{-2t} (even n) or
/// 2e^{-t/2} (odd n, which also needs n t >= 4). The radius must not exceed
/// min_k sigma_k / 2.
struct MedianRadius : TailBound {
  double harmonic = 0.0;
  /// Radius with the harmonic sum replaced by n / max_k sigma_k, i.e.
  /// C * sqrt(t / n) * max_k sigma_k. Never smaller than `radius`.
  double conservative_radius = 0.0;
};

inline constexpr double kNormalMedianConstant = 1.0 / 0.35;
inline constexpr double kCauchyMedianConstant = 5.0 * std::numbers::pi / 4.0;
inline const double kLaplaceMedianConstant = 2.0 * std::sqrt(std::numbers::e);

MedianRadius median_radius(std::span<const double> sigmas, double t, double constant);
MedianRadius normal_median_radius(std::span<const double> sigmas, double t);
MedianRadius cauchy_median_radius(std::span<const double> sigmas, double t);
MedianRadius laplace_median_radius(std::span<const double> sigmas, double t);

/// One side of the off-median normal percentile statement.
struct PercentileSide {
  TailBound bound;       // radius = sqrt(8 t n pi) e^{1/4} / weighted
  double center = 0.0;   // F_N^{-1}(0.5 + tau) (upper) or F_N^{-1}(0.5 - tau) (lower)
  std::size_t rank = 0;  // order-statistic index
  double weighted = 0.0; // sum_k sigma_k^{-1} exp(-center^2 / sigma_k^2)
};

/// For normal laws and tau in [0, 0.25]:
///   upper: P(X^(floor((0.5-tau)n)) >= center + radius) <= 2e^{-2t}, needs t >= 1/n
///   lower: P(X^(floor((0.5+tau)n)) <= center - radius) <= 2e^{-2t}
/// each provided radius <= min_k sigma_k / 2.
struct PercentileBound {
  PercentileSide upper;
  PercentileSide lower;
};

PercentileBound normal_percentile_bound(std::span<const double> sigmas, double tau, double t);

}  // namespace hetquant
