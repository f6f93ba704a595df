#pragma once

#include <cstddef>

#include "hetquant/distributions.hpp"

namespace hetquant {

/// F_N(t): arithmetic mean of the component CDFs at t.
double mixture_cdf(const HeteroSample& sample, double t);

struct QuantileResult {
  double x;
  double achieved_p;  // F_N(x)
  int iterations;
};

/// Left-most x with F_N(x) >= p, by bisection inside the component-quantile
/// bracket. Stops once the bracket is no wider than 1e-12 * (1 + |x|).
QuantileResult mixture_quantile(const HeteroSample& sample, double p);

/// Minimum of the density of `law` over [center - half_width, center + half_width].
/// Closed form for the shipped bases (symmetric and unimodal, so the minimum
/// sits at an endpoint).
double density_min(const ScaledLaw& law, double center, double half_width);
double density_min(const HeteroSample& sample, std::size_t k, double center, double half_width);

/// Generic minimum search over [lo, hi]: 257-point grid, then golden-section
/// refinement around the best grid point. Used for bases without the
/// endpoint property and as an independent check of the closed form.
double density_min_scan(const ScaledLaw& law, double lo, double hi);

/// Sum over k of the density minima on [tau - t, tau + t], tau = F_N^{-1}(1 - p).
double density_min_sum(const HeteroSample& sample, double p, double t);

}  // namespace hetquant
