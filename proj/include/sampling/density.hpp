#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sampling/rng.hpp"

namespace sampling::mc {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Unnormalized target density P*, handled in log space.
///
/// `log_shape` is log P* up to the additive constant `log_scale`; the full
/// log density is log_shape(x) + log_scale. Keeping the normalization shift
/// as an explicit field makes Z-independence structural: the self-normalized
/// and ratio-based samplers read only the shape, so rescaling P* (changing
/// log_scale) provably cannot change their output. Absolute-magnitude
/// consumers (rejection sampling's envelope) read the full value.
struct TargetDensity {
  std::size_t dimension = 1;
  std::vector<Interval> support;
  std::function<double(std::span<const double>)> log_shape;
  /// Gradient of the energy E = -log P*; empty when unavailable.
  std::function<std::vector<double>(std::span<const double>)> energy_gradient;
  double log_scale = 0.0;

  [[nodiscard]] bool has_gradient() const { return static_cast<bool>(energy_gradient); }
  [[nodiscard]] bool in_support(std::span<const double> x) const;
  /// log P* shape only (-inf outside support); constant rescalings of P*
  /// never reach callers of this accessor.
  [[nodiscard]] double log_unnormalized(std::span<const double> x) const;
  /// Full log density log_shape + log_scale (-inf outside support).
  [[nodiscard]] double log_density(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> gradient(std::span<const double> x) const;
};

/// Normalized, directly sampleable distribution Q.
struct ProposalSampler {
  std::size_t dimension = 1;
  std::function<std::vector<double>(RngStream&)> sample;
  std::function<double(std::span<const double>)> log_density;
};

/// Monotone inverse CDF on (0, 1). make_quantile probes monotonicity on a
/// 1000-point grid and rejects decreasing functions.
struct QuantileFunction {
  std::function<double(double)> inverse_cdf;
};

[[nodiscard]] QuantileFunction make_quantile(std::function<double(double)> inverse_cdf);

// ---------------------------------------------------------------------------
// Built-in targets (registry for tests and the CLI)
// ---------------------------------------------------------------------------

[[nodiscard]] TargetDensity standard_normal_target(std::size_t dimension = 1);
[[nodiscard]] TargetDensity bivariate_normal_target(double rho);
/// P*(x) = 2x on [0, 1].
[[nodiscard]] TargetDensity triangular_target();
[[nodiscard]] TargetDensity normal_mixture_target(double weight1, double mean1, double sd1,
                                                  double mean2, double sd2);
/// Discrete table on {0..m-1}; log P*(x) = log w[round(x)].
[[nodiscard]] TargetDensity discrete_table_target(std::vector<double> weights);

/// Parses "name" or "name:p1,p2,..."; throws std::invalid_argument with the
/// list of valid names on an unknown name.
[[nodiscard]] TargetDensity make_target(const std::string& spec);
[[nodiscard]] std::vector<std::string> target_names();

// ---------------------------------------------------------------------------
// Built-in proposals and quantiles
// ---------------------------------------------------------------------------

[[nodiscard]] ProposalSampler gaussian_proposal(std::vector<double> mean, std::vector<double> sd);
[[nodiscard]] ProposalSampler uniform_box_proposal(std::vector<Interval> box);

[[nodiscard]] QuantileFunction exponential_quantile(double rate);
[[nodiscard]] QuantileFunction uniform_quantile(double lo, double hi);
/// Acklam's rational approximation of the normal quantile (~1e-9 absolute).
[[nodiscard]] QuantileFunction normal_quantile(double mean, double sd);

/// Standard normal CDF via erfc.
[[nodiscard]] double normal_cdf(double x);

}  // namespace sampling::mc
