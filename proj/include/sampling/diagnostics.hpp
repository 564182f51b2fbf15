#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sampling/mcmc.hpp"
#include "sampling/rng.hpp"

namespace sampling::diag {

struct MixingReport {
  double acceptance_rate = 0.0;
  std::vector<double> lag_autocorrelations;  // lag 0..max_lag
  double effective_sample_size = 0.0;
  double mixing_time_estimate = 0.0;  // first lag with autocorrelation < 0.05
};

/// Autocorrelations rho_k = [sum (x_t - m)(x_{t+k} - m) / (n-k)] /
/// [sum (x_t - m)^2 / n].
[[nodiscard]] std::vector<double> autocorrelations(std::span<const double> x,
                                                   std::size_t max_lag);

/// ESS = n / (1 + 2 sum rho) truncated by Geyer's initial positive sequence.
[[nodiscard]] double effective_sample_size(std::span<const double> x, std::size_t max_lag);

/// Diagnostics of one trace coordinate. Requires size() > max_lag; throws
/// "degenerate trace" when the coordinate is constant.
[[nodiscard]] MixingReport mixing_report(const mcmc::Trace& trace, std::size_t max_lag,
                                         std::size_t coordinate = 0);

// ---------------------------------------------------------------------------
// Mixing-time scaling experiments
// ---------------------------------------------------------------------------

struct ScalingExperiment {
  std::vector<std::size_t> L_values;
  double delta = 1.0;
  std::vector<double> mean_mixing_time;
  std::vector<double> sd_mixing_time;
  std::vector<std::size_t> censored;  // chains that hit the iteration cap, per L
  double slope = 0.0;                 // log mean_T vs log(L/delta)
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// (L/delta)^2, the random-walk prediction.
[[nodiscard]] double predicted_random_walk_time(std::size_t L, double delta);

/// Symmetric +-delta Metropolis on the uniform target over [1, L]. Mixing
/// time is the first-passage iteration at which the chain has visited both
/// ends (within delta of 1 and of L), averaged over chains; chains capped at
/// 100x the predicted time are excluded as censored. Chains fan out across
/// threads on pre-split rng streams, so results do not depend on scheduling.
[[nodiscard]] ScalingExperiment random_walk_scaling(std::span<const std::size_t> L_values,
                                                    double delta, std::size_t chains_per_L,
                                                    RngStream& rng);

/// Same protocol for HMC on a flat energy over [0, L] with soft quadratic
/// walls (unit width). Trajectories are long enough to cross the range
/// (T = ceil(L / (2 eta))), and the mixing time counts leapfrog steps until
/// both wall regions have been visited. L below ten wall widths is skipped;
/// fewer than three usable L values is an error.
[[nodiscard]] ScalingExperiment hmc_scaling(std::span<const std::size_t> L_values, double eta,
                                            std::size_t chains_per_L, RngStream& rng);

/// Metropolis acceptance rate on an r-dimensional Gaussian with sd ell, one
/// rate per proposal scale in delta_values.
[[nodiscard]] std::vector<double> acceptance_tradeoff_probe(double ell,
                                                            std::span<const double> delta_values,
                                                            std::size_t r, RngStream& rng,
                                                            std::size_t iterations = 20000);

// ---------------------------------------------------------------------------
// Distribution fit
// ---------------------------------------------------------------------------

struct FitReport {
  double ks_statistic = 0.0;
  bool passed = false;  // below the 1% asymptotic critical value 1.63/sqrt(n)
};

/// Two-sided Kolmogorov-Smirnov test of `samples` against a reference CDF.
/// Requires at least 100 samples; the reference must be nondecreasing on a
/// probe grid spanning the sample range.
[[nodiscard]] FitReport distribution_fit(std::span<const double> samples,
                                         const std::function<double(double)>& reference_cdf);

}  // namespace sampling::diag
