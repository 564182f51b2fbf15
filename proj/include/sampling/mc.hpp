#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sampling/density.hpp"
#include "sampling/rng.hpp"

namespace sampling::mc {

/// n iid draws q(u), u ~ U(0,1). Throws on a non-finite quantile value.
[[nodiscard]] std::vector<double> inverse_cdf_sample(const QuantileFunction& q, std::size_t n,
                                                     RngStream& rng);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;  // sample sd / sqrt(n)
  std::size_t n = 0;
};

using PointSampler = std::function<std::vector<double>(RngStream&)>;

/// (1/n) sum h(x_i) over draws from `sampler`. A non-finite h value aborts
/// with the offending point in the message.
[[nodiscard]] McEstimate mc_expectation(const std::function<double(std::span<const double>)>& h,
                                        const PointSampler& sampler, std::size_t n,
                                        RngStream& rng);

/// Indicator version of mc_expectation; value lies in [0, 1].
[[nodiscard]] McEstimate mc_probability(
    const std::function<bool(std::span<const double>)>& predicate, const PointSampler& sampler,
    std::size_t n, RngStream& rng);

/// 4 x P(x^2 + y^2 <= 1) under the uniform unit square.
[[nodiscard]] double estimate_pi(std::size_t n, RngStream& rng);

/// Self-normalized importance estimator sum w_i h(x_i) / sum w_j with
/// w_i = P*(x_i)/Q(x_i), log-weights centered at their maximum. Reads only
/// the target's shape, so a constant rescaling of P* cannot change the
/// result. Throws "proposal-target mismatch" when every weight vanishes.
[[nodiscard]] double importance_estimate(const TargetDensity& target,
                                         const ProposalSampler& proposal,
                                         const std::function<double(std::span<const double>)>& h,
                                         std::size_t n, RngStream& rng);

struct RejectionResult {
  std::vector<std::vector<double>> samples;
  double acceptance_rate = 0.0;
  std::size_t proposals_used = 0;
};

/// Accepts x ~ Q when u ~ U(0, c Q(x)) falls below P*(x); accepted points are
/// exact draws from P*/Z. The envelope c Q >= P* is checked on a 1000-point
/// probe grid (bounded 1-D supports) and at every draw; a violation throws
/// "invalid c". Throws after 1e7 proposals if the acceptance rate is
/// below 1e-6.
[[nodiscard]] RejectionResult rejection_sample(const TargetDensity& target,
                                               const ProposalSampler& proposal, double c,
                                               std::size_t n, RngStream& rng);

/// Grows c by `growth_factor` and restarts probing whenever a probe point
/// violates c Q(x) >= P*(x); returns the first c that passes the grid check
/// plus `probe_n` consecutive drawn probes. Throws "no dominating c found"
/// past `ceiling`.
[[nodiscard]] double rejection_calibrate_c(const TargetDensity& target,
                                           const ProposalSampler& proposal, std::size_t probe_n,
                                           double growth_factor, RngStream& rng,
                                           double initial_c = 0.1, double ceiling = 1e12);

}  // namespace sampling::mc
