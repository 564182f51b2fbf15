#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sampling/density.hpp"
#include "sampling/rng.hpp"

namespace sampling::mcmc {

using mc::TargetDensity;

struct ChainConfig {
  std::size_t n_samples = 10000;
  std::size_t burn_in = 1000;
  /// Starting point; when absent a point is drawn from the support (uniform
  /// on bounded dimensions, standard normal on unbounded ones).
  std::optional<std::vector<double>> initial_point;
};

/// Recorded chain. On rejection the previous state is repeated, so `samples`
/// is the stationary chain; accepted_only() recovers the accepted-points
/// view of the raw pseudocode. Row-major n x dimension storage.
struct Trace {
  std::size_t dimension = 1;
  std::vector<double> samples;
  std::vector<std::uint8_t> accepted;  // per recorded iteration
  std::uint64_t proposals_total = 0;
  std::uint64_t accepted_total = 0;
  std::vector<double> energy_error;  // |dH| per recorded iteration (HMC only)

  [[nodiscard]] std::size_t size() const { return dimension ? samples.size() / dimension : 0; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {samples.data() + i * dimension, dimension};
  }
  [[nodiscard]] std::vector<double> coordinate(std::size_t d) const;
  [[nodiscard]] double acceptance_rate() const;
  [[nodiscard]] Trace accepted_only() const;
};

struct GaussianStepProposal {
  double sigma = 2.38;  // rule-of-thumb random-walk scale
};

/// Asymmetric proposal kernel for Metropolis-Hastings.
struct ProposalKernel {
  std::function<std::vector<double>(std::span<const double> from, RngStream&)> sample;
  std::function<double(std::span<const double> to, std::span<const double> from)> log_density;
};

[[nodiscard]] ProposalKernel gaussian_kernel(double sigma, std::size_t dimension);

[[nodiscard]] std::vector<double> random_point_in_support(const TargetDensity& target,
                                                          RngStream& rng);

/// Random-walk Metropolis with acceptance min(P*(y)/P*(x), 1), evaluated in
/// log space on the target shape (the normalization constant cancels, so the
/// result is exactly invariant to rescaling P*).
[[nodiscard]] Trace metropolis(const TargetDensity& target, const GaussianStepProposal& proposal,
                               const ChainConfig& cfg, RngStream& rng);

/// Hastings generalization: acceptance min(P*(y) q(x|y) / (P*(x) q(y|x)), 1).
[[nodiscard]] Trace metropolis_hastings(const TargetDensity& target,
                                        const ProposalKernel& kernel, const ChainConfig& cfg,
                                        RngStream& rng);

enum class ScanOrder { sequential, random };

/// Full conditional sampler of one coordinate given the current point.
using ConditionalSampler = std::function<double(std::span<const double>, RngStream&)>;

/// Systematic-sweep Gibbs sampler; every coordinate is redrawn from its full
/// conditional given the current values of the others.
[[nodiscard]] Trace gibbs(const std::vector<ConditionalSampler>& conditionals,
                          const ChainConfig& cfg, RngStream& rng,
                          ScanOrder order = ScanOrder::sequential);

/// Exact full conditionals x_i | x_other ~ N(rho * x_other, 1 - rho^2) of the
/// unit bivariate normal.
[[nodiscard]] std::vector<ConditionalSampler> bivariate_normal_conditionals(double rho);

/// One-dimensional slice sampler: stepping-out with slice width `delta`
/// (at most `max_slices` extensions per side), then shrinkage.
[[nodiscard]] Trace slice_sample(const TargetDensity& target, double delta,
                                 std::size_t max_slices, const ChainConfig& cfg, RngStream& rng);

/// Directional variant for multivariate targets: each iteration slices along
/// a fresh uniformly random direction through the current point.
[[nodiscard]] Trace slice_sample_directional(const TargetDensity& target, double delta,
                                             std::size_t max_slices, const ChainConfig& cfg,
                                             RngStream& rng);

// ---------------------------------------------------------------------------
// Discrete-chain verification
// ---------------------------------------------------------------------------

struct DiscreteChainSpec {
  std::vector<double> target_weights;        // unnormalized, positive
  std::vector<std::vector<double>> proposal; // row-stochastic Q(v; u)
};

struct BalanceReport {
  double max_balance_violation = 0.0;  // max |pi_u A(v;u) - pi_v A(u;v)|
  double stationary_gap = 0.0;         // L1 distance of the fixpoint from pi
};

/// Builds the exact Metropolis transition matrix A(v;u) = Q(v;u) min(w_v/w_u, 1)
/// with the rejected mass folded into the diagonal, then checks detailed
/// balance and recovers the stationary distribution by power iteration.
[[nodiscard]] BalanceReport verify_balance(const DiscreteChainSpec& spec);

// ---------------------------------------------------------------------------
// Gibbs-as-Metropolis-Hastings acceptance on discrete grids
// ---------------------------------------------------------------------------

/// Product-form discrete target with positive weight per grid state.
struct DiscreteGridTarget {
  std::vector<std::size_t> shape;  // levels per coordinate
  std::vector<double> weights;     // row-major, size = prod(shape)

  [[nodiscard]] std::size_t state_index(std::span<const std::size_t> state) const;
  [[nodiscard]] double weight_at(std::span<const std::size_t> state) const;
};

/// Metropolis-Hastings acceptance probability for a single-coordinate move
/// whose proposal pmf is supplied as an unreduced fraction num/den. The ratio
/// is evaluated by cross-multiplication, so algebraically identical factors
/// cancel exactly.
using CoordinateProposalPmf =
    std::function<std::pair<double, double>(std::size_t value, std::span<const std::size_t> state)>;

[[nodiscard]] double coordinate_mh_acceptance(const DiscreteGridTarget& target,
                                              std::span<const std::size_t> state,
                                              std::size_t coordinate, std::size_t proposed_value,
                                              const CoordinateProposalPmf& proposal_pmf);

/// Acceptance probability of a Gibbs coordinate proposal (drawn value given
/// the rest); equals one for every state by exact cancellation.
[[nodiscard]] double gibbs_mh_acceptance(const DiscreteGridTarget& target,
                                         std::span<const std::size_t> state,
                                         std::size_t coordinate, std::size_t proposed_value);

/// Draws the proposed value from the Gibbs conditional, then evaluates the
/// acceptance probability above.
[[nodiscard]] double gibbs_mh_acceptance_check(const DiscreteGridTarget& target,
                                               std::span<const std::size_t> state,
                                               std::size_t coordinate, RngStream& rng);

}  // namespace sampling::mcmc
