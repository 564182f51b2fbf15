#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sampling/rng.hpp"

namespace sampling::survey {

/// Labeled finite dataset. Stratum/cluster labels are optional but, when
/// present, must cover every element (partial labeling is rejected).
struct FinitePopulation {
  std::vector<double> values;
  std::vector<int> strata;    // empty or values.size() entries
  std::vector<int> clusters;  // empty or values.size() entries

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] bool has_strata() const { return !strata.empty(); }
  [[nodiscard]] bool has_clusters() const { return !clusters.empty(); }

  /// Throws std::invalid_argument on an empty population or label vectors of
  /// the wrong length.
  void validate() const;
};

/// Indices of each group keyed by label, in ascending label order.
[[nodiscard]] std::map<int, std::vector<std::size_t>> group_by_label(
    std::span<const int> labels);

struct SurveyEstimate {
  double point = 0.0;
  double analytic_variance = 0.0;
  std::string design;
  std::vector<std::size_t> sample_indices;  // sorted; repeats allowed for with-replacement designs
};

// ---------------------------------------------------------------------------
// Draws
// ---------------------------------------------------------------------------

/// n distinct indices from {0..N-1}, uniform over all C(N, n) subsets
/// (partial Fisher-Yates). Throws if n is 0 or exceeds N.
[[nodiscard]] std::vector<std::size_t> srs_draw(std::size_t population_size, std::size_t n,
                                                RngStream& rng);

/// n iid uniform indices (with replacement). n may exceed N.
[[nodiscard]] std::vector<std::size_t> bootstrap_draw(std::size_t population_size,
                                                      std::size_t n, RngStream& rng);

// ---------------------------------------------------------------------------
// Horvitz-Thompson estimation
// ---------------------------------------------------------------------------

/// sum over the sample of h(x_j) / pi_j. Every inclusion probability must lie
/// in (0, 1].
[[nodiscard]] double ht_estimate(std::span<const double> values,
                                 std::span<const double> inclusion_probs,
                                 const std::function<double(double)>& h);

[[nodiscard]] std::function<double(double)> h_total();
[[nodiscard]] std::function<double(double)> h_mean(std::size_t population_size);
[[nodiscard]] std::function<double(double)> h_proportion(std::function<bool(double)> predicate,
                                                         std::size_t population_size);

// ---------------------------------------------------------------------------
// Design estimators with analytic variances
// ---------------------------------------------------------------------------

/// SRS mean with variance (1 - n/N) sigma^2 / n, sigma^2 the unbiased
/// population variance. A census (n = N) has variance exactly 0.
[[nodiscard]] SurveyEstimate srs_mean_estimate(const FinitePopulation& pop, std::size_t n,
                                               RngStream& rng);

/// Stratified mean. `allocation` gives n_k per stratum in ascending label
/// order; every n_k must satisfy 1 <= n_k <= N_k.
[[nodiscard]] SurveyEstimate stratified_estimate(const FinitePopulation& pop,
                                                 std::span<const std::size_t> allocation,
                                                 RngStream& rng);

/// n_k proportional to N_k (largest-remainder rounding of n * N_k / N,
/// clamped to [1, N_k]).
[[nodiscard]] std::vector<std::size_t> proportional_allocation(const FinitePopulation& pop,
                                                               std::size_t n);

/// Stratified-design variance of the mean for a given allocation:
/// sum (N_k/N)^2 (1 - n_k/N_k) sigma_k^2 / n_k.
[[nodiscard]] double stratified_variance(std::span<const std::size_t> stratum_sizes,
                                         std::span<const double> stratum_sds,
                                         std::span<const std::size_t> allocation);

/// Closed form of the stratified variance under proportional allocation:
/// (1/n)(1 - n/N) sum (N_k/N) sigma_k^2.
[[nodiscard]] double proportional_allocation_variance(std::span<const std::size_t> stratum_sizes,
                                                      std::span<const double> stratum_sds,
                                                      std::size_t n);

/// Large-N approximation of the SRS variance written in per-stratum terms:
/// (1/n)(1 - n/N) [ sum (N_k/N) sigma_k^2 + sum N_k/(N-1) (mu_k - mu)^2 ].
[[nodiscard]] double srs_variance_stratum_form(std::span<const std::size_t> stratum_sizes,
                                               std::span<const double> stratum_sds,
                                               std::span<const double> stratum_means,
                                               std::size_t n);

/// Integer allocation minimizing the stratified variance subject to
/// sum n_k = n and 1 <= n_k <= N_k. Continuous optimum n_k ~ N_k sigma_k,
/// largest-remainder rounding, then single-unit transfer repair (the
/// objective is separable convex, so the local optimum is global).
[[nodiscard]] std::vector<std::size_t> neyman_allocate(std::span<const std::size_t> stratum_sizes,
                                                       std::span<const double> stratum_sds,
                                                       std::size_t n);

/// Cluster-sampling mean: SRS of c clusters, all elements of each selected
/// cluster taken. Variance (K^2/N^2)(1 - c/K) sigma_*^2 / c where sigma_*^2
/// is the unbiased variance of the cluster totals tau_k.
[[nodiscard]] SurveyEstimate cluster_estimate(const FinitePopulation& pop, std::size_t c,
                                              RngStream& rng);

// ---------------------------------------------------------------------------
// Multistage and snowball designs
// ---------------------------------------------------------------------------

struct ClusterStage {
  std::size_t c;
};
struct SrsStage {
  std::size_t n;  // per current group when grouped, else from the whole pool
};
using Stage = std::variant<ClusterStage, SrsStage>;

struct MultistageDraw {
  std::vector<std::size_t> indices;
  std::vector<double> inclusion_probs;  // composite, aligned with indices
};

/// Stage-wise composition. A cluster stage selects c of the current clusters
/// and regroups the pool by cluster; an SRS stage draws within each current
/// group. Composite inclusion probabilities multiply stage by stage.
[[nodiscard]] MultistageDraw multistage_draw(const FinitePopulation& pop,
                                             std::span<const Stage> stages, RngStream& rng);

/// Per-edge expansion rule; the default stochastic rule includes each
/// not-yet-included neighbor with `expansion_probability`.
using ExpansionRule = std::function<bool(std::size_t from, std::size_t to, RngStream& rng)>;

[[nodiscard]] std::vector<std::size_t> snowball_draw(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::span<const std::size_t> seeds, double expansion_probability, std::size_t max_rounds,
    RngStream& rng);

[[nodiscard]] std::vector<std::size_t> snowball_draw(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::span<const std::size_t> seeds, const ExpansionRule& rule, std::size_t max_rounds,
    RngStream& rng);

}  // namespace sampling::survey
