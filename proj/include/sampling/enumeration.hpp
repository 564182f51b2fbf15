#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sampling/survey.hpp"

namespace sampling::survey {

// Exhaustive design-space verification for small populations (N <= 12 or so):
// walks every possible sample of a design and reports the exact mean and
// variance of the estimator over the design space. This is the executable
// ground truth the analytic variance formulas are checked against; it shares
// no code with those formulas.

/// Visits all C(n_total, k) index subsets in lexicographic order.
void for_each_combination(std::size_t n_total, std::size_t k,
                          const std::function<void(std::span<const std::size_t>)>& visit);

struct DesignMoments {
  double mean = 0.0;
  double variance = 0.0;  // over the uniform distribution on designs
  std::size_t design_count = 0;
};

/// Sample mean over every size-n subset.
[[nodiscard]] DesignMoments enumerate_srs_mean(const FinitePopulation& pop, std::size_t n);

/// Cluster-sampling estimator over every size-c set of clusters.
[[nodiscard]] DesignMoments enumerate_cluster_mean(const FinitePopulation& pop, std::size_t c);

/// Stratified estimator over the full product of per-stratum subset choices.
[[nodiscard]] DesignMoments enumerate_stratified_mean(const FinitePopulation& pop,
                                                      std::span<const std::size_t> allocation);

}  // namespace sampling::survey
