#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sampling::stats {

/// Arithmetic mean. Throws std::invalid_argument on empty input.
[[nodiscard]] double mean(std::span<const double> data);

/// Variance of a data sequence.
///
/// With `unbiased` (the default) the divisor is N-1, which requires at least
/// two elements; otherwise the divisor is N. Reductions run in sequential
/// order so results are reproducible.
[[nodiscard]] double variance(std::span<const double> data, bool unbiased = true);

/// Empirical covariance E(ab) - E(a)E(b). Lengths must match.
[[nodiscard]] double covariance(std::span<const double> a, std::span<const double> b);

struct MomentSummary {
  double mean = 0.0;
  double variance_biased = 0.0;
  double variance_unbiased = 0.0;
  std::size_t count = 0;
};

[[nodiscard]] MomentSummary moment_summary(std::span<const double> data);

/// Empirical decomposition of the mean squared error of a set of estimates
/// against a known truth. `residual` = mse - variance - bias^2, which is an
/// algebraic identity and should vanish to rounding.
struct MseDecomposition {
  double mse = 0.0;
  double variance = 0.0;  // biased (divisor N) empirical variance
  double bias = 0.0;
  double residual = 0.0;
};

[[nodiscard]] MseDecomposition mse_decomposition_check(std::span<const double> estimates,
                                                       double truth);

// ---------------------------------------------------------------------------
// Discrete PMFs: Bernoulli, Binomial, Hypergeometric.
// ---------------------------------------------------------------------------

struct PmfSpec {
  enum class Kind { bernoulli, binomial, hypergeometric };

  Kind kind;
  double p = 0.0;        // bernoulli, binomial
  std::int64_t N = 0;    // binomial trials / hypergeometric population
  std::int64_t K = 0;    // hypergeometric successes in population
  std::int64_t n = 0;    // hypergeometric draws

  static PmfSpec bernoulli(double p);
  static PmfSpec binomial(std::int64_t N, double p);
  static PmfSpec hypergeometric(std::int64_t N, std::int64_t K, std::int64_t n);

  /// Inclusive support bounds; pmf() is zero outside.
  [[nodiscard]] std::int64_t support_min() const;
  [[nodiscard]] std::int64_t support_max() const;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
};

/// PMF value at k. Out-of-support k yields 0; invalid parameters throw.
/// Binomial coefficients are evaluated exactly in integers for N <= 60 and
/// through log-gamma above that, so N up to ~1e6 is safe.
[[nodiscard]] double pmf(const PmfSpec& spec, std::int64_t k);

/// log C(n, k). Exact-integer path for n <= 60, lgamma otherwise.
[[nodiscard]] double log_binomial_coefficient(std::int64_t n, std::int64_t k);

}  // namespace sampling::stats
