#include "sampling/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace sampling::stats {

double mean(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("mean: empty input");
  double sum = 0.0;
  for (double x : data) sum += x;
  return sum / static_cast<double>(data.size());
}

double variance(std::span<const double> data, bool unbiased) {
  if (data.empty()) throw std::invalid_argument("variance: empty input");
  if (unbiased && data.size() < 2)
    throw std::invalid_argument("variance: insufficient data for unbiased estimate");
  const double mu = mean(data);
  double ss = 0.0;
  for (double x : data) {
    const double d = x - mu;
    ss += d * d;
  }
  const auto n = static_cast<double>(data.size());
  return ss / (unbiased ? n - 1.0 : n);
}

double covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("covariance: length mismatch");
  if (a.empty()) throw std::invalid_argument("covariance: empty input");
  const double ma = mean(a);
  const double mb = mean(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - ma) * (b[i] - mb);
  return sum / static_cast<double>(a.size());
}

MomentSummary moment_summary(std::span<const double> data) {
  MomentSummary s;
  s.count = data.size();
  s.mean = mean(data);
  s.variance_biased = variance(data, false);
  s.variance_unbiased = data.size() >= 2 ? variance(data, true) : 0.0;
  return s;
}

MseDecomposition mse_decomposition_check(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("mse_decomposition_check: empty input");
  MseDecomposition d;
  double sq = 0.0;
  for (double e : estimates) {
    const double err = e - truth;
    sq += err * err;
  }
  d.mse = sq / static_cast<double>(estimates.size());
  d.variance = variance(estimates, false);
  d.bias = mean(estimates) - truth;
  d.residual = d.mse - d.variance - d.bias * d.bias;
  return d;
}

// ---------------------------------------------------------------------------
// PMFs
// ---------------------------------------------------------------------------

namespace {

// Exact C(n, k) for n <= 60; the running product stays integral at each step
// and C(60, 30) < 2^63.
std::uint64_t binomial_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

}  // namespace

double log_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("log_binomial_coefficient: k outside [0, n]");
  if (n <= 60) return std::log(static_cast<double>(binomial_exact(n, k)));
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

PmfSpec PmfSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p outside [0, 1]");
  PmfSpec s;
  s.kind = Kind::bernoulli;
  s.p = p;
  s.N = 1;
  return s;
}

PmfSpec PmfSpec::binomial(std::int64_t N, double p) {
  if (N < 0) throw std::invalid_argument("binomial: N < 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0, 1]");
  PmfSpec s;
  s.kind = Kind::binomial;
  s.N = N;
  s.p = p;
  return s;
}

PmfSpec PmfSpec::hypergeometric(std::int64_t N, std::int64_t K, std::int64_t n) {
  if (N < 0 || K < 0 || K > N || n < 0 || n > N)
    throw std::invalid_argument("hypergeometric: need 0 <= K <= N and 0 <= n <= N");
  PmfSpec s;
  s.kind = Kind::hypergeometric;
  s.N = N;
  s.K = K;
  s.n = n;
  return s;
}

std::int64_t PmfSpec::support_min() const {
  switch (kind) {
    case Kind::bernoulli:
    case Kind::binomial:
      return 0;
    case Kind::hypergeometric:
      return std::max<std::int64_t>(0, n + K - N);
  }
  return 0;
}

std::int64_t PmfSpec::support_max() const {
  switch (kind) {
    case Kind::bernoulli:
      return 1;
    case Kind::binomial:
      return N;
    case Kind::hypergeometric:
      return std::min(n, K);
  }
  return 0;
}

double PmfSpec::mean() const {
  switch (kind) {
    case Kind::bernoulli:
      return p;
    case Kind::binomial:
      return static_cast<double>(N) * p;
    case Kind::hypergeometric:
      return static_cast<double>(n) * static_cast<double>(K) / static_cast<double>(N);
  }
  return 0.0;
}

double PmfSpec::variance() const {
  switch (kind) {
    case Kind::bernoulli:
      return p * (1.0 - p);
    case Kind::binomial:
      return static_cast<double>(N) * p * (1.0 - p);
    case Kind::hypergeometric: {
      const double Nd = static_cast<double>(N);
      const double q = static_cast<double>(K) / Nd;
      return static_cast<double>(n) * q * (1.0 - q) * (Nd - static_cast<double>(n)) / (Nd - 1.0);
    }
  }
  return 0.0;
}

double pmf(const PmfSpec& spec, std::int64_t k) {
  if (k < spec.support_min() || k > spec.support_max()) return 0.0;
  switch (spec.kind) {
    case PmfSpec::Kind::bernoulli:
      return k == 1 ? spec.p : 1.0 - spec.p;
    case PmfSpec::Kind::binomial: {
      // Degenerate p handled outside log space.
      if (spec.p == 0.0) return k == 0 ? 1.0 : 0.0;
      if (spec.p == 1.0) return k == spec.N ? 1.0 : 0.0;
      const double logv = log_binomial_coefficient(spec.N, k) +
                          static_cast<double>(k) * std::log(spec.p) +
                          static_cast<double>(spec.N - k) * std::log1p(-spec.p);
      return std::exp(logv);
    }
    case PmfSpec::Kind::hypergeometric: {
      const double logv = log_binomial_coefficient(spec.K, k) +
                          log_binomial_coefficient(spec.N - spec.K, spec.n - k) -
                          log_binomial_coefficient(spec.N, spec.n);
      return std::exp(logv);
    }
  }
  return 0.0;
}

}  // namespace sampling::stats
