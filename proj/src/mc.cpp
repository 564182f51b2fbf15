#include "sampling/mc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sampling::mc {

namespace {

std::string point_to_string(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

// Probe points for the envelope check: a uniform grid when the target is 1-D
// with bounded support, otherwise none (drawn proposals still get checked).
std::vector<double> envelope_probe_grid(const TargetDensity& target) {
  if (target.dimension != 1 || target.support.empty()) return {};
  const auto [lo, hi] = target.support[0];
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {};
  constexpr int kProbes = 1000;
  std::vector<double> grid(kProbes);
  for (int i = 0; i < kProbes; ++i)
    grid[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / kProbes;
  return grid;
}

bool envelope_holds_at(const TargetDensity& target, const ProposalSampler& proposal,
                       double log_c, std::span<const double> x) {
  const double lp = target.log_density(x);
  if (lp == -std::numeric_limits<double>::infinity()) return true;
  return log_c + proposal.log_density(x) >= lp;
}

}  // namespace

std::vector<double> inverse_cdf_sample(const QuantileFunction& q, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("inverse_cdf_sample: n must be positive");
  std::vector<double> out(n);
  for (auto& x : out) {
    x = q.inverse_cdf(rng.uniform());
    if (!std::isfinite(x)) throw std::runtime_error("inverse_cdf_sample: non-finite quantile");
  }
  return out;
}

McEstimate mc_expectation(const std::function<double(std::span<const double>)>& h,
                          const PointSampler& sampler, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("mc_expectation: n must be positive");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = sampler(rng);
    const double v = h(x);
    if (!std::isfinite(v))
      throw std::runtime_error("mc_expectation: non-finite h at " + point_to_string(x));
    sum += v;
    sum_sq += v * v;
  }
  McEstimate e;
  e.n = n;
  e.value = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum_sq / static_cast<double>(n) - e.value * e.value);
  e.standard_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

McEstimate mc_probability(const std::function<bool(std::span<const double>)>& predicate,
                          const PointSampler& sampler, std::size_t n, RngStream& rng) {
  return mc_expectation(
      [&predicate](std::span<const double> x) { return predicate(x) ? 1.0 : 0.0; }, sampler, n,
      rng);
}

double estimate_pi(std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("estimate_pi: n must be positive");
  std::size_t inside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    if (x * x + y * y <= 1.0) ++inside;
  }
  return 4.0 * static_cast<double>(inside) / static_cast<double>(n);
}

double importance_estimate(const TargetDensity& target, const ProposalSampler& proposal,
                           const std::function<double(std::span<const double>)>& h, std::size_t n,
                           RngStream& rng) {
  if (n == 0) throw std::invalid_argument("importance_estimate: n must be positive");
  if (proposal.dimension != target.dimension)
    throw std::invalid_argument("importance_estimate: dimension mismatch");

  std::vector<double> log_w(n);
  std::vector<double> h_vals(n);
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = proposal.sample(rng);
    log_w[i] = target.log_unnormalized(x) - proposal.log_density(x);
    h_vals[i] = h(x);
    if (log_w[i] > max_lw) max_lw = log_w[i];
  }
  if (!std::isfinite(max_lw)) throw std::runtime_error("proposal-target mismatch");

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(log_w[i] - max_lw);
    if (w == 0.0) continue;  // out-of-support draws must not poison num via h
    num += w * h_vals[i];
    den += w;
  }
  if (!(den > 0.0) || !std::isfinite(num)) throw std::runtime_error("proposal-target mismatch");
  return num / den;
}

RejectionResult rejection_sample(const TargetDensity& target, const ProposalSampler& proposal,
                                 double c, std::size_t n, RngStream& rng) {
  if (c <= 0.0) throw std::invalid_argument("rejection_sample: c must be positive");
  if (n == 0) throw std::invalid_argument("rejection_sample: n must be positive");
  const double log_c = std::log(c);

  for (double g : envelope_probe_grid(target)) {
    const double x[1] = {g};
    if (!envelope_holds_at(target, proposal, log_c, x))
      throw std::invalid_argument("invalid c: envelope violated at x=" + std::to_string(g));
  }

  constexpr std::size_t kProposalCap = 10'000'000;
  RejectionResult out;
  out.samples.reserve(n);
  while (out.samples.size() < n) {
    if (out.proposals_used >= kProposalCap &&
        static_cast<double>(out.samples.size()) < 1e-6 * static_cast<double>(out.proposals_used))
      throw std::runtime_error("rejection_sample: c too large / mismatch");
    auto x = proposal.sample(rng);
    ++out.proposals_used;
    const double lq = proposal.log_density(x);
    const double lp = target.log_density(x);
    if (log_c + lq < lp)
      throw std::invalid_argument("invalid c: envelope violated at drawn point " +
                                  point_to_string(x));
    // u ~ U(0, c Q(x)); accept iff u < P*(x), i.e. log(v) < lp - log c - lq.
    const double v = rng.uniform();
    if (std::log(v) < lp - log_c - lq) out.samples.push_back(std::move(x));
  }
  out.acceptance_rate =
      static_cast<double>(out.samples.size()) / static_cast<double>(out.proposals_used);
  return out;
}

double rejection_calibrate_c(const TargetDensity& target, const ProposalSampler& proposal,
                             std::size_t probe_n, double growth_factor, RngStream& rng,
                             double initial_c, double ceiling) {
  if (initial_c <= 0.0) throw std::invalid_argument("rejection_calibrate_c: bad initial c");
  if (growth_factor <= 1.0)
    throw std::invalid_argument("rejection_calibrate_c: growth factor must exceed 1");
  const auto grid = envelope_probe_grid(target);

  double c = initial_c;
  while (c <= ceiling) {
    const double log_c = std::log(c);
    bool valid = true;
    // Deterministic grid first, then fresh draws; any violation restarts
    // probing from scratch at the enlarged c.
    for (double g : grid) {
      const double x[1] = {g};
      if (!envelope_holds_at(target, proposal, log_c, x)) {
        valid = false;
        break;
      }
    }
    for (std::size_t i = 0; valid && i < probe_n; ++i) {
      const auto x = proposal.sample(rng);
      if (!envelope_holds_at(target, proposal, log_c, x)) valid = false;
    }
    if (valid) return c;
    c *= growth_factor;
  }
  throw std::runtime_error("no dominating c found");
}

}  // namespace sampling::mc
