#include "sampling/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sampling::mcmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_config(const ChainConfig& cfg) {
  if (cfg.n_samples == 0) throw std::invalid_argument("chain: n_samples must be positive");
}

}  // namespace

std::vector<double> Trace::coordinate(std::size_t d) const {
  if (d >= dimension) throw std::invalid_argument("Trace::coordinate: out of range");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples[i * dimension + d];
  return out;
}

double Trace::acceptance_rate() const {
  return proposals_total == 0
             ? 0.0
             : static_cast<double>(accepted_total) / static_cast<double>(proposals_total);
}

Trace Trace::accepted_only() const {
  Trace t;
  t.dimension = dimension;
  t.proposals_total = proposals_total;
  t.accepted_total = accepted_total;
  for (std::size_t i = 0; i < size(); ++i) {
    if (accepted[i]) {
      const auto r = row(i);
      t.samples.insert(t.samples.end(), r.begin(), r.end());
      t.accepted.push_back(1);
    }
  }
  return t;
}

std::vector<double> random_point_in_support(const TargetDensity& target, RngStream& rng) {
  std::vector<double> x(target.dimension);
  for (std::size_t d = 0; d < target.dimension; ++d) {
    const mc::Interval iv = d < target.support.size() ? target.support[d] : mc::Interval{};
    const bool lo_fin = std::isfinite(iv.lo);
    const bool hi_fin = std::isfinite(iv.hi);
    if (lo_fin && hi_fin)
      x[d] = rng.uniform(iv.lo, iv.hi);
    else if (lo_fin)
      x[d] = iv.lo + std::abs(rng.standard_normal());
    else if (hi_fin)
      x[d] = iv.hi - std::abs(rng.standard_normal());
    else
      x[d] = rng.standard_normal();
  }
  return x;
}

ProposalKernel gaussian_kernel(double sigma, std::size_t dimension) {
  if (sigma <= 0.0) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  ProposalKernel k;
  k.sample = [sigma, dimension](std::span<const double> from, RngStream& rng) {
    std::vector<double> to(dimension);
    for (std::size_t d = 0; d < dimension; ++d) to[d] = from[d] + sigma * rng.standard_normal();
    return to;
  };
  k.log_density = [sigma](std::span<const double> to, std::span<const double> from) {
    double ss = 0.0;
    for (std::size_t d = 0; d < to.size(); ++d) {
      const double z = (to[d] - from[d]) / sigma;
      ss += z * z;
    }
    return -0.5 * ss;  // up to the symmetric normalizer
  };
  return k;
}

namespace {

// Shared accept/reject chain driver. `correct` supplies the Hastings
// log-correction log q(x|y) - log q(y|x); null means symmetric.
Trace run_accept_reject_chain(
    const TargetDensity& target,
    const std::function<std::vector<double>(std::span<const double>, RngStream&)>& propose,
    const std::function<double(std::span<const double>, std::span<const double>)>* correct,
    const ChainConfig& cfg, RngStream& rng) {
  validate_config(cfg);
  std::vector<double> x =
      cfg.initial_point ? *cfg.initial_point : random_point_in_support(target, rng);
  if (x.size() != target.dimension)
    throw std::invalid_argument("chain: initial point has wrong dimension");
  double log_px = target.log_unnormalized(x);
  if (log_px == kNegInf)
    throw std::invalid_argument("chain: initial point has zero target density");

  Trace trace;
  trace.dimension = target.dimension;
  trace.samples.reserve(cfg.n_samples * target.dimension);
  trace.accepted.reserve(cfg.n_samples);

  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    auto y = propose(x, rng);
    const double log_py = target.log_unnormalized(y);
    double log_ratio = log_py - log_px;
    if (correct && *correct) log_ratio += (*correct)(x, y);
    const double u = rng.uniform();
    const bool accept = std::log(u) < log_ratio;
    ++trace.proposals_total;
    if (accept) {
      log_px = log_py;
      x = std::move(y);
      ++trace.accepted_total;
    }
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(accept ? 1 : 0);
    }
  }
  return trace;
}

}  // namespace

Trace metropolis(const TargetDensity& target, const GaussianStepProposal& proposal,
                 const ChainConfig& cfg, RngStream& rng) {
  if (proposal.sigma <= 0.0) throw std::invalid_argument("metropolis: sigma must be positive");
  const double sigma = proposal.sigma;
  const std::size_t dim = target.dimension;
  const auto propose = [sigma, dim](std::span<const double> from, RngStream& r) {
    std::vector<double> to(dim);
    for (std::size_t d = 0; d < dim; ++d) to[d] = from[d] + sigma * r.standard_normal();
    return to;
  };
  return run_accept_reject_chain(target, propose, nullptr, cfg, rng);
}

Trace metropolis_hastings(const TargetDensity& target, const ProposalKernel& kernel,
                          const ChainConfig& cfg, RngStream& rng) {
  if (!kernel.sample || !kernel.log_density)
    throw std::invalid_argument("metropolis_hastings: kernel incomplete");
  const std::function<double(std::span<const double>, std::span<const double>)> correct =
      [&kernel](std::span<const double> x, std::span<const double> y) {
        return kernel.log_density(x, y) - kernel.log_density(y, x);
      };
  return run_accept_reject_chain(target, kernel.sample, &correct, cfg, rng);
}

Trace gibbs(const std::vector<ConditionalSampler>& conditionals, const ChainConfig& cfg,
            RngStream& rng, ScanOrder order) {
  validate_config(cfg);
  const std::size_t dim = conditionals.size();
  if (dim == 0) throw std::invalid_argument("gibbs: no conditionals");

  std::vector<double> x = cfg.initial_point ? *cfg.initial_point : std::vector<double>(dim, 0.0);
  if (x.size() != dim) throw std::invalid_argument("gibbs: initial point has wrong dimension");

  Trace trace;
  trace.dimension = dim;
  trace.samples.reserve(cfg.n_samples * dim);

  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t coord =
          order == ScanOrder::sequential
              ? j
              : static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(dim) - 1));
      const double v = conditionals[coord](x, rng);
      if (!std::isfinite(v)) throw std::runtime_error("gibbs: conditional returned non-finite value");
      x[coord] = v;
    }
    ++trace.proposals_total;
    ++trace.accepted_total;  // Gibbs moves are always accepted
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(1);
    }
  }
  return trace;
}

std::vector<ConditionalSampler> bivariate_normal_conditionals(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("bivariate_normal_conditionals: rho outside (-1, 1)");
  const double sd = std::sqrt(1.0 - rho * rho);
  std::vector<ConditionalSampler> conds(2);
  conds[0] = [rho, sd](std::span<const double> x, RngStream& r) {
    return r.normal(rho * x[1], sd);
  };
  conds[1] = [rho, sd](std::span<const double> x, RngStream& r) {
    return r.normal(rho * x[0], sd);
  };
  return conds;
}

namespace {

// One slice move along a line parameterized by t, with the current point at
// t = 0. `log_p_line(t)` is log P* at that offset. Returns the accepted t.
double slice_move_on_line(const std::function<double(double)>& log_p_line, double delta,
                          std::size_t max_slices, RngStream& rng) {
  // Slice level u ~ U(0, P*(x)), kept in log space.
  const double log_u = std::log(rng.uniform()) + log_p_line(0.0);

  // Initial slice of width delta containing the point at a random offset.
  const double offset = rng.uniform();
  double lo = -offset * delta;
  double hi = lo + delta;

  std::size_t grew = 0;
  while (log_p_line(lo) >= log_u) {
    lo -= delta;
    if (++grew > max_slices) throw std::runtime_error("density not slice-bounded");
  }
  grew = 0;
  while (log_p_line(hi) >= log_u) {
    hi += delta;
    if (++grew > max_slices) throw std::runtime_error("density not slice-bounded");
  }

  // Shrinkage: sample within [lo, hi], discarding the far side of every
  // rejected candidate.
  for (;;) {
    const double cand = rng.uniform(lo, hi);
    if (log_p_line(cand) >= log_u) return cand;
    if (cand < 0.0)
      lo = cand;
    else
      hi = cand;
  }
}

Trace run_slice_chain(const TargetDensity& target, double delta, std::size_t max_slices,
                      const ChainConfig& cfg, RngStream& rng, bool directional) {
  validate_config(cfg);
  if (delta <= 0.0) throw std::invalid_argument("slice_sample: delta must be positive");
  if (max_slices == 0) throw std::invalid_argument("slice_sample: max_slices must be positive");

  std::vector<double> x =
      cfg.initial_point ? *cfg.initial_point : random_point_in_support(target, rng);
  if (x.size() != target.dimension)
    throw std::invalid_argument("slice_sample: initial point has wrong dimension");
  if (target.log_unnormalized(x) == kNegInf)
    throw std::invalid_argument("slice_sample: initial point has zero target density");

  Trace trace;
  trace.dimension = target.dimension;
  trace.samples.reserve(cfg.n_samples * target.dimension);

  std::vector<double> direction(target.dimension, 1.0);
  std::vector<double> probe(target.dimension);
  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    if (directional) {
      // Uniform random direction: normalized standard normal vector.
      double norm = 0.0;
      for (auto& d : direction) {
        d = rng.standard_normal();
        norm += d * d;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) direction[0] = 1.0;
      else
        for (auto& d : direction) d /= norm;
    }
    const auto log_p_line = [&](double t) {
      for (std::size_t d = 0; d < x.size(); ++d) probe[d] = x[d] + t * direction[d];
      return target.log_unnormalized(probe);
    };
    const double t = slice_move_on_line(log_p_line, delta, max_slices, rng);
    for (std::size_t d = 0; d < x.size(); ++d) x[d] += t * direction[d];

    ++trace.proposals_total;
    ++trace.accepted_total;
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(1);
    }
  }
  return trace;
}

}  // namespace

Trace slice_sample(const TargetDensity& target, double delta, std::size_t max_slices,
                   const ChainConfig& cfg, RngStream& rng) {
  if (target.dimension != 1) throw std::invalid_argument("slice_sample: target must be 1-D");
  return run_slice_chain(target, delta, max_slices, cfg, rng, false);
}

Trace slice_sample_directional(const TargetDensity& target, double delta, std::size_t max_slices,
                               const ChainConfig& cfg, RngStream& rng) {
  return run_slice_chain(target, delta, max_slices, cfg, rng, true);
}

// ---------------------------------------------------------------------------
// Discrete-chain verification
// ---------------------------------------------------------------------------

BalanceReport verify_balance(const DiscreteChainSpec& spec) {
  const std::size_t m = spec.target_weights.size();
  if (m < 2) throw std::invalid_argument("verify_balance: need at least 2 states");
  if (m > 1000) throw std::invalid_argument("verify_balance: too many states");
  if (spec.proposal.size() != m)
    throw std::invalid_argument("verify_balance: proposal matrix shape mismatch");
  for (double w : spec.target_weights)
    if (!(w > 0.0)) throw std::invalid_argument("verify_balance: weights must be positive");
  for (const auto& row : spec.proposal) {
    if (row.size() != m) throw std::invalid_argument("verify_balance: proposal matrix not square");
    double s = 0.0;
    for (double q : row) {
      if (q < 0.0) throw std::invalid_argument("verify_balance: negative proposal probability");
      s += q;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw std::invalid_argument("verify_balance: proposal rows must sum to 1");
  }

  // A[u][v] = P(move u -> v); rejected mass stays on the diagonal.
  std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
  for (std::size_t u = 0; u < m; ++u) {
    double reject = 0.0;
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u) continue;
      const double p_acc = std::min(spec.target_weights[v] / spec.target_weights[u], 1.0);
      A[u][v] = spec.proposal[u][v] * p_acc;
      reject += spec.proposal[u][v] * (1.0 - p_acc);
    }
    A[u][u] = spec.proposal[u][u] + reject;
  }

  double wsum = 0.0;
  for (double w : spec.target_weights) wsum += w;
  std::vector<double> pi(m);
  for (std::size_t u = 0; u < m; ++u) pi[u] = spec.target_weights[u] / wsum;

  BalanceReport report;
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = u + 1; v < m; ++v)
      report.max_balance_violation =
          std::max(report.max_balance_violation, std::abs(pi[u] * A[u][v] - pi[v] * A[v][u]));

  // Fixpoint by power iteration on the lazy chain (I + A)/2, which has the
  // same stationary distribution and is aperiodic.
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  std::vector<double> next(m);
  for (int iter = 0; iter < 200000; ++iter) {
    for (std::size_t v = 0; v < m; ++v) {
      double s = 0.0;
      for (std::size_t u = 0; u < m; ++u) s += p[u] * A[u][v];
      next[v] = 0.5 * (p[v] + s);
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < m; ++v) delta += std::abs(next[v] - p[v]);
    p.swap(next);
    if (delta < 1e-15) break;
  }
  double gap = 0.0;
  for (std::size_t v = 0; v < m; ++v) gap += std::abs(p[v] - pi[v]);
  report.stationary_gap = gap;
  return report;
}

// ---------------------------------------------------------------------------
// Gibbs acceptance on discrete grids
// ---------------------------------------------------------------------------

std::size_t DiscreteGridTarget::state_index(std::span<const std::size_t> state) const {
  if (state.size() != shape.size())
    throw std::invalid_argument("DiscreteGridTarget: state dimension mismatch");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) {
    if (state[d] >= shape[d]) throw std::invalid_argument("DiscreteGridTarget: state out of range");
    idx = idx * shape[d] + state[d];
  }
  return idx;
}

double DiscreteGridTarget::weight_at(std::span<const std::size_t> state) const {
  return weights.at(state_index(state));
}

double coordinate_mh_acceptance(const DiscreteGridTarget& target,
                                std::span<const std::size_t> state, std::size_t coordinate,
                                std::size_t proposed_value,
                                const CoordinateProposalPmf& proposal_pmf) {
  if (coordinate >= target.shape.size())
    throw std::invalid_argument("coordinate_mh_acceptance: bad coordinate");
  std::vector<std::size_t> proposed(state.begin(), state.end());
  proposed[coordinate] = proposed_value;

  const double w_old = target.weight_at(state);
  const double w_new = target.weight_at(proposed);
  const auto [q_fwd_num, q_fwd_den] = proposal_pmf(proposed_value, state);
  const auto [q_bwd_num, q_bwd_den] = proposal_pmf(state[coordinate], proposed);

  // min(1, [w_new q_bwd] / [w_old q_fwd]) with the fractions cross-multiplied.
  const double num = w_new * q_bwd_num * q_fwd_den;
  const double den = w_old * q_fwd_num * q_bwd_den;
  return std::min(1.0, num / den);
}

namespace {

// Gibbs conditional of `coordinate` given the rest, as the unreduced fraction
// weight(value, rest) / sum_v weight(v, rest).
CoordinateProposalPmf gibbs_conditional_pmf(const DiscreteGridTarget& target,
                                            std::size_t coordinate) {
  return [&target, coordinate](std::size_t value, std::span<const std::size_t> state)
             -> std::pair<double, double> {
    std::vector<std::size_t> s(state.begin(), state.end());
    double total = 0.0;
    for (std::size_t v = 0; v < target.shape[coordinate]; ++v) {
      s[coordinate] = v;
      total += target.weight_at(s);
    }
    s[coordinate] = value;
    return {target.weight_at(s), total};
  };
}

}  // namespace

double gibbs_mh_acceptance(const DiscreteGridTarget& target, std::span<const std::size_t> state,
                           std::size_t coordinate, std::size_t proposed_value) {
  return coordinate_mh_acceptance(target, state, coordinate, proposed_value,
                                  gibbs_conditional_pmf(target, coordinate));
}

double gibbs_mh_acceptance_check(const DiscreteGridTarget& target,
                                 std::span<const std::size_t> state, std::size_t coordinate,
                                 RngStream& rng) {
  if (coordinate >= target.shape.size())
    throw std::invalid_argument("gibbs_mh_acceptance_check: bad coordinate");
  // Draw the proposal from the Gibbs conditional.
  std::vector<std::size_t> s(state.begin(), state.end());
  double total = 0.0;
  for (std::size_t v = 0; v < target.shape[coordinate]; ++v) {
    s[coordinate] = v;
    total += target.weight_at(s);
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t drawn = target.shape[coordinate] - 1;
  for (std::size_t v = 0; v < target.shape[coordinate]; ++v) {
    s[coordinate] = v;
    acc += target.weight_at(s);
    if (u < acc) {
      drawn = v;
      break;
    }
  }
  return gibbs_mh_acceptance(target, state, coordinate, drawn);
}

}  // namespace sampling::mcmc
