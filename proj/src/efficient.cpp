#include "sampling/efficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sampling::mc_efficient {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::vector<double> sample_momentum(std::size_t dimension, RngStream& rng) {
  std::vector<double> p(dimension);
  for (auto& v : p) v = rng.standard_normal();
  return p;
}

double kinetic_energy(std::span<const double> momentum) {
  double k = 0.0;
  for (double p : momentum) k += p * p;
  return 0.5 * k;
}

PhasePoint leapfrog(const TargetDensity& target, PhasePoint state, double step_size,
                    std::size_t steps) {
  if (!target.has_gradient()) throw std::invalid_argument("leapfrog: target has no gradient");
  if (step_size <= 0.0) throw std::invalid_argument("leapfrog: step size must be positive");
  const std::size_t dim = target.dimension;
  if (state.position.size() != dim || state.momentum.size() != dim)
    throw std::invalid_argument("leapfrog: phase point dimension mismatch");
  if (state.gradient.size() != dim) state.gradient = target.gradient(state.position);

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t d = 0; d < dim; ++d)
      state.momentum[d] -= 0.5 * step_size * state.gradient[d];
    for (std::size_t d = 0; d < dim; ++d) state.position[d] += step_size * state.momentum[d];
    if (!all_finite(state.position))
      throw std::runtime_error("leapfrog: position diverged at step " + std::to_string(t + 1));
    state.gradient = target.gradient(state.position);
    if (!all_finite(state.gradient))
      throw std::runtime_error("leapfrog: non-finite gradient at step " + std::to_string(t + 1));
    for (std::size_t d = 0; d < dim; ++d)
      state.momentum[d] -= 0.5 * step_size * state.gradient[d];
  }
  return state;
}

mcmc::Trace hmc(const TargetDensity& target, const HmcConfig& cfg, RngStream& rng) {
  if (!target.has_gradient()) throw std::invalid_argument("hmc: target has no gradient");
  if (cfg.n_samples == 0) throw std::invalid_argument("hmc: n_samples must be positive");
  if (cfg.leapfrog_steps == 0) throw std::invalid_argument("hmc: need at least one leapfrog step");
  if (cfg.step_size <= 0.0) throw std::invalid_argument("hmc: step size must be positive");

  std::vector<double> x =
      cfg.initial_point ? *cfg.initial_point : mcmc::random_point_in_support(target, rng);
  if (x.size() != target.dimension)
    throw std::invalid_argument("hmc: initial point has wrong dimension");
  // Energy E = -log P*; the constant normalization shift cancels in dH.
  const auto energy = [&target](std::span<const double> pos) {
    const double lp = target.log_unnormalized(pos);
    return lp == kNegInf ? std::numeric_limits<double>::infinity() : -lp;
  };
  if (!std::isfinite(energy(x))) throw std::invalid_argument("hmc: initial point has zero density");
  std::vector<double> grad = target.gradient(x);

  mcmc::Trace trace;
  trace.dimension = target.dimension;
  trace.samples.reserve(cfg.n_samples * target.dimension);
  trace.energy_error.reserve(cfg.n_samples);

  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    PhasePoint phase;
    phase.position = x;
    phase.momentum = sample_momentum(target.dimension, rng);
    phase.gradient = grad;

    const double h0 = energy(x) + kinetic_energy(phase.momentum);
    PhasePoint moved = leapfrog(target, std::move(phase), cfg.step_size, cfg.leapfrog_steps);
    const double e1 = energy(moved.position);
    const double h1 = e1 + kinetic_energy(moved.momentum);
    const double dh = h1 - h0;

    bool accept;
    if (dh < 0.0) {
      accept = true;
    } else {
      accept = rng.uniform() < std::exp(-dh);
    }
    ++trace.proposals_total;
    if (accept) {
      x = std::move(moved.position);
      grad = std::move(moved.gradient);
      ++trace.accepted_total;
    }
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(accept ? 1 : 0);
      trace.energy_error.push_back(std::isfinite(dh) ? std::abs(dh)
                                                     : std::numeric_limits<double>::infinity());
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Overrelaxation
// ---------------------------------------------------------------------------

mcmc::Trace adler_gibbs(const std::vector<GaussianConditionalFn>& conditionals, double alpha,
                        const mcmc::ChainConfig& cfg, RngStream& rng) {
  if (conditionals.empty()) throw std::invalid_argument("adler_gibbs: no conditionals");
  if (!(alpha >= -1.0 && alpha <= 1.0))
    throw std::invalid_argument("adler_gibbs: alpha outside [-1, 1]");
  if (cfg.n_samples == 0) throw std::invalid_argument("adler_gibbs: n_samples must be positive");

  const std::size_t dim = conditionals.size();
  std::vector<double> x = cfg.initial_point ? *cfg.initial_point : std::vector<double>(dim, 0.0);
  if (x.size() != dim) throw std::invalid_argument("adler_gibbs: initial point dimension mismatch");
  const double noise_scale = std::sqrt(1.0 - alpha * alpha);

  mcmc::Trace trace;
  trace.dimension = dim;
  trace.samples.reserve(cfg.n_samples * dim);

  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const GaussianConditional g = conditionals[j](x);
      if (!(g.sd >= 0.0) || !std::isfinite(g.mean))
        throw std::runtime_error("Adler requires Gaussian conditionals");
      const double nu = rng.standard_normal();
      x[j] = g.mean + alpha * (x[j] - g.mean) + noise_scale * g.sd * nu;
    }
    ++trace.proposals_total;
    ++trace.accepted_total;
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(1);
    }
  }
  return trace;
}

std::vector<GaussianConditionalFn> bivariate_normal_gaussian_conditionals(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("bivariate_normal_gaussian_conditionals: rho outside (-1, 1)");
  const double sd = std::sqrt(1.0 - rho * rho);
  std::vector<GaussianConditionalFn> conds(2);
  conds[0] = [rho, sd](std::span<const double> x) { return GaussianConditional{rho * x[1], sd}; };
  conds[1] = [rho, sd](std::span<const double> x) { return GaussianConditional{rho * x[0], sd}; };
  return conds;
}

double ordered_overrelax_step(const std::function<double(RngStream&)>& conditional, double x_old,
                              std::size_t k_order, RngStream& rng) {
  if (k_order < 2) throw std::invalid_argument("ordered_overrelax_step: K must be at least 2");
  std::vector<double> values;
  values.reserve(k_order);
  values.push_back(x_old);
  for (std::size_t i = 1; i < k_order; ++i) values.push_back(conditional(rng));

  // Rank of x_old with ties resolved toward the lower rank (1-based).
  std::size_t below = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < x_old) ++below;
  const std::size_t rank = below + 1;

  std::sort(values.begin(), values.end());
  return values[k_order - rank];  // 0-based index of rank K+1-rank
}

mcmc::Trace ordered_overrelax_gibbs(const std::vector<mcmc::ConditionalSampler>& conditionals,
                                    std::size_t k_order, const mcmc::ChainConfig& cfg,
                                    RngStream& rng) {
  if (conditionals.empty()) throw std::invalid_argument("ordered_overrelax_gibbs: no conditionals");
  if (cfg.n_samples == 0)
    throw std::invalid_argument("ordered_overrelax_gibbs: n_samples must be positive");

  const std::size_t dim = conditionals.size();
  std::vector<double> x = cfg.initial_point ? *cfg.initial_point : std::vector<double>(dim, 0.0);
  if (x.size() != dim)
    throw std::invalid_argument("ordered_overrelax_gibbs: initial point dimension mismatch");

  mcmc::Trace trace;
  trace.dimension = dim;
  trace.samples.reserve(cfg.n_samples * dim);

  const std::size_t total = cfg.burn_in + cfg.n_samples;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const auto draw = [&](RngStream& r) { return conditionals[j](x, r); };
      x[j] = ordered_overrelax_step(draw, x[j], k_order, rng);
    }
    ++trace.proposals_total;
    ++trace.accepted_total;
    if (i >= cfg.burn_in) {
      trace.samples.insert(trace.samples.end(), x.begin(), x.end());
      trace.accepted.push_back(1);
    }
  }
  return trace;
}

}  // namespace sampling::mc_efficient
