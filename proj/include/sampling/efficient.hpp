#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sampling/density.hpp"
#include "sampling/mcmc.hpp"
#include "sampling/rng.hpp"

namespace sampling::mc_efficient {

using mc::TargetDensity;

struct HmcConfig {
  double step_size = 0.1;         // eta
  std::size_t leapfrog_steps = 20;  // T
  std::size_t n_samples = 10000;
  std::size_t burn_in = 1000;
  std::optional<std::vector<double>> initial_point;
};

struct PhasePoint {
  std::vector<double> position;
  std::vector<double> momentum;
  std::vector<double> gradient;  // dE/dx at position
};

/// Momentum refresh: iid standard normals. Takes only the dimension by
/// design; the kinetic part of the Hamiltonian is separable from the energy.
[[nodiscard]] std::vector<double> sample_momentum(std::size_t dimension, RngStream& rng);

[[nodiscard]] double kinetic_energy(std::span<const double> momentum);

/// T deterministic leapfrog steps (half-step momentum, full-step position,
/// gradient refresh, half-step momentum). Throws on a non-finite gradient or
/// position, naming the failing step.
[[nodiscard]] PhasePoint leapfrog(const TargetDensity& target, PhasePoint state, double step_size,
                                  std::size_t steps);

/// Hamiltonian Monte Carlo: refresh momentum, integrate, accept when dH < 0
/// and with probability exp(-dH) otherwise. The trace repeats the previous
/// position on rejection and records |dH| per iteration in energy_error.
[[nodiscard]] mcmc::Trace hmc(const TargetDensity& target, const HmcConfig& cfg, RngStream& rng);

// ---------------------------------------------------------------------------
// Overrelaxation
// ---------------------------------------------------------------------------

struct GaussianConditional {
  double mean = 0.0;
  double sd = 1.0;
};

/// Full conditional of one coordinate, restricted to Gaussian form.
using GaussianConditionalFn = std::function<GaussianConditional(std::span<const double>)>;

/// Gibbs sweep with Adler's update x_j <- mu + alpha (x_j - mu) +
/// sqrt(1 - alpha^2) sigma nu, which preserves each Gaussian conditional for
/// every alpha in [-1, 1]. alpha = 0 is plain Gibbs; alpha = -1 reflects
/// deterministically about the conditional mean.
[[nodiscard]] mcmc::Trace adler_gibbs(const std::vector<GaussianConditionalFn>& conditionals,
                                      double alpha, const mcmc::ChainConfig& cfg, RngStream& rng);

/// Gaussian full conditionals of the unit bivariate normal, for adler_gibbs.
[[nodiscard]] std::vector<GaussianConditionalFn> bivariate_normal_gaussian_conditionals(
    double rho);

/// Ordered overrelaxation: draw K-1 fresh values from the conditional, rank
/// x_old among all K (ties resolved toward the lower rank), return the value
/// of opposite rank K+1-k. Preserves the conditional law marginally.
[[nodiscard]] double ordered_overrelax_step(const std::function<double(RngStream&)>& conditional,
                                            double x_old, std::size_t k_order, RngStream& rng);

/// Gibbs sweep using ordered overrelaxation for every coordinate.
[[nodiscard]] mcmc::Trace ordered_overrelax_gibbs(
    const std::vector<mcmc::ConditionalSampler>& conditionals, std::size_t k_order,
    const mcmc::ChainConfig& cfg, RngStream& rng);

}  // namespace sampling::mc_efficient
