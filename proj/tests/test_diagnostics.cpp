#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sampling/diagnostics.hpp"
#include "sampling/mc.hpp"
#include "sampling/mcmc.hpp"
#include "sampling/rng.hpp"
#include "sampling/stats.hpp"

using namespace sampling::diag;
using sampling::RngStream;
namespace mcmc = sampling::mcmc;
namespace stats = sampling::stats;

namespace {

mcmc::Trace trace_from(std::vector<double> xs) {
  mcmc::Trace t;
  t.dimension = 1;
  t.samples = std::move(xs);
  t.accepted.assign(t.samples.size(), 1);
  t.proposals_total = t.accepted_total = t.samples.size();
  return t;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("iid trace has ESS close to n") {
  RngStream rng(1);
  std::vector<double> xs(50'000);
  for (auto& x : xs) x = rng.standard_normal();
  const double ess = effective_sample_size(xs, 200);
  const double ratio = ess / static_cast<double>(xs.size());
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_CASE("perfectly alternating trace has lag-1 autocorrelation -1") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = i % 2 == 0 ? 1.0 : -1.0;
  const auto rho = autocorrelations(xs, 4);
  CHECK(rho[0] == 1.0);
  CHECK(rho[1] == -1.0);
}

TEST_CASE("constant trace is degenerate") {
  const auto t = trace_from(std::vector<double>(500, 3.0));
  CHECK_THROWS_WITH_AS((void)mixing_report(t, 10), "degenerate trace", std::invalid_argument);
}

TEST_CASE("mixing_report length guard") {
  const auto t = trace_from({1.0, 2.0, 3.0});
  CHECK_THROWS_AS((void)mixing_report(t, 10), std::invalid_argument);
}

TEST_CASE("acceptance rate is reported exactly") {
  auto t = trace_from({1.0, 2.0, 1.5, 2.5, 1.2, 2.2, 0.5, 1.7});
  t.proposals_total = 16;
  t.accepted_total = 5;
  const auto report = mixing_report(t, 3);
  CHECK(report.acceptance_rate == 5.0 / 16.0);
}

TEST_CASE("ESS is invariant under affine transformation") {
  RngStream rng(2);
  mcmc::ChainConfig cfg;
  cfg.n_samples = 20'000;
  cfg.burn_in = 500;
  cfg.initial_point = std::vector<double>{0.0};
  const auto trace = mcmc::metropolis(sampling::mc::standard_normal_target(1),
                                      mcmc::GaussianStepProposal{1.0}, cfg, rng);
  auto xs = trace.coordinate(0);
  const double base = effective_sample_size(xs, 500);
  for (auto& x : xs) x = -7.0 * x + 3.0;
  const double transformed = effective_sample_size(xs, 500);
  CHECK(transformed == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("the rule-of-thumb step size beats a tiny one on ESS") {
  double ess_small = 0.0, ess_good = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    mcmc::ChainConfig cfg;
    cfg.n_samples = 20'000;
    cfg.burn_in = 1000;
    cfg.initial_point = std::vector<double>{0.0};
    RngStream rng_a(100 + seed), rng_b(200 + seed);
    const auto target = sampling::mc::standard_normal_target(1);
    ess_small += effective_sample_size(
        mcmc::metropolis(target, mcmc::GaussianStepProposal{0.1}, cfg, rng_a).coordinate(0),
        2000);
    ess_good += effective_sample_size(
        mcmc::metropolis(target, mcmc::GaussianStepProposal{2.38}, cfg, rng_b).coordinate(0),
        2000);
  }
  CHECK(ess_good > ess_small);
}

TEST_CASE("mixing time estimate is the first sub-0.05 lag") {
  RngStream rng(3);
  std::vector<double> xs(20'000);
  for (auto& x : xs) x = rng.standard_normal();
  const auto report = mixing_report(trace_from(std::move(xs)), 50);
  CHECK(report.mixing_time_estimate <= 2.0);  // iid: immediately decorrelated
  CHECK(report.lag_autocorrelations[0] == 1.0);
}

// ---------------------------------------------------------------------------
// Scaling experiments
// ---------------------------------------------------------------------------

TEST_CASE("random-walk mixing time is quadratic in the range") {
  RngStream rng(4);
  const std::vector<std::size_t> L = {10, 20, 40, 80};
  const auto exp = random_walk_scaling(L, 1.0, 50, rng);
  CHECK(exp.slope == doctest::Approx(2.0).epsilon(0.2));  // 2.0 +- 0.4
  CHECK(exp.mean_mixing_time.size() == 4);
  for (auto c : exp.censored) CHECK(c == 0);
}

TEST_CASE("random-walk prediction for L=100 is ten thousand") {
  CHECK(predicted_random_walk_time(100, 1.0) == 10'000.0);
  // Measured cover time for L=100 lands within the order of magnitude.
  RngStream rng(5);
  const std::vector<std::size_t> L = {25, 50, 100};
  const auto exp = random_walk_scaling(L, 1.0, 50, rng);
  CHECK(exp.mean_mixing_time.back() > 1e3);
  CHECK(exp.mean_mixing_time.back() < 1e5);
}

TEST_CASE("doubling the step size quarters the cover time") {
  RngStream rng_a(6), rng_b(7);
  const std::vector<std::size_t> L = {40, 60, 80};
  const auto fine = random_walk_scaling(L, 1.0, 100, rng_a);
  const auto coarse = random_walk_scaling(L, 2.0, 100, rng_b);
  const double ratio = fine.mean_mixing_time[2] / coarse.mean_mixing_time[2];
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("random-walk scaling input validation") {
  RngStream rng(8);
  const std::vector<std::size_t> too_few = {10, 20};
  CHECK_THROWS_AS((void)random_walk_scaling(too_few, 1.0, 10, rng), std::invalid_argument);
  const std::vector<std::size_t> unsorted = {20, 10, 40};
  CHECK_THROWS_AS((void)random_walk_scaling(unsorted, 1.0, 10, rng), std::invalid_argument);
  const std::vector<std::size_t> small_L = {5, 20, 40};
  CHECK_THROWS_AS((void)random_walk_scaling(small_L, 1.0, 10, rng), std::invalid_argument);
}

TEST_CASE("hmc cover time is linear in the range") {
  RngStream rng(9);
  const std::vector<std::size_t> L = {10, 20, 40, 80};
  const auto exp = hmc_scaling(L, 0.25, 50, rng);
  CHECK(exp.slope == doctest::Approx(1.0).epsilon(0.4));  // 1.0 +- 0.4
}

TEST_CASE("halving eta doubles the hmc cover steps") {
  RngStream rng_a(10), rng_b(11);
  const std::vector<std::size_t> L = {20, 40, 80};
  const auto coarse = hmc_scaling(L, 0.5, 100, rng_a);
  const auto fine = hmc_scaling(L, 0.25, 100, rng_b);
  const double ratio = fine.mean_mixing_time[2] / coarse.mean_mixing_time[2];
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.6);
}

TEST_CASE("hmc scaling refuses degenerate ranges") {
  RngStream rng(12);
  const std::vector<std::size_t> tiny = {2, 3, 4};
  CHECK_THROWS_AS((void)hmc_scaling(tiny, 0.25, 10, rng), std::invalid_argument);
}

TEST_CASE("acceptance falls with the proposal scale as (l/delta)^r") {
  RngStream rng(13);
  const double ell = 1.0;
  const std::vector<double> deltas = {0.01, 1.0, 10.0};
  const auto rates = acceptance_tradeoff_probe(ell, deltas, 2, rng, 50'000);

  CHECK(rates[0] > 0.95);              // vanishing step: accept everything
  CHECK(rates[1] > 0.2);               // delta = ell: order-one acceptance
  CHECK(rates[1] < 0.8);
  CHECK(rates[2] > std::pow(10.0, -2.5));  // (l/delta)^r = 1e-2 within half an order
  CHECK(rates[2] < std::pow(10.0, -1.5));
  CHECK(rates[0] > rates[1]);
  CHECK(rates[1] > rates[2]);
}

// ---------------------------------------------------------------------------
// Distribution fit
// ---------------------------------------------------------------------------

TEST_CASE("distribution_fit null case passes") {
  RngStream rng(14);
  std::vector<double> xs(100'000);
  for (auto& x : xs) x = rng.standard_normal();
  const auto fit = distribution_fit(xs, sampling::mc::normal_cdf);
  CHECK(fit.passed);
  CHECK(fit.ks_statistic < 1.63 / std::sqrt(1e5));
}

TEST_CASE("distribution_fit rejects a gross mismatch") {
  RngStream rng(15);
  std::vector<double> xs(10'000);
  for (auto& x : xs) x = rng.standard_normal();
  // Normal samples against the uniform(0,1) CDF.
  const auto fit = distribution_fit(xs, [](double x) {
    return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
  });
  CHECK(fit.ks_statistic > 0.3);
  CHECK_FALSE(fit.passed);
}

TEST_CASE("distribution_fit guards") {
  std::vector<double> few(99, 0.5);
  CHECK_THROWS_WITH_AS((void)distribution_fit(few, sampling::mc::normal_cdf),
                       "distribution_fit: insufficient samples", std::invalid_argument);
  RngStream rng(16);
  std::vector<double> xs(200);
  for (auto& x : xs) x = rng.uniform();
  CHECK_THROWS_AS((void)distribution_fit(xs, [](double x) { return -x; }),
                  std::invalid_argument);
}

}  // TEST_SUITE
