#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sampling/diagnostics.hpp"
#include "sampling/mc.hpp"
#include "sampling/rng.hpp"
#include "sampling/stats.hpp"

using namespace sampling::mc;
using sampling::RngStream;
namespace stats = sampling::stats;
namespace diag = sampling::diag;

namespace {

TargetDensity flat_unit_target(double log_scale = 0.0) {
  TargetDensity t;
  t.dimension = 1;
  t.support = {Interval{0.0, 1.0}};
  t.log_shape = [](std::span<const double>) { return 0.0; };
  t.log_scale = log_scale;
  return t;
}

PointSampler normal_sampler() {
  return [](RngStream& rng) { return std::vector<double>{rng.standard_normal()}; };
}

}  // namespace

TEST_SUITE("mc") {

TEST_CASE("exponential quantile hits ln 2 at the median") {
  const auto q = exponential_quantile(1.0);
  CHECK(q.inverse_cdf(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("make_quantile rejects non-monotone functions") {
  CHECK_THROWS_AS((void)make_quantile([](double u) { return -u; }), std::invalid_argument);
  CHECK_THROWS_AS((void)make_quantile([](double u) { return 1.0 / (u - 0.5); }),
                  std::invalid_argument);
}

TEST_CASE("inverse-CDF uniform sample has the uniform mean") {
  RngStream rng(1);
  const std::size_t n = 100'000;
  const auto xs = inverse_cdf_sample(uniform_quantile(0.0, 1.0), n, rng);
  const double tol = 3.0 / std::sqrt(12.0 * static_cast<double>(n));
  CHECK(std::abs(stats::mean(xs) - 0.5) < tol);
}

TEST_CASE("inverse-CDF exponential sample passes a KS fit") {
  RngStream rng(2);
  const auto xs = inverse_cdf_sample(exponential_quantile(1.0), 100'000, rng);
  const auto fit = diag::distribution_fit(
      xs, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
  CHECK(fit.ks_statistic < 0.006);
}

TEST_CASE("normal quantile matches the normal CDF") {
  const auto q = normal_quantile(0.0, 1.0);
  for (double u : {0.01, 0.1, 0.31, 0.5, 0.77, 0.9, 0.999})
    CHECK(normal_cdf(q.inverse_cdf(u)) == doctest::Approx(u).epsilon(1e-7));
}

TEST_CASE("mc_expectation moments of the standard normal") {
  RngStream rng(3);
  const std::size_t n = 200'000;
  const auto first = mc_expectation([](std::span<const double> x) { return x[0]; },
                                    normal_sampler(), n, rng);
  CHECK(std::abs(first.value) < 3.0 / std::sqrt(static_cast<double>(n)));
  const auto second = mc_expectation([](std::span<const double> x) { return x[0] * x[0]; },
                                     normal_sampler(), n, rng);
  CHECK(second.value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(second.standard_error == doctest::Approx(std::sqrt(2.0 / static_cast<double>(n)))
                                     .epsilon(0.1));
}

TEST_CASE("mc_expectation with n=1 returns h of the single draw") {
  RngStream rng(4);
  RngStream replay(4);
  const double x1 = replay.standard_normal();
  const auto est = mc_expectation([](std::span<const double> x) { return x[0]; },
                                  normal_sampler(), 1, rng);
  CHECK(est.value == x1);
  CHECK(est.standard_error == 0.0);
}

TEST_CASE("mc_expectation rejects non-finite h") {
  RngStream rng(5);
  CHECK_THROWS_AS((void)mc_expectation([](std::span<const double>) { return std::nan(""); },
                                       normal_sampler(), 10, rng),
                  std::runtime_error);
}

TEST_CASE("mc_probability endpoints") {
  RngStream rng(6);
  CHECK(mc_probability([](std::span<const double>) { return true; }, normal_sampler(), 100, rng)
            .value == 1.0);
  CHECK(mc_probability([](std::span<const double>) { return false; }, normal_sampler(), 100, rng)
            .value == 0.0);
}

TEST_CASE("pi estimate at one million points") {
  RngStream rng(7);
  const double est = estimate_pi(1'000'000, rng);
  CHECK(std::abs(est - std::numbers::pi) < 0.005);
}

TEST_CASE("pi estimate from a single inside point is exactly 4") {
  // Seed chosen so the first (x, y) pair falls inside the quarter circle.
  RngStream probe(7);
  const double x = probe.uniform();
  const double y = probe.uniform();
  REQUIRE(x * x + y * y <= 1.0);
  RngStream rng(7);
  CHECK(estimate_pi(1, rng) == 4.0);
}

TEST_CASE("pi error shrinks when n quadruples") {
  double err_small = 0.0, err_large = 0.0;
  const std::size_t n = 4000;
  for (int rep = 0; rep < 100; ++rep) {
    RngStream a(1000 + rep);
    RngStream b(2000 + rep);
    err_small += std::abs(estimate_pi(n, a) - std::numbers::pi);
    err_large += std::abs(estimate_pi(4 * n, b) - std::numbers::pi);
  }
  CHECK(err_large < err_small);
}

TEST_CASE("importance sampling with target = proposal is the plain mean") {
  // Normalized standard normal as both target and proposal: all weights
  // coincide, so the estimator collapses to the sample average of h.
  TargetDensity target = standard_normal_target(1);
  const auto proposal = gaussian_proposal({0.0}, {1.0});
  target.log_shape = [lq = proposal.log_density](std::span<const double> x) { return lq(x); };

  RngStream rng(8);
  RngStream replay(8);
  const std::size_t n = 10'000;
  const double est = importance_estimate(
      target, proposal, [](std::span<const double> x) { return x[0] * x[0] * x[0]; }, n, rng);
  double plain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = proposal.sample(replay);
    plain += x[0] * x[0] * x[0];
  }
  plain /= static_cast<double>(n);
  CHECK(est == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("importance sampling recovers E(x^2) = 1 through a wider proposal") {
  RngStream rng(9);
  const auto target = standard_normal_target(1);
  const auto proposal = gaussian_proposal({0.0}, {std::numbers::sqrt2});
  const double est = importance_estimate(
      target, proposal, [](std::span<const double> x) { return x[0] * x[0]; }, 1'000'000, rng);
  CHECK(est == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("importance sampling of a constant is the constant") {
  RngStream rng(10);
  const auto target = standard_normal_target(1);
  const auto proposal = gaussian_proposal({0.5}, {2.0});
  const double est = importance_estimate(
      target, proposal, [](std::span<const double>) { return 7.0; }, 1000, rng);
  CHECK(est == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("importance estimator is bit-identical under rescaling of P*") {
  auto target = standard_normal_target(1);
  const auto proposal = gaussian_proposal({0.0}, {std::numbers::sqrt2});
  const auto h = [](std::span<const double> x) { return x[0] * x[0]; };

  RngStream rng_a(11);
  const double base = importance_estimate(target, proposal, h, 50'000, rng_a);
  target.log_scale += 100.0;  // rescale P* by e^100
  RngStream rng_b(11);
  const double shifted = importance_estimate(target, proposal, h, 50'000, rng_b);
  CHECK(base == shifted);

  // The density itself does change.
  const double probe[1] = {0.3};
  CHECK(target.log_density(probe) == doctest::Approx(target.log_unnormalized(probe) + 100.0));
}

TEST_CASE("out-of-support draws carry zero weight even when h is singular there") {
  RngStream rng(25);
  const auto target = triangular_target();  // support [0, 1]
  const auto proposal = gaussian_proposal({0.5}, {1.0});  // spills outside
  const double est = importance_estimate(
      target, proposal, [](std::span<const double> x) { return 1.0 / x[0]; }, 50'000, rng);
  // E[1/x] under 2x on [0,1] is 2; draws at x <= 0 hit the singular h but get
  // zero weight.
  CHECK(std::isfinite(est));
  CHECK(est == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("importance sampling mismatch throws") {
  RngStream rng(12);
  auto target = triangular_target();  // support [0, 1]
  const auto proposal = gaussian_proposal({50.0}, {0.01});
  CHECK_THROWS_WITH_AS((void)importance_estimate(
                           target, proposal,
                           [](std::span<const double> x) { return x[0]; }, 100, rng),
                       "proposal-target mismatch", std::runtime_error);
}

TEST_CASE("importance error decays like n^-1/2") {
  const std::vector<std::size_t> sizes = {1'000, 10'000, 100'000, 1'000'000};
  const auto target = standard_normal_target(1);
  const auto proposal = gaussian_proposal({0.0}, {std::numbers::sqrt2});
  const auto h = [](std::span<const double> x) { return x[0] * x[0]; };

  std::vector<double> log_n, log_err;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    double abs_err = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
      RngStream rng(6000 + 100 * static_cast<int>(si) + seed);
      abs_err += std::abs(importance_estimate(target, proposal, h, sizes[si], rng) - 1.0);
    }
    log_n.push_back(std::log(static_cast<double>(sizes[si])));
    log_err.push_back(std::log(abs_err / 50.0));
  }
  // Least-squares slope of log err vs log n.
  const double n = static_cast<double>(log_n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_err[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_err[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));  // -0.5 +- 0.1
}

TEST_CASE("rejection sampling of the triangular density") {
  RngStream rng(13);
  const auto target = triangular_target();
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  const auto result = rejection_sample(target, proposal, 2.0, 500'000, rng);

  CHECK(result.acceptance_rate == doctest::Approx(0.5).epsilon(0.01));  // +-0.005
  std::vector<double> xs;
  xs.reserve(100'000);
  for (std::size_t i = 0; i < 100'000; ++i) xs.push_back(result.samples[i][0]);
  const auto fit = diag::distribution_fit(xs, [](double x) {
    return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x * x);
  });
  CHECK(fit.ks_statistic < 0.006);
}

TEST_CASE("tight envelope accepts everything") {
  RngStream rng(14);
  const auto target = flat_unit_target();
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  const auto result = rejection_sample(target, proposal, 1.0, 50'000, rng);
  CHECK(result.acceptance_rate == doctest::Approx(1.0));
}

TEST_CASE("doubling c halves the acceptance rate") {
  const auto target = triangular_target();
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  RngStream rng_a(15), rng_b(16);
  const auto r2 = rejection_sample(target, proposal, 2.0, 200'000, rng_a);
  const auto r4 = rejection_sample(target, proposal, 4.0, 200'000, rng_b);
  CHECK(r2.acceptance_rate / r4.acceptance_rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("acceptance rate tracks Z/c including the density scale") {
  // P* = x on [0, 1] (triangular shape scaled by 1/2): Z = 1/2, c = 2.
  RngStream rng(17);
  auto target = triangular_target();
  target.log_scale = std::log(0.5);
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  const auto result = rejection_sample(target, proposal, 2.0, 100'000, rng);
  const double expected = 0.25;
  const double se = std::sqrt(expected * (1.0 - expected) /
                              static_cast<double>(result.proposals_used));
  CHECK(std::abs(result.acceptance_rate - expected) < 3.0 * se);
}

TEST_CASE("envelope violations are detected") {
  RngStream rng(18);
  const auto target = triangular_target();
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  CHECK_THROWS_AS((void)rejection_sample(target, proposal, 1.5, 1000, rng),
                  std::invalid_argument);  // c Q < P* near x = 1
}

TEST_CASE("rejection calibration grows c to a dominating value") {
  RngStream rng(19);
  const auto target = triangular_target();  // sup P*/Q = 2
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  const double c = rejection_calibrate_c(target, proposal, 1000, 1.5, rng, 0.1);
  CHECK(c >= 2.0);
  CHECK(c < 2.0 * 1.5);
}

TEST_CASE("calibration returns the initial c when it already dominates") {
  RngStream rng(20);
  auto target = flat_unit_target(std::log(0.5));  // P* = 1/2 <= Q = 1
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  CHECK(rejection_calibrate_c(target, proposal, 1000, 2.0, rng, 1.0) == 1.0);
}

TEST_CASE("calibration ladder is deterministic when the grid catches violations") {
  RngStream rng(21);
  auto target = flat_unit_target(std::log(5.0));  // constant P* = 5, sup ratio 5
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  const double c = rejection_calibrate_c(target, proposal, 10, 2.0, rng, 0.1);
  CHECK(c == doctest::Approx(6.4).epsilon(1e-12));  // 0.1 -> 0.2 -> ... -> 6.4
}

TEST_CASE("calibration gives up past the ceiling") {
  RngStream rng(22);
  auto target = flat_unit_target(std::log(5.0));
  const auto proposal = uniform_box_proposal({Interval{0.0, 1.0}});
  CHECK_THROWS_WITH_AS((void)rejection_calibrate_c(target, proposal, 10, 2.0, rng, 0.1, 1.0),
                       "no dominating c found", std::runtime_error);
}

TEST_CASE("calibrated rejection reproduces a bimodal mixture") {
  RngStream rng(23);
  const auto target = normal_mixture_target(0.5, -3.0, 1.0, 3.0, 1.0);
  const auto proposal = gaussian_proposal({0.0}, {4.0});
  const double c = rejection_calibrate_c(target, proposal, 20'000, 1.3, rng);
  const auto result = rejection_sample(target, proposal, c, 100'000, rng);
  std::vector<double> xs;
  xs.reserve(result.samples.size());
  for (const auto& s : result.samples) xs.push_back(s[0]);
  const auto fit = diag::distribution_fit(xs, [](double x) {
    return 0.5 * normal_cdf(x + 3.0) + 0.5 * normal_cdf(x - 3.0);
  });
  CHECK(fit.passed);
  // Mass on the positive mode.
  const auto above = static_cast<double>(
      std::count_if(xs.begin(), xs.end(), [](double x) { return x > 0.0; }));
  CHECK(above / static_cast<double>(xs.size()) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("unknown density names list the registry") {
  CHECK_THROWS_AS((void)make_target("nosuch"), std::invalid_argument);
  CHECK_NOTHROW((void)make_target("normal"));
  CHECK_NOTHROW((void)make_target("bivariate:0.9"));
  CHECK_NOTHROW((void)make_target("mixture"));
  CHECK_NOTHROW((void)make_target("table:1,3"));
  CHECK_THROWS_AS((void)make_target("table"), std::invalid_argument);
}

TEST_CASE("built-in gradients match finite differences") {
  RngStream rng(24);
  const auto targets = {standard_normal_target(2), bivariate_normal_target(0.7)};
  for (const auto& t : targets) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(t.dimension);
      for (auto& v : x) v = rng.uniform(-2, 2);
      const auto g = t.gradient(x);
      constexpr double h = 1e-6;
      for (std::size_t d = 0; d < t.dimension; ++d) {
        auto hi = x, lo = x;
        hi[d] += h;
        lo[d] -= h;
        // dE/dx = -d(log P*)/dx
        const double fd = -(t.log_unnormalized(hi) - t.log_unnormalized(lo)) / (2.0 * h);
        CHECK(g[d] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

}  // TEST_SUITE
