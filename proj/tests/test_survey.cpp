#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "sampling/enumeration.hpp"
#include "sampling/rng.hpp"
#include "sampling/stats.hpp"
#include "sampling/survey.hpp"

using namespace sampling::survey;
using sampling::RngStream;
namespace stats = sampling::stats;

namespace {

FinitePopulation paper_dataset() {
  FinitePopulation pop;
  pop.values = {1, 2, 3, 1, 2, 3, 1, 2, 3};
  return pop;
}

FinitePopulation paper_dataset_strata() {
  // Perfect strata {1,1,1}, {2,2,2}, {3,3,3}.
  FinitePopulation pop;
  pop.values = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  pop.strata = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  return pop;
}

FinitePopulation paper_dataset_clusters() {
  // Identical clusters {1,2,3} x3.
  FinitePopulation pop;
  pop.values = {1, 2, 3, 1, 2, 3, 1, 2, 3};
  pop.clusters = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  return pop;
}

FinitePopulation random_labeled_population(RngStream& rng, std::size_t max_n, std::size_t max_k) {
  FinitePopulation pop;
  const auto K = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_k)));
  for (std::size_t k = 0; k < K; ++k) {
    const auto nk = static_cast<std::size_t>(
        rng.uniform_int(2, std::max<std::int64_t>(2, static_cast<std::int64_t>(max_n / K))));
    const double center = rng.uniform(-10, 10);
    const double spread = rng.uniform(0.1, 4.0);
    for (std::size_t j = 0; j < nk; ++j) {
      pop.values.push_back(center + spread * rng.standard_normal());
      pop.strata.push_back(static_cast<int>(k));
    }
  }
  return pop;
}

}  // namespace

TEST_SUITE("survey") {

TEST_CASE("srs_draw basics") {
  RngStream rng(1);
  auto all = srs_draw(5, 5, rng);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});

  const auto one = srs_draw(9, 1, rng);
  CHECK(one.size() == 1);
  CHECK(one[0] < 9);

  CHECK_THROWS_WITH_AS((void)srs_draw(4, 5, rng), "srs_draw: sample exceeds population",
                       std::invalid_argument);
}

TEST_CASE("srs_draw inclusion frequencies are n/N") {
  RngStream rng(2);
  const std::size_t reps = 100'000;
  std::vector<std::size_t> counts(9, 0);
  for (std::size_t r = 0; r < reps; ++r)
    for (auto i : srs_draw(9, 3, rng)) ++counts[i];
  for (auto c : counts) {
    const double freq = static_cast<double>(c) / static_cast<double>(reps);
    CHECK(freq == doctest::Approx(1.0 / 3.0).epsilon(0.03));  // +-0.01 absolute
  }
}

TEST_CASE("srs_draw draws distinct indices") {
  RngStream rng(3);
  for (int r = 0; r < 100; ++r) {
    auto s = srs_draw(12, 7, rng);
    std::sort(s.begin(), s.end());
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  }
}

TEST_CASE("bootstrap_draw") {
  RngStream rng(4);
  const auto fixed = bootstrap_draw(1, 5, rng);
  CHECK(fixed == std::vector<std::size_t>(5, 0));
  CHECK_THROWS_AS((void)bootstrap_draw(0, 3, rng), std::invalid_argument);

  // P(index 0 absent from a size-9 resample) = (1 - 1/9)^9.
  const std::size_t reps = 100'000;
  std::size_t absent = 0;
  std::vector<std::size_t> multiplicity_hist(10, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto draw = bootstrap_draw(9, 9, rng);
    const auto m = static_cast<std::size_t>(std::count(draw.begin(), draw.end(), 0u));
    if (m == 0) ++absent;
    ++multiplicity_hist[std::min<std::size_t>(m, 6)];  // bins 0..5 and 6+
  }
  const double p_absent = std::pow(1.0 - 1.0 / 9.0, 9.0);
  CHECK(static_cast<double>(absent) / static_cast<double>(reps) ==
        doctest::Approx(p_absent).epsilon(0.03));

  // Chi-square of the multiplicity histogram against binomial(9, 1/9);
  // 7 bins -> df = 6, 1% critical value 16.812.
  const auto spec = stats::PmfSpec::binomial(9, 1.0 / 9.0);
  double chi2 = 0.0;
  for (std::size_t k = 0; k <= 6; ++k) {
    double p = 0.0;
    if (k < 6)
      p = stats::pmf(spec, static_cast<std::int64_t>(k));
    else
      for (std::int64_t j = 6; j <= 9; ++j) p += stats::pmf(spec, j);
    const double expected = p * static_cast<double>(reps);
    const double observed = static_cast<double>(multiplicity_hist[k]);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  CHECK(chi2 < 16.812);
}

TEST_CASE("ht_estimate special cases") {
  // Census: every pi = 1, h = mean -> population mean.
  const auto pop = paper_dataset();
  std::vector<double> ones(pop.size(), 1.0);
  CHECK(ht_estimate(pop.values, ones, h_mean(pop.size())) == doctest::Approx(2.0).epsilon(1e-14));

  // Single element, pi = 0.5, h = total -> 2x.
  CHECK(ht_estimate(std::vector<double>{3.5}, std::vector<double>{0.5}, h_total()) ==
        doctest::Approx(7.0));

  // Proportion of values equal to 3 under census weighting.
  const auto third = ht_estimate(pop.values, ones, h_proportion([](double x) { return x == 3.0; },
                                                                pop.size()));
  CHECK(third == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_WITH_AS(
      (void)ht_estimate(std::vector<double>{1.0}, std::vector<double>{0.0}, h_total()),
      "invalid inclusion probability", std::invalid_argument);
}

TEST_CASE("ht mean averaged over all 84 subsets is exactly the population mean") {
  const auto pop = paper_dataset();
  const std::size_t n = 3;
  const double pi = static_cast<double>(n) / static_cast<double>(pop.size());
  double total = 0.0;
  std::size_t designs = 0;
  for_each_combination(pop.size(), n, [&](std::span<const std::size_t> subset) {
    std::vector<double> values, probs;
    for (auto i : subset) {
      values.push_back(pop.values[i]);
      probs.push_back(pi);
    }
    total += ht_estimate(values, probs, h_mean(pop.size()));
    ++designs;
  });
  CHECK(designs == 84);
  CHECK(std::abs(total / static_cast<double>(designs) - 2.0) < 1e-12);
}

TEST_CASE("srs_mean_estimate analytic variance matches the enumeration oracle") {
  const auto pop = paper_dataset();
  RngStream rng(5);
  const auto est = srs_mean_estimate(pop, 3, rng);
  CHECK(est.analytic_variance == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(est.sample_indices.size() == 3);

  const auto oracle = enumerate_srs_mean(pop, 3);
  CHECK(oracle.design_count == 84);
  CHECK(std::abs(oracle.mean - 2.0) < 1e-12);
  CHECK(oracle.variance == doctest::Approx(est.analytic_variance).epsilon(1e-10));

  const auto census = srs_mean_estimate(pop, 9, rng);
  CHECK(census.point == doctest::Approx(2.0));
  CHECK(census.analytic_variance == 0.0);
}

TEST_CASE("srs analytic variance equals enumeration on random populations") {
  RngStream rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    FinitePopulation pop;
    const auto N = static_cast<std::size_t>(rng.uniform_int(3, 11));
    for (std::size_t i = 0; i < N; ++i) pop.values.push_back(rng.uniform(-3, 3));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(N - 1)));
    const auto oracle = enumerate_srs_mean(pop, n);
    RngStream draw_rng(100 + trial);
    const auto est = srs_mean_estimate(pop, n, draw_rng);
    CHECK(oracle.variance == doctest::Approx(est.analytic_variance).epsilon(1e-10));
    CHECK(oracle.mean == doctest::Approx(stats::mean(pop.values)).epsilon(1e-12));
  }
}

TEST_CASE("srs variance law verified by replication beyond enumeration reach") {
  // N = 100 is far past the exhaustive-enumeration range; the analytic
  // variance is checked against the spread of replicated estimates instead.
  RngStream rng(42);
  FinitePopulation pop;
  for (int i = 0; i < 100; ++i) pop.values.push_back(rng.uniform(-10, 10));

  const std::size_t n = 20;
  const std::size_t reps = 20'000;
  std::vector<double> points(reps);
  double analytic = 0.0;
  for (auto& p : points) {
    const auto est = srs_mean_estimate(pop, n, rng);
    p = est.point;
    analytic = est.analytic_variance;
  }
  CHECK(stats::mean(points) == doctest::Approx(stats::mean(pop.values)).epsilon(0.01));
  CHECK(stats::variance(points, false) == doctest::Approx(analytic).epsilon(0.05));
}

TEST_CASE("bootstrap mean variance follows sigma^2/n") {
  RngStream rng(43);
  const auto pop = paper_dataset();
  const std::size_t n = 6;
  const std::size_t reps = 50'000;
  std::vector<double> points(reps);
  for (auto& p : points) {
    double sum = 0.0;
    for (auto i : bootstrap_draw(pop.size(), n, rng)) sum += pop.values[i];
    p = sum / static_cast<double>(n);
  }
  const double expected = stats::variance(pop.values, false) / static_cast<double>(n);
  CHECK(stats::variance(points, false) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("stratified perfect strata have zero variance") {
  const auto pop = paper_dataset_strata();
  RngStream rng(7);
  const std::vector<std::size_t> alloc = {1, 1, 1};
  const auto est = stratified_estimate(pop, alloc, rng);
  CHECK(est.point == doctest::Approx(2.0));
  CHECK(est.analytic_variance == 0.0);
}

TEST_CASE("stratified variance matches the enumeration oracle") {
  RngStream rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto pop = random_labeled_population(rng, 10, 3);
    const auto groups = group_by_label(pop.strata);
    std::vector<std::size_t> alloc;
    for (const auto& [label, idx] : groups)
      alloc.push_back(static_cast<std::size_t>(
          rng.uniform_int(1, static_cast<std::int64_t>(idx.size()))));
    const auto oracle = enumerate_stratified_mean(pop, alloc);
    RngStream draw_rng(200 + trial);
    const auto est = stratified_estimate(pop, alloc, draw_rng);
    CHECK(oracle.variance == doctest::Approx(est.analytic_variance).epsilon(1e-10));
    CHECK(oracle.mean == doctest::Approx(stats::mean(pop.values)).epsilon(1e-10));
  }
}

TEST_CASE("stratified errors") {
  RngStream rng(9);
  auto pop = paper_dataset();  // no labels
  CHECK_THROWS_AS((void)stratified_estimate(pop, std::vector<std::size_t>{1}, rng),
                  std::invalid_argument);
  auto labeled = paper_dataset_strata();
  CHECK_THROWS_AS((void)stratified_estimate(labeled, std::vector<std::size_t>{4, 1, 1}, rng),
                  std::invalid_argument);  // n_k > N_k
  CHECK_THROWS_AS((void)stratified_estimate(labeled, std::vector<std::size_t>{0, 1, 1}, rng),
                  std::invalid_argument);  // empty-stratum sample rejected
}

TEST_CASE("proportional allocation closed form equals the general formula") {
  // Equal-size strata make n_k = n N_k / N integral for any n = m K, so the
  // allocation is exactly proportional and non-degenerate for m < s.
  RngStream rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = static_cast<std::size_t>(rng.uniform_int(2, 5));
    const auto s = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto m = static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<std::int64_t>(s - 1)));
    std::vector<std::size_t> sizes(K, s);
    std::vector<std::size_t> alloc(K, m);
    std::vector<double> sds(K);
    for (auto& sd : sds) sd = rng.uniform(0.0, 5.0);
    const double general = stratified_variance(sizes, sds, alloc);
    const double closed = proportional_allocation_variance(sizes, sds, m * K);
    CHECK(general == doctest::Approx(closed).epsilon(1e-12));
    CHECK(general > 0.0);
  }

  // proportional_allocation itself reproduces the exactly proportional sizes.
  FinitePopulation pop;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 4; ++j) {
      pop.values.push_back(k + 0.5 * j);
      pop.strata.push_back(k);
    }
  CHECK(proportional_allocation(pop, 6) == std::vector<std::size_t>{2, 2, 2});
}

TEST_CASE("proportional allocation variance never exceeds the SRS stratum form") {
  RngStream rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    auto pop = random_labeled_population(rng, 60, 5);
    const auto groups = group_by_label(pop.strata);
    std::vector<std::size_t> sizes;
    std::vector<double> sds, means;
    for (const auto& [label, idx] : groups) {
      sizes.push_back(idx.size());
      std::vector<double> vals;
      for (auto i : idx) vals.push_back(pop.values[i]);
      sds.push_back(std::sqrt(stats::variance(vals, true)));
      means.push_back(stats::mean(vals));
    }
    const auto n = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(sizes.size()),
                        static_cast<std::int64_t>(pop.size())));
    CHECK(proportional_allocation_variance(sizes, sds, n) <=
          srs_variance_stratum_form(sizes, sds, means, n) + 1e-12);
  }
}

TEST_CASE("within/between decomposition recomposes the total variance") {
  RngStream rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto pop = random_labeled_population(rng, 40, 5);
    const auto groups = group_by_label(pop.strata);
    double within = 0.0, between = 0.0;
    const double mu = stats::mean(pop.values);
    for (const auto& [label, idx] : groups) {
      std::vector<double> vals;
      for (auto i : idx) vals.push_back(pop.values[i]);
      const double mu_k = stats::mean(vals);
      within += (static_cast<double>(vals.size()) - 1.0) * stats::variance(vals, true);
      between += static_cast<double>(vals.size()) * (mu_k - mu) * (mu_k - mu);
    }
    const double recomposed = (within + between) / (static_cast<double>(pop.size()) - 1.0);
    CHECK(recomposed == doctest::Approx(stats::variance(pop.values, true)).epsilon(1e-10));
  }
}

TEST_CASE("neyman allocation fixed cases") {
  CHECK(neyman_allocate(std::vector<std::size_t>{50, 50}, std::vector<double>{1, 3}, 8) ==
        std::vector<std::size_t>{2, 6});

  // Equal sds and sizes: within one of an even split.
  const auto equal = neyman_allocate(std::vector<std::size_t>{20, 20, 20},
                                     std::vector<double>{2, 2, 2}, 10);
  for (auto nk : equal) CHECK(std::abs(static_cast<double>(nk) - 10.0 / 3.0) <= 1.0);

  // A zero-sd stratum gets the minimum feasible single unit.
  CHECK(neyman_allocate(std::vector<std::size_t>{30, 30}, std::vector<double>{0, 2}, 9) ==
        std::vector<std::size_t>{1, 8});

  CHECK_THROWS_AS(
      (void)neyman_allocate(std::vector<std::size_t>{5, 5}, std::vector<double>{1, 1}, 1),
      std::invalid_argument);  // n < K
  CHECK_THROWS_AS(
      (void)neyman_allocate(std::vector<std::size_t>{2, 2}, std::vector<double>{1, 1}, 5),
      std::invalid_argument);  // n > capacity
}

TEST_CASE("neyman allocation matches brute force on random instances") {
  RngStream rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto K = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::vector<std::size_t> sizes(K);
    std::vector<double> sds(K);
    std::size_t cap = 0;
    for (std::size_t k = 0; k < K; ++k) {
      sizes[k] = static_cast<std::size_t>(rng.uniform_int(2, 10));
      sds[k] = rng.uniform(0.0, 5.0);
      cap += sizes[k];
    }
    const auto n = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(K), static_cast<std::int64_t>(std::min(cap, std::size_t{15}))));

    // Brute force over all feasible compositions.
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> alloc(K, 1);
    const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k,
                                                                  std::size_t left) {
      if (k + 1 == K) {
        if (left >= 1 && left <= sizes[k]) {
          alloc[k] = left;
          best = std::min(best, stratified_variance(sizes, sds, alloc));
        }
        return;
      }
      for (std::size_t v = 1; v <= std::min(sizes[k], left); ++v) {
        alloc[k] = v;
        rec(k + 1, left - v);
      }
    };
    rec(0, n);

    const auto got = neyman_allocate(sizes, sds, n);
    CHECK(stratified_variance(sizes, sds, got) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("cluster sampling fixed cases") {
  RngStream rng(14);
  // Identical clusters: zero variance.
  const auto same = paper_dataset_clusters();
  auto est = cluster_estimate(same, 2, rng);
  CHECK(est.point == doctest::Approx(2.0));
  CHECK(est.analytic_variance == doctest::Approx(0.0).epsilon(1e-15));

  // Perfect-strata arrangement used as clusters: variance 1/6.
  FinitePopulation opposite;
  opposite.values = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  opposite.clusters = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  RngStream rng2(15);
  est = cluster_estimate(opposite, 2, rng2);
  CHECK(est.analytic_variance == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  const auto oracle = enumerate_cluster_mean(opposite, 2);
  CHECK(oracle.design_count == 3);
  CHECK(oracle.variance == doctest::Approx(est.analytic_variance).epsilon(1e-10));
  CHECK(std::abs(oracle.mean - 2.0) < 1e-12);

  // Census of clusters.
  RngStream rng3(16);
  est = cluster_estimate(opposite, 3, rng3);
  CHECK(est.point == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(est.analytic_variance == 0.0);
}

TEST_CASE("cluster variance matches enumeration on random unequal clusters") {
  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    FinitePopulation pop;
    const auto K = static_cast<std::size_t>(rng.uniform_int(2, 5));
    for (std::size_t k = 0; k < K; ++k) {
      const auto nk = static_cast<std::size_t>(rng.uniform_int(1, 3));
      for (std::size_t j = 0; j < nk; ++j) {
        pop.values.push_back(rng.uniform(-4, 4));
        pop.clusters.push_back(static_cast<int>(k));
      }
    }
    const auto c = static_cast<std::size_t>(
        rng.uniform_int(1, static_cast<std::int64_t>(K)));
    const auto oracle = enumerate_cluster_mean(pop, c);
    RngStream draw_rng(300 + trial);
    const auto est = cluster_estimate(pop, c, draw_rng);
    CHECK(oracle.variance == doctest::Approx(est.analytic_variance).epsilon(1e-10));
    CHECK(oracle.mean == doctest::Approx(stats::mean(pop.values)).epsilon(1e-12));
  }
}

TEST_CASE("multistage: single SRS stage has the SRS law") {
  const auto pop = paper_dataset();
  RngStream rng(18);
  const std::vector<Stage> stages = {SrsStage{3}};
  std::vector<std::size_t> counts(9, 0);
  const std::size_t reps = 50'000;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto draw = multistage_draw(pop, stages, rng);
    CHECK(draw.indices.size() == 3);
    for (std::size_t i = 0; i < draw.indices.size(); ++i) {
      CHECK(draw.inclusion_probs[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
      ++counts[draw.indices[i]];
    }
  }
  for (auto c : counts)
    CHECK(static_cast<double>(c) / static_cast<double>(reps) ==
          doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("multistage: cluster then SRS composes inclusion probabilities") {
  const auto pop = paper_dataset_clusters();
  RngStream rng(19);
  const std::vector<Stage> stages = {ClusterStage{2}, SrsStage{1}};
  std::vector<std::size_t> counts(9, 0);
  double ht_sum = 0.0;
  const std::size_t reps = 100'000;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto draw = multistage_draw(pop, stages, rng);
    CHECK(draw.indices.size() == 2);  // one element from each of two clusters
    std::vector<double> values;
    for (std::size_t i = 0; i < draw.indices.size(); ++i) {
      CHECK(draw.inclusion_probs[i] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
      ++counts[draw.indices[i]];
      values.push_back(pop.values[draw.indices[i]]);
    }
    ht_sum += ht_estimate(values, draw.inclusion_probs, h_mean(pop.size()));
  }
  // Inclusion frequencies 2/9 within 3 binomial standard errors.
  const double se = std::sqrt(2.0 / 9.0 * 7.0 / 9.0 / static_cast<double>(reps));
  for (auto c : counts) {
    const double freq = static_cast<double>(c) / static_cast<double>(reps);
    CHECK(std::abs(freq - 2.0 / 9.0) < 3.0 * se + 1e-12);
  }
  // HT estimator of the mean is unbiased over the composite design.
  const double ht_mean_over_reps = ht_sum / static_cast<double>(reps);
  const double ht_se = 0.7 / std::sqrt(static_cast<double>(reps));  // loose bound on sd
  CHECK(std::abs(ht_mean_over_reps - 2.0) < 3.0 * ht_se);
}

TEST_CASE("multistage errors propagate") {
  const auto pop = paper_dataset_clusters();
  RngStream rng(20);
  CHECK_THROWS_AS(
      (void)multistage_draw(pop, std::vector<Stage>{ClusterStage{5}}, rng),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)multistage_draw(pop, std::vector<Stage>{ClusterStage{2}, SrsStage{4}}, rng),
      std::invalid_argument);
  CHECK_THROWS_AS((void)multistage_draw(pop, std::vector<Stage>{}, rng), std::invalid_argument);
}

TEST_CASE("snowball draw") {
  //    0 - 1 - 2 - 3  (path)
  const std::vector<std::vector<std::size_t>> path = {{1}, {0, 2}, {1, 3}, {2}};
  RngStream rng(21);

  const std::vector<std::size_t> seeds = {0};
  CHECK(snowball_draw(path, seeds, 0.0, 10, rng) == std::vector<std::size_t>{0});
  CHECK(snowball_draw(path, seeds, 1.0, 10, rng) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(snowball_draw(path, seeds, 1.0, 2, rng) == std::vector<std::size_t>{0, 1, 2});

  CHECK_THROWS_AS((void)snowball_draw(path, std::vector<std::size_t>{9}, 1.0, 2, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)snowball_draw(path, std::vector<std::size_t>{}, 1.0, 2, rng),
                  std::invalid_argument);

  // Deterministic rule hook: expand only to nodes below 3.
  const ExpansionRule below_three = [](std::size_t, std::size_t to, RngStream&) {
    return to < 3;
  };
  CHECK(snowball_draw(path, seeds, below_three, 10, rng) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("inclusion frequency calibration across designs") {
  // Every element's empirical inclusion frequency stays within 3 binomial
  // standard errors of the design probability.
  RngStream rng(22);
  const std::size_t reps = 100'000;

  auto pop = paper_dataset_strata();
  pop.clusters = {1, 1, 1, 2, 2, 2, 3, 3, 3};
  const std::vector<std::size_t> alloc = {1, 2, 1};

  std::vector<std::size_t> srs_counts(9, 0), strat_counts(9, 0), cluster_counts(9, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    for (auto i : srs_mean_estimate(pop, 4, rng).sample_indices) ++srs_counts[i];
    for (auto i : stratified_estimate(pop, alloc, rng).sample_indices) ++strat_counts[i];
    for (auto i : cluster_estimate(pop, 2, rng).sample_indices) ++cluster_counts[i];
  }
  const auto check_freq = [&](std::size_t count, double pi) {
    const double freq = static_cast<double>(count) / static_cast<double>(reps);
    const double se = std::sqrt(pi * (1.0 - pi) / static_cast<double>(reps));
    CHECK(std::abs(freq - pi) < 3.0 * se + 1e-12);
  };
  for (std::size_t i = 0; i < 9; ++i) {
    check_freq(srs_counts[i], 4.0 / 9.0);
    const double strat_pi[] = {1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0};
    check_freq(strat_counts[i], strat_pi[pop.strata[i] - 1]);
    check_freq(cluster_counts[i], 2.0 / 3.0);
  }
}

}  // TEST_SUITE
