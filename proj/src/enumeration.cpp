#include "sampling/enumeration.hpp"

#include <numeric>
#include <stdexcept>

namespace sampling::survey {

namespace {

DesignMoments moments_of(const std::vector<double>& estimates) {
  DesignMoments m;
  m.design_count = estimates.size();
  double sum = 0.0;
  for (double e : estimates) sum += e;
  m.mean = sum / static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double e : estimates) ss += (e - m.mean) * (e - m.mean);
  // The design space is a uniform distribution over designs, so the exact
  // estimator variance uses the full count as divisor.
  m.variance = ss / static_cast<double>(estimates.size());
  return m;
}

}  // namespace

void for_each_combination(std::size_t n_total, std::size_t k,
                          const std::function<void(std::span<const std::size_t>)>& visit) {
  if (k == 0 || k > n_total) throw std::invalid_argument("for_each_combination: bad k");
  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  for (;;) {
    visit(comb);
    // Advance to the next lexicographic combination.
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (comb[i] != i + n_total - k) break;
      if (i == 0) return;
    }
    if (comb[i] == i + n_total - k) return;
    ++comb[i];
    for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
}

DesignMoments enumerate_srs_mean(const FinitePopulation& pop, std::size_t n) {
  pop.validate();
  std::vector<double> estimates;
  for_each_combination(pop.size(), n, [&](std::span<const std::size_t> subset) {
    double sum = 0.0;
    for (auto i : subset) sum += pop.values[i];
    estimates.push_back(sum / static_cast<double>(n));
  });
  return moments_of(estimates);
}

DesignMoments enumerate_cluster_mean(const FinitePopulation& pop, std::size_t c) {
  pop.validate();
  if (!pop.has_clusters()) throw std::invalid_argument("enumerate_cluster_mean: no labels");
  const auto groups = group_by_label(pop.clusters);
  std::vector<double> totals;
  for (const auto& [label, idx] : groups) {
    double tau = 0.0;
    for (auto i : idx) tau += pop.values[i];
    totals.push_back(tau);
  }
  const double scale =
      static_cast<double>(totals.size()) / static_cast<double>(pop.size()) / static_cast<double>(c);
  std::vector<double> estimates;
  for_each_combination(totals.size(), c, [&](std::span<const std::size_t> subset) {
    double sum = 0.0;
    for (auto k : subset) sum += totals[k];
    estimates.push_back(scale * sum);
  });
  return moments_of(estimates);
}

DesignMoments enumerate_stratified_mean(const FinitePopulation& pop,
                                        std::span<const std::size_t> allocation) {
  pop.validate();
  if (!pop.has_strata()) throw std::invalid_argument("enumerate_stratified_mean: no labels");
  const auto groups = group_by_label(pop.strata);
  if (allocation.size() != groups.size())
    throw std::invalid_argument("enumerate_stratified_mean: allocation size mismatch");

  // Per-stratum list of possible weighted stratum means N_k/N * mean(subset).
  std::vector<std::vector<double>> options;
  const double N = static_cast<double>(pop.size());
  std::size_t k = 0;
  for (const auto& [label, idx] : groups) {
    const double weight = static_cast<double>(idx.size()) / N;
    std::vector<double> opts;
    for_each_combination(idx.size(), allocation[k], [&](std::span<const std::size_t> subset) {
      double sum = 0.0;
      for (auto li : subset) sum += pop.values[idx[li]];
      opts.push_back(weight * sum / static_cast<double>(allocation[k]));
    });
    options.push_back(std::move(opts));
    ++k;
  }

  // Cartesian product over strata.
  std::vector<double> estimates;
  std::vector<std::size_t> pick(options.size(), 0);
  for (;;) {
    double est = 0.0;
    for (std::size_t s = 0; s < options.size(); ++s) est += options[s][pick[s]];
    estimates.push_back(est);
    std::size_t s = 0;
    while (s < options.size()) {
      if (++pick[s] < options[s].size()) break;
      pick[s] = 0;
      ++s;
    }
    if (s == options.size()) break;
  }
  return moments_of(estimates);
}

}  // namespace sampling::survey
