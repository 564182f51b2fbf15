#include "sampling/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sampling/stats.hpp"

namespace sampling::survey {

namespace {

std::string size_list(std::span<const std::size_t> xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out + "]";
}

// Largest-remainder rounding of fractional targets onto integers subject to
// lower <= n_k <= upper_k and a fixed total.
std::vector<std::size_t> bounded_largest_remainder(const std::vector<double>& targets,
                                                   std::span<const std::size_t> upper,
                                                   std::size_t total) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> alloc(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto base = static_cast<std::size_t>(std::max(1.0, std::floor(targets[i])));
    alloc[i] = std::min(base, upper[i]);
  }
  auto assigned = std::accumulate(alloc.begin(), alloc.end(), std::size_t{0});
  while (assigned < total) {
    // Raise the stratum with the largest unmet remainder that still has room.
    std::size_t best = k;
    double best_rem = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (alloc[i] >= upper[i]) continue;
      const double rem = targets[i] - static_cast<double>(alloc[i]);
      if (rem > best_rem) {
        best_rem = rem;
        best = i;
      }
    }
    if (best == k) throw std::invalid_argument("allocation infeasible: total exceeds capacity");
    ++alloc[best];
    ++assigned;
  }
  while (assigned > total) {
    std::size_t best = k;
    double best_rem = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (alloc[i] <= 1) continue;
      const double rem = targets[i] - static_cast<double>(alloc[i]);
      if (rem < best_rem) {
        best_rem = rem;
        best = i;
      }
    }
    if (best == k) throw std::invalid_argument("allocation infeasible: total below minimum");
    --alloc[best];
    --assigned;
  }
  return alloc;
}

double unbiased_or_zero(std::span<const double> xs) {
  return xs.size() >= 2 ? stats::variance(xs, true) : 0.0;
}

}  // namespace

void FinitePopulation::validate() const {
  if (values.empty()) throw std::invalid_argument("population is empty");
  if (!strata.empty() && strata.size() != values.size())
    throw std::invalid_argument("partial labeling not allowed: stratum labels incomplete");
  if (!clusters.empty() && clusters.size() != values.size())
    throw std::invalid_argument("partial labeling not allowed: cluster labels incomplete");
}

std::map<int, std::vector<std::size_t>> group_by_label(std::span<const int> labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  return groups;
}

std::vector<std::size_t> srs_draw(std::size_t population_size, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("srs_draw: n must be positive");
  if (n > population_size) throw std::invalid_argument("srs_draw: sample exceeds population");
  std::vector<std::size_t> idx(population_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(population_size - 1)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

std::vector<std::size_t> bootstrap_draw(std::size_t population_size, std::size_t n,
                                        RngStream& rng) {
  if (population_size == 0) throw std::invalid_argument("bootstrap_draw: empty population");
  if (n == 0) throw std::invalid_argument("bootstrap_draw: n must be positive");
  std::vector<std::size_t> idx(n);
  for (auto& i : idx)
    i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(population_size - 1)));
  return idx;
}

double ht_estimate(std::span<const double> values, std::span<const double> inclusion_probs,
                   const std::function<double(double)>& h) {
  if (values.size() != inclusion_probs.size())
    throw std::invalid_argument("ht_estimate: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double pi = inclusion_probs[i];
    if (!(pi > 0.0 && pi <= 1.0)) throw std::invalid_argument("invalid inclusion probability");
    sum += h(values[i]) / pi;
  }
  return sum;
}

std::function<double(double)> h_total() {
  return [](double x) { return x; };
}

std::function<double(double)> h_mean(std::size_t population_size) {
  const double n = static_cast<double>(population_size);
  return [n](double x) { return x / n; };
}

std::function<double(double)> h_proportion(std::function<bool(double)> predicate,
                                           std::size_t population_size) {
  const double n = static_cast<double>(population_size);
  return [n, pred = std::move(predicate)](double x) { return pred(x) ? 1.0 / n : 0.0; };
}

SurveyEstimate srs_mean_estimate(const FinitePopulation& pop, std::size_t n, RngStream& rng) {
  pop.validate();
  const std::size_t N = pop.size();
  auto indices = srs_draw(N, n, rng);
  std::sort(indices.begin(), indices.end());

  double sum = 0.0;
  for (auto i : indices) sum += pop.values[i];

  SurveyEstimate est;
  est.point = sum / static_cast<double>(n);
  est.analytic_variance =
      n == N ? 0.0
             : (1.0 - static_cast<double>(n) / static_cast<double>(N)) *
                   stats::variance(pop.values, true) / static_cast<double>(n);
  est.design = "srs(n=" + std::to_string(n) + ")";
  est.sample_indices = std::move(indices);
  return est;
}

std::vector<std::size_t> proportional_allocation(const FinitePopulation& pop, std::size_t n) {
  pop.validate();
  if (!pop.has_strata()) throw std::invalid_argument("proportional_allocation: no stratum labels");
  const auto groups = group_by_label(pop.strata);
  const double N = static_cast<double>(pop.size());
  std::vector<double> targets;
  std::vector<std::size_t> upper;
  for (const auto& [label, idx] : groups) {
    targets.push_back(static_cast<double>(n) * static_cast<double>(idx.size()) / N);
    upper.push_back(idx.size());
  }
  if (n < groups.size() || n > pop.size())
    throw std::invalid_argument("proportional_allocation: infeasible n");
  return bounded_largest_remainder(targets, upper, n);
}

SurveyEstimate stratified_estimate(const FinitePopulation& pop,
                                   std::span<const std::size_t> allocation, RngStream& rng) {
  pop.validate();
  if (!pop.has_strata()) throw std::invalid_argument("stratified_estimate: no stratum labels");
  const auto groups = group_by_label(pop.strata);
  if (allocation.size() != groups.size())
    throw std::invalid_argument("stratified_estimate: allocation size != stratum count");

  const double N = static_cast<double>(pop.size());
  SurveyEstimate est;
  est.design = "stratified(n_k=" + size_list(allocation) + ")";

  std::size_t k = 0;
  for (const auto& [label, idx] : groups) {
    const std::size_t nk = allocation[k];
    const std::size_t Nk = idx.size();
    if (nk == 0 || nk > Nk)
      throw std::invalid_argument("stratified_estimate: need 1 <= n_k <= N_k in every stratum");

    std::vector<double> stratum_values(Nk);
    for (std::size_t i = 0; i < Nk; ++i) stratum_values[i] = pop.values[idx[i]];

    auto local = srs_draw(Nk, nk, rng);
    double sum = 0.0;
    for (auto li : local) {
      sum += stratum_values[li];
      est.sample_indices.push_back(idx[li]);
    }
    const double weight = static_cast<double>(Nk) / N;
    est.point += weight * sum / static_cast<double>(nk);
    est.analytic_variance += weight * weight *
                             (1.0 - static_cast<double>(nk) / static_cast<double>(Nk)) *
                             unbiased_or_zero(stratum_values) / static_cast<double>(nk);
    ++k;
  }
  std::sort(est.sample_indices.begin(), est.sample_indices.end());
  return est;
}

double stratified_variance(std::span<const std::size_t> stratum_sizes,
                           std::span<const double> stratum_sds,
                           std::span<const std::size_t> allocation) {
  if (stratum_sizes.size() != stratum_sds.size() || stratum_sizes.size() != allocation.size())
    throw std::invalid_argument("stratified_variance: length mismatch");
  double N = 0.0;
  for (auto s : stratum_sizes) N += static_cast<double>(s);
  double v = 0.0;
  for (std::size_t k = 0; k < stratum_sizes.size(); ++k) {
    const double Nk = static_cast<double>(stratum_sizes[k]);
    const double nk = static_cast<double>(allocation[k]);
    const double w = Nk / N;
    v += w * w * (1.0 - nk / Nk) * stratum_sds[k] * stratum_sds[k] / nk;
  }
  return v;
}

double proportional_allocation_variance(std::span<const std::size_t> stratum_sizes,
                                        std::span<const double> stratum_sds, std::size_t n) {
  if (stratum_sizes.size() != stratum_sds.size())
    throw std::invalid_argument("proportional_allocation_variance: length mismatch");
  double N = 0.0;
  for (auto s : stratum_sizes) N += static_cast<double>(s);
  double within = 0.0;
  for (std::size_t k = 0; k < stratum_sizes.size(); ++k)
    within += static_cast<double>(stratum_sizes[k]) / N * stratum_sds[k] * stratum_sds[k];
  const double nd = static_cast<double>(n);
  return (1.0 / nd) * (1.0 - nd / N) * within;
}

double srs_variance_stratum_form(std::span<const std::size_t> stratum_sizes,
                                 std::span<const double> stratum_sds,
                                 std::span<const double> stratum_means, std::size_t n) {
  if (stratum_sizes.size() != stratum_sds.size() || stratum_sizes.size() != stratum_means.size())
    throw std::invalid_argument("srs_variance_stratum_form: length mismatch");
  double N = 0.0;
  double mu = 0.0;
  for (std::size_t k = 0; k < stratum_sizes.size(); ++k) {
    N += static_cast<double>(stratum_sizes[k]);
    mu += static_cast<double>(stratum_sizes[k]) * stratum_means[k];
  }
  mu /= N;
  double within = 0.0;
  double between = 0.0;
  for (std::size_t k = 0; k < stratum_sizes.size(); ++k) {
    const double Nk = static_cast<double>(stratum_sizes[k]);
    within += Nk / N * stratum_sds[k] * stratum_sds[k];
    between += Nk / (N - 1.0) * (stratum_means[k] - mu) * (stratum_means[k] - mu);
  }
  const double nd = static_cast<double>(n);
  return (1.0 / nd) * (1.0 - nd / N) * (within + between);
}

std::vector<std::size_t> neyman_allocate(std::span<const std::size_t> stratum_sizes,
                                         std::span<const double> stratum_sds, std::size_t n) {
  const std::size_t K = stratum_sizes.size();
  if (K == 0 || stratum_sds.size() != K)
    throw std::invalid_argument("neyman_allocate: bad stratum inputs");
  std::size_t capacity = 0;
  double weight_sum = 0.0;
  std::vector<double> weights(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (stratum_sizes[k] == 0) throw std::invalid_argument("neyman_allocate: empty stratum");
    if (stratum_sds[k] < 0.0) throw std::invalid_argument("neyman_allocate: negative sd");
    capacity += stratum_sizes[k];
    weights[k] = static_cast<double>(stratum_sizes[k]) * stratum_sds[k];
    weight_sum += weights[k];
  }
  if (n < K || n > capacity) throw std::invalid_argument("neyman_allocate: infeasible n");

  std::vector<double> targets(K);
  for (std::size_t k = 0; k < K; ++k) {
    targets[k] = weight_sum > 0.0
                     ? static_cast<double>(n) * weights[k] / weight_sum
                     : static_cast<double>(n) / static_cast<double>(K);
  }
  auto alloc = bounded_largest_remainder(targets, stratum_sizes, n);

  // Single-unit transfer repair. The objective sum c_k (1/n_k - 1/N_k) is
  // separable convex, so a local optimum under unit transfers is global.
  const auto objective_term = [&](std::size_t k, std::size_t nk) {
    const double c = weights[k] * weights[k];
    return c * (1.0 / static_cast<double>(nk) - 1.0 / static_cast<double>(stratum_sizes[k]));
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t from = 0; from < K; ++from) {
      if (alloc[from] <= 1) continue;
      for (std::size_t to = 0; to < K; ++to) {
        if (to == from || alloc[to] >= stratum_sizes[to]) continue;
        const double delta = objective_term(from, alloc[from] - 1) -
                             objective_term(from, alloc[from]) +
                             objective_term(to, alloc[to] + 1) - objective_term(to, alloc[to]);
        if (delta < -1e-15) {
          --alloc[from];
          ++alloc[to];
          improved = true;
        }
      }
    }
  }
  return alloc;
}

SurveyEstimate cluster_estimate(const FinitePopulation& pop, std::size_t c, RngStream& rng) {
  pop.validate();
  if (!pop.has_clusters()) throw std::invalid_argument("cluster_estimate: no cluster labels");
  const auto groups = group_by_label(pop.clusters);
  const std::size_t K = groups.size();
  if (c == 0 || c > K) throw std::invalid_argument("cluster_estimate: need 1 <= c <= K");

  std::vector<double> totals;
  std::vector<const std::vector<std::size_t>*> members;
  totals.reserve(K);
  for (const auto& [label, idx] : groups) {
    double tau = 0.0;
    for (auto i : idx) tau += pop.values[i];
    totals.push_back(tau);
    members.push_back(&idx);
  }

  const auto chosen = srs_draw(K, c, rng);
  SurveyEstimate est;
  double tau_sum = 0.0;
  for (auto k : chosen) {
    tau_sum += totals[k];
    est.sample_indices.insert(est.sample_indices.end(), members[k]->begin(), members[k]->end());
  }
  std::sort(est.sample_indices.begin(), est.sample_indices.end());

  const double N = static_cast<double>(pop.size());
  const double Kd = static_cast<double>(K);
  const double cd = static_cast<double>(c);
  est.point = Kd / N * tau_sum / cd;
  est.analytic_variance =
      c == K ? 0.0 : Kd * Kd / (N * N) * (1.0 - cd / Kd) * unbiased_or_zero(totals) / cd;
  est.design = "cluster(c=" + std::to_string(c) + ")";
  return est;
}

MultistageDraw multistage_draw(const FinitePopulation& pop, std::span<const Stage> stages,
                               RngStream& rng) {
  pop.validate();
  if (stages.empty()) throw std::invalid_argument("multistage_draw: no stages");

  // Current pool as groups of original indices with per-element composite
  // probabilities. Before any cluster stage the pool is a single group.
  std::vector<std::vector<std::size_t>> groups(1);
  groups[0].resize(pop.size());
  std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  std::vector<double> probs(pop.size(), 1.0);

  for (const auto& stage : stages) {
    if (std::holds_alternative<ClusterStage>(stage)) {
      const auto c = std::get<ClusterStage>(stage).c;
      if (!pop.has_clusters()) throw std::invalid_argument("multistage_draw: no cluster labels");
      // Partition the surviving elements by cluster label.
      std::map<int, std::vector<std::size_t>> by_cluster;
      for (const auto& g : groups)
        for (auto i : g) by_cluster[pop.clusters[i]].push_back(i);
      const std::size_t K = by_cluster.size();
      if (c == 0 || c > K) throw std::invalid_argument("multistage_draw: need 1 <= c <= K");

      std::vector<std::vector<std::size_t>> clusters;
      clusters.reserve(K);
      for (auto& [label, idx] : by_cluster) clusters.push_back(std::move(idx));
      const auto chosen = srs_draw(K, c, rng);
      const double stage_pi = static_cast<double>(c) / static_cast<double>(K);
      groups.clear();
      for (auto k : chosen) {
        for (auto i : clusters[k]) probs[i] *= stage_pi;
        groups.push_back(std::move(clusters[k]));
      }
    } else {
      const auto n = std::get<SrsStage>(stage).n;
      std::vector<std::vector<std::size_t>> next;
      next.reserve(groups.size());
      for (const auto& g : groups) {
        if (n == 0 || n > g.size())
          throw std::invalid_argument("multistage_draw: SRS stage infeasible for group of size " +
                                      std::to_string(g.size()));
        const double stage_pi = static_cast<double>(n) / static_cast<double>(g.size());
        auto local = srs_draw(g.size(), n, rng);
        std::vector<std::size_t> kept;
        kept.reserve(n);
        for (auto li : local) {
          kept.push_back(g[li]);
          probs[g[li]] *= stage_pi;
        }
        next.push_back(std::move(kept));
      }
      groups = std::move(next);
    }
  }

  MultistageDraw out;
  for (const auto& g : groups) out.indices.insert(out.indices.end(), g.begin(), g.end());
  std::sort(out.indices.begin(), out.indices.end());
  out.inclusion_probs.reserve(out.indices.size());
  for (auto i : out.indices) out.inclusion_probs.push_back(probs[i]);
  return out;
}

std::vector<std::size_t> snowball_draw(const std::vector<std::vector<std::size_t>>& adjacency,
                                       std::span<const std::size_t> seeds,
                                       double expansion_probability, std::size_t max_rounds,
                                       RngStream& rng) {
  if (!(expansion_probability >= 0.0 && expansion_probability <= 1.0))
    throw std::invalid_argument("snowball_draw: expansion_probability outside [0, 1]");
  const ExpansionRule rule = [expansion_probability](std::size_t, std::size_t, RngStream& r) {
    return r.uniform() < expansion_probability;
  };
  return snowball_draw(adjacency, seeds, rule, max_rounds, rng);
}

std::vector<std::size_t> snowball_draw(const std::vector<std::vector<std::size_t>>& adjacency,
                                       std::span<const std::size_t> seeds,
                                       const ExpansionRule& rule, std::size_t max_rounds,
                                       RngStream& rng) {
  if (seeds.empty()) throw std::invalid_argument("snowball_draw: no seeds");
  const std::size_t n = adjacency.size();
  std::vector<bool> included(n, false);
  std::vector<std::size_t> frontier;
  for (auto s : seeds) {
    if (s >= n) throw std::invalid_argument("snowball_draw: invalid seed index");
    if (!included[s]) {
      included[s] = true;
      frontier.push_back(s);
    }
  }
  std::sort(frontier.begin(), frontier.end());

  for (std::size_t round = 0; round < max_rounds && !frontier.empty(); ++round) {
    std::vector<std::size_t> next;
    for (auto u : frontier) {
      for (auto v : adjacency[u]) {
        if (v >= n) throw std::invalid_argument("snowball_draw: adjacency index out of range");
        if (!included[v] && rule(u, v, rng)) {
          included[v] = true;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (included[i]) out.push_back(i);
  return out;
}

}  // namespace sampling::survey
