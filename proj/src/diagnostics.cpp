#include "sampling/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sampling/efficient.hpp"
#include "sampling/stats.hpp"

namespace sampling::diag {

namespace {

// Runs fn(i) for i in [0, count) across a small thread pool. Each call only
// writes to its own output slot, so aggregation is deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers, count] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LinearFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

void fit_scaling(ScalingExperiment& exp) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < exp.L_values.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(exp.L_values[i]) / exp.delta));
    ly.push_back(std::log(exp.mean_mixing_time[i]));
  }
  const auto fit = least_squares(lx, ly);
  exp.slope = fit.slope;
  exp.intercept = fit.intercept;
  exp.r_squared = fit.r_squared;
}

void summarize_times(ScalingExperiment& exp, const std::vector<std::vector<double>>& times,
                     const std::vector<std::size_t>& censored) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i].empty())
      throw std::runtime_error("scaling experiment: every chain censored at L=" +
                               std::to_string(exp.L_values[i]));
    exp.mean_mixing_time.push_back(stats::mean(times[i]));
    exp.sd_mixing_time.push_back(times[i].size() >= 2 ? std::sqrt(stats::variance(times[i], true))
                                                      : 0.0);
    exp.censored.push_back(censored[i]);
  }
}

}  // namespace

std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n <= max_lag) throw std::invalid_argument("autocorrelations: series shorter than max_lag");
  const double m = stats::mean(x);
  double denom = 0.0;
  for (double v : x) denom += (v - m) * (v - m);
  denom /= static_cast<double>(n);
  if (denom == 0.0) throw std::invalid_argument("degenerate trace");

  std::vector<double> rho(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - m) * (x[t + k] - m);
    rho[k] = s / static_cast<double>(n - k) / denom;
  }
  return rho;
}

double effective_sample_size(std::span<const double> x, std::size_t max_lag) {
  const auto rho = autocorrelations(x, max_lag);
  // Geyer initial positive sequence: sum paired autocorrelations while the
  // pair sums stay positive.
  double acc = 0.0;
  for (std::size_t k = 1; k + 1 <= max_lag; k += 2) {
    const double pair = rho[k] + rho[k + 1];
    if (pair <= 0.0) break;
    acc += pair;
  }
  const double n = static_cast<double>(x.size());
  return n / std::max(1.0, 1.0 + 2.0 * acc);
}

MixingReport mixing_report(const mcmc::Trace& trace, std::size_t max_lag, std::size_t coordinate) {
  const auto x = trace.coordinate(coordinate);
  MixingReport report;
  report.acceptance_rate = trace.acceptance_rate();
  report.lag_autocorrelations = autocorrelations(x, max_lag);
  report.effective_sample_size = effective_sample_size(x, max_lag);
  report.mixing_time_estimate = static_cast<double>(max_lag);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    if (report.lag_autocorrelations[k] < 0.05) {
      report.mixing_time_estimate = static_cast<double>(k);
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Scaling experiments
// ---------------------------------------------------------------------------

double predicted_random_walk_time(std::size_t L, double delta) {
  const double r = static_cast<double>(L) / delta;
  return r * r;
}

ScalingExperiment random_walk_scaling(std::span<const std::size_t> L_values, double delta,
                                      std::size_t chains_per_L, RngStream& rng) {
  if (L_values.size() < 3)
    throw std::invalid_argument("random_walk_scaling: need at least 3 L values");
  if (delta <= 0.0) throw std::invalid_argument("random_walk_scaling: delta must be positive");
  if (chains_per_L == 0) throw std::invalid_argument("random_walk_scaling: no chains");
  for (std::size_t i = 0; i + 1 < L_values.size(); ++i)
    if (L_values[i] >= L_values[i + 1])
      throw std::invalid_argument("random_walk_scaling: L values must be strictly increasing");
  for (auto L : L_values)
    if (static_cast<double>(L) < 10.0 * delta)
      throw std::invalid_argument("random_walk_scaling: need L >= 10 delta");

  ScalingExperiment exp;
  exp.L_values.assign(L_values.begin(), L_values.end());
  exp.delta = delta;

  std::vector<std::vector<double>> times(L_values.size());
  std::vector<std::size_t> censored(L_values.size(), 0);
  for (std::size_t li = 0; li < L_values.size(); ++li) {
    const double L = static_cast<double>(L_values[li]);
    const auto cap = static_cast<std::size_t>(100.0 * predicted_random_walk_time(L_values[li], delta));
    std::vector<double> chain_time(chains_per_L, -1.0);

    parallel_for(chains_per_L, [&, li](std::size_t c) {
      RngStream stream = rng.split(li * 1000003 + c);
      double x = stream.uniform(1.0, L);
      bool low = x <= 1.0 + delta;
      bool high = x >= L - delta;
      for (std::size_t it = 1; it <= cap; ++it) {
        const double step = stream.uniform() < 0.5 ? -delta : delta;
        const double y = x + step;
        if (y >= 1.0 && y <= L) x = y;  // uniform target: reject only off-range moves
        low = low || x <= 1.0 + delta;
        high = high || x >= L - delta;
        if (low && high) {
          chain_time[c] = static_cast<double>(it);
          return;
        }
      }
    });
    for (double t : chain_time) {
      if (t < 0.0)
        ++censored[li];
      else
        times[li].push_back(t);
    }
  }
  summarize_times(exp, times, censored);
  fit_scaling(exp);
  return exp;
}

ScalingExperiment hmc_scaling(std::span<const std::size_t> L_values, double eta,
                              std::size_t chains_per_L, RngStream& rng) {
  if (eta <= 0.0) throw std::invalid_argument("hmc_scaling: eta must be positive");
  if (chains_per_L == 0) throw std::invalid_argument("hmc_scaling: no chains");
  for (std::size_t i = 0; i + 1 < L_values.size(); ++i)
    if (L_values[i] >= L_values[i + 1])
      throw std::invalid_argument("hmc_scaling: L values must be strictly increasing");
  constexpr double kWallWidth = 1.0;

  std::vector<std::size_t> usable;
  for (auto L : L_values)
    if (static_cast<double>(L) >= 10.0 * kWallWidth) usable.push_back(L);
  if (usable.size() < 3)
    throw std::invalid_argument("hmc_scaling: fewer than 3 valid L values for the slope fit");

  ScalingExperiment exp;
  exp.L_values = usable;
  exp.delta = eta;

  std::vector<std::vector<double>> times(usable.size());
  std::vector<std::size_t> censored(usable.size(), 0);
  for (std::size_t li = 0; li < usable.size(); ++li) {
    const double L = static_cast<double>(usable[li]);
    // Flat energy on [0, L], quadratic outside.
    const auto grad = [L](double x) {
      if (x < 0.0) return x / (kWallWidth * kWallWidth);
      if (x > L) return (x - L) / (kWallWidth * kWallWidth);
      return 0.0;
    };
    const auto trajectory_steps = static_cast<std::size_t>(std::ceil(L / (2.0 * eta)));
    const auto cap = static_cast<std::size_t>(100.0 * (L / eta));
    std::vector<double> chain_time(chains_per_L, -1.0);

    parallel_for(chains_per_L, [&, li](std::size_t c) {
      RngStream stream = rng.split(li * 2000003 + c);
      double x = stream.uniform(0.0, L);
      bool low = x <= 2.0 * kWallWidth;
      bool high = x >= L - 2.0 * kWallWidth;
      std::size_t steps = 0;
      while (steps < cap) {
        const double p0 = stream.standard_normal();
        double p = p0;
        double pos = x;
        double g = grad(pos);
        const double h0 = 0.5 * (pos < 0.0 ? pos * pos : (pos > L ? (pos - L) * (pos - L) : 0.0)) +
                          0.5 * p * p;
        bool done = false;
        for (std::size_t t = 0; t < trajectory_steps && steps < cap; ++t) {
          p -= 0.5 * eta * g;
          pos += eta * p;
          g = grad(pos);
          p -= 0.5 * eta * g;
          ++steps;
          low = low || pos <= 2.0 * kWallWidth;
          high = high || pos >= L - 2.0 * kWallWidth;
          if (low && high) {
            chain_time[c] = static_cast<double>(steps);
            done = true;
            break;
          }
        }
        if (done) return;
        const double e1 = 0.5 * (pos < 0.0 ? pos * pos : (pos > L ? (pos - L) * (pos - L) : 0.0));
        const double dh = e1 + 0.5 * p * p - h0;
        if (dh < 0.0 || stream.uniform() < std::exp(-dh)) x = pos;
      }
    });
    for (double t : chain_time) {
      if (t < 0.0)
        ++censored[li];
      else
        times[li].push_back(t);
    }
  }
  summarize_times(exp, times, censored);
  fit_scaling(exp);
  return exp;
}

std::vector<double> acceptance_tradeoff_probe(double ell, std::span<const double> delta_values,
                                              std::size_t r, RngStream& rng,
                                              std::size_t iterations) {
  if (ell <= 0.0) throw std::invalid_argument("acceptance_tradeoff_probe: ell must be positive");
  if (r == 0) throw std::invalid_argument("acceptance_tradeoff_probe: r must be positive");
  if (delta_values.empty() || iterations == 0)
    throw std::invalid_argument("acceptance_tradeoff_probe: nothing to do");

  std::vector<double> rates(delta_values.size());
  for (std::size_t di = 0; di < delta_values.size(); ++di) {
    const double delta = delta_values[di];
    if (delta <= 0.0) throw std::invalid_argument("acceptance_tradeoff_probe: bad delta");
    RngStream stream = rng.split(di);
    std::vector<double> x(r, 0.0);
    double log_px = 0.0;
    const auto log_p = [ell](std::span<const double> v) {
      double s = 0.0;
      for (double xi : v) s += xi * xi;
      return -0.5 * s / (ell * ell);
    };
    std::size_t accepted = 0;
    std::vector<double> y(r);
    for (std::size_t it = 0; it < iterations; ++it) {
      for (std::size_t d = 0; d < r; ++d) y[d] = x[d] + delta * stream.standard_normal();
      const double log_py = log_p(y);
      if (std::log(stream.uniform()) < log_py - log_px) {
        x = y;
        log_px = log_py;
        ++accepted;
      }
    }
    rates[di] = static_cast<double>(accepted) / static_cast<double>(iterations);
  }
  return rates;
}

// ---------------------------------------------------------------------------
// Distribution fit
// ---------------------------------------------------------------------------

FitReport distribution_fit(std::span<const double> samples,
                           const std::function<double(double)>& reference_cdf) {
  if (samples.size() < 100) throw std::invalid_argument("distribution_fit: insufficient samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  constexpr int kProbes = 1000;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kProbes; ++i) {
    const double x = sorted.front() + (sorted.back() - sorted.front()) *
                                          static_cast<double>(i) / (kProbes - 1);
    const double f = reference_cdf(x);
    if (f < prev - 1e-12)
      throw std::invalid_argument("distribution_fit: reference CDF not monotone");
    prev = std::max(prev, f);
  }

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  FitReport report;
  report.ks_statistic = d;
  report.passed = d < 1.63 / std::sqrt(n);
  return report;
}

}  // namespace sampling::diag
