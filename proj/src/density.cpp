#include "sampling/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sampling::mc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> parse_params(const std::string& spec, std::string& name) {
  const auto colon = spec.find(':');
  name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon == std::string::npos) return params;
  std::stringstream ss(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      params.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad density parameter '" + tok + "' in '" + spec + "'");
    }
  }
  return params;
}

}  // namespace

bool TargetDensity::in_support(std::span<const double> x) const {
  if (x.size() != dimension) return false;
  for (std::size_t d = 0; d < dimension; ++d) {
    const Interval iv = d < support.size() ? support[d] : Interval{};
    if (x[d] < iv.lo || x[d] > iv.hi || !std::isfinite(x[d])) return false;
  }
  return true;
}

double TargetDensity::log_unnormalized(std::span<const double> x) const {
  if (!in_support(x)) return kNegInf;
  return log_shape(x);
}

double TargetDensity::log_density(std::span<const double> x) const {
  const double v = log_unnormalized(x);
  return v == kNegInf ? kNegInf : v + log_scale;
}

std::vector<double> TargetDensity::gradient(std::span<const double> x) const {
  if (!has_gradient()) throw std::logic_error("target has no energy gradient");
  return energy_gradient(x);
}

QuantileFunction make_quantile(std::function<double(double)> inverse_cdf) {
  constexpr int kProbes = 1000;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kProbes; ++i) {
    const double u = static_cast<double>(i) / (kProbes + 1.0);
    const double q = inverse_cdf(u);
    if (!std::isfinite(q)) throw std::invalid_argument("quantile not finite on probe grid");
    if (q < prev) throw std::invalid_argument("quantile not monotone on probe grid");
    prev = q;
  }
  return QuantileFunction{std::move(inverse_cdf)};
}

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

TargetDensity standard_normal_target(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("dimension must be positive");
  TargetDensity t;
  t.dimension = dimension;
  t.support.assign(dimension, Interval{});
  t.log_shape = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return -0.5 * s;
  };
  t.energy_gradient = [](std::span<const double> x) {
    return std::vector<double>(x.begin(), x.end());
  };
  return t;
}

TargetDensity bivariate_normal_target(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho outside (-1, 1)");
  TargetDensity t;
  t.dimension = 2;
  t.support.assign(2, Interval{});
  const double k = 1.0 / (1.0 - rho * rho);
  t.log_shape = [rho, k](std::span<const double> x) {
    return -0.5 * k * (x[0] * x[0] - 2.0 * rho * x[0] * x[1] + x[1] * x[1]);
  };
  t.energy_gradient = [rho, k](std::span<const double> x) {
    return std::vector<double>{k * (x[0] - rho * x[1]), k * (x[1] - rho * x[0])};
  };
  return t;
}

TargetDensity triangular_target() {
  TargetDensity t;
  t.dimension = 1;
  t.support = {Interval{0.0, 1.0}};
  t.log_shape = [](std::span<const double> x) {
    return x[0] > 0.0 ? std::log(2.0 * x[0]) : kNegInf;
  };
  t.energy_gradient = [](std::span<const double> x) {
    return std::vector<double>{-1.0 / x[0]};
  };
  return t;
}

TargetDensity normal_mixture_target(double weight1, double mean1, double sd1, double mean2,
                                    double sd2) {
  if (!(weight1 >= 0.0 && weight1 <= 1.0)) throw std::invalid_argument("weight outside [0, 1]");
  if (sd1 <= 0.0 || sd2 <= 0.0) throw std::invalid_argument("sd must be positive");
  TargetDensity t;
  t.dimension = 1;
  t.support = {Interval{}};
  t.log_shape = [=](std::span<const double> x) {
    const double z1 = (x[0] - mean1) / sd1;
    const double z2 = (x[0] - mean2) / sd2;
    const double a = std::log(weight1 / sd1) - 0.5 * z1 * z1;
    const double b = std::log((1.0 - weight1) / sd2) - 0.5 * z2 * z2;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };
  return t;
}

TargetDensity discrete_table_target(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("empty weight table");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("table weights must be positive");
  TargetDensity t;
  t.dimension = 1;
  t.support = {Interval{0.0, static_cast<double>(weights.size() - 1)}};
  t.log_shape = [w = std::move(weights)](std::span<const double> x) {
    const auto i = static_cast<std::size_t>(std::llround(x[0]));
    return i < w.size() ? std::log(w[i]) : kNegInf;
  };
  return t;
}

std::vector<std::string> target_names() {
  return {"normal", "bivariate", "triangular", "mixture", "table"};
}

TargetDensity make_target(const std::string& spec) {
  std::string name;
  const auto params = parse_params(spec, name);
  if (name == "normal") {
    const std::size_t dim = params.empty() ? 1 : static_cast<std::size_t>(params[0]);
    return standard_normal_target(dim);
  }
  if (name == "bivariate") {
    if (params.size() != 1) throw std::invalid_argument("bivariate needs rho, e.g. bivariate:0.9");
    return bivariate_normal_target(params[0]);
  }
  if (name == "triangular") return triangular_target();
  if (name == "mixture") {
    if (params.empty()) return normal_mixture_target(0.5, -3.0, 1.0, 3.0, 1.0);
    if (params.size() != 5)
      throw std::invalid_argument("mixture needs w,m1,s1,m2,s2 or no parameters");
    return normal_mixture_target(params[0], params[1], params[2], params[3], params[4]);
  }
  if (name == "table") {
    if (params.empty()) throw std::invalid_argument("table needs weights, e.g. table:1,3");
    return discrete_table_target(params);
  }
  std::string names;
  for (const auto& n : target_names()) names += (names.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown density '" + name + "'; valid names: " + names);
}

// ---------------------------------------------------------------------------
// Proposals and quantiles
// ---------------------------------------------------------------------------

ProposalSampler gaussian_proposal(std::vector<double> mean, std::vector<double> sd) {
  if (mean.size() != sd.size() || mean.empty())
    throw std::invalid_argument("gaussian_proposal: bad parameters");
  for (double s : sd)
    if (s <= 0.0) throw std::invalid_argument("gaussian_proposal: sd must be positive");
  ProposalSampler q;
  q.dimension = mean.size();
  q.sample = [mean, sd](RngStream& rng) {
    std::vector<double> x(mean.size());
    for (std::size_t d = 0; d < mean.size(); ++d) x[d] = rng.normal(mean[d], sd[d]);
    return x;
  };
  q.log_density = [mean, sd](std::span<const double> x) {
    double lp = 0.0;
    for (std::size_t d = 0; d < mean.size(); ++d) {
      const double z = (x[d] - mean[d]) / sd[d];
      lp += -0.5 * z * z - std::log(sd[d]) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return lp;
  };
  return q;
}

ProposalSampler uniform_box_proposal(std::vector<Interval> box) {
  if (box.empty()) throw std::invalid_argument("uniform_box_proposal: empty box");
  double log_volume = 0.0;
  for (const auto& iv : box) {
    if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("uniform_box_proposal: box sides must be finite");
    log_volume += std::log(iv.hi - iv.lo);
  }
  ProposalSampler q;
  q.dimension = box.size();
  q.sample = [box](RngStream& rng) {
    std::vector<double> x(box.size());
    for (std::size_t d = 0; d < box.size(); ++d) x[d] = rng.uniform(box[d].lo, box[d].hi);
    return x;
  };
  q.log_density = [box, log_volume](std::span<const double> x) {
    for (std::size_t d = 0; d < box.size(); ++d)
      if (x[d] < box[d].lo || x[d] > box[d].hi) return kNegInf;
    return -log_volume;
  };
  return q;
}

QuantileFunction exponential_quantile(double rate) {
  if (rate <= 0.0) throw std::invalid_argument("exponential rate must be positive");
  return make_quantile([rate](double u) { return -std::log1p(-u) / rate; });
}

QuantileFunction uniform_quantile(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("uniform quantile needs lo < hi");
  return make_quantile([lo, hi](double u) { return lo + (hi - lo) * u; });
}

QuantileFunction normal_quantile(double mean, double sd) {
  if (sd <= 0.0) throw std::invalid_argument("normal sd must be positive");
  // Acklam's rational approximation with central/tail split at p = 0.02425.
  auto inv = [mean, sd](double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double z;
    if (p < p_low) {
      const double q = std::sqrt(-2.0 * std::log(p));
      z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
          ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
      const double q = p - 0.5;
      const double r = q * q;
      z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
          (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
      const double q = std::sqrt(-2.0 * std::log1p(-p));
      z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
          ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return mean + sd * z;
  };
  return make_quantile(inv);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace sampling::mc
