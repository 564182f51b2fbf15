// Experiment CLI: survey designs, simple Monte Carlo, MCMC samplers, and
// mixing diagnostics. Every command is a deterministic function of its flags
// and --seed; the emitted JSON echoes both so a run can be reproduced
// byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sampling/diagnostics.hpp"
#include "sampling/efficient.hpp"
#include "sampling/io.hpp"
#include "sampling/mc.hpp"
#include "sampling/mcmc.hpp"
#include "sampling/rng.hpp"
#include "sampling/stats.hpp"
#include "sampling/survey.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sampling;

constexpr const char* kVersion = "0.1.0";

struct OutputOptions {
  bool as_json = false;
  std::string out_dir;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_flag("--json", opts.as_json, "emit the result as JSON on stdout");
  cmd->add_option("--out-dir", opts.out_dir, "directory for CSV/JSON artifacts");
}

void emit(const json& result, const OutputOptions& opts, const std::string& human) {
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    io::write_text_file(opts.out_dir + "/result.json", result.dump(2) + "\n");
  }
  if (opts.as_json)
    std::cout << result.dump(2) << "\n";
  else
    std::cout << human << "\n";
}

json result_header(const std::string& command, std::uint64_t seed, json config) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = std::move(config);
  return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stoul(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
  return out;
}

// "gaussian:mean,sd" or "uniform:lo,hi"
mc::ProposalSampler parse_proposal(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto params =
      colon == std::string::npos ? std::vector<double>{} : parse_double_list(spec.substr(colon + 1));
  if (name == "gaussian") {
    if (params.size() != 2) throw std::invalid_argument("gaussian proposal needs mean,sd");
    return mc::gaussian_proposal({params[0]}, {params[1]});
  }
  if (name == "uniform") {
    if (params.size() != 2) throw std::invalid_argument("uniform proposal needs lo,hi");
    return mc::uniform_box_proposal({mc::Interval{params[0], params[1]}});
  }
  throw std::invalid_argument("unknown proposal '" + name + "'; valid: gaussian, uniform");
}

mc::QuantileFunction parse_quantile(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto params =
      colon == std::string::npos ? std::vector<double>{} : parse_double_list(spec.substr(colon + 1));
  if (name == "exponential") return mc::exponential_quantile(params.empty() ? 1.0 : params[0]);
  if (name == "uniform") {
    if (params.size() != 2) throw std::invalid_argument("uniform quantile needs lo,hi");
    return mc::uniform_quantile(params[0], params[1]);
  }
  if (name == "normal") {
    if (params.empty()) return mc::normal_quantile(0.0, 1.0);
    if (params.size() != 2) throw std::invalid_argument("normal quantile needs mean,sd");
    return mc::normal_quantile(params[0], params[1]);
  }
  throw std::invalid_argument("unknown quantile '" + name +
                              "'; valid: exponential, uniform, normal");
}

std::function<double(std::span<const double>)> parse_h(const std::string& name) {
  if (name == "x") return [](std::span<const double> x) { return x[0]; };
  if (name == "x2") return [](std::span<const double> x) { return x[0] * x[0]; };
  if (name == "abs") return [](std::span<const double> x) { return std::abs(x[0]); };
  if (name == "one") return [](std::span<const double>) { return 1.0; };
  throw std::invalid_argument("unknown h '" + name + "'; valid: x, x2, abs, one");
}

std::string trace_csv(const mcmc::Trace& trace) {
  std::string out = "iteration";
  for (std::size_t d = 0; d < trace.dimension; ++d) out += ",x" + std::to_string(d);
  out += ",accepted\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i);
    for (double v : trace.row(i)) out += "," + io::format_double(v);
    out += "," + std::to_string(static_cast<int>(trace.accepted[i])) + "\n";
  }
  return out;
}

json trace_summary(const mcmc::Trace& trace, std::size_t max_lag) {
  json j;
  j["n_samples"] = trace.size();
  j["acceptance_rate"] = trace.acceptance_rate();
  json moments = json::array();
  for (std::size_t d = 0; d < trace.dimension; ++d) {
    const auto xs = trace.coordinate(d);
    json m;
    m["mean"] = stats::mean(xs);
    m["variance"] = stats::variance(xs, false);
    moments.push_back(std::move(m));
  }
  j["moments"] = std::move(moments);
  try {
    const auto report = diag::mixing_report(trace, std::min(max_lag, trace.size() / 2));
    j["ess"] = report.effective_sample_size;
    j["mixing_time_estimate"] = report.mixing_time_estimate;
  } catch (const std::invalid_argument&) {
    j["ess"] = nullptr;  // degenerate trace
  }
  if (!trace.energy_error.empty()) j["mean_abs_dH"] = stats::mean(trace.energy_error);
  return j;
}

json estimate_to_json(const survey::SurveyEstimate& est, bool with_indices) {
  json j;
  j["design"] = est.design;
  j["point"] = est.point;
  j["analytic_variance"] = est.analytic_variance;
  if (with_indices) j["sample_indices"] = est.sample_indices;
  return j;
}

// ---------------------------------------------------------------------------
// survey
// ---------------------------------------------------------------------------

int run_survey_command(const std::string& kind, const std::string& data_path, std::size_t n,
                       std::size_t c, const std::string& alloc_spec, std::size_t reps,
                       std::uint64_t seed, const std::string& stages_spec,
                       const OutputOptions& opts) {
  const auto pop = io::load_population(data_path);
  RngStream rng(seed);

  json config;
  config["data"] = data_path;
  config["reps"] = reps;

  const auto run_one = [&](RngStream& r) -> survey::SurveyEstimate {
    if (kind == "srs") return survey::srs_mean_estimate(pop, n, r);
    if (kind == "cluster") return survey::cluster_estimate(pop, c, r);
    if (kind == "stratified") {
      std::vector<std::size_t> alloc;
      if (alloc_spec == "proportional")
        alloc = survey::proportional_allocation(pop, n);
      else
        alloc = parse_size_list(alloc_spec);
      return survey::stratified_estimate(pop, alloc, r);
    }
    if (kind == "bootstrap") {
      const auto draw = survey::bootstrap_draw(pop.size(), n, r);
      survey::SurveyEstimate est;
      double sum = 0.0;
      for (auto i : draw) sum += pop.values[i];
      est.point = sum / static_cast<double>(draw.size());
      est.analytic_variance =
          stats::variance(pop.values, false) / static_cast<double>(draw.size());
      est.design = "bootstrap(n=" + std::to_string(n) + ")";
      est.sample_indices = draw;
      return est;
    }
    // multistage
    std::vector<survey::Stage> stages;
    for (const auto& tok : split(stages_spec, ',')) {
      const auto parts = split(tok, ':');
      if (parts.size() != 2) throw std::invalid_argument("stage must be kind:count, got " + tok);
      if (parts[0] == "cluster")
        stages.push_back(survey::ClusterStage{std::stoul(parts[1])});
      else if (parts[0] == "srs")
        stages.push_back(survey::SrsStage{std::stoul(parts[1])});
      else
        throw std::invalid_argument("unknown stage kind '" + parts[0] + "'");
    }
    const auto draw = survey::multistage_draw(pop, stages, r);
    survey::SurveyEstimate est;
    std::vector<double> values;
    for (auto i : draw.indices) values.push_back(pop.values[i]);
    est.point = survey::ht_estimate(values, draw.inclusion_probs, survey::h_mean(pop.size()));
    est.analytic_variance = 0.0;  // no closed form for a general composition
    est.design = "multistage(" + stages_spec + ")";
    est.sample_indices = draw.indices;
    return est;
  };

  if (kind == "srs" || kind == "bootstrap") config["n"] = n;
  if (kind == "cluster") config["c"] = c;
  if (kind == "stratified") {
    config["alloc"] = alloc_spec;
    if (alloc_spec == "proportional") config["n"] = n;
  }
  if (kind == "multistage") config["stages"] = stages_spec;

  json result = result_header("survey " + kind, seed, config);
  result["population_size"] = pop.size();

  if (reps <= 1) {
    const auto est = run_one(rng);
    result["estimate"] = estimate_to_json(est, true);
    if (kind == "multistage")  // no closed form for a general composition
      result["estimate"]["analytic_variance"] = nullptr;
    emit(result, opts,
         est.design + ": point=" + io::format_double(est.point) +
             (kind == "multistage"
                  ? ""
                  : " analytic_variance=" + io::format_double(est.analytic_variance)));
    return 0;
  }

  std::vector<double> points(reps);
  double var_sum = 0.0;
  std::string design;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto est = run_one(rng);
    points[rep] = est.point;
    var_sum += est.analytic_variance;
    design = est.design;
  }
  result["design"] = design;
  result["empirical_mean"] = stats::mean(points);
  result["empirical_variance"] = stats::variance(points, false);
  if (kind == "multistage")
    result["analytic_variance"] = nullptr;
  else
    result["analytic_variance"] = var_sum / static_cast<double>(reps);
  emit(result, opts,
       design + " over " + std::to_string(reps) +
           " reps: mean=" + io::format_double(stats::mean(points)) +
           " empirical_variance=" + io::format_double(stats::variance(points, false)) +
           " analytic_variance=" + io::format_double(var_sum / static_cast<double>(reps)));
  return 0;
}

int run_snowball(const std::string& edges_path, const std::string& seeds_spec, double p,
                 std::size_t max_rounds, std::uint64_t seed, const OutputOptions& opts) {
  std::ifstream in(edges_path);
  if (!in) throw std::invalid_argument("cannot open '" + edges_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("edge file is empty");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_node = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto parts = split(line, ',');
    if (parts.size() != 2)
      throw std::invalid_argument("edges line " + std::to_string(line_no) + ": expected from,to");
    const auto a = std::stoul(parts[0]);
    const auto b = std::stoul(parts[1]);
    edges.emplace_back(a, b);
    max_node = std::max({max_node, a, b});
  }
  std::vector<std::vector<std::size_t>> adjacency(max_node + 1);
  for (auto [a, b] : edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  const auto seeds = parse_size_list(seeds_spec);
  RngStream rng(seed);
  const auto selected = survey::snowball_draw(adjacency, seeds, p, max_rounds, rng);

  json config;
  config["edges"] = edges_path;
  config["seeds"] = seeds_spec;
  config["p"] = p;
  config["max_rounds"] = max_rounds;
  json result = result_header("survey snowball", seed, config);
  result["selected"] = selected;
  result["selected_count"] = selected.size();
  emit(result, opts, "snowball selected " + std::to_string(selected.size()) + " of " +
                         std::to_string(adjacency.size()) + " nodes");
  return 0;
}

std::string samples_csv(const std::vector<std::vector<double>>& samples) {
  std::string out;
  if (samples.empty()) return "x0\n";
  out = "x0";
  for (std::size_t d = 1; d < samples[0].size(); ++d) out += ",x" + std::to_string(d);
  out += "\n";
  for (const auto& row : samples) {
    for (std::size_t d = 0; d < row.size(); ++d)
      out += (d ? "," : "") + io::format_double(row[d]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// main dispatch
// ---------------------------------------------------------------------------

int dispatch(int argc, char** argv) {
  CLI::App app{"statistical sampling toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mapping 1:1 to flags ([survey.srs] sections)");

  // --- survey --------------------------------------------------------------
  auto* survey_cmd = app.add_subcommand("survey", "finite-population survey designs");
  survey_cmd->require_subcommand(1);

  struct {
    std::string data, alloc = "proportional", stages = "cluster:2,srs:1", edges, seeds = "0";
    std::size_t n = 1, c = 1, reps = 1, max_rounds = 3;
    double p = 0.5;
    std::uint64_t seed = 0;
    OutputOptions out;
  } sv;

  const auto add_survey_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", sv.data, "population CSV")->required();
    cmd->add_option("--reps", sv.reps, "replications");
    cmd->add_option("--seed", sv.seed, "rng seed");
    add_output_flags(cmd, sv.out);
  };
  auto* srs = survey_cmd->add_subcommand("srs", "simple random sampling without replacement");
  srs->add_option("--n", sv.n, "sample size")->required();
  add_survey_common(srs);
  auto* boot = survey_cmd->add_subcommand("bootstrap", "sampling with replacement");
  boot->add_option("--n", sv.n, "sample size")->required();
  add_survey_common(boot);
  auto* strat = survey_cmd->add_subcommand("stratified", "SRS within every stratum");
  strat->add_option("--alloc", sv.alloc, "per-stratum sizes a,b,... or 'proportional'");
  strat->add_option("--n", sv.n, "total size for proportional allocation");
  add_survey_common(strat);
  auto* clus = survey_cmd->add_subcommand("cluster", "SRS of whole clusters");
  clus->add_option("--c", sv.c, "clusters to draw")->required();
  add_survey_common(clus);
  auto* multi = survey_cmd->add_subcommand("multistage", "stage-wise composition");
  multi->add_option("--stages", sv.stages, "e.g. cluster:2,srs:1");
  add_survey_common(multi);
  auto* snow = survey_cmd->add_subcommand("snowball", "expansion through a graph");
  snow->add_option("--edges", sv.edges, "edge CSV with header from,to")->required();
  snow->add_option("--seeds", sv.seeds, "seed node ids a,b,...");
  snow->add_option("--p", sv.p, "expansion probability");
  snow->add_option("--max-rounds", sv.max_rounds, "round cap");
  snow->add_option("--seed", sv.seed, "rng seed");
  add_output_flags(snow, sv.out);

  // --- mc --------------------------------------------------------------------
  auto* mc_cmd = app.add_subcommand("mc", "simple Monte Carlo");
  mc_cmd->require_subcommand(1);

  struct {
    std::string target = "normal", proposal = "gaussian:0,1.4142135623730951";
    std::string quantile = "exponential:1", h = "x2", out_samples;
    std::size_t n = 100000, probe_n = 1000;
    double c = 2.0, growth = 1.5, initial_c = 0.1;
    std::uint64_t seed = 0;
    OutputOptions out;
  } m;

  auto* pi = mc_cmd->add_subcommand("pi", "estimate pi on the unit square");
  pi->add_option("--n", m.n, "points");
  pi->add_option("--seed", m.seed, "rng seed");
  add_output_flags(pi, m.out);

  auto* samp = mc_cmd->add_subcommand("sample", "inverse-CDF sampling");
  samp->add_option("--quantile", m.quantile, "exponential:rate | uniform:lo,hi | normal[:m,s]");
  samp->add_option("--n", m.n, "draws");
  samp->add_option("--seed", m.seed, "rng seed");
  samp->add_option("--out", m.out_samples, "samples CSV path");
  add_output_flags(samp, m.out);

  auto* imp = mc_cmd->add_subcommand("importance", "self-normalized importance sampling");
  imp->add_option("--target", m.target, "target density name[:params]");
  imp->add_option("--proposal", m.proposal, "gaussian:mean,sd | uniform:lo,hi");
  imp->add_option("--integrand", m.h, "integrand: x, x2, abs, one");
  imp->add_option("--n", m.n, "draws");
  imp->add_option("--seed", m.seed, "rng seed");
  add_output_flags(imp, m.out);

  auto* rej = mc_cmd->add_subcommand("rejection", "rejection sampling");
  rej->add_option("--target", m.target, "target density name[:params]");
  rej->add_option("--proposal", m.proposal, "gaussian:mean,sd | uniform:lo,hi");
  rej->add_option("--c", m.c, "envelope constant");
  rej->add_option("--n", m.n, "accepted samples to produce");
  rej->add_option("--seed", m.seed, "rng seed");
  rej->add_option("--out", m.out_samples, "samples CSV path");
  add_output_flags(rej, m.out);

  auto* cal = mc_cmd->add_subcommand("calibrate-c", "grow c until the envelope holds");
  cal->add_option("--target", m.target, "target density name[:params]");
  cal->add_option("--proposal", m.proposal, "gaussian:mean,sd | uniform:lo,hi");
  cal->add_option("--probe-n", m.probe_n, "probe draws per candidate c");
  cal->add_option("--growth", m.growth, "multiplicative growth factor");
  cal->add_option("--initial-c", m.initial_c, "starting c");
  cal->add_option("--seed", m.seed, "rng seed");
  add_output_flags(cal, m.out);

  // --- mcmc ------------------------------------------------------------------
  auto* mcmc_cmd = app.add_subcommand("mcmc", "Markov chain Monte Carlo");
  mcmc_cmd->require_subcommand(1);

  struct {
    std::string target = "normal", trace_path;
    std::size_t n = 100000, burn_in = 1000, leapfrog = 20, k_order = 20, max_slices = 1000;
    double sigma = 2.38, slice_width = 2.0, eta = 0.1, alpha = -0.9, rho = 0.9;
    std::uint64_t seed = 0;
    OutputOptions out;
  } mk;

  const auto add_chain_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", mk.n, "post burn-in samples");
    cmd->add_option("--burn-in", mk.burn_in, "burn-in iterations");
    cmd->add_option("--seed", mk.seed, "rng seed");
    cmd->add_option("--trace", mk.trace_path, "trace CSV path");
    add_output_flags(cmd, mk.out);
  };
  auto* met = mcmc_cmd->add_subcommand("metropolis", "random-walk Metropolis");
  met->add_option("--target", mk.target, "target density name[:params]");
  met->add_option("--sigma", mk.sigma, "proposal step scale");
  add_chain_common(met);
  auto* mh = mcmc_cmd->add_subcommand("mh", "Metropolis-Hastings with a gaussian kernel");
  mh->add_option("--target", mk.target, "target density name[:params]");
  mh->add_option("--sigma", mk.sigma, "kernel step scale");
  add_chain_common(mh);
  auto* gib = mcmc_cmd->add_subcommand("gibbs", "gibbs on the bivariate normal");
  gib->add_option("--rho", mk.rho, "correlation of the bivariate target");
  add_chain_common(gib);
  auto* slc = mcmc_cmd->add_subcommand("slice", "1-D slice sampling");
  slc->add_option("--target", mk.target, "target density name[:params]");
  slc->add_option("--slice-width", mk.slice_width, "stepping-out width");
  slc->add_option("--max-slices", mk.max_slices, "stepping-out cap per side");
  add_chain_common(slc);
  auto* hm = mcmc_cmd->add_subcommand("hmc", "Hamiltonian Monte Carlo");
  hm->add_option("--target", mk.target, "target density name[:params]");
  hm->add_option("--eta", mk.eta, "leapfrog step size");
  hm->add_option("--leapfrog-steps", mk.leapfrog, "leapfrog steps per proposal");
  add_chain_common(hm);
  auto* adl = mcmc_cmd->add_subcommand("adler", "gibbs with Adler's overrelaxation");
  adl->add_option("--rho", mk.rho, "correlation of the bivariate target");
  adl->add_option("--alpha", mk.alpha, "overrelaxation parameter in [-1, 1]");
  add_chain_common(adl);
  auto* ord = mcmc_cmd->add_subcommand("ordered", "gibbs with ordered overrelaxation");
  ord->add_option("--rho", mk.rho, "correlation of the bivariate target");
  ord->add_option("--k-order", mk.k_order, "order-statistic pool size K");
  add_chain_common(ord);

  // --- diag ------------------------------------------------------------------
  auto* diag_cmd = app.add_subcommand("diag", "mixing-time experiments");
  diag_cmd->require_subcommand(1);

  struct {
    std::string L = "10,20,40,80", deltas = "0.1,1,10", out_csv;
    double delta = 1.0, eta = 0.25, ell = 1.0;
    std::size_t chains = 50, r = 2;
    std::uint64_t seed = 0;
    OutputOptions out;
  } dg;

  auto* rw = diag_cmd->add_subcommand("random-walk", "random-walk cover-time scaling");
  rw->add_option("--L", dg.L, "comma-separated ranges");
  rw->add_option("--delta", dg.delta, "step size");
  rw->add_option("--chains", dg.chains, "chains per L");
  rw->add_option("--seed", dg.seed, "rng seed");
  rw->add_option("--out", dg.out_csv, "per-L CSV path");
  add_output_flags(rw, dg.out);
  auto* hs = diag_cmd->add_subcommand("hmc-scaling", "HMC cover-time scaling");
  hs->add_option("--L", dg.L, "comma-separated ranges");
  hs->add_option("--eta", dg.eta, "leapfrog step size");
  hs->add_option("--chains", dg.chains, "chains per L");
  hs->add_option("--seed", dg.seed, "rng seed");
  hs->add_option("--out", dg.out_csv, "per-L CSV path");
  add_output_flags(hs, dg.out);
  auto* acc = diag_cmd->add_subcommand("acceptance", "acceptance vs proposal scale");
  acc->add_option("--ell", dg.ell, "constrained-direction scale");
  acc->add_option("--deltas", dg.deltas, "comma-separated proposal scales");
  acc->add_option("--r", dg.r, "constrained dimensions");
  acc->add_option("--seed", dg.seed, "rng seed");
  add_output_flags(acc, dg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // --help exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // flag/usage problems are validation errors
  }

  // --- survey dispatch ---------------------------------------------------
  for (const auto* kind : {"srs", "bootstrap", "stratified", "cluster", "multistage"}) {
    if (survey_cmd->got_subcommand(kind))
      return run_survey_command(kind, sv.data, sv.n, sv.c, sv.alloc, sv.reps, sv.seed, sv.stages,
                                sv.out);
  }
  if (survey_cmd->got_subcommand("snowball"))
    return run_snowball(sv.edges, sv.seeds, sv.p, sv.max_rounds, sv.seed, sv.out);

  // --- mc dispatch ---------------------------------------------------------
  if (mc_cmd->got_subcommand("pi")) {
    RngStream rng(m.seed);
    const double est = mc::estimate_pi(m.n, rng);
    json config;
    config["n"] = m.n;
    json result = result_header("mc pi", m.seed, config);
    result["estimate"] = est;
    result["abs_error"] = std::abs(est - std::numbers::pi);
    emit(result, m.out, "pi ~= " + io::format_double(est));
    return 0;
  }
  if (mc_cmd->got_subcommand("sample")) {
    RngStream rng(m.seed);
    const auto xs = mc::inverse_cdf_sample(parse_quantile(m.quantile), m.n, rng);
    json config;
    config["quantile"] = m.quantile;
    config["n"] = m.n;
    json result = result_header("mc sample", m.seed, config);
    result["mean"] = stats::mean(xs);
    result["variance"] = xs.size() >= 2 ? stats::variance(xs, true) : 0.0;
    if (!m.out_samples.empty()) {
      std::string csv = "x0\n";
      for (double x : xs) csv += io::format_double(x) + "\n";
      io::write_text_file(m.out_samples, csv);
      result["samples_csv"] = m.out_samples;
    }
    emit(result, m.out, "drew " + std::to_string(xs.size()) + " samples, mean " +
                            io::format_double(stats::mean(xs)));
    return 0;
  }
  if (mc_cmd->got_subcommand("importance")) {
    RngStream rng(m.seed);
    const double est = mc::importance_estimate(mc::make_target(m.target),
                                               parse_proposal(m.proposal), parse_h(m.h), m.n, rng);
    json config;
    config["target"] = m.target;
    config["proposal"] = m.proposal;
    config["h"] = m.h;
    config["n"] = m.n;
    json result = result_header("mc importance", m.seed, config);
    result["estimate"] = est;
    emit(result, m.out, "E[" + m.h + "] ~= " + io::format_double(est));
    return 0;
  }
  if (mc_cmd->got_subcommand("rejection")) {
    RngStream rng(m.seed);
    const auto res =
        mc::rejection_sample(mc::make_target(m.target), parse_proposal(m.proposal), m.c, m.n, rng);
    json config;
    config["target"] = m.target;
    config["proposal"] = m.proposal;
    config["c"] = m.c;
    config["n"] = m.n;
    json result = result_header("mc rejection", m.seed, config);
    result["acceptance_rate"] = res.acceptance_rate;
    result["proposals_used"] = res.proposals_used;
    if (!m.out_samples.empty()) {
      io::write_text_file(m.out_samples, samples_csv(res.samples));
      result["samples_csv"] = m.out_samples;
    }
    emit(result, m.out,
         "accepted " + std::to_string(res.samples.size()) + " of " +
             std::to_string(res.proposals_used) + " proposals (rate " +
             io::format_double(res.acceptance_rate) + ")");
    return 0;
  }
  if (mc_cmd->got_subcommand("calibrate-c")) {
    RngStream rng(m.seed);
    const double c =
        mc::rejection_calibrate_c(mc::make_target(m.target), parse_proposal(m.proposal),
                                  m.probe_n, m.growth, rng, m.initial_c);
    json config;
    config["target"] = m.target;
    config["proposal"] = m.proposal;
    config["probe_n"] = m.probe_n;
    config["growth"] = m.growth;
    config["initial_c"] = m.initial_c;
    json result = result_header("mc calibrate-c", m.seed, config);
    result["c"] = c;
    emit(result, m.out, "calibrated c = " + io::format_double(c));
    return 0;
  }

  // --- mcmc dispatch -------------------------------------------------------
  const auto finish_chain = [&](const std::string& name, const mcmc::Trace& trace, json config) {
    json result = result_header("mcmc " + name, mk.seed, std::move(config));
    result["summary"] = trace_summary(trace, 1000);
    if (!mk.trace_path.empty()) {
      io::write_text_file(mk.trace_path, trace_csv(trace));
      result["trace_csv"] = mk.trace_path;
    }
    if (!mk.out.out_dir.empty()) {
      std::filesystem::create_directories(mk.out.out_dir);
      io::write_text_file(mk.out.out_dir + "/trace.csv", trace_csv(trace));
    }
    const auto& s = result["summary"];
    emit(result, mk.out,
         "mcmc " + name + ": n=" + std::to_string(trace.size()) +
             " acceptance=" + io::format_double(trace.acceptance_rate()) +
             " mean0=" + io::format_double(s["moments"][0]["mean"].get<double>()));
    return 0;
  };
  mcmc::ChainConfig chain_cfg;
  chain_cfg.n_samples = mk.n;
  chain_cfg.burn_in = mk.burn_in;

  if (mcmc_cmd->got_subcommand("metropolis")) {
    chain_cfg.n_samples = mk.n;
    chain_cfg.burn_in = mk.burn_in;
    RngStream rng(mk.seed);
    json config{{"target", mk.target}, {"sigma", mk.sigma}, {"n", mk.n}, {"burn_in", mk.burn_in}};
    return finish_chain("metropolis",
                        mcmc::metropolis(mc::make_target(mk.target),
                                         mcmc::GaussianStepProposal{mk.sigma}, chain_cfg, rng),
                        config);
  }
  if (mcmc_cmd->got_subcommand("mh")) {
    RngStream rng(mk.seed);
    const auto target = mc::make_target(mk.target);
    json config{{"target", mk.target}, {"sigma", mk.sigma}, {"n", mk.n}, {"burn_in", mk.burn_in}};
    return finish_chain(
        "mh",
        mcmc::metropolis_hastings(target, mcmc::gaussian_kernel(mk.sigma, target.dimension),
                                  chain_cfg, rng),
        config);
  }
  if (mcmc_cmd->got_subcommand("gibbs")) {
    RngStream rng(mk.seed);
    json config{{"rho", mk.rho}, {"n", mk.n}, {"burn_in", mk.burn_in}};
    return finish_chain("gibbs",
                        mcmc::gibbs(mcmc::bivariate_normal_conditionals(mk.rho), chain_cfg, rng),
                        config);
  }
  if (mcmc_cmd->got_subcommand("slice")) {
    RngStream rng(mk.seed);
    json config{{"target", mk.target},
                {"slice_width", mk.slice_width},
                {"max_slices", mk.max_slices},
                {"n", mk.n},
                {"burn_in", mk.burn_in}};
    return finish_chain("slice",
                        mcmc::slice_sample(mc::make_target(mk.target), mk.slice_width,
                                           mk.max_slices, chain_cfg, rng),
                        config);
  }
  if (mcmc_cmd->got_subcommand("hmc")) {
    RngStream rng(mk.seed);
    mc_efficient::HmcConfig cfg;
    cfg.step_size = mk.eta;
    cfg.leapfrog_steps = mk.leapfrog;
    cfg.n_samples = mk.n;
    cfg.burn_in = mk.burn_in;
    json config{{"target", mk.target},
                {"eta", mk.eta},
                {"leapfrog_steps", mk.leapfrog},
                {"n", mk.n},
                {"burn_in", mk.burn_in}};
    return finish_chain("hmc", mc_efficient::hmc(mc::make_target(mk.target), cfg, rng), config);
  }
  if (mcmc_cmd->got_subcommand("adler")) {
    RngStream rng(mk.seed);
    json config{{"rho", mk.rho}, {"alpha", mk.alpha}, {"n", mk.n}, {"burn_in", mk.burn_in}};
    return finish_chain(
        "adler",
        mc_efficient::adler_gibbs(mc_efficient::bivariate_normal_gaussian_conditionals(mk.rho),
                                  mk.alpha, chain_cfg, rng),
        config);
  }
  if (mcmc_cmd->got_subcommand("ordered")) {
    RngStream rng(mk.seed);
    json config{{"rho", mk.rho}, {"k_order", mk.k_order}, {"n", mk.n}, {"burn_in", mk.burn_in}};
    return finish_chain(
        "ordered",
        mc_efficient::ordered_overrelax_gibbs(mcmc::bivariate_normal_conditionals(mk.rho),
                                              mk.k_order, chain_cfg, rng),
        config);
  }

  // --- diag dispatch --------------------------------------------------------
  const auto emit_scaling = [&](const std::string& name, const diag::ScalingExperiment& exp,
                                json config) {
    json result = result_header("diag " + name, dg.seed, std::move(config));
    json rows = json::array();
    std::string csv = "L,mean_T,sd_T\n";
    for (std::size_t i = 0; i < exp.L_values.size(); ++i)
      if (exp.censored[i] > 0)
        std::cerr << "warning: " << exp.censored[i] << " chain(s) censored at L="
                  << exp.L_values[i] << " and excluded from the fit\n";
    for (std::size_t i = 0; i < exp.L_values.size(); ++i) {
      json row;
      row["L"] = exp.L_values[i];
      row["mean_T"] = exp.mean_mixing_time[i];
      row["sd_T"] = exp.sd_mixing_time[i];
      row["censored"] = exp.censored[i];
      rows.push_back(std::move(row));
      csv += std::to_string(exp.L_values[i]) + "," + io::format_double(exp.mean_mixing_time[i]) +
             "," + io::format_double(exp.sd_mixing_time[i]) + "\n";
    }
    result["per_L"] = std::move(rows);
    result["fit"] = {{"slope", exp.slope}, {"intercept", exp.intercept}, {"r2", exp.r_squared}};
    if (!dg.out_csv.empty()) io::write_text_file(dg.out_csv, csv);
    if (!dg.out.out_dir.empty()) {
      std::filesystem::create_directories(dg.out.out_dir);
      io::write_text_file(dg.out.out_dir + "/scaling.csv", csv);
    }
    emit(result, dg.out, name + " slope = " + io::format_double(exp.slope));
    return 0;
  };

  if (diag_cmd->got_subcommand("random-walk")) {
    RngStream rng(dg.seed);
    const auto L = parse_size_list(dg.L);
    json config{{"L", dg.L}, {"delta", dg.delta}, {"chains", dg.chains}};
    return emit_scaling("random-walk", diag::random_walk_scaling(L, dg.delta, dg.chains, rng),
                        config);
  }
  if (diag_cmd->got_subcommand("hmc-scaling")) {
    RngStream rng(dg.seed);
    const auto L = parse_size_list(dg.L);
    json config{{"L", dg.L}, {"eta", dg.eta}, {"chains", dg.chains}};
    return emit_scaling("hmc-scaling", diag::hmc_scaling(L, dg.eta, dg.chains, rng), config);
  }
  if (diag_cmd->got_subcommand("acceptance")) {
    RngStream rng(dg.seed);
    const auto deltas = parse_double_list(dg.deltas);
    const auto rates = diag::acceptance_tradeoff_probe(dg.ell, deltas, dg.r, rng);
    json config{{"ell", dg.ell}, {"deltas", dg.deltas}, {"r", dg.r}};
    json result = result_header("diag acceptance", dg.seed, config);
    json rows = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i)
      rows.push_back({{"delta", deltas[i]}, {"acceptance", rates[i]}});
    result["rates"] = std::move(rows);
    emit(result, dg.out, "measured " + std::to_string(rates.size()) + " acceptance rates");
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
