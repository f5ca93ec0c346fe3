#include "hcube/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hcube/returns.hpp"
#include "hcube/rng.hpp"
#include "hcube/stats.hpp"

namespace hcube {

namespace {

// Runs with more than this fraction of censored trials exit with kExitCensoring.
constexpr double kMaxCensoredFraction = 0.01;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string u64(std::uint64_t x) { return std::to_string(x); }

std::string format_walk(WalkKind k) { return std::string(to_string(k)); }

std::string format_rule(ReturnRule r) {
  return r == ReturnRule::Literal ? "literal" : "after-first-exit";
}

bool needs_gamma(const std::string& cmd) {
  return cmd == "path-return" || cmd == "beta" || cmd == "eta-visit" || cmd == "hitting";
}

PathReturnConfig path_config(const ExperimentSpec& spec) {
  PathReturnConfig c;
  c.n = spec.n;
  c.gamma = spec.gamma.value_or(0.5);
  c.walk_kind = spec.walk_kind;
  c.rule = spec.rule;
  c.cap = spec.cap.value_or(0);
  c.trials = spec.trials;
  c.pilot_trials = spec.pilot_trials;
  c.master_seed = spec.master_seed;
  c.delta = spec.delta;
  return c;
}

ThetaConfig theta_config(const ExperimentSpec& spec) {
  ThetaConfig c;
  c.n = spec.n;
  c.gamma = spec.gamma.value_or(0.5);
  c.walk_kind = spec.walk_kind;
  c.cap = spec.cap.value_or(0);
  c.master_seed = spec.master_seed;
  c.inclusion_prob = spec.inclusion_prob;
  return c;
}

Vertex parse_vertex(const std::string& text, unsigned n) {
  if (text.empty()) return all_minus(n);
  if (text.size() != n) throw ValidationError("--eta must have exactly n characters");
  Vertex v = all_minus(n);
  for (unsigned j = 0; j < n; ++j) {
    if (text[j] == '+') {
      v.set(j, true);
    } else if (text[j] != '-') {
      throw ValidationError("--eta may only contain '+' and '-'");
    }
  }
  return v;
}

std::size_t count_censored(const std::vector<TrialRecord>& records) {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const TrialRecord& r) { return r.outcome.censored; }));
}

// Distribution of record values times `scale`, with censored records kept as censored.
EmpiricalDist value_dist(const std::vector<TrialRecord>& records, double scale = 1.0) {
  std::vector<double> values;
  std::size_t censored = 0;
  std::optional<double> point;
  for (const auto& r : records) {
    if (r.outcome.censored) {
      ++censored;
      point = static_cast<double>(r.outcome.value) * scale;
    } else {
      values.push_back(static_cast<double>(r.outcome.value) * scale);
    }
  }
  return EmpiricalDist(std::move(values), censored, point);
}

void add_mean(KeyValues& summary, const EmpiricalDist& d, const std::string& prefix = "") {
  if (d.censored_count() == 0 && d.samples().size() >= 2) {
    const MeanCI ci = d.mean_ci();
    summary.emplace_back(prefix + "mean", format_double(ci.mean));
    summary.emplace_back(prefix + "ci95_half_width", format_double(ci.half_width));
  }
}

void add_survival(KeyValues& summary, const EmpiricalDist& d, const std::string& key, double t) {
  try {
    summary.emplace_back(key, format_double(d.survival(t)));
  } catch (const std::domain_error&) {
    summary.emplace_back(key, "nan");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

KeyValues base_manifest(const ExperimentSpec& spec) {
  KeyValues m{{"tool", "hcube_lab"},
              {"tool_version", kToolVersion},
              {"algorithm_id", std::string(kAlgorithmId)},
              {"subcommand", spec.subcommand},
              {"n", std::to_string(spec.n)}};
  if (spec.subcommand != "enumerate-jl") {
    m.emplace_back("walk", format_walk(spec.walk_kind));
    m.emplace_back("trials", std::to_string(spec.trials));
    m.emplace_back("master_seed", u64(spec.master_seed));
    m.emplace_back("seed_derivation", "mix64(master ^ trial*0x9E3779B97F4A7C15)");
  }
  if (needs_gamma(spec.subcommand)) m.emplace_back("gamma", format_double(spec.gamma.value_or(0.5)));
  return m;
}

void run_selfint(const ExperimentSpec& spec, ExperimentResult& res) {
  const std::uint64_t cap = spec.cap.value_or(default_selfint_cap(spec.n));
  res.manifest.emplace_back("cap", u64(cap));
  struct Out {
    StopTime s;
    bool two_step;
  };
  auto outs = run_parallel<Out>(spec.trials, spec.jobs, [&](std::uint64_t i) {
    WalkEngine walk(WalkKind::Periodic, all_plus(spec.n),
                    RngStream(derive_trial_seed(spec.master_seed, i)));
    const SelfIntersection si = first_self_intersection(walk, cap);
    return Out{si.time, si.loop_length == 2};
  });
  std::size_t two_step = 0;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    res.records.push_back({i, derive_trial_seed(spec.master_seed, i), outs[i].s});
    two_step += outs[i].two_step;
  }
  const EmpiricalDist scaled = value_dist(res.records, 1.0 / spec.n);
  add_mean(res.summary, value_dist(res.records));
  if (scaled.censored_count() == 0 && !scaled.samples().empty()) {
    res.summary.emplace_back("ks_exp1_value_over_n", format_double(scaled.ks_exp1()));
  }
  res.summary.emplace_back("fraction_two_step_first_return",
                           format_double(static_cast<double>(two_step) / std::max<std::size_t>(1, spec.trials)));
}

void run_gamma_l(const ExperimentSpec& spec, ExperimentResult& res) {
  const std::uint64_t cap = spec.cap.value_or(default_selfint_cap(spec.n) * spec.l * spec.l);
  res.manifest.emplace_back("l", std::to_string(spec.l));
  res.manifest.emplace_back("cap", u64(cap));
  res.records = run_trials(spec.master_seed, spec.trials, spec.jobs, [&](std::uint64_t i) {
    WalkEngine walk(WalkKind::Periodic, all_plus(spec.n),
                    RngStream(derive_trial_seed(spec.master_seed, i)));
    return first_return_time(walk, spec.l, cap);
  });
  const EmpiricalDist d = value_dist(res.records);
  add_mean(res.summary, d);
  if (spec.l == 1) {
    for (std::uint64_t m : {std::uint64_t{spec.n}, std::uint64_t{2ull * spec.n}}) {
      add_survival(res.summary, d, "survival_at_" + u64(m), static_cast<double>(m));
      res.summary.emplace_back("exact_survival_at_" + u64(m),
                               format_double(std::pow(1.0 - 1.0 / spec.n, static_cast<double>(m - 1))));
    }
  }
}

void run_enumerate(const ExperimentSpec& spec, ExperimentResult& res) {
  res.has_records = false;
  res.manifest.emplace_back("l", std::to_string(spec.l));
  std::uint64_t count = 0;
  if (!spec.certificate_path.empty()) {
    std::ofstream cert(spec.certificate_path);
    if (!cert) throw std::runtime_error("cannot open certificate file " + spec.certificate_path);
    count = write_jl_certificate(cert, spec.n, spec.l);
    res.manifest.emplace_back("certificate", spec.certificate_path);
  } else {
    count = enumerate_jl(spec.n, spec.l);
  }
  res.summary.emplace_back("count", u64(count));
}

void run_meeting(const ExperimentSpec& spec, ExperimentResult& res) {
  const std::uint64_t cap = spec.cap.value_or(default_meeting_cap(spec.n));
  res.manifest.emplace_back("walk_override", "aperiodic coupling (all_plus vs all_minus)");
  res.manifest.emplace_back("cap", u64(cap));
  res.records = run_trials(spec.master_seed, spec.trials, spec.jobs, [&](std::uint64_t i) {
    return meeting_time(spec.n, RngStream(derive_trial_seed(spec.master_seed, i)), cap);
  });
  const EmpiricalDist d = value_dist(res.records);
  add_mean(res.summary, d);
  double harmonic = 0.0;
  for (unsigned k = 1; k <= spec.n; ++k) harmonic += 1.0 / k;
  res.summary.emplace_back("coupon_collector_mean", format_double(spec.n * harmonic));
  if (d.censored_count() == 0 && spec.n > 1 && !d.samples().empty()) {
    res.summary.emplace_back("median_over_n_ln_n",
                             format_double(median(d.samples()) / (spec.n * std::log(double(spec.n)))));
  }
}

void run_couple_distance(const ExperimentSpec& spec, ExperimentResult& res) {
  const unsigned k = spec.initial_distance.value_or(spec.n);
  const std::uint64_t cap = spec.cap.value_or(default_meeting_cap(spec.n));
  res.manifest.emplace_back("initial_distance", std::to_string(k));
  res.manifest.emplace_back("cap", u64(cap));
  res.manifest.emplace_back("value", "absorption time of D(t)");
  struct Out {
    StopTime absorbed;
    std::uint64_t violations;
  };
  auto outs = run_parallel<Out>(spec.trials, spec.jobs, [&](std::uint64_t i) {
    Vertex b = all_plus(spec.n);
    for (unsigned j = 0; j < k; ++j) b.set(j, false);
    CoupledPair pair(spec.walk_kind, all_plus(spec.n), b,
                     RngStream(derive_trial_seed(spec.master_seed, i)));
    Out o{StopTime::censored_at(cap), 0};
    unsigned prev = pair.disagreements();
    if (prev == 0) o.absorbed = StopTime::observed(0);
    // Run n steps past absorption to confirm that 0 is absorbing.
    std::uint64_t extra = 0;
    while (pair.time() < cap && extra < spec.n) {
      pair.step();
      const unsigned d = pair.disagreements();
      if (spec.walk_kind == WalkKind::Aperiodic && d > prev) ++o.violations;
      if (!o.absorbed.censored) {
        if (d != 0) ++o.violations;
        ++extra;
      } else if (d == 0) {
        o.absorbed = StopTime::observed(pair.time());
      }
      prev = d;
    }
    return o;
  });
  std::uint64_t violations = 0;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    res.records.push_back({i, derive_trial_seed(spec.master_seed, i), outs[i].absorbed});
    violations += outs[i].violations;
  }
  add_mean(res.summary, value_dist(res.records));
  res.summary.emplace_back("monotonicity_or_absorption_violations", u64(violations));
}

void add_path_manifest(const PathReturnConfig& c, ExperimentResult& res) {
  res.manifest.emplace_back("path_length_m", std::to_string(c.m()));
  res.manifest.emplace_back("return_rule", format_rule(c.rule));
  res.manifest.emplace_back("delta", format_double(c.delta));
  res.manifest.emplace_back("cap", u64(c.effective_cap()));
}

void run_path_return(const ExperimentSpec& spec, ExperimentResult& res) {
  const PathReturnConfig c = path_config(spec);
  add_path_manifest(c, res);
  std::vector<std::size_t> v_sizes(spec.trials);
  res.records = run_trials(spec.master_seed, spec.trials, spec.jobs, [&](std::uint64_t i) {
    const PathReturnSample s = sample_path_return(c, i);
    v_sizes[i] = s.v_size;
    return s.r;
  });
  const EmpiricalDist d = value_dist(res.records);
  add_mean(res.summary, d);
  double v_mean = 0.0;
  for (auto v : v_sizes) v_mean += static_cast<double>(v);
  res.summary.emplace_back("mean_v_size", format_double(v_mean / std::max<std::size_t>(1, v_sizes.size())));
  const double n = spec.n;
  add_survival(res.summary, d, "survival_at_n_pow_1_plus_delta", std::pow(n, 1.0 + c.delta));
  add_survival(res.summary, d, "survival_at_2_pow_n_over_n_gamma_n",
               std::ldexp(1.0, static_cast<int>(spec.n)) / (std::pow(n, c.gamma) * n));
}

void run_beta(const ExperimentSpec& spec, ExperimentResult& res) {
  const PathReturnConfig c = path_config(spec);
  add_path_manifest(c, res);
  const std::uint64_t pilot_seed = pilot_seed_for(spec.master_seed);
  res.manifest.emplace_back("pilot_trials", std::to_string(spec.pilot_trials));
  res.manifest.emplace_back("pilot_seed", u64(pilot_seed));
  PathReturnConfig pilot = c;
  pilot.master_seed = pilot_seed;
  res.records = run_trials(pilot_seed, spec.pilot_trials, spec.jobs,
                           [&](std::uint64_t i) { return sample_path_return(pilot, i).r; });
  std::vector<StopTime> samples;
  samples.reserve(res.records.size());
  for (const auto& r : res.records) samples.push_back(r.outcome);
  res.summary.emplace_back("beta_hat", u64(empirical_beta(samples)));
  add_mean(res.summary, value_dist(res.records));
}

void run_eta_visit(const ExperimentSpec& spec, ExperimentResult& res) {
  const PathReturnConfig c = path_config(spec);
  const Vertex eta = parse_vertex(spec.eta, spec.n);
  add_path_manifest(c, res);
  res.manifest.emplace_back("eta", eta.to_string());
  res.records = run_trials(spec.master_seed, spec.trials, spec.jobs,
                           [&](std::uint64_t i) { return sample_eta_visit(c, eta, i); });
  const EmpiricalDist d = value_dist(res.records);
  add_mean(res.summary, d);
  add_survival(res.summary, d, "survival_at_n_pow_1_plus_delta",
               std::pow(double(spec.n), 1.0 + c.delta));
}

void run_hitting(const ExperimentSpec& spec, ExperimentResult& res) {
  const ThetaConfig c = theta_config(spec);
  res.manifest.emplace_back("inclusion_prob", format_double(c.p()));
  res.manifest.emplace_back("cap", u64(c.effective_cap()));
  res.manifest.emplace_back("start", "all_plus");
  std::vector<char> start_in(spec.trials, 0);
  res.records = run_trials(spec.master_seed, spec.trials, spec.jobs, [&](std::uint64_t i) {
    const ThetaSample s = sample_theta(c, i);
    start_in[i] = s.start_in_set;
    return s.theta;
  });
  const double scale = std::pow(double(spec.n), c.gamma);
  const EmpiricalDist d = value_dist(res.records);
  std::vector<TrialRecord> outside;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    if (!start_in[i]) outside.push_back(res.records[i]);
  }
  add_mean(res.summary, d);
  for (double t : {0.5, 1.0, 2.0}) {
    const std::string key = format_double(t);
    add_survival(res.summary, d, "survival_at_" + key, scale * t);
    if (!outside.empty()) {
      add_survival(res.summary, value_dist(outside), "survival_start_outside_at_" + key, scale * t);
    }
    res.summary.emplace_back("exp_minus_" + key, format_double(std::exp(-t)));
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void validate(const ExperimentSpec& spec) {
  const auto& cmds = subcommands();
  if (std::find(cmds.begin(), cmds.end(), spec.subcommand) == cmds.end()) {
    throw ValidationError("unknown subcommand '" + spec.subcommand + "'");
  }
  if (spec.n < 1 || spec.n > kMaxDimension) throw ValidationError("--n must be in [1, " + std::to_string(kMaxDimension) + "]");
  if (spec.jobs < 1) throw ValidationError("--jobs must be >= 1");
  if (spec.cap && *spec.cap < 1) throw ValidationError("--cap must be >= 1");
  if (spec.subcommand != "enumerate-jl" && spec.subcommand != "beta" && spec.trials < 1) {
    throw ValidationError("--trials must be >= 1");
  }
  if (spec.subcommand == "gamma-l" || spec.subcommand == "enumerate-jl") {
    if (spec.l < 1) throw ValidationError("--l must be >= 1");
  }
  if (spec.subcommand == "enumerate-jl") {
    double words = std::pow(double(spec.n), 2.0 * spec.l);
    if (words > double(kMaxEnumeratedWords)) {
      throw ValidationError("n^(2l) exceeds the enumeration bound of 1e8 words");
    }
  }
  if (spec.subcommand == "couple-distance" && spec.initial_distance && *spec.initial_distance > spec.n) {
    throw ValidationError("--k must be <= n");
  }
  if (needs_gamma(spec.subcommand)) {
    const double g = spec.gamma.value_or(0.5);
    if (!(g > 0.0 && g < 1.0)) throw ValidationError("--gamma must lie in (0, 1)");
  }
  if (spec.subcommand == "path-return" || spec.subcommand == "beta" || spec.subcommand == "eta-visit") {
    try {
      path_config(spec).validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    if (spec.subcommand == "eta-visit") {
      parse_vertex(spec.eta, spec.n);
      if (path_config(spec).m() >= spec.n && spec.eta.empty()) {
        throw ValidationError("eta-visit: path length must be below n for the all-minus start");
      }
    }
  }
  if (spec.subcommand == "beta" && spec.pilot_trials < 500) {
    throw ValidationError("--pilot must be >= 500");
  }
  if (spec.subcommand == "hitting") {
    try {
      theta_config(spec).validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
}

ExperimentResult execute(const ExperimentSpec& spec) {
  validate(spec);
  ExperimentResult res;
  res.manifest = base_manifest(spec);
  const auto start = std::chrono::steady_clock::now();
  const std::string& cmd = spec.subcommand;
  if (cmd == "selfint") {
    run_selfint(spec, res);
  } else if (cmd == "gamma-l") {
    run_gamma_l(spec, res);
  } else if (cmd == "enumerate-jl") {
    run_enumerate(spec, res);
  } else if (cmd == "meeting") {
    run_meeting(spec, res);
  } else if (cmd == "couple-distance") {
    run_couple_distance(spec, res);
  } else if (cmd == "path-return") {
    run_path_return(spec, res);
  } else if (cmd == "beta") {
    run_beta(spec, res);
  } else if (cmd == "eta-visit") {
    run_eta_visit(spec, res);
  } else {
    run_hitting(spec, res);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.censored = count_censored(res.records);
  res.manifest.emplace_back("wall_time_s", format_double(seconds));
  if (res.has_records) {
    res.manifest.emplace_back("records", std::to_string(res.records.size()));
    res.manifest.emplace_back("censored", std::to_string(res.censored));
  }
  return res;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string out = "trial,seed,value,censored\n";
  for (const auto& r : records) {
    out += u64(r.trial);
    out += ',';
    out += u64(r.seed);
    out += ',';
    out += u64(r.outcome.value);
    out += r.outcome.censored ? ",1\n" : ",0\n";
  }
  return out;
}

void write_result(std::ostream& out, const ExperimentResult& result, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json manifest = nlohmann::ordered_json::object();
    for (const auto& [k, v] : result.manifest) manifest[k] = v;
    doc["manifest"] = manifest;
    if (result.has_records) {
      nlohmann::ordered_json records = nlohmann::ordered_json::array();
      for (const auto& r : result.records) {
        records.push_back({{"trial", r.trial},
                           {"seed", r.seed},
                           {"value", r.outcome.value},
                           {"censored", r.outcome.censored}});
      }
      doc["records"] = std::move(records);
    }
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [k, v] : result.summary) summary[k] = v;
    doc["summary"] = summary;
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : result.manifest) out << "# " << k << ": " << v << '\n';
  if (result.has_records) out << records_csv(result.records);
  for (const auto& [k, v] : result.summary) {
    if (result.has_records) {
      out << "# summary." << k << ": " << v << '\n';
    } else {
      out << k << ' ' << v << '\n';
    }
  }
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    result = execute(spec);
  } catch (const ValidationError& e) {
    err << "error: code=validation reason=" << e.what() << '\n';
    return kExitValidation;
  } catch (const std::length_error& e) {
    err << "error: code=validation reason=" << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: code=runtime reason=" << e.what() << '\n';
    return kExitFailure;
  }

  std::string path = spec.output_path;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      path = std::string(dir) + "/" + spec.subcommand +
             (spec.format == OutputFormat::Json ? ".json" : ".csv");
    }
  }
  if (path.empty() || path == "-") {
    write_result(out, result, spec.format);
  } else {
    std::ofstream file(path);
    if (!file) {
      err << "error: code=runtime reason=cannot open output file " << path << '\n';
      return kExitFailure;
    }
    write_result(file, result, spec.format);
  }

  if (result.has_records && !result.records.empty() &&
      static_cast<double>(result.censored) > kMaxCensoredFraction * result.records.size()) {
    err << "error: code=censoring reason=" << result.censored << " of " << result.records.size()
        << " trials censored; raise --cap\n";
    return kExitCensoring;
  }
  return kExitOk;
}

}  // namespace hcube
