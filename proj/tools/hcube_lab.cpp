// Experiment runner: one subcommand per sampled stopping time.
//
//   hcube_lab selfint --n 256 --trials 10000 --seed 7
//   hcube_lab enumerate-jl --n 4 --l 2 --certificate j2.txt
//   hcube_lab meeting --n 4 --trials 10000 --seed 1 --format json

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hcube/experiment.hpp"

int main(int argc, char** argv) {
  using namespace hcube;

  CLI::App app{"Random walks on the hypercube: stopping-time experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ExperimentSpec spec;
  std::string walk;
  std::string format = "csv";
  std::string rule = "literal";
  const std::map<std::string, WalkKind> walk_names{{"periodic", WalkKind::Periodic},
                                                   {"aperiodic", WalkKind::Aperiodic}};
  spec.jobs = default_jobs();

  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--n", spec.n, "Hypercube dimension (1..256)")->required();
    sub->add_option("--out", spec.output_path, "Output file ('-' for stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (name == "enumerate-jl") {
      sub->add_option("--l", spec.l, "Half-length l of the return words")->required();
      sub->add_option("--certificate", spec.certificate_path, "Write every member word to this file");
      continue;
    }
    sub->add_option("--trials", spec.trials, "Number of trials");
    sub->add_option("--seed", spec.master_seed, "Master seed");
    sub->add_option("--cap", spec.cap, "Censoring cap in steps");
    sub->add_option("--jobs", spec.jobs, "Worker threads");
    if (name == "gamma-l") sub->add_option("--l", spec.l, "Half-length l");
    if (name == "couple-distance") {
      sub->add_option("--walk", walk, "periodic or aperiodic")->check(CLI::IsMember({"periodic", "aperiodic"}));
      sub->add_option("--k", spec.initial_distance, "Initial number of disagreeing coordinates");
    }
    if (name == "path-return" || name == "beta" || name == "eta-visit" || name == "hitting") {
      sub->add_option("--gamma", spec.gamma, "Exponent in (0, 1)");
      sub->add_option("--walk", walk, "periodic or aperiodic")->check(CLI::IsMember({"periodic", "aperiodic"}));
    }
    if (name == "path-return" || name == "beta") {
      sub->add_option("--rule", rule, "literal or after-first-exit")
          ->check(CLI::IsMember({"literal", "after-first-exit"}));
    }
    if (name == "path-return" || name == "eta-visit") sub->add_option("--delta", spec.delta, "Slack exponent");
    if (name == "beta") sub->add_option("--pilot", spec.pilot_trials, "Pilot trials (>= 500)");
    if (name == "eta-visit") sub->add_option("--eta", spec.eta, "Start vertex as a +/- string");
    if (name == "hitting") sub->add_option("--p", spec.inclusion_prob, "Override the inclusion probability");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: code=validation reason=" << e.what() << '\n';
    return kExitValidation;
  }

  spec.subcommand = app.get_subcommands().front()->get_name();
  // The contracting coupling is the aperiodic one; every other sampler
  // defaults to the periodic walk.
  if (walk.empty()) walk = spec.subcommand == "couple-distance" ? "aperiodic" : "periodic";
  spec.walk_kind = walk_names.at(walk);
  spec.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  spec.rule = rule == "literal" ? ReturnRule::Literal : ReturnRule::AfterFirstExit;
  return run(spec, std::cout, std::cerr);
}
