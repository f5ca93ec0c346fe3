#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcube/stopping.hpp"
#include "hcube/trials.hpp"
#include "hcube/walks.hpp"

namespace hcube {

inline constexpr const char* kToolVersion = "0.1.0";
/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "HCUBE_OUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitCensoring = 3,
};

enum class OutputFormat { Csv, Json };

/// Subcommand names, one per sampled object.
inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"selfint",   "gamma-l",     "enumerate-jl",
                                              "meeting",   "couple-distance", "path-return",
                                              "beta",      "eta-visit",   "hitting"};
  return names;
}

struct ExperimentSpec {
  std::string subcommand;
  unsigned n = 0;
  std::optional<double> gamma;
  WalkKind walk_kind = WalkKind::Periodic;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  std::optional<std::uint64_t> cap;
  std::string output_path;  // empty: $HCUBE_OUT_DIR/<subcommand>.<ext>, else stdout
  OutputFormat format = OutputFormat::Csv;
  unsigned jobs = 1;

  unsigned l = 1;                               // gamma-l, enumerate-jl
  std::string certificate_path;                 // enumerate-jl
  std::optional<unsigned> initial_distance;     // couple-distance (default n)
  double delta = 0.25;                          // path-return
  std::size_t pilot_trials = 2000;              // beta
  ReturnRule rule = ReturnRule::Literal;        // path-return, beta
  std::string eta;                              // eta-visit, "+-" string (default all minus)
  std::optional<double> inclusion_prob;         // hitting
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ValidationError describing the first out-of-range parameter.
void validate(const ExperimentSpec& spec);

/// Everything an experiment produces, before serialization.
struct ExperimentResult {
  std::vector<std::pair<std::string, std::string>> manifest;
  std::vector<TrialRecord> records;
  bool has_records = true;
  std::vector<std::pair<std::string, std::string>> summary;
  std::size_t censored = 0;
};

/// Executes the experiment without writing anything.
ExperimentResult execute(const ExperimentSpec& spec);

/// Serializes a result in the requested format.
void write_result(std::ostream& out, const ExperimentResult& result, OutputFormat format);

/// CSV record section: header line plus one line per record.
std::string records_csv(const std::vector<TrialRecord>& records);

/// Validates, executes and writes the experiment. Errors are reported on
/// `err` as a single "error: code=<kind> reason=<text>" line. Output goes to
/// `out` unless a path is configured.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace hcube
