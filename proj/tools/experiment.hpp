#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/error.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"
#include "bfgsadmm/run.hpp"
#include "bfgsadmm/solver.hpp"

namespace bfgsadmm::experiment {

/// Bad configuration or command line; maps to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ProblemSource {
  kLibsvm,         // logistic regression on a LIBSVM file
  kInstance,       // JSON instance written by gen-synthetic
  kSyntheticSkin,  // in-process skin-style data, no download needed
};

struct ExperimentConfig {
  ProblemSource source = ProblemSource::kSyntheticSkin;
  std::filesystem::path data;      // kLibsvm
  std::filesystem::path instance;  // kInstance
  std::size_t total = 5000;
  std::optional<int> dim;
  double gamma = 2e-6;
  bool shuffle = true;
  std::uint64_t data_seed = 1;

  int agents = 20;
  double p = 0.2;
  std::uint64_t graph_seed = 1;

  SolverConfig solver;
  std::vector<Method> methods{Method::kBfgsAdmm, Method::kFirstOrder};
  // Per-method overrides from [solver.<method>] sections, already merged.
  std::map<Method, SolverConfig> per_method;

  std::filesystem::path out_dir = "out";

  SolverConfig solver_for(Method method) const;
  /// Throws ConfigError on out-of-range values or missing files.
  void validate() const;
};

/// Parses the INI schema documented in the README. Relative paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Command-line overrides applied on top of the file.
struct Overrides {
  std::vector<std::string> methods;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;  // graph and data seed
  bool no_shuffle = false;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
};

void apply(ExperimentConfig& config, const Overrides& overrides);

struct PreparedExperiment {
  Problem problem;
  Topology topology;
  std::string data_report;  // label mapping etc., empty for instances
};

PreparedExperiment prepare(const ExperimentConfig& config);

struct MethodOutcome {
  Method method;
  RunResult result;
  std::filesystem::path csv;
};

struct ExperimentOutcome {
  double f_star = 0.0;
  Eigen::VectorXd x_star;
  std::vector<MethodOutcome> methods;
  std::filesystem::path metadata;
};

/// Builds graph and data, solves the centralized problem, runs every method
/// and writes <out>/<method>.csv plus <out>/metadata.ini.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Resolved configuration in the input schema plus a [run] section, so
/// `run --config metadata.ini` repeats the experiment.
void write_metadata(std::ostream& out, const ExperimentConfig& config, const ExperimentOutcome& outcome,
                    const std::string& data_report);

/// Version string baked in at configure time.
std::string version();

struct CompareRow {
  std::string method;
  std::vector<std::optional<std::size_t>> reached;  // per threshold
  TraceRecord last;
};

inline const std::vector<double> kCompareThresholds{1e-2, 1e-4, 1e-6};

/// One row per trace, sorted by final relative cost error.
std::vector<CompareRow> compare_traces(const std::vector<IterateTrace>& traces);
void print_compare_table(std::ostream& out, const std::vector<CompareRow>& rows);

}  // namespace bfgsadmm::experiment
