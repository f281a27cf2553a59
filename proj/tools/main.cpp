#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bfgsadmm/centralized.hpp"
#include "experiment.hpp"
#include "instance_io.hpp"

namespace fs = std::filesystem;
using namespace bfgsadmm;
using namespace bfgsadmm::experiment;

namespace {

int cmd_run(const fs::path& config_path, const Overrides& overrides) {
  ExperimentConfig config = load_config(config_path);
  apply(config, overrides);
  const ExperimentOutcome outcome = run_experiment(config, std::cout);
  std::cout << "metadata -> " << outcome.metadata.string() << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& files) {
  std::vector<IterateTrace> traces;
  for (const std::string& f : files) {
    std::ifstream in(f);
    if (!in) throw Error("cannot open trace " + f);
    traces.push_back(read_trace_csv(in, fs::path(f).stem().string()));
  }
  print_compare_table(std::cout, compare_traces(traces));
  return 0;
}

int cmd_gen(const SyntheticSpec& synth, const std::string& out) {
  if (synth.type != "quadratic" && synth.type != "logistic") {
    throw ConfigError("--type must be quadratic or logistic");
  }
  const std::string text = serialize_instance(generate_instance(synth));
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error("cannot write " + out);
  file << text;
  return 0;
}

int cmd_reference(const fs::path& config_path) {
  const ExperimentConfig config = load_config(config_path);
  const PreparedExperiment prepared = prepare(config);
  const CentralizedSolution sol = centralized_reference(prepared.problem);
  std::printf("f_star = %.17g\niterations = %zu\nresidual = %.3e\nx_star =", sol.f_star, sol.iterations,
              sol.residual);
  for (Eigen::Index k = 0; k < sol.x_star.size(); ++k) std::printf(" %.17g", sol.x_star(k));
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed BFGS-ADMM experiments"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  fs::path run_config;
  Overrides overrides;
  std::uint64_t seed = 0;
  std::size_t max_iter = 0;
  double tol = 0.0;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run the configured methods and write CSV traces");
  run->add_option("--config", run_config, "experiment INI (or a metadata.ini from an earlier run)")->required();
  run->add_option("--method", overrides.methods, "bfgs_admm, first_order or extra; repeatable");
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "graph and data seed");
  run->add_flag("--no-shuffle", overrides.no_shuffle, "take the first samples in file order");
  auto* iter_opt = run->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
  auto* tol_opt = run->add_option("--tol", tol, "KKT stopping tolerance")->check(CLI::NonNegativeNumber);

  std::vector<std::string> traces;
  auto* compare = app.add_subcommand("compare", "tabulate iterations to reach fixed relative errors");
  compare->add_option("traces", traces, "trace CSV files")->required()->check(CLI::ExistingFile);

  SyntheticSpec synth;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-synthetic", "write a seeded quadratic or logistic instance as JSON");
  gen->add_option("--type", synth.type, "quadratic or logistic");
  gen->add_option("--agents", synth.agents, "number of agents")->check(CLI::PositiveNumber);
  gen->add_option("--dim", synth.dim, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--condition", synth.condition, "condition number of each Q_i")->check(CLI::Range(1.0, 1e12));
  gen->add_option("--samples", synth.samples, "logistic samples per agent")->check(CLI::PositiveNumber);
  gen->add_option("--seed", synth.seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  fs::path ref_config;
  auto* reference = app.add_subcommand("reference", "solve the centralized problem and print F* and x*");
  reference->add_option("--config", ref_config, "experiment INI")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      if (*out_opt) overrides.out_dir = out_dir;
      if (*seed_opt) overrides.seed = seed;
      if (*iter_opt) overrides.max_iter = max_iter;
      if (*tol_opt) overrides.tol = tol;
      return cmd_run(run_config, overrides);
    }
    if (*compare) return cmd_compare(traces);
    if (*gen) return cmd_gen(synth, gen_out);
    if (*reference) return cmd_reference(ref_config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
