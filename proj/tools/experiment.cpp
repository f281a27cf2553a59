#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bfgsadmm/centralized.hpp"
#include "bfgsadmm/data.hpp"
#include "bfgsadmm/synthetic.hpp"
#include "instance_io.hpp"

#ifndef BFGSADMM_VERSION
#define BFGSADMM_VERSION "unknown"
#endif

namespace bfgsadmm::experiment {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* source_name(ProblemSource s) {
  switch (s) {
    case ProblemSource::kLibsvm:
      return "libsvm";
    case ProblemSource::kInstance:
      return "instance";
    case ProblemSource::kSyntheticSkin:
      return "synthetic_skin";
  }
  return "unknown";
}

ProblemSource parse_source(const std::string& name) {
  if (name == "libsvm") return ProblemSource::kLibsvm;
  if (name == "instance") return ProblemSource::kInstance;
  if (name == "synthetic_skin") return ProblemSource::kSyntheticSkin;
  throw ConfigError("problem.type must be libsvm, instance or synthetic_skin, got '" + name + "'");
}

template <typename T>
T convert(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("cannot parse '" + text + "' for key " + key);
  return value;
}

bool convert_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("expected true/false for key " + key + ", got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const std::string& n : names) {
    try {
      const Method m = parse_method(n);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (out.empty()) throw ConfigError("no methods configured");
  return out;
}

// Applies a solver section; returns false for keys it does not know.
bool set_solver_key(SolverConfig& s, const std::string& key, const std::string& value, const std::string& where) {
  const std::string k = where + "." + key;
  if (key == "mu1") s.mu1 = convert<double>(k, value);
  else if (key == "mu2") s.mu2 = convert<double>(k, value);
  else if (key == "eps") s.eps = convert<double>(k, value);
  else if (key == "nu") s.nu = convert<double>(k, value);
  else if (key == "a") s.a = convert<double>(k, value);
  else if (key == "l") s.designated = convert<int>(k, value);
  else if (key == "max_iter") s.max_iter = convert<std::size_t>(k, value);
  else if (key == "tol") s.tol = convert<double>(k, value);
  else if (key == "threads") s.threads = convert<int>(k, value);
  else if (key == "stepsize") s.stepsize_override = convert<double>(k, value);
  else return false;
  return true;
}

// Drops a trailing "; comment" or "# comment" (separator preceded by
// whitespace) and surrounding blanks.
std::string strip_inline_comment(const std::string& raw) {
  std::string v = raw;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if ((v[k] == ';' || v[k] == '#') && (v[k - 1] == ' ' || v[k - 1] == '\t')) {
      v.erase(k);
      break;
    }
  }
  const auto b = v.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return v.substr(b, v.find_last_not_of(" \t") - b + 1);
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() ? p : fs::absolute(base / p).lexically_normal();
}

void write_solver_keys(std::ostream& out, const SolverConfig& s) {
  out << "mu1 = " << fmt(s.mu1) << '\n'
      << "mu2 = " << fmt(s.mu2) << '\n'
      << "eps = " << fmt(s.eps) << '\n'
      << "nu = " << fmt(s.nu) << '\n'
      << "a = " << fmt(s.a) << '\n'
      << "l = " << s.designated << '\n'
      << "max_iter = " << s.max_iter << '\n'
      << "tol = " << fmt(s.tol) << '\n'
      << "threads = " << s.threads << '\n';
  if (s.stepsize_override) out << "stepsize = " << fmt(*s.stepsize_override) << '\n';
}

}  // namespace

std::string version() { return BFGSADMM_VERSION; }

SolverConfig ExperimentConfig::solver_for(Method method) const {
  SolverConfig s = solver;
  if (const auto it = per_method.find(method); it != per_method.end()) s = it->second;
  s.method = method;
  return s;
}

void ExperimentConfig::validate() const {
  if (source == ProblemSource::kLibsvm && !fs::is_regular_file(data)) {
    throw ConfigError("problem.data does not name a file: " + data.string());
  }
  if (source == ProblemSource::kInstance && !fs::is_regular_file(instance)) {
    throw ConfigError("problem.instance does not name a file: " + instance.string());
  }
  if (source != ProblemSource::kInstance && total < 1) throw ConfigError("problem.total must be positive");
  if (dim && *dim < 1) throw ConfigError("problem.dim must be positive");
  if (!(gamma >= 0.0)) throw ConfigError("problem.gamma must be non-negative");
  if (agents < 1) throw ConfigError("graph.agents must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("graph.p must lie in (0, 1]");
  if (methods.empty()) throw ConfigError("no methods configured");
  for (Method m : methods) {
    if (m == Method::kExtra && gamma > 0.0) throw ConfigError("method extra needs gamma = 0");
    try {
      solver_for(m).validate(agents);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("solver: ") + e.what());
    }
  }
}

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  std::map<Method, std::vector<std::pair<std::string, std::string>>> overrides;
  bool agents_set = false;

  for (const auto& [section, body] : tree) {
    auto each = [&](auto&& fn) {
      for (const auto& [key, node] : body) fn(key, strip_inline_comment(node.data()));
    };
    if (section == "problem") {
      each([&](const std::string& key, const std::string& v) {
        const std::string k = "problem." + key;
        if (key == "type") c.source = parse_source(v);
        else if (key == "data") c.data = resolve(base_dir, v);
        else if (key == "instance") c.instance = resolve(base_dir, v);
        else if (key == "total") c.total = convert<std::size_t>(k, v);
        else if (key == "dim") c.dim = convert<int>(k, v);
        else if (key == "gamma") c.gamma = convert<double>(k, v);
        else if (key == "shuffle") c.shuffle = convert_bool(k, v);
        else if (key == "data_seed") c.data_seed = convert<std::uint64_t>(k, v);
        else throw ConfigError("unknown key " + k);
      });
    } else if (section == "graph") {
      each([&](const std::string& key, const std::string& v) {
        const std::string k = "graph." + key;
        if (key == "agents") {
          c.agents = convert<int>(k, v);
          agents_set = true;
        } else if (key == "p") {
          c.p = convert<double>(k, v);
        } else if (key == "seed") {
          c.graph_seed = convert<std::uint64_t>(k, v);
        } else {
          throw ConfigError("unknown key " + k);
        }
      });
    } else if (section == "solver") {
      each([&](const std::string& key, const std::string& v) {
        if (key == "methods") c.methods = parse_methods(split_list(v));
        else if (!set_solver_key(c.solver, key, v, "solver")) throw ConfigError("unknown key solver." + key);
      });
    } else if (section.rfind("solver.", 0) == 0) {
      Method m{};
      try {
        m = parse_method(section.substr(7));
      } catch (const Error& e) {
        throw ConfigError("section [" + section + "]: " + e.what());
      }
      each([&](const std::string& key, const std::string& v) { overrides[m].emplace_back(key, v); });
    } else if (section == "output") {
      each([&](const std::string& key, const std::string& v) {
        if (key == "dir") c.out_dir = resolve(base_dir, v);
        else throw ConfigError("unknown key output." + key);
      });
    } else if (section == "run" || section.rfind("result.", 0) == 0) {
      // Written by run into metadata.ini; informational only.
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }

  for (const auto& [m, entries] : overrides) {
    SolverConfig s = c.solver;
    for (const auto& [key, v] : entries) {
      const std::string where = "solver." + std::string(to_string(m));
      if (!set_solver_key(s, key, v, where)) throw ConfigError("unknown key " + where + "." + key);
    }
    c.per_method[m] = s;
  }

  if (c.source == ProblemSource::kInstance && !agents_set && fs::is_regular_file(c.instance)) {
    c.agents = load_instance_file(c.instance, 0.0).agents;
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, fs::absolute(path).parent_path());
}

void apply(ExperimentConfig& config, const Overrides& o) {
  if (!o.methods.empty()) config.methods = parse_methods(o.methods);
  if (o.out_dir) config.out_dir = fs::absolute(*o.out_dir);
  if (o.seed) {
    config.graph_seed = *o.seed;
    config.data_seed = *o.seed;
  }
  if (o.no_shuffle) config.shuffle = false;
  auto both = [&](auto&& fn) {
    fn(config.solver);
    for (auto& [m, s] : config.per_method) fn(s);
  };
  if (o.max_iter) both([&](SolverConfig& s) { s.max_iter = *o.max_iter; });
  if (o.tol) both([&](SolverConfig& s) { s.tol = *o.tol; });
}

PreparedExperiment prepare(const ExperimentConfig& config) {
  config.validate();
  std::optional<Problem> problem;
  std::string report;
  switch (config.source) {
    case ProblemSource::kLibsvm: {
      std::ifstream in(config.data);
      if (!in) throw Error("cannot open dataset " + config.data.string());
      ParsedDataset parsed = parse_libsvm(in, config.dim);
      report = parsed.report.describe() + ", " + std::to_string(parsed.dataset.size()) + " samples, d=" +
               std::to_string(parsed.dataset.dim);
      problem = logistic_problem(
          take_and_partition(parsed.dataset, config.total, config.agents, config.data_seed, config.shuffle),
          config.gamma);
      break;
    }
    case ProblemSource::kSyntheticSkin: {
      const Dataset ds = skin_style_dataset(config.total, config.data_seed);
      report = "synthetic skin-style data, " + std::to_string(ds.size()) + " samples, d=3";
      problem = logistic_problem(take_and_partition(ds, config.total, config.agents, config.data_seed, config.shuffle),
                                 config.gamma);
      break;
    }
    case ProblemSource::kInstance: {
      LoadedInstance inst = load_instance_file(config.instance, config.gamma);
      if (inst.agents != config.agents) {
        throw ConfigError("instance has " + std::to_string(inst.agents) + " agents but graph.agents = " +
                          std::to_string(config.agents));
      }
      report = inst.type + " instance " + config.instance.string();
      problem = std::move(inst.problem);
      break;
    }
  }
  Topology topology = config.agents == 1 ? Topology(1, {})
                                         : build_random_binomial(config.agents, config.p, config.graph_seed);
  return {std::move(*problem), std::move(topology), report};
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const PreparedExperiment prepared = prepare(config);
  fs::create_directories(config.out_dir);

  const CentralizedSolution reference = centralized_reference(prepared.problem);
  log << "centralized optimum: F* = " << fmt(reference.f_star) << " (" << reference.iterations << " iterations)\n";

  ExperimentOutcome outcome;
  outcome.f_star = reference.f_star;
  outcome.x_star = reference.x_star;
  for (Method method : config.methods) {
    const SolverConfig solver = config.solver_for(method);
    RunOptions options;
    options.f_star = reference.f_star;
    MethodOutcome m{method, run(prepared.problem, prepared.topology, solver, options), {}};
    m.csv = config.out_dir / (std::string(to_string(method)) + ".csv");
    std::ofstream out(m.csv);
    if (!out) throw Error("cannot write " + m.csv.string());
    write_trace_csv(out, m.result.trace);
    log << to_string(method) << ": " << m.result.trace.records.size() << " iterations, "
        << (m.result.converged ? "converged" : "stopped at max_iter") << ", max KKT residual "
        << fmt(m.result.final_kkt.max()) << " -> " << m.csv.string() << '\n';
    outcome.methods.push_back(std::move(m));
  }

  outcome.metadata = config.out_dir / "metadata.ini";
  std::ofstream meta(outcome.metadata);
  if (!meta) throw Error("cannot write " + outcome.metadata.string());
  write_metadata(meta, config, outcome, prepared.data_report);
  return outcome;
}

void write_metadata(std::ostream& out, const ExperimentConfig& c, const ExperimentOutcome& outcome,
                    const std::string& data_report) {
  out << "[problem]\n"
      << "type = " << source_name(c.source) << '\n';
  if (c.source == ProblemSource::kLibsvm) out << "data = " << fs::absolute(c.data).string() << '\n';
  if (c.source == ProblemSource::kInstance) out << "instance = " << fs::absolute(c.instance).string() << '\n';
  out << "total = " << c.total << '\n';
  if (c.dim) out << "dim = " << *c.dim << '\n';
  out << "gamma = " << fmt(c.gamma) << '\n'
      << "shuffle = " << (c.shuffle ? "true" : "false") << '\n'
      << "data_seed = " << c.data_seed << "\n\n";

  out << "[graph]\n"
      << "agents = " << c.agents << '\n'
      << "p = " << fmt(c.p) << '\n'
      << "seed = " << c.graph_seed << "\n\n";

  out << "[solver]\nmethods = ";
  for (std::size_t k = 0; k < c.methods.size(); ++k) out << (k ? ", " : "") << to_string(c.methods[k]);
  out << '\n';
  write_solver_keys(out, c.solver);
  for (const auto& [m, s] : c.per_method) {
    out << "\n[solver." << to_string(m) << "]\n";
    write_solver_keys(out, s);
  }

  out << "\n[output]\n"
      << "dir = " << fs::absolute(c.out_dir).string() << "\n\n";

  out << "[run]\n"
      << "version = " << version() << '\n'
      << "data = " << data_report << '\n'
      << "f_star = " << fmt(outcome.f_star) << '\n'
      << "x_star = ";
  for (Eigen::Index k = 0; k < outcome.x_star.size(); ++k) out << (k ? ", " : "") << fmt(outcome.x_star(k));
  out << '\n';
  for (const MethodOutcome& m : outcome.methods) {
    out << "\n[result." << to_string(m.method) << "]\n"
        << "csv = " << m.csv.filename().string() << '\n'
        << "iterations = " << m.result.trace.records.size() << '\n'
        << "converged = " << (m.result.converged ? "true" : "false") << '\n'
        << "kkt_stat = " << fmt(m.result.final_kkt.stationarity) << '\n'
        << "kkt_cons = " << fmt(m.result.final_kkt.consensus) << '\n'
        << "kkt_link = " << fmt(m.result.final_kkt.link) << '\n'
        << "kkt_dual = " << fmt(m.result.final_kkt.dual_inclusion) << '\n';
  }
}

std::vector<CompareRow> compare_traces(const std::vector<IterateTrace>& traces) {
  if (traces.empty()) throw ConfigError("compare needs at least one trace");
  std::vector<CompareRow> rows;
  for (const IterateTrace& t : traces) {
    if (t.records.empty()) throw Error("trace '" + t.method + "' has no rows");
    CompareRow row;
    row.method = t.method;
    for (double threshold : kCompareThresholds) row.reached.push_back(iterations_to_reach(t, threshold));
    row.last = t.records.back();
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    return a.last.rel_cost_error < b.last.rel_cost_error;
  });
  return rows;
}

void print_compare_table(std::ostream& out, const std::vector<CompareRow>& rows) {
  std::size_t width = 6;
  for (const CompareRow& r : rows) width = std::max(width, r.method.size());
  auto cell = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return std::string(buf);
  };
  out << std::left << std::setw(static_cast<int>(width)) << "method";
  for (double t : kCompareThresholds) {
    char label[16];
    std::snprintf(label, sizeof label, "@%.0e", t);
    out << "  " << std::right << std::setw(8) << label;
  }
  out << "  " << std::setw(10) << "rows" << "  " << std::setw(10) << "final_err" << "  " << std::setw(10) << "kkt_stat"
      << "  " << std::setw(10) << "kkt_cons" << "  " << std::setw(10) << "kkt_link" << "  " << std::setw(10)
      << "kkt_dual" << '\n';
  for (const CompareRow& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.method;
    for (const auto& reached : r.reached) {
      // The dash is three bytes but one column wide.
      if (reached) out << "  " << std::right << std::setw(8) << *reached;
      else out << "  " << std::string(7, ' ') << "\xE2\x80\x94";
    }
    out << "  " << std::right << std::setw(10) << (r.last.iter + 1) << "  " << std::setw(10)
        << cell(r.last.rel_cost_error) << "  " << std::setw(10) << cell(r.last.kkt_stat) << "  " << std::setw(10)
        << cell(r.last.kkt_cons) << "  " << std::setw(10) << cell(r.last.kkt_link) << "  " << std::setw(10)
        << cell(r.last.kkt_dual) << '\n';
  }
}

}  // namespace bfgsadmm::experiment
