#include "bfgsadmm/run.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "bfgsadmm/centralized.hpp"
#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& cell, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw Error("trace CSV line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double relative_cost_error(const Problem& problem, const std::vector<Eigen::VectorXd>& x, double f_star,
                           double f_zero) {
  double avg = 0.0;
  for (const auto& xi : x) avg += problem.global_objective(xi);
  avg /= static_cast<double>(x.size());
  const double denom = f_zero - f_star;
  const double num = avg - f_star;
  return denom > 0.0 ? std::abs(num) / denom : std::abs(num);
}

double agent_objective(const Problem& problem, const SolverState& s) {
  double total = problem.regularizer->value(s.theta);
  for (int i = 0; i < problem.agents(); ++i) total += problem.costs[i]->value(s.x[i]);
  return total;
}

double step_norm(const SolverState& a, const SolverState& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) total += (b.x[i] - a.x[i]).squaredNorm();
  return std::sqrt(total);
}

}  // namespace

void write_trace_csv(std::ostream& out, const IterateTrace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << format_real(r.objective) << ',' << format_real(r.rel_cost_error) << ','
        << format_real(r.kkt_stat) << ',' << format_real(r.kkt_cons) << ',' << format_real(r.kkt_link) << ','
        << format_real(r.kkt_dual) << ',' << format_real(r.step_norm) << ',' << format_real(r.e_ratio) << '\n';
  }
}

IterateTrace read_trace_csv(std::istream& in, std::string method) {
  std::string line;
  if (!std::getline(in, line)) throw Error("trace CSV is empty");
  const std::vector<std::string> header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t k = 0; k < header.size(); ++k) column[header[k]] = k;
  const char* required[] = {"iter",     "objective", "rel_cost_error", "kkt_stat", "kkt_cons",
                            "kkt_link", "kkt_dual",  "step_norm",      "e_ratio"};
  for (const char* name : required) {
    if (!column.contains(name)) throw Error(std::string("trace CSV is missing column '") + name + "'");
  }

  IterateTrace trace;
  trace.method = std::move(method);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error("trace CSV line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                  " cells, got " + std::to_string(cells.size()));
    }
    auto get = [&](const char* name) { return parse_real(cells[column.at(name)], line_no); };
    TraceRecord r;
    r.iter = static_cast<std::size_t>(get("iter"));
    r.objective = get("objective");
    r.rel_cost_error = get("rel_cost_error");
    r.kkt_stat = get("kkt_stat");
    r.kkt_cons = get("kkt_cons");
    r.kkt_link = get("kkt_link");
    r.kkt_dual = get("kkt_dual");
    r.step_norm = get("step_norm");
    r.e_ratio = get("e_ratio");
    trace.records.push_back(r);
  }
  return trace;
}

RunResult run(const Problem& problem, const Topology& topology, const SolverConfig& config,
              const RunOptions& options) {
  config.validate(topology.agents());
  const double f_star = options.f_star ? *options.f_star : centralized_reference(problem).f_star;
  const double f_zero = problem.global_objective(Eigen::VectorXd::Zero(problem.dim()));

  RunResult result;
  result.trace.method = std::string(to_string(config.method));
  SolverState state = initial_state(problem, topology, config);
  KktResiduals kkt = kkt_residuals(state, problem, topology, config.designated);

  for (std::size_t t = 0; t < config.max_iter; ++t) {
    SolverState next = step(state, problem, topology, config);

    TraceRecord r;
    r.iter = t;
    r.objective = agent_objective(problem, state);
    r.rel_cost_error = relative_cost_error(problem, state.x, f_star, f_zero);
    r.kkt_stat = kkt.stationarity;
    r.kkt_cons = kkt.consensus;
    r.kkt_link = kkt.link;
    r.kkt_dual = kkt.dual_inclusion;
    r.step_norm = step_norm(state, next);
    r.e_ratio = approximation_error(state, next, problem, config.method);
    result.trace.records.push_back(r);
    if (options.stop_rel_error && r.rel_cost_error <= *options.stop_rel_error) break;

    state = std::move(next);
    kkt = kkt_residuals(state, problem, topology, config.designated);
    if (kkt.max() <= config.tol) {
      result.converged = true;
      break;
    }
  }
  result.final_state = std::move(state);
  result.final_kkt = kkt;
  return result;
}

std::optional<std::size_t> iterations_to_reach(const IterateTrace& trace, double threshold) {
  for (const TraceRecord& r : trace.records) {
    if (r.rel_cost_error <= threshold) return r.iter;
  }
  return std::nullopt;
}

}  // namespace bfgsadmm
