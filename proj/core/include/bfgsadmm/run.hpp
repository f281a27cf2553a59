#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bfgsadmm/diagnostics.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"
#include "bfgsadmm/solver.hpp"

namespace bfgsadmm {

/// Metrics of iteration t: the iterate x_t entering the round and the step
/// x_t -> x_{t+1} it produced. Row t therefore reports the state after t
/// completed rounds; row 0 is the zero initialization.
struct TraceRecord {
  std::size_t iter = 0;
  double objective = 0.0;       // sum_i f^i(x^i) + g(theta)
  double rel_cost_error = 0.0;  // |avg_i Phi(x^i) - Phi*| / |Phi(0) - Phi*|, Phi = sum_j f^j + g
  double kkt_stat = 0.0;
  double kkt_cons = 0.0;
  double kkt_link = 0.0;
  double kkt_dual = 0.0;
  double step_norm = 0.0;  // |x_{t+1} - x_t|
  double e_ratio = 0.0;    // |e_t| / |x_{t+1} - x_t|
};

struct IterateTrace {
  std::string method;
  std::vector<TraceRecord> records;
};

/// Column order of the CSV export.
inline constexpr const char* kTraceCsvHeader =
    "iter,objective,rel_cost_error,kkt_stat,kkt_cons,kkt_link,kkt_dual,step_norm,e_ratio";

/// Writes the header and one row per record. Reals use %.17g so a written
/// trace parses back to the same doubles.
void write_trace_csv(std::ostream& out, const IterateTrace& trace);

/// Reads a trace written by write_trace_csv. Columns are matched by name;
/// throws bfgsadmm::Error if a required column is missing or a cell is not a
/// number.
IterateTrace read_trace_csv(std::istream& in, std::string method = {});

struct RunOptions {
  /// Optimal value for the relative cost error. Computed with
  /// centralized_reference when absent.
  std::optional<double> f_star;
  /// Also stop once a row's relative cost error is at most this value.
  std::optional<double> stop_rel_error;
};

struct RunResult {
  IterateTrace trace;
  SolverState final_state;
  KktResiduals final_kkt;
  bool converged = false;  // final_kkt.max() <= config.tol
};

/// Iterates config.method until every KKT residual of the new iterate is at
/// most config.tol or config.max_iter rounds have run. One trace row per
/// round. Throws DivergenceError (with the iteration index) on a non-finite
/// iterate.
RunResult run(const Problem& problem, const Topology& topology, const SolverConfig& config,
              const RunOptions& options = {});

/// First iteration whose relative cost error is at most `threshold`.
std::optional<std::size_t> iterations_to_reach(const IterateTrace& trace, double threshold);

}  // namespace bfgsadmm
