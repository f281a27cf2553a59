#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace bfgsadmm {

/// Undirected edge (i, j) with i < j.
struct Edge {
  int i = 0;
  int j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Fixed, connected, undirected communication graph between m agents.
///
/// The edge list order fixes the row order of the incidence matrices. Every
/// edge is stored with its smaller endpoint first. Instances are immutable
/// once built; the constructor rejects self-loops, duplicates, out-of-range
/// endpoints and disconnected graphs.
class Topology {
 public:
  Topology(int agents, std::vector<Edge> edges);

  int agents() const { return agents_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int agent) const { return neighbors_.at(agent); }
  int degree(int agent) const { return static_cast<int>(neighbors_.at(agent).size()); }

  static Topology path(int agents);
  static Topology star(int agents);
  static Topology complete(int agents);

 private:
  int agents_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

/// Dense graph matrices. Integer valued; stored as double so they compose
/// directly with Eigen vector arithmetic.
struct GraphMatrices {
  Eigen::MatrixXd a_s;    // n x m source
  Eigen::MatrixXd a_d;    // n x m destination
  Eigen::MatrixXd e_s;    // n x m signed incidence
  Eigen::MatrixXd e_u;    // n x m unsigned incidence
  Eigen::MatrixXd l_s;    // m x m signed Laplacian
  Eigen::MatrixXd l_u;    // m x m unsigned Laplacian
  Eigen::MatrixXd delta;  // m x m degree
};

/// Erdos-Renyi style graph: every pair (i, j), i < j, is an edge with
/// probability p. Disconnected draws are rejected and redrawn with seed + 1,
/// seed + 2, ... for at most `max_attempts` draws.
Topology build_random_binomial(int agents, double p, std::uint64_t seed, int max_attempts = 100);

GraphMatrices matrices(const Topology& topology);

/// Breadth-first reachability from vertex 0. Accepts any structurally valid
/// edge set, so it can be used before a Topology exists.
bool is_connected(int agents, std::span<const Edge> edges);
inline bool is_connected(const Topology& topology) {
  return is_connected(topology.agents(), topology.edges());
}

/// Edge-list text format: "m n" on the first line, then n lines "i j".
void write_edge_list(std::ostream& out, const Topology& topology);
Topology read_edge_list(std::istream& in);

}  // namespace bfgsadmm
